"""Center machinery: torus projection, dot action, orbit-sum images,
and the integer linear algebra of the degeneration."""

import random
from fractions import Fraction

import pytest

from qgrou import center as C
from qgrou.errors import ConfigError, NotCartan, NotZeroWeight
from qgrou.rootdata import WeightVec, build_datum
from qgrou.uqalg import AlgebraCtx


class TestMultiplicities:
    def test_rank1_string(self, ctxA1):
        mult = C.weight_multiplicities(ctxA1.datum, WeightVec((8,)))
        assert mult == {(8,): 1, (4,): 1, (0,): 1}
        assert C.module_dimension(ctxA1.datum, WeightVec((8,))) == 5

    def test_a2_adjoint(self, ctxA2):
        mult = C.weight_multiplicities(ctxA2.datum, WeightVec((2, 2)))
        assert mult == {(2, 2): 1, (0, 0): 2}
        assert C.module_dimension(ctxA2.datum, WeightVec((2, 2))) == 8

    def test_b2_small_modules(self, ctxB2):
        dims = {(2, 0): 5, (0, 2): 4, (2, 2): 16, (4, 0): 14}
        for coords, want in dims.items():
            assert C.module_dimension(ctxB2.datum, WeightVec(coords)) == want

    def test_weyl_dimension_formula(self, ctxA2, ctxB2):
        # independent oracle: product over positive roots of
        # (lam + rho, alpha) / (rho, alpha)
        rng = random.Random(11)
        for ctx in (ctxA2, ctxB2):
            datum = ctx.datum
            for _ in range(4):
                lam = WeightVec((2 * rng.randrange(0, 3),
                                 2 * rng.randrange(0, 3)))
                num = Fraction(1)
                for root in datum.posRoots:
                    num *= datum.pair(lam + datum.rho, root.weight) \
                        / datum.pair(datum.rho, root.weight)
                assert C.module_dimension(datum, lam) == num

    def test_dominance_required(self, ctxA1):
        with pytest.raises(ConfigError):
            C.weight_multiplicities(ctxA1.datum, WeightVec((-2,)))


class TestHCProjection:
    def test_torus_passthrough(self, ctxA1):
        k = ctxA1.gen_K((4,))
        assert (C.hc_projection(ctxA1, k) - k).is_zero()

    def test_mixed_monomial_dies(self, ctxA1):
        z = ctxA1.gen_tF(0) * ctxA1.gen_tE(0) * ctxA1.gen_K((4,))
        assert C.hc_projection(ctxA1, z).is_zero()

    def test_casimir_cartan_part(self, ctxA1):
        # E F has torus part (v^3/(v^2-1)) (1 - K^{-2 alpha})
        z = ctxA1.gen_tE(0) * ctxA1.gen_tF(0)
        p = C.hc_projection(ctxA1, z)
        v = ctxA1.vq(Fraction(1))
        c = v ** 3 / (v ** 2 - 1)
        want = ctxA1.one() * c - ctxA1.gen_K((-8,)) * c
        assert (p - want).is_zero()

    def test_nonzero_weight_rejected(self, ctxA1):
        with pytest.raises(NotZeroWeight):
            C.hc_projection(ctxA1, ctxA1.gen_tE(0))

    def test_a2_zero_weight_sum(self, ctxA2):
        z = ctxA2.gen_tF(0) * ctxA2.gen_tE(0) + ctxA2.gen_K((4, 0)) * 3
        p = C.hc_projection(ctxA2, z)
        for (fw, _mu, ew) in p.terms:
            assert not fw and not ew


class TestDotAction:
    def test_rank1_example(self, ctxA1):
        got = C.dot_action(ctxA1, (0,), ctxA1.gen_K((4,)))
        want = ctxA1.gen_K((-4,)) * ctxA1.vq(Fraction(-2))
        assert (got - want).is_zero()

    def test_identity_word(self, ctxA2):
        x = ctxA2.gen_K((4, 0)) + ctxA2.gen_K((0, -4)) * 2
        assert (C.dot_action(ctxA2, (), x) - x).is_zero()

    def test_braid_word_consistency(self, ctxA2):
        # s1 s2 s1 and s2 s1 s2 are the same Weyl element
        x = ctxA2.gen_K((4, -4)) + ctxA2.gen_K((0, 4))
        a = C.dot_action(ctxA2, (0, 1, 0), x)
        b = C.dot_action(ctxA2, (1, 0, 1), x)
        assert (a - b).is_zero()

    def test_composition(self, ctxB2):
        x = ctxB2.gen_K((4, 4))
        inner = C.dot_action(ctxB2, (1,), x)
        outer = C.dot_action(ctxB2, (0,), inner)
        assert (outer - C.dot_action(ctxB2, (0, 1), x)).is_zero()

    def test_unit_invariant(self, ctxA1):
        assert C.is_dot_invariant(ctxA1, ctxA1.one())

    def test_plain_k_not_invariant(self, ctxA1):
        assert not C.is_dot_invariant(ctxA1, ctxA1.gen_K((4,)))

    def test_not_cartan_rejected(self, ctxA1):
        with pytest.raises(NotCartan):
            C.dot_action(ctxA1, (0,), ctxA1.gen_tF(0))


class TestHCImage:
    def test_zero_weight_gives_unit(self, ctxA1):
        assert (C.hc_image(ctxA1, WeightVec((0,))) - ctxA1.one()).is_zero()

    def test_rank1_fundamental(self, ctxA1):
        img = C.hc_image(ctxA1, WeightVec((2,)))
        want = ctxA1.gen_K((4,)) * ctxA1.vq(Fraction(1)) \
            + ctxA1.gen_K((-4,)) * ctxA1.vq(Fraction(-1))
        assert (img - want).is_zero()

    def test_a2_fundamental_orbit(self, ctxA2):
        img = C.hc_image(ctxA2, WeightVec((2, 0)))
        assert len(img.terms) == 3
        orbit = C.weyl_orbit(ctxA2.datum, WeightVec((2, 0)))
        keys = {mu for (_f, mu, _e) in img.terms}
        assert keys == {tuple(2 * c for c in o) for o in orbit}

    def test_images_dot_invariant(self, ctxA1, ctxA2, ctxB2):
        for ctx, lam in [(ctxA1, (2,)), (ctxA1, (6,)), (ctxA2, (2, 0)),
                         (ctxA2, (2, 2)), (ctxB2, (0, 2)), (ctxB2, (2, 0))]:
            assert C.is_dot_invariant(ctx, C.hc_image(ctx, WeightVec(lam)))

    def test_clebsch_gordan_rank1(self, ctxA1):
        # W(w) (x) W(w) = W(2w) (+) W(0), exactly, at generic q
        a = C.hc_image(ctxA1, WeightVec((2,)))
        rhs = C.hc_image(ctxA1, WeightVec((4,))) \
            + C.hc_image(ctxA1, WeightVec((0,)))
        assert (a * a - rhs).is_zero()

    def test_clebsch_gordan_a2(self, ctxA2):
        # W(w1) (x) W(w2) = W(w1+w2) (+) W(0)
        a = C.hc_image(ctxA2, WeightVec((2, 0)))
        b = C.hc_image(ctxA2, WeightVec((0, 2)))
        rhs = C.hc_image(ctxA2, WeightVec((2, 2))) \
            + C.hc_image(ctxA2, WeightVec((0, 0)))
        assert (a * b - rhs).is_zero()

    def test_box_independence(self, ctxA1, ctxA2):
        # images for dominant weights in a small box stay independent:
        # coefficient matrices over the torus exponents have full rank
        for ctx, box in [(ctxA1, [(k,) for k in range(0, 10, 2)]),
                         (ctxA2, [(a, b) for a in (0, 2, 4)
                                  for b in (0, 2, 4)])]:
            images = [C.hc_image(ctx, WeightVec(c)) for c in box]
            cols = sorted({mu for img in images
                           for (_f, mu, _e) in img.terms})
            col_at = {mu: k for k, mu in enumerate(cols)}
            rows = []
            for img in images:
                row = [ctx.scalar(0)] * len(cols)
                for (_f, mu, _e), c in img.terms.items():
                    row[col_at[mu]] = c
                rows.append(row)
            rank = 0
            for col in range(len(cols)):
                piv = next((r for r in range(rank, len(rows))
                            if not rows[r][col].is_zero()), None)
                if piv is None:
                    continue
                rows[rank], rows[piv] = rows[piv], rows[rank]
                lead = rows[rank][col]
                for r in range(len(rows)):
                    if r != rank and not rows[r][col].is_zero():
                        f = rows[r][col] / lead
                        rows[r] = [a - f * b
                                   for a, b in zip(rows[r], rows[rank])]
                rank += 1
            assert rank == len(box)

    def test_odd_weight_rejected(self, ctxA1):
        with pytest.raises(ConfigError):
            C.hc_image(ctxA1, WeightVec((1,)))


class TestSkewForm:
    def test_rank1_matrix(self, ctxA1e5):
        form = C.gr_matrix(ctxA1e5)
        assert form.matrix == ((0, 0, -2), (0, 0, 2), (2, -2, 0))
        assert form.labels == ("X1", "Y1", "K1")

    def test_block_structure(self, ctxA2e5, ctxB2e5):
        for ctx in (ctxA2e5, ctxB2e5):
            datum = ctx.datum
            form = C.gr_matrix(ctx)
            N = ctx.num_roots
            r = ctx.rank
            assert form.size == 2 * N + r
            # X-against-Y block vanishes; K rows pair against roots
            for i in range(N):
                for j in range(N):
                    assert form.matrix[i][N + j] == 0
            for i in range(r):
                two_omega = datum.fundamental(i) * 2
                for j in range(N):
                    a = datum.pair(two_omega, datum.posRoots[j].weight)
                    assert form.matrix[2 * N + i][j] == a
                    assert form.matrix[2 * N + i][N + j] == -a

    def test_generic_rejected(self, ctxA1):
        with pytest.raises(ConfigError):
            C.gr_matrix(ctxA1)

    @pytest.mark.parametrize("fixture,card,deg", [
        ("ctxA1e5", 25, 5),
        ("ctxA2e5", 5 ** 6, 5 ** 3),
        ("ctxA2e7", 7 ** 6, 7 ** 3),
        ("ctxB2e5", 5 ** 8, 5 ** 4),
    ])
    def test_image_cardinality(self, request, fixture, card, deg):
        ctx = request.getfixturevalue(fixture)
        form = C.gr_matrix(ctx)
        assert C.image_cardinality(ctx, form) == card
        assert C.gr_degree(ctx, form) == deg

    def test_rank1_even_order(self):
        ctx = AlgebraCtx(build_datum("A", 1, [], 8))
        assert C.image_cardinality(ctx) == 16
        assert C.gr_degree(ctx) == 4

    def test_cardinality_matches_root_orders(self, ctxA2e8, ctxB2e5):
        for ctx in (ctxA2e8, ctxB2e5):
            pred = 1
            for la in ctx.datum.ellAlpha:
                pred *= la
            assert C.image_cardinality(ctx) == pred * pred

    def test_fuzzed_ops_preserve_cardinality(self, ctxA2e5, ctxB2e5):
        # row and column operations over the integers do not change the
        # size of the reduced image
        rng = random.Random(97)
        for ctx in (ctxA2e5, ctxB2e5):
            form = C.gr_matrix(ctx)
            want = C.image_cardinality(ctx, form)
            m = [list(row) for row in form.matrix]
            n = len(m)
            for _ in range(60):
                op = rng.randrange(5)
                i, j = rng.sample(range(n), 2)
                f = rng.randrange(-3, 4)
                if op == 0:
                    m[i], m[j] = m[j], m[i]
                elif op == 1:
                    for row in m:
                        row[i], row[j] = row[j], row[i]
                elif op == 2:
                    m[i] = [a + f * b for a, b in zip(m[i], m[j])]
                elif op == 3:
                    for row in m:
                        row[i] += f * row[j]
                else:
                    m[i] = [-a for a in m[i]]
            ell = ctx.datum.ell
            got = 1
            for d in C.smith_divisors(m):
                got *= ell // __import__("math").gcd(d, ell)
            assert got == want

    def test_smith_divisors_chain(self):
        divs = C.smith_divisors([[2, 4, 4], [-6, 6, 12], [10, 4, 16]])
        for a, b in zip(divs, divs[1:]):
            if b:
                assert a and b % a == 0


class TestGrCenter:
    def test_rank1_mixed_generator(self, ctxA1e5):
        gens = C.gr_center_generators(ctxA1e5)
        assert gens.u_vectors == [(1, 1, 0)]
        assert gens.x_powers == [(5, 0, 0)]
        assert gens.y_powers == [(0, 5, 0)]
        assert set(gens.k_powers) == {(0, 0, 5), (0, 0, -5)}
        H = gens.form.matrix
        assert all(sum(H[i][j] for i in (0, 1)) == 0 for j in range(3))

    def test_mixed_generators_exact_kernel(self, ctxA2e5):
        # the mixed monomials annihilate the form over the integers,
        # not only mod ell
        gens = C.gr_center_generators(ctxA2e5)
        H = gens.form.matrix
        n = gens.form.size
        for u in gens.u_vectors:
            img = [sum(u[i] * H[i][j] for i in range(n)) for j in range(n)]
            assert all(x % ctxA2e5.datum.ell == 0 for x in img)

    @pytest.mark.parametrize("fixture", [
        "ctxA1e5", "ctxA2e5", "ctxA2e7", "ctxA2e8", "ctxB2e5",
    ])
    def test_all_generators_in_kernel(self, request, fixture):
        ctx = request.getfixturevalue(fixture)
        gens = C.gr_center_generators(ctx)
        for vec in gens.all_vectors():
            assert gens.form.in_kernel(vec)

    def test_positions_partition_word(self, ctxB2e5):
        datum = ctxB2e5.datum
        seen = []
        for i in range(datum.rank):
            seen.extend(C.simple_root_positions(datum, i))
        assert sorted(seen) == list(range(len(datum.w0_word)))

    def test_dual_index_involution(self, ctxA2e5, ctxB2e5):
        # A2 swaps the two simple roots, B2 fixes them
        a2 = ctxA2e5.datum
        assert [C._w0_dual_index(a2, i) for i in range(2)] == [1, 0]
        b2 = ctxB2e5.datum
        assert [C._w0_dual_index(b2, i) for i in range(2)] == [0, 1]

    def test_fundamental_sum_over_positions(self, ctxA2e5, ctxB2e5):
        # omega_i + omega_{i*} equals the sum of the convex-order roots
        # sitting at the word positions with letter i
        for ctx in (ctxA2e5, ctxB2e5):
            datum = ctx.datum
            for i in range(datum.rank):
                istar = C._w0_dual_index(datum, i)
                wsum = datum.fundamental(i) + datum.fundamental(istar)
                acc = datum.zero_weight()
                for p in C.simple_root_positions(datum, i):
                    acc = acc + datum.posRoots[p].weight
                assert acc.coords == wsum.coords


class TestGrLeadingTerms:
    @pytest.mark.parametrize("fixture", ["ctxA2", "ctxB2"])
    def test_commutator_support(self, request, fixture):
        # the q-commutator of two convex-order root vectors is a
        # combination of monomials supported strictly between them
        ctx = request.getfixturevalue(fixture)
        datum = ctx.datum
        N = ctx.num_roots
        for i in range(N):
            for j in range(i + 1, N):
                bi = datum.posRoots[i].weight
                bj = datum.posRoots[j].weight
                scale = ctx.vq(-datum.pair(bj, datum.apply_kappa(bi)))
                Ei = ctx.root_power(i, "E", 1)
                Ej = ctx.root_power(j, "E", 1)
                Fi = ctx.root_power(i, "F", 1)
                Fj = ctx.root_power(j, "F", 1)
                def_e = Ej * Ei - Ei * Ej * scale
                def_f = Fi * Fj * scale - Fj * Fi
                for (fv, mu, ev) in ctx.to_pbw(def_e):
                    assert not any(fv) and not any(mu)
                    assert not any(ev[:i + 1]) and not any(ev[j:])
                for (fv, mu, ev) in ctx.to_pbw(def_f):
                    assert not any(ev) and not any(mu)
                    assert not any(fv[:i + 1]) and not any(fv[j:])

    def test_torus_commutation_exact(self, ctxA2):
        # K^lam E_beta = q^((lam, beta)) E_beta K^lam holds exactly
        datum = ctxA2.datum
        lam = WeightVec((4, -4))
        k = ctxA2.gen_K(lam.coords)
        for p in range(ctxA2.num_roots):
            e = ctxA2.root_power(p, "E", 1)
            f = ctxA2.root_power(p, "F", 1)
            beta = datum.posRoots[p].weight
            assert (k * e - e * k * ctxA2.vq(datum.pair(lam, beta))).is_zero()
            assert (k * f - f * k * ctxA2.vq(-datum.pair(lam, beta))).is_zero()
