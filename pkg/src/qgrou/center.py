"""Harish-Chandra projection and the degeneration of the even-part algebra.

Two halves.  The first computes with the Cartan image of the invariant
center: projection onto the torus part, the dot-action of the Weyl
group, and the closed formula for the projected invariant attached to a
dominant weight (a Weyl-orbit sum weighted by classical weight
multiplicities, computed here with Freudenthal's recursion).

The second half is integer linear algebra for the associated graded
algebra: the skew-symmetric commutation form on the monomial lattice,
its Smith normal form, the cardinality of its reduction-mod-order image
(whose square root is the degree of the graded algebra), and the
exponent vectors that generate the graded center.
"""

from fractions import Fraction
from math import gcd, isqrt

from .errors import ConfigError, NotCartan, NotZeroWeight
from .rootdata import WeightVec
from .uqalg import Element


def _wv(x):
    if isinstance(x, WeightVec):
        return x
    return WeightVec(tuple(x))


def is_dominant(wv):
    return all(c >= 0 for c in wv.coords)


# ------------------------------------------------- classical multiplicities

def _dominant_rep(datum, wv):
    """Dominant Weyl-orbit representative under the plain action."""
    coords = wv.coords
    while True:
        i = next((k for k, c in enumerate(coords) if c < 0), None)
        if i is None:
            return coords
        coords = datum.reflect_coords(i, coords)


def weyl_orbit(datum, wv):
    """Plain Weyl orbit of a weight, as a set of coordinate tuples."""
    seen = {wv.coords}
    queue = [wv.coords]
    while queue:
        cur = queue.pop()
        for i in range(datum.rank):
            nxt = datum.reflect_coords(i, cur)
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def _defect_height(datum, lam, mu):
    ac = datum.alpha_coords_of(lam - mu)
    if ac is None:
        raise ConfigError("weight difference is outside the root lattice")
    return sum(ac)


def _dominant_weights_below(datum, lam):
    """Dominant mu with lam - mu a nonnegative root combination, within
    the norm bound that weights of the highest-weight module satisfy,
    sorted so that smaller defects come first."""
    bound = datum.pair(lam, lam)
    seen = {lam.coords}
    queue = [lam.coords]
    while queue:
        cur = queue.pop()
        for i in range(datum.rank):
            nxt = tuple(a - b for a, b in
                        zip(cur, datum.simple_roots[i].coords))
            if nxt in seen:
                continue
            seen.add(nxt)
            if datum.pair(WeightVec(nxt), WeightVec(nxt)) <= bound:
                queue.append(nxt)
    out = [WeightVec(c) for c in seen if all(x >= 0 for x in c)]
    out.sort(key=lambda w: (_defect_height(datum, lam, w), w.coords))
    return out


def weight_multiplicities(datum, lam):
    """Weight multiplicities of the Weyl module with the given dominant
    highest weight, keyed by dominant coordinate tuples; Freudenthal."""
    lam = _wv(lam)
    if not is_dominant(lam):
        raise ConfigError("highest weight %r is not dominant" %
                          (lam.coords,))
    rho = datum.rho
    norm_top = datum.pair(lam + rho, lam + rho)
    mult = {}
    for mu in _dominant_weights_below(datum, lam):
        if mu.coords == lam.coords:
            mult[mu.coords] = 1
            continue
        acc = Fraction(0)
        for root in datum.posRoots:
            k = 1
            while True:
                nu = mu + k * root.weight
                ac = datum.alpha_coords_of(lam - nu)
                if ac is None or any(c < 0 for c in ac):
                    break
                m_nu = mult.get(_dominant_rep(datum, nu), 0)
                acc += m_nu * datum.pair(nu, root.weight)
                k += 1
        den = norm_top - datum.pair(mu + rho, mu + rho)
        if den == 0:
            raise ConfigError("multiplicity recursion denominator "
                              "vanished at %r" % (mu.coords,))
        val = 2 * acc / den
        if val.denominator != 1:
            raise ConfigError("non-integral multiplicity at %r" %
                              (mu.coords,))
        if val:
            mult[mu.coords] = int(val)
    return mult


def module_dimension(datum, lam):
    """Dimension of the Weyl module: multiplicities times orbit sizes."""
    return sum(m * len(weyl_orbit(datum, WeightVec(c)))
               for c, m in weight_multiplicities(datum, lam).items())


# ------------------------------------------------ Harish-Chandra operations

def _require_cartan(x):
    # term keys are letter words, so emptiness is the torus test
    for (fw, _mu, ew) in x.terms:
        if fw or ew:
            raise NotCartan("the element has terms outside the torus")


def hc_projection(ctx, z):
    """Torus part of a zero-weight element: the terms of its PBW
    decomposition with no raising or lowering letters."""
    coords = ctx.to_pbw(z)
    datum = ctx.datum
    kept = {}
    for (fv, mu, ev), c in coords.items():
        wt = datum.zero_weight()
        for p, k in enumerate(ev):
            if k:
                wt = wt + k * datum.posRoots[p].weight
        for p, k in enumerate(fv):
            if k:
                wt = wt - k * datum.posRoots[p].weight
        if not wt.is_zero():
            raise NotZeroWeight("PBW term of weight %r in the argument"
                                % (wt.coords,))
        if not any(fv) and not any(ev):
            kept[(fv, mu, ev)] = c
    return ctx.from_pbw(kept)


def hc_image(ctx, lam):
    """Torus image of the central invariant attached to a dominant
    weight: orbit sums of K^(2 mu') weighted by classical weight
    multiplicities and by q to the pairing of mu' with the doubled half
    sum of positive roots."""
    datum = ctx.datum
    lam = _wv(lam)
    if not datum.in_P(lam):
        raise ConfigError("weight %r is outside the even lattice" %
                          (lam.coords,))
    rho = datum.rho
    zero = (0,) * ctx.num_roots
    terms = {}
    for mu_coords, m in weight_multiplicities(datum, lam).items():
        for orb in weyl_orbit(datum, WeightVec(mu_coords)):
            two_mu = tuple(2 * c for c in orb)
            coeff = ctx.vq(datum.pair(rho, WeightVec(two_mu))) * m
            terms[(zero, two_mu, zero)] = coeff
    return ctx.from_pbw(terms)


def apply_word(datum, word, wv):
    """Left action of a Weyl word (tuple of simple indices); the
    rightmost letter acts first."""
    coords = wv.coords
    for i in reversed(word):
        coords = datum.reflect_coords(i, coords)
    return WeightVec(coords)


def dot_action(ctx, word, x):
    """Dot action of a Weyl word on a torus element: K^mu picks up
    q^((w^{-1} rho - rho, mu)) and its exponent moves to w(mu)."""
    datum = ctx.datum
    _require_cartan(x)
    rho = datum.rho
    shift = apply_word(datum, tuple(reversed(word)), rho) - rho
    out = {}
    for (fv, mu, ev), c in x.terms.items():
        muv = WeightVec(mu)
        if not datum.in_P(muv):
            raise NotCartan("torus exponent %r is outside the even "
                            "lattice" % (mu,))
        wmu = apply_word(datum, word, muv)
        coeff = c * ctx.vq(datum.pair(shift, muv))
        key = (fv, wmu.coords, ev)
        cur = out.get(key)
        out[key] = coeff if cur is None else cur + coeff
    return Element(ctx, out)


def is_dot_invariant(ctx, x):
    """Invariance under the dot action of every simple reflection."""
    _require_cartan(x)
    for i in range(ctx.rank):
        if not (dot_action(ctx, (i,), x) - x).is_zero():
            return False
    return True


# --------------------------------------------------- the degeneration form

class SkewForm:
    """Integer commutation form of the graded algebra on the monomial
    lattice, with rows and columns labeled by the raising letters, the
    lowering letters, then the torus generators."""

    def __init__(self, matrix, labels, num_roots, rank, ell):
        self.matrix = tuple(tuple(row) for row in matrix)
        self.labels = tuple(labels)
        self.num_roots = num_roots
        self.rank = rank
        self.ell = ell
        n = len(self.matrix)
        if any(len(row) != n for row in self.matrix):
            raise ConfigError("commutation form is not square")
        for i in range(n):
            for j in range(n):
                if self.matrix[i][j] != -self.matrix[j][i]:
                    raise ConfigError("commutation form is not "
                                      "skew-symmetric")

    @property
    def size(self):
        return len(self.matrix)

    def hbar(self, vec):
        """Row-vector image under the form, reduced mod the order."""
        n = self.size
        if len(vec) != n:
            raise ConfigError("vector length %d does not fit the form"
                              % len(vec))
        return tuple(sum(vec[i] * self.matrix[i][j] for i in range(n))
                     % self.ell for j in range(n))

    def in_kernel(self, vec):
        return not any(self.hbar(vec))


def _pair_int(datum, u, w):
    val = datum.pair(u, w)
    if val.denominator != 1:
        raise ConfigError("commutation exponent %s is not an integer"
                          % val)
    return int(val)


def gr_matrix(ctx):
    """Commutation form of the graded algebra at the root of unity."""
    datum = ctx.datum
    if not datum.ell:
        raise ConfigError("the degeneration form needs a root-of-unity "
                          "datum")
    N = ctx.num_roots
    r = ctx.rank
    n = 2 * N + r
    roots = [root.weight for root in datum.posRoots]
    kroots = [datum.apply_kappa(b) for b in roots]
    two_omega = [datum.fundamental(i) * 2 for i in range(r)]
    H = [[0] * n for _ in range(n)]
    for i in range(N):
        for j in range(N):
            if i < j:
                H[i][j] = _pair_int(datum, roots[i], kroots[j])
                H[N + i][N + j] = _pair_int(datum, kroots[i], roots[j])
            elif i > j:
                H[i][j] = -_pair_int(datum, roots[j], kroots[i])
                H[N + i][N + j] = -_pair_int(datum, kroots[j], roots[i])
    for i in range(r):
        for j in range(N):
            a = _pair_int(datum, two_omega[i], roots[j])
            H[2 * N + i][j] = a
            H[j][2 * N + i] = -a
            H[2 * N + i][N + j] = -a
            H[N + j][2 * N + i] = a
    labels = ["X%d" % (j + 1) for j in range(N)] \
        + ["Y%d" % (j + 1) for j in range(N)] \
        + ["K%d" % (i + 1) for i in range(r)]
    return SkewForm(H, labels, N, r, datum.ell)


def smith_divisors(matrix):
    """Elementary divisors of an integer matrix, zeros included."""
    m = [list(row) for row in matrix]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    divisors = []
    top = 0
    while top < min(rows, cols):
        pivot = None
        best = None
        for i in range(top, rows):
            for j in range(top, cols):
                v = abs(m[i][j])
                if v and (best is None or v < best):
                    best = v
                    pivot = (i, j)
        if pivot is None:
            break
        i0, j0 = pivot
        m[top], m[i0] = m[i0], m[top]
        for row in m:
            row[top], row[j0] = row[j0], row[top]
        while True:
            p = m[top][top]
            reduced = False
            for i in range(top + 1, rows):
                if m[i][top]:
                    f = m[i][top] // p
                    m[i] = [x - f * y for x, y in zip(m[i], m[top])]
                    if m[i][top]:
                        m[top], m[i] = m[i], m[top]
                        reduced = True
                        break
            if reduced:
                continue
            for j in range(top + 1, cols):
                if m[top][j]:
                    f = m[top][j] // p
                    for row in m:
                        row[j] -= f * row[top]
                    if m[top][j]:
                        for row in m:
                            row[top], row[j] = row[j], row[top]
                        reduced = True
                        break
            if not reduced:
                break
        divisors.append(abs(m[top][top]))
        top += 1
    while len(divisors) < min(rows, cols):
        divisors.append(0)
    # diag(a, b) is equivalent to diag(gcd(a, b), lcm(a, b))
    changed = True
    while changed:
        changed = False
        for k in range(len(divisors) - 1):
            a, b = divisors[k], divisors[k + 1]
            if a and b and b % a:
                g = gcd(a, b)
                divisors[k] = g
                divisors[k + 1] = a * b // g
                changed = True
            elif not a and b:
                divisors[k], divisors[k + 1] = b, 0
                changed = True
    return divisors


def image_cardinality(ctx, form=None):
    """Cardinality of the image of the mod-order reduction of the form,
    from its elementary divisors."""
    if form is None:
        form = gr_matrix(ctx)
    ell = form.ell
    out = 1
    for d in smith_divisors(form.matrix):
        out *= ell // gcd(d, ell)
    return out


def gr_degree(ctx, form=None):
    """Degree of the graded algebra: square root of the image size."""
    card = image_cardinality(ctx, form)
    root = isqrt(card)
    if root * root != card:
        raise ConfigError("image cardinality %d is not a perfect square"
                          % card)
    return root


# ----------------------------------------------- graded center generators

def _w0_dual_index(datum, i):
    """Index j with alpha_j = -w0(alpha_i)."""
    img = apply_word(datum, tuple(datum.w0_word), datum.simple_roots[i])
    neg = -img
    for j in range(datum.rank):
        if neg.coords == datum.simple_roots[j].coords:
            return j
    raise ConfigError("longest element does not permute the simple roots")


def simple_root_positions(datum, i):
    """Positions in the convex order whose reduced-word letter is i."""
    return [j for j, letter in enumerate(datum.w0_word) if letter == i]


class GrCenterGenerators:
    """Exponent vectors generating the center of the graded algebra:
    the order-th power of each letter plus one mixed monomial per simple
    index, all lying in the kernel of the reduced commutation form."""

    def __init__(self, ctx, form=None):
        datum = ctx.datum
        self.form = gr_matrix(ctx) if form is None else form
        N = ctx.num_roots
        r = ctx.rank
        n = 2 * N + r
        self.x_powers = []
        self.y_powers = []
        for p in range(N):
            la = datum.ellAlpha[p]
            vec = [0] * n
            vec[p] = la
            self.x_powers.append(tuple(vec))
            vec = [0] * n
            vec[N + p] = la
            self.y_powers.append(tuple(vec))
        self.k_powers = []
        for i in range(r):
            for sign in (1, -1):
                vec = [0] * n
                vec[2 * N + i] = sign * datum.ellI[i]
                self.k_powers.append(tuple(vec))
        self.u_vectors = []
        for i in range(r):
            istar = _w0_dual_index(datum, i)
            wsum = datum.fundamental(i) + datum.fundamental(istar)
            kpart = datum.apply_kappa(wsum) - datum.fundamental(i) * 2
            vec = [0] * n
            for p in simple_root_positions(datum, i):
                vec[p] = 1
            for p in simple_root_positions(datum, istar):
                vec[N + p] = 1
            for k in range(r):
                c = kpart.coords[k]
                if c % 4:
                    raise ConfigError("mixed generator torus weight is "
                                      "outside the doubled lattice")
                vec[2 * N + k] = c // 4
            self.u_vectors.append(tuple(vec))

    def all_vectors(self):
        return list(self.x_powers) + list(self.y_powers) \
            + list(self.k_powers) + list(self.u_vectors)


def gr_center_generators(ctx, form=None):
    return GrCenterGenerators(ctx, form)
