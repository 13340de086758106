"""Hopf pairings between the halves and the invariant whole pairing.

The permutation-sum pairing on plain words is the computational core;
every other pairing here reduces to it by exact v-power bookkeeping on
the Cartan coordinates.  The extraction engine at the bottom solves for
coordinates over the ordered root vector basis by probing against dual
monomial families, with the diagonal Gram values taken from the closed
form and cross-checked against brute-force word sums once per weight.
"""

from fractions import Fraction

from .errors import HalfMismatch, NotCartan, SingularBlock
from .rootdata import WeightVec, pbw_normalizers
from .scalars import LaurentFrac, qfact

ZERO = LaurentFrac(0)
ONE = LaurentFrac(1)


def pair_words_untwisted(ctx, fword, eword):
    """Pairing of a plain F-word against a plain E-word.

    Both words are tuples of 0-based simple indices read left to right.
    Zero unless the letter multisets agree.
    """
    f = tuple(fword)
    e = tuple(eword)
    if len(f) != len(e) or ctx._letter_counts(f) != ctx._letter_counts(e):
        return ZERO
    return _pw(ctx, f, e)


def _pw(ctx, f, e):
    # peel the first E-letter; it may pair with any matching F-position,
    # picking up the inner product with every F-letter to the left
    if not e:
        return ONE
    key = (f, e)
    hit = ctx._upair_memo.get(key)
    if hit is not None:
        return hit
    b = ctx.datum.b
    j = e[0]
    dj = ctx.datum.d[j]
    base = -ONE / LaurentFrac({ctx.N * dj: 1, -ctx.N * dj: -1})
    acc = ZERO
    wexp = 0
    for p, letter in enumerate(f):
        if letter == j:
            sub = _pw(ctx, f[:p] + f[p + 1:], e[1:])
            if not sub.is_zero():
                acc = acc + LaurentFrac.t_power(ctx.N * wexp) * base * sub
        wexp += b[letter][j]
    ctx._upair_memo[key] = acc
    return acc


def _wt(d, word):
    acc = d.zero_weight()
    for i in word:
        acc = acc + d.simple_roots[i]
    return acc


def _nu_lt_sum(d, word):
    acc = d.zero_weight()
    for i in word:
        acc = acc + d.nuLT[i]
    return acc


def _nu_gt_sum(d, word):
    acc = d.zero_weight()
    for i in word:
        acc = acc + d.nuGT[i]
    return acc


def _kinv_pair(d, u, w):
    """(kappa^{-1}(u), w) as an exact Fraction."""
    fc = d.apply_kappa_inv(u)
    tot = Fraction(0)
    for i in range(d.rank):
        if fc[i]:
            for j in range(d.rank):
                tot += fc[i] * d.gram[i][j] * w.coords[j]
    return tot / 4


def pair_untwisted(ctx, y, x):
    """The untwisted Hopf pairing on canonical lower x upper elements."""
    d = ctx.datum
    tot = ZERO
    for (f, m, etail), cy in y.terms.items():
        if etail:
            raise HalfMismatch("first argument must lie in the lower Borel")
        mv = WeightVec(m)
        for (fhead, lam, e), cx in x.terms.items():
            if fhead:
                raise HalfMismatch("second argument must lie in the upper "
                                   "Borel")
            base = pair_words_untwisted(ctx, f, e)
            if base.is_zero():
                continue
            lv = WeightVec(lam)
            ex = d.pair(_wt(d, e), lv) - d.pair(mv, lv)
            tot = tot + cy * cx * base * ctx.vq(ex)
    return tot


def pair_halves_twisted(ctx, y, x):
    """Twisted Hopf pairing on canonical elements of the two halves.

    y may carry Cartan factors to the right of its F-word, x to the left
    of its E-word; the closed Cartan reduction handles the rest.
    """
    d = ctx.datum
    tot = ZERO
    for (f, my, etail), cy in y.terms.items():
        if etail:
            raise HalfMismatch("first argument must lie in the lower half")
        nu = _wt(d, f)
        slt = _nu_lt_sum(d, f)
        sgt = _nu_gt_sum(d, f)
        myv = WeightVec(my)
        for (fhead, mx, e), cx in x.terms.items():
            if fhead:
                raise HalfMismatch("second argument must lie in the upper "
                                   "half")
            if ctx._letter_counts(f) != ctx._letter_counts(e):
                continue
            base = pair_words_untwisted(ctx, f, e)
            if base.is_zero():
                continue
            mxv = WeightVec(mx)
            ex = d.pair(nu, mxv) + d.pair(myv, nu) \
                - _kinv_pair(d, slt + myv, mxv - sgt)
            tot = tot + cy * cx * base * ctx.vq(ex)
    return tot


def omega_le(ctx, y):
    """Lower-half matching map onto the twisted form."""
    d = ctx.datum
    out = {}
    for (f, m, etail), c in y.terms.items():
        if etail:
            raise HalfMismatch("matching map expects a lower-half element")
        slt = _nu_lt_sum(d, f)
        mu = (d.apply_kappa(WeightVec(m)) - slt).coords
        cc = c * ctx.vq(d.pair(_wt(d, f), slt))
        cur = out.get((f, mu, ()))
        out[(f, mu, ())] = cc if cur is None else cur + cc
    from .uqalg import Element
    return Element(ctx, out)


def omega_ge(ctx, x):
    """Upper-half matching map onto the twisted form."""
    d = ctx.datum
    out = {}
    for (fhead, m, e), c in x.terms.items():
        if fhead:
            raise HalfMismatch("matching map expects an upper-half element")
        slt = _nu_lt_sum(d, e)
        mu = (WeightVec(m) - slt).coords
        cc = c * ctx.vq(d.pair(_wt(d, e), slt))
        cur = out.get(((), mu, e))
        out[((), mu, e)] = cc if cur is None else cur + cc
    from .uqalg import Element
    return Element(ctx, out)


def pbw_pair_diag(ctx, kvec):
    """Closed-form diagonal pairing of twisted PBW monomials."""
    d = ctx.datum
    roots = d.posRoots
    A = Fraction(0)
    for p, kp in enumerate(kvec):
        if not kp:
            continue
        b_gt, b_lt, nu_gt, nu_lt = pbw_normalizers(d, p)
        beta = roots[p].weight
        A += kp * (b_gt + b_lt)
        A += Fraction(kp * (kp - 1), 2) * (d.pair(nu_gt, beta)
                                           - d.pair(nu_lt, beta))
    for p in range(len(roots)):
        if not kvec[p]:
            continue
        lt_p = pbw_normalizers(d, p)[3]
        for q in range(p + 1, len(roots)):
            if not kvec[q]:
                continue
            gt_q = pbw_normalizers(d, q)[2]
            A += kvec[p] * kvec[q] * (d.pair(gt_q, roots[p].weight)
                                      - d.pair(lt_p, roots[q].weight))
    val = ctx.vq(A)
    for p, kp in enumerate(kvec):
        if not kp:
            continue
        dd = roots[p].d
        val = val * LaurentFrac.t_power(ctx.N * dd * (kp * (kp - 1) // 2))
        val = val * qfact(kp, dd, ctx.N)
        den = LaurentFrac({-ctx.N * dd: 1, ctx.N * dd: -1}) ** kp
        val = val / den
    return val


def chi_hat(ctx, lam, x):
    """Cartan character indexed by a weight; K^mu evaluates to v^(mu,lam)."""
    d = ctx.datum
    if not isinstance(lam, WeightVec):
        lam = WeightVec(tuple(lam))
    tot = ZERO
    for (f, m, e), c in x.terms.items():
        if f or e:
            raise NotCartan("characters only evaluate on Cartan elements")
        tot = tot + c * ctx.vq(d.pair(WeightVec(m), lam))
    return tot


class CharacterChiHat:
    """Callable Cartan character with a fixed weight label."""

    __slots__ = ("ctx", "lam")

    def __init__(self, ctx, lam):
        if not isinstance(lam, WeightVec):
            lam = WeightVec(tuple(lam))
        if not ctx.datum.in_P(lam):
            raise NotCartan("character labels live in the weight lattice")
        self.ctx = ctx
        self.lam = lam

    def __call__(self, x):
        return chi_hat(self.ctx, self.lam, x)


def pair_whole(ctx, y, x):
    """Invariant pairing of the even part against the twisted Lusztig form.

    Both arguments are canonical elements; each term is split into its
    triangular factors and fed through the closed two-factor formula.
    """
    d = ctx.datum
    rho = d.rho
    tot = ZERO
    for (f1, m1, e1), c1 in y.terms.items():
        nu1 = _wt(d, f1)
        mu1 = _wt(d, e1)
        lam1 = _nu_lt_sum(d, f1) + WeightVec(m1) - _nu_gt_sum(d, e1)
        if not d.in_2P(lam1):
            raise HalfMismatch("first argument has a Cartan part outside "
                               "the even weight lattice")
        half1 = _half_norm(ctx, f1)
        for (f2, m2, e2), c2 in x.terms.items():
            nu2 = _wt(d, f2)
            mu2 = _wt(d, e2)
            if nu1 != mu2 or nu2 != mu1:
                continue
            base = _pw(ctx, f1, e2) * _pw(ctx, f2, e1)
            if base.is_zero():
                continue
            lam2 = _nu_lt_sum(d, f2) + WeightVec(m2) - _nu_gt_sum(d, e2)
            half2 = _half_norm(ctx, f2)
            G = (d.pair(lam1, d.apply_kappa(mu1) + d.apply_gamma(mu2))
                 + d.pair(lam2, d.apply_kappa(mu2) + d.apply_gamma(mu1))
                 + d.pair(d.apply_gamma(mu1 - mu2), d.apply_gamma(mu1 - mu2))
                 - d.pair(lam1, lam2)) / 2 + 2 * d.pair(rho, mu2)
            tot = tot + c1 * c2 * base * ctx.vq(half1 + half2 + G)
    return tot


def _half_norm(ctx, word):
    """v-exponent normalizing one triangular factor of a canonical term."""
    d = ctx.datum
    nu = _wt(d, word)
    return d.pair(nu, _nu_gt_sum(d, word)) - d.pair(_nu_lt_sum(d, word), nu)


def extract_pbw_coeffs(ctx, x, divided=False):
    """Coordinates over the ordered basis via pairing probes only."""
    return ctx.to_pbw(x, engine="pairing", divided=divided)


# ---- the block extraction engine ----

def extract_block(ctx, bf, be, terms):
    """Solve one letter-count block of canonical terms for coordinates.

    bf/be are the F/E letter multiplicity tuples shared by every term.
    Returns a dict keyed (fvec, mu, evec).
    """
    d = ctx.datum
    kvecs = ctx.partitions_of(bf)
    rvecs = ctx.partitions_of(be)
    GF = _gram_diag(ctx, bf, kvecs)
    GE = _gram_diag(ctx, be, rvecs)
    _verify_closed_diag(ctx, bf, kvecs, GF)
    _verify_closed_diag(ctx, be, rvecs, GE)
    shift = _nu_lt_sum(d, _counts_word(bf)) - _nu_gt_sum(d, _counts_word(be))
    dualsF = {kv: ctx.pbw_monomial_words(kv, "E")[1] for kv in kvecs}
    dualsE = {rv: ctx.pbw_monomial_words(rv, "F")[1] for rv in rvecs}
    uvals = {}
    wvals = {}
    for (f, m, e) in terms:
        for kv in kvecs:
            if (f, kv) not in uvals:
                words = dualsF[kv]
                uvals[(f, kv)] = _sumpair_left(ctx, f, words)
        for rv in rvecs:
            if (e, rv) not in wvals:
                words = dualsE[rv]
                wvals[(e, rv)] = _sumpair_right(ctx, words, e)
    by_mu = {}
    for (f, m, e), c in terms.items():
        by_mu.setdefault(m, []).append((f, e, c))
    out = {}
    for m, trips in by_mu.items():
        mu = tuple(a + b for a, b in zip(m, shift.coords))
        for kv in kvecs:
            gk = GF[kv]
            for rv in rvecs:
                M = ZERO
                for (f, e, c) in trips:
                    u = uvals[(f, kv)]
                    if u.is_zero():
                        continue
                    w = wvals[(e, rv)]
                    if w.is_zero():
                        continue
                    M = M + c * u * w
                if M.is_zero():
                    continue
                key = (kv, mu, rv)
                cur = out.get(key)
                val = M / (gk * GE[rv])
                out[key] = val if cur is None else cur + val
    return {k: c for k, c in out.items() if not c.is_zero()}


def _counts_word(counts):
    word = []
    for i, n in enumerate(counts):
        word.extend([i] * n)
    return tuple(word)


def _sumpair_left(ctx, f, ewords):
    acc = ZERO
    for ew, c in ewords.items():
        val = pair_words_untwisted(ctx, f, ew)
        if not val.is_zero():
            acc = acc + c * val
    return acc


def _sumpair_right(ctx, fwords, e):
    acc = ZERO
    for fw, c in fwords.items():
        val = pair_words_untwisted(ctx, fw, e)
        if not val.is_zero():
            acc = acc + c * val
    return acc


def _gram_diag(ctx, counts, vecs):
    d = ctx.datum
    nu = _wt(d, _counts_word(counts))
    sq = d.pair(nu, nu)
    out = {}
    for kv in vecs:
        g = ctx.vq(sq) * pbw_pair_diag(ctx, kv)
        if g.is_zero():
            raise SingularBlock("diagonal Gram value vanished at %r" % (kv,))
        out[kv] = g
    return out


def _verify_closed_diag(ctx, counts, vecs, G):
    """Brute-force check of the diagonal closed form, once per weight.

    Pairs every dual monomial word expansion against every primal one;
    off-diagonal entries must vanish and diagonal ones must equal the
    closed form, otherwise coordinate extraction would be unsound.
    """
    if counts in ctx._diag_checked:
        return
    ctx._diag_checked.add(counts)
    for kv in vecs:
        fwords = ctx.pbw_monomial_words(kv, "F")[1]
        for rv in vecs:
            ewords = ctx.pbw_monomial_words(rv, "E")[1]
            val = ZERO
            for fw, cf in fwords.items():
                for ew, ce in ewords.items():
                    p = pair_words_untwisted(ctx, fw, ew)
                    if not p.is_zero():
                        val = val + cf * ce * p
            want = G[kv] if kv == rv else ZERO
            if not (val - want).is_zero():
                raise SingularBlock(
                    "Gram matrix of weight %r is not the expected diagonal "
                    "at %r vs %r" % (counts, kv, rv))
