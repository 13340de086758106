"""Arithmetic in the even quantum group in a fixed word normal form.

Every element is stored as a linear combination of canonical words

    F_{i_1} .. F_{i_a}  K^mu  E_{j_1} .. E_{j_b}

with mu in the half weight lattice.  Multiplication only ever commutes
E-letters past F-letters and moves Cartan factors around; E-words and
F-words are kept verbatim, so the word form of an element is not unique.
Genuine equality is decided in coordinates over the ordered root vector
basis (to_pbw), which this module computes by two independent routes:
half-pairing extraction for short words and cached straightening rules
for the ordered basis, which scale to large powers.
"""

import re
from fractions import Fraction

from .errors import ConfigError, ImpurityError, NotInSpan
from .rootdata import WeightVec, pbw_normalizers
from .scalars import LaurentFrac, paren_fact, qfact, specialize, to_vstring, vpow

ZERO = LaurentFrac(0)
ONE = LaurentFrac(1)


def _acc(table, key, val):
    """table[key] += val, dropping exact zeros."""
    cur = table.get(key)
    if cur is None:
        if not val.is_zero():
            table[key] = val
        return
    cur = cur + val
    if cur.is_zero():
        del table[key]
    else:
        table[key] = cur


def _tadd(*tups):
    return tuple(sum(col) for col in zip(*tups))


def _tneg(t):
    return tuple(-x for x in t)


class Element:
    """Linear combination of canonical F..K..E words over LaurentFrac.

    Immutable by convention: never mutate ``terms`` after construction.
    Equality compares PBW coordinates, so two different word
    representations of the same algebra element compare equal.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def is_zero(self):
        """True when the word representation is empty.

        This is only a sufficient condition for being zero; use
        ``is_zero_pbw`` when the element may carry Serre-type relics.
        """
        return not self.terms

    def is_zero_pbw(self):
        return not self.ctx.to_pbw(self)

    def __add__(self, other):
        other = self.ctx.coerce(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return Element(self.ctx, out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self.ctx.coerce(other))

    def __rsub__(self, other):
        return self.ctx.coerce(other) + (-self)

    def __neg__(self):
        return Element(self.ctx, {k: -c for k, c in self.terms.items()})

    def scale(self, c):
        c = self.ctx.scalar(c)
        if c.is_zero():
            return self.ctx.zero()
        return Element(self.ctx, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.ctx.mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        # scalars commute with everything, so left scalar action is the same
        return self.scale(other)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are not defined here")
        out = self.ctx.one()
        for _ in range(n):
            out = self.ctx.mul(out, self)
        return out

    def __eq__(self, other):
        other = self.ctx.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.terms == other.terms:
            return True
        return (self - other).is_zero_pbw()

    def __hash__(self):
        raise TypeError("Element is unhashable; compare via ==")

    def term_count(self):
        return len(self.terms)

    def to_json(self):
        return [[list(f), list(m), list(e), to_vstring(c, self.ctx.N)]
                for (f, m, e), c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "<0>"
        bits = []
        for (f, m, e), c in sorted(self.terms.items())[:6]:
            parts = ["F%d" % (i + 1) for i in f]
            if any(m):
                parts.append("K[%s]" % ",".join(str(x) for x in m))
            parts.extend("E%d" % (i + 1) for i in e)
            word = "*".join(parts) if parts else "1"
            bits.append("(%s)%s" % (to_vstring(c, self.ctx.N), word))
        more = "" if len(self.terms) <= 6 else " +%d terms" % (len(self.terms) - 6)
        return "<" + " + ".join(bits) + more + ">"


class TensorElement:
    """Element of the two-fold tensor square, canonical term pairs."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return TensorElement(self.ctx, out)

    def __neg__(self):
        return TensorElement(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ctx.scalar(c)
        return TensorElement(self.ctx, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        return TensorElement(self.ctx,
                             self.ctx.tensor_term_mul(self.terms, other.terms))

    def legs(self):
        """The two factors as lists of (Element, Element, coeff) summands."""
        ctx = self.ctx
        return [(Element(ctx, {t1: ONE}), Element(ctx, {t2: ONE}), c)
                for (t1, t2), c in self.terms.items()]

    def __eq__(self, other):
        return isinstance(other, TensorElement) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("TensorElement is unhashable")

    def __repr__(self):
        return "<tensor, %d terms>" % len(self.terms)


class PbwElement:
    """Element stored directly in PBW coordinates (fvec, mu, evec).

    fvec/evec are exponent tuples over the convex root order, mu a Cartan
    weight in half weight coordinates.  Products go through the cached
    straightening rules, so this form stays cheap for high powers where
    the word form would explode.
    """

    __slots__ = ("ctx", "coords")

    def __init__(self, ctx, coords):
        self.ctx = ctx
        self.coords = {k: c for k, c in coords.items() if not c.is_zero()}

    def is_zero(self):
        return not self.coords

    def __add__(self, other):
        out = dict(self.coords)
        for k, c in other.coords.items():
            _acc(out, k, c)
        return PbwElement(self.ctx, out)

    def __neg__(self):
        return PbwElement(self.ctx, {k: -c for k, c in self.coords.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = self.ctx.scalar(c)
        return PbwElement(self.ctx, {k: c * v for k, v in self.coords.items()})

    def __mul__(self, other):
        if isinstance(other, PbwElement):
            return self.ctx.pbw_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, PbwElement) and self.coords == other.coords

    def __hash__(self):
        raise TypeError("PbwElement is unhashable")

    def to_element(self):
        return self.ctx.from_pbw(self.coords)

    def __repr__(self):
        return "<pbw, %d coords>" % len(self.coords)


class SpecElement:
    """Canonical word terms with cyclotomic coefficients.

    Output of specialize_elem; supports only the module structure.  Zero
    testing of a specialized commutator should happen on specialized PBW
    coordinates of the generic lift, not on this word form.
    """

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx, terms):
        self.ctx = ctx
        self.terms = {k: c for k, c in terms.items() if not c.is_zero()}

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            cur = out.get(k)
            cur = c if cur is None else cur + c
            if cur.is_zero():
                out.pop(k, None)
            else:
                out[k] = cur
        return SpecElement(self.ctx, out)

    def __neg__(self):
        return SpecElement(self.ctx, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        return isinstance(other, SpecElement) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("SpecElement is unhashable")

    def __repr__(self):
        return "<specialized, %d terms>" % len(self.terms)


class AlgebraCtx:
    """One root datum plus every computation cache.

    All caches are append-only dicts keyed by immutable tuples, filled on
    first use; a warmed-up context is safe to share read-only.  ``cap``
    bounds the total word height accepted by the short-word extraction
    engine; longer words are routed through straightening rules.
    """

    def __init__(self, datum, cap=8):
        if datum.rootOrderN <= 0:
            raise ConfigError("root datum lacks a root order scale")
        self.datum = datum
        self.cap = cap
        self.pair_len_cap = min(cap, 6)
        self.N = datum.rootOrderN
        self.rank = datum.rank
        r = datum.rank
        self._zmu = (0,) * r
        self._unit = ((), self._zmu, ())
        self._alpha = [w.coords for w in datum.simple_roots]
        # integer tables: N*(alpha_i, omega_j/2) and N*(beta_p, omega_j/2)
        self._pai = [[datum.pair_check(datum.simple_roots[i],
                                       datum.fundamental(j, half=True))
                      for j in range(r)] for i in range(r)]
        self._prow = [[sum(root.alpha_coords[i] * self._pai[i][j]
                           for i in range(r)) for j in range(r)]
                      for root in datum.posRoots]
        self.num_roots = len(datum.posRoots)
        self._ef_memo = {}
        self._braid_memo = {}
        self._root_memo = {}
        self._power_memo = {}
        self._mono_memo = {}
        self._mono_words_memo = {}
        self._parts_memo = {}
        self._swap_memo = {}
        self._mixed_memo = {}
        self._rmul_memo = {}
        self._cross_memo = {}
        self._fold_memo = {}
        self._upair_memo = {}
        self._diag_checked = set()
        self._hopf = None
        self._pos_simple_cache = None

    # ---- scalars and element constructors ----

    def scalar(self, c):
        if isinstance(c, LaurentFrac):
            return c
        if isinstance(c, int):
            return LaurentFrac(c)
        if isinstance(c, Fraction):
            return LaurentFrac.from_fraction(c)
        raise TypeError("cannot use %r as a scalar" % (c,))

    def vq(self, q):
        """v**q for a rational q, as an exact power of t."""
        return vpow(q, self.N)

    def zero(self):
        return Element(self, {})

    def one(self):
        return Element(self, {self._unit: ONE})

    def scalar_elem(self, c):
        return Element(self, {self._unit: self.scalar(c)})

    def coerce(self, x):
        if isinstance(x, Element):
            return x
        if isinstance(x, (int, Fraction, LaurentFrac)):
            return self.scalar_elem(x)
        return NotImplemented

    def element(self, terms):
        return Element(self, {k: self.scalar(c) for k, c in terms.items()})

    # ---- generators ----

    def gen_E(self, i):
        return Element(self, {((), self._zmu, (i,)): ONE})

    def gen_F(self, i):
        return Element(self, {((i,), self._zmu, ()): ONE})

    def gen_K(self, mu):
        if isinstance(mu, WeightVec):
            mu = mu.coords
        return Element(self, {((), tuple(mu), ()): ONE})

    def gen_tE(self, i):
        # E_i K^{nu>_i} in canonical order
        nu = self.datum.nuGT[i]
        coeff = self.vq(-self.datum.pair(self.datum.simple_roots[i], nu))
        return Element(self, {((), nu.coords, (i,)): coeff})

    def gen_tF(self, i):
        # K^{-nu<_i} F_i in canonical order
        nu = self.datum.nuLT[i]
        coeff = self.vq(self.datum.pair(self.datum.simple_roots[i], nu))
        return Element(self, {((i,), (-nu).coords, ()): coeff})

    def tilde_gen_div(self, flavor, i, n):
        """n-th divided power of a twisted simple generator."""
        key = ("gdiv", flavor, i, n)
        hit = self._power_memo.get(key)
        if hit is not None:
            return hit
        gen = self.gen_tE(i) if flavor == "E" else self.gen_tF(i)
        out = (gen ** n).scale(ONE / paren_fact(n, self.datum.d[i], self.N))
        self._power_memo[key] = out
        return out

    def gen_bracketK(self, i, a, n):
        """Square-bracket Cartan binomial on K^{alpha_i}, top entry shift a."""
        di = self.datum.d[i]
        alf = self._alpha[i]
        out = self.one()
        for s in range(1, n + 1):
            den = LaurentFrac({self.N * di * s: 1, -self.N * di * s: -1})
            pos = self.gen_K(alf).scale(
                LaurentFrac.t_power(self.N * di * (a - s + 1)))
            neg = self.gen_K(_tneg(alf)).scale(
                LaurentFrac.t_power(-self.N * di * (a - s + 1)))
            out = self.mul(out, (pos - neg).scale(ONE / den))
        return out

    def gen_parenK(self, i, a, n):
        """Round-bracket Cartan binomial on K^{-2 alpha_i}; lives in the
        even Cartan subring."""
        di = self.datum.d[i]
        alf2 = _tneg(_tadd(self._alpha[i], self._alpha[i]))
        out = self.one()
        for s in range(1, n + 1):
            den = ONE - LaurentFrac.t_power(-2 * self.N * di * s)
            fac = self.one() - self.gen_K(alf2).scale(
                LaurentFrac.t_power(2 * self.N * di * (s - a - 1)))
            out = self.mul(out, fac.scale(ONE / den))
        return out

    def generator(self, kind, i=0, n=1, a=0, mu=None, divided=False):
        """Uniform access to all named generators; indices are 0-based."""
        if kind == "K":
            if mu is None:
                raise ConfigError("K generator needs a weight")
            return self.gen_K(mu)
        if kind == "bracketK":
            return self.gen_bracketK(i, a, n)
        if kind == "parenK":
            return self.gen_parenK(i, a, n)
        base = {"E": self.gen_E, "F": self.gen_F,
                "tE": self.gen_tE, "tF": self.gen_tF}.get(kind)
        if base is None:
            raise ConfigError("unknown generator kind %r" % kind)
        if n == 1:
            return base(i)
        if divided:
            if kind not in ("tE", "tF"):
                raise ConfigError("divided powers only for twisted generators")
            return self.tilde_gen_div(kind[1], i, n)
        return base(i) ** n

    # ---- multiplication ----

    def _word_move(self, word, mu):
        """N * (weight(word), mu) as an exact integer."""
        t = 0
        r = self.rank
        for letter in word:
            row = self._pai[letter]
            for j in range(r):
                t += row[j] * mu[j]
        return t

    def _term_mul(self, t1, t2):
        f1, m1, e1 = t1
        f2, m2, e2 = t2
        out = {}
        for (fm, mm, em), cm in self._stra(e1, f2).items():
            texp = -self._word_move(fm, m1) - self._word_move(em, m2)
            mu = _tadd(m1, mm, m2)
            _acc(out, (f1 + fm, mu, em + e2),
                 cm * LaurentFrac.t_power(texp))
        return out

    def mul(self, x, y):
        acc = {}
        for t1, c1 in x.terms.items():
            for t2, c2 in y.terms.items():
                c = c1 * c2
                for key, cm in self._term_mul(t1, t2).items():
                    _acc(acc, key, c * cm)
        return Element(self, acc)

    def _stra(self, e, f):
        """Canonical form of (E-word e)*(F-word f), memoized on both words.

        Only the cross commutation E_i F_j is ever rewritten; the E-E and
        F-F letter orders are preserved.
        """
        if not e or not f:
            return {(f, self._zmu, e): ONE}
        key = (e, f)
        hit = self._ef_memo.get(key)
        if hit is not None:
            return hit
        i = e[-1]
        j = f[0]
        head = e[:-1]
        tail = f[1:]
        acc = {}
        for (f1, m1, e1), c1 in self._stra((i,), tail).items():
            # head * (F_j f1) K^{m1} e1
            for (f2, m2, e2), c2 in self._stra(head, (j,) + f1).items():
                texp = -self._word_move(e2, m1)
                _acc(acc, (f2, _tadd(m2, m1), e2 + e1),
                     c1 * c2 * LaurentFrac.t_power(texp))
        if i == j:
            di = self.datum.d[i]
            den = LaurentFrac({self.N * di: 1, -self.N * di: -1})
            sub = self._stra(head, tail)
            for sgn, mm in ((1, self._alpha[i]), (-1, _tneg(self._alpha[i]))):
                ck = LaurentFrac.t_power(-self._word_move(tail, mm)) / den
                if sgn < 0:
                    ck = -ck
                for (f3, m3, e3), c3 in sub.items():
                    texp = -self._word_move(e3, mm)
                    _acc(acc, (f3, _tadd(m3, mm), e3),
                         c3 * ck * LaurentFrac.t_power(texp))
        self._ef_memo[key] = acc
        return acc

    # ---- braid operators ----

    def _braid_letter(self, i, flavor, j, inverse):
        key = (i, flavor, j, inverse)
        hit = self._braid_memo.get(key)
        if hit is not None:
            return hit
        di = self.datum.d[i]
        alf = self._alpha[i]
        if j == i:
            if flavor == "E":
                img = self.mul(self.gen_K(_tneg(alf)), self.gen_F(i)) \
                    if inverse else self.mul(self.gen_F(i), self.gen_K(alf))
            else:
                img = self.mul(self.gen_E(i), self.gen_K(alf)) \
                    if inverse else self.mul(self.gen_K(_tneg(alf)),
                                             self.gen_E(i))
            img = -img
        else:
            m = -self.datum.cartan[i][j]
            terms = {}
            for k in range(m + 1):
                den = qfact(m - k, di, self.N) * qfact(k, di, self.N)
                sgn_exp = di * self.N * k
                if flavor == "E":
                    coeff = LaurentFrac.t_power(-sgn_exp)
                    word = ((i,) * k + (j,) + (i,) * (m - k)) if inverse \
                        else ((i,) * (m - k) + (j,) + (i,) * k)
                    tk = ((), self._zmu, word)
                else:
                    coeff = LaurentFrac.t_power(sgn_exp)
                    word = ((i,) * (m - k) + (j,) + (i,) * k) if inverse \
                        else ((i,) * k + (j,) + (i,) * (m - k))
                    tk = (word, self._zmu, ())
                if k % 2:
                    coeff = -coeff
                terms[tk] = coeff / den
            img = Element(self, terms)
        self._braid_memo[key] = img
        return img

    def braid(self, i, x, inverse=False):
        """Lusztig symmetry T_i (or its inverse) applied to an element."""
        acc = self.zero()
        for (f, m, e), c in x.terms.items():
            cur = self.scalar_elem(c)
            for j in f:
                cur = self.mul(cur, self._braid_letter(i, "F", j, inverse))
            cur = self.mul(cur, self.gen_K(self.datum.reflect_coords(i, m)))
            for j in e:
                cur = self.mul(cur, self._braid_letter(i, "E", j, inverse))
            acc = acc + cur
        return acc

    def tau(self, x):
        """Anti-involution: swaps the halves, inverts K and v."""
        out = {}
        for (f, m, e), c in x.terms.items():
            _acc(out, (tuple(reversed(e)), _tneg(m), tuple(reversed(f))),
                 c.bar())
        return Element(self, out)

    # ---- root vectors and PBW monomials ----

    def root_vector(self, k, flavor="E", twisted=False):
        key = (k, flavor, twisted)
        hit = self._root_memo.get(key)
        if hit is not None:
            return hit
        if twisted:
            plain = self.root_vector(k, flavor, twisted=False)
            b_gt, b_lt, nu_gt, nu_lt = pbw_normalizers(self.datum, k)
            if flavor == "E":
                out = self.mul(plain, self.gen_K(nu_gt)).scale(self.vq(b_gt))
            else:
                out = self.mul(self.gen_K(-nu_lt), plain).scale(self.vq(b_lt))
        else:
            word = self.datum.w0_word
            out = self.gen_E(word[k]) if flavor == "E" else self.gen_F(word[k])
            for s in reversed(word[:k]):
                out = self.braid(s, out)
            for (f, m, e) in out.terms:
                pure = (not f and m == self._zmu) if flavor == "E" \
                    else (not e and m == self._zmu)
                if not pure:
                    raise ImpurityError(
                        "braid image of root %d left the %s half" % (k, flavor))
        self._root_memo[key] = out
        return out

    def root_power(self, k, flavor, s):
        """s-th power of a twisted root vector, cached incrementally."""
        if s == 0:
            return self.one()
        key = (k, flavor, s)
        hit = self._power_memo.get(key)
        if hit is not None:
            return hit
        out = self.mul(self.root_power(k, flavor, s - 1),
                       self.root_vector(k, flavor, twisted=True))
        self._power_memo[key] = out
        return out

    def root_divided(self, k, flavor, s):
        dd = self.datum.posRoots[k].d
        return self.root_power(k, flavor, s).scale(
            ONE / paren_fact(s, dd, self.N))

    def pbw_monomial(self, vec, side):
        """Product of twisted root vector powers in decreasing convex order."""
        key = (vec, side)
        hit = self._mono_memo.get(key)
        if hit is not None:
            return hit
        out = self.one()
        for p in range(self.num_roots - 1, -1, -1):
            if vec[p]:
                out = self.mul(out, self.root_power(p, side, vec[p]))
        self._mono_memo[key] = out
        return out

    def pbw_monomial_words(self, vec, side):
        """Word part of a PBW monomial with the common Cartan offset removed."""
        key = (vec, side)
        hit = self._mono_words_memo.get(key)
        if hit is not None:
            return hit
        elem = self.pbw_monomial(vec, side)
        off = self._side_offset(vec, side)
        words = {}
        for (f, m, e), c in elem.terms.items():
            if m != off:
                raise ConfigError("PBW monomial has a mixed Cartan offset")
            words[e if side == "E" else f] = c
        out = (off, words)
        self._mono_words_memo[key] = out
        return out

    def _side_offset(self, vec, side):
        r = self.rank
        acc = self.datum.zero_weight()
        for p in range(self.num_roots):
            if vec[p]:
                _, _, nu_gt, nu_lt = pbw_normalizers(self.datum, p)
                acc = acc + vec[p] * (nu_gt if side == "E" else -nu_lt)
        return acc.coords

    def vec_weight(self, vec):
        """Simple-root multiplicities of a PBW exponent vector."""
        r = self.rank
        out = [0] * r
        for p, k in enumerate(vec):
            if k:
                ac = self.datum.posRoots[p].alpha_coords
                for i in range(r):
                    out[i] += k * ac[i]
        return tuple(out)

    def partitions_of(self, counts):
        """All PBW exponent vectors with the given simple-root weight."""
        counts = tuple(counts)
        hit = self._parts_memo.get(counts)
        if hit is not None:
            return hit
        roots = self.datum.posRoots
        r = self.rank
        out = []

        def rec(p, left, acc):
            if p == len(roots):
                if all(x == 0 for x in left):
                    out.append(tuple(acc))
                return
            ac = roots[p].alpha_coords
            top = min((left[i] // ac[i]) for i in range(r) if ac[i]) \
                if any(ac) else 0
            for k in range(top + 1):
                rec(p + 1, tuple(left[i] - k * ac[i] for i in range(r)),
                    acc + [k])

        rec(0, counts, [])
        self._parts_memo[counts] = out
        return out

    # ---- Hopf structure (twisted) ----

    def _ensure_hopf(self):
        if self._hopf is not None:
            return self._hopf
        d = self.datum
        dE, dF, sE, sF = [], [], [], []
        for i in range(self.rank):
            et = ((), self._zmu, (i,))
            ft = ((i,), self._zmu, ())
            km = lambda w: ((), w.coords, ())
            dE.append({(km(-d.nuGT[i]), et): ONE,
                       (et, km(d.nuLT[i])): ONE})
            dF.append({(km(d.nuLT[i]), ft): ONE,
                       (ft, km(d.nuLT[i] + d.zetaLT[i])): ONE})
            sE.append(self.mul(self.gen_E(i),
                               self.gen_K(_tneg(self._alpha[i]))).scale(
                -self.vq(d.pair(d.simple_roots[i], d.nuGT[i]))))
            sF.append(self.mul(self.gen_F(i),
                               self.gen_K(self._alpha[i])).scale(
                -self.vq(d.pair(d.simple_roots[i], d.nuLT[i]))))
        self._hopf = (dE, dF, sE, sF)
        return self._hopf

    def tensor_term_mul(self, A, B):
        out = {}
        for (a1, a2), ca in A.items():
            for (b1, b2), cb in B.items():
                c = ca * cb
                d1 = self._term_mul(a1, b1)
                if not d1:
                    continue
                d2 = self._term_mul(a2, b2)
                for k1, c1 in d1.items():
                    cc = c * c1
                    for k2, c2 in d2.items():
                        _acc(out, (k1, k2), cc * c2)
        return out

    def coproduct(self, x):
        dE, dF, _, _ = self._ensure_hopf()
        acc = {}
        for (f, m, e), c in x.terms.items():
            km = ((), m, ())
            cur = {((self._unit), (self._unit)): c}
            for j in f:
                cur = self.tensor_term_mul(cur, dF[j])
            cur = self.tensor_term_mul(cur, {(km, km): ONE})
            for j in e:
                cur = self.tensor_term_mul(cur, dE[j])
            for k, v in cur.items():
                _acc(acc, k, v)
        return TensorElement(self, acc)

    def antipode(self, x):
        _, _, sE, sF = self._ensure_hopf()
        acc = self.zero()
        for (f, m, e), c in x.terms.items():
            cur = self.scalar_elem(c)
            for j in reversed(e):
                cur = self.mul(cur, sE[j])
            cur = self.mul(cur, self.gen_K(_tneg(m)))
            for j in reversed(f):
                cur = self.mul(cur, sF[j])
            acc = acc + cur
        return acc

    def counit(self, x):
        tot = ZERO
        for (f, m, e), c in x.terms.items():
            if not f and not e:
                tot = tot + c
        return tot

    def ad_prime(self, x, y):
        """Left adjoint action built from the twisted coproduct and antipode."""
        acc = self.zero()
        for (t1, t2), c in self.coproduct(x).terms.items():
            left = Element(self, {t1: c})
            right = self.antipode(Element(self, {t2: ONE}))
            acc = acc + self.mul(self.mul(left, y), right)
        return acc

    # ---- straightening rules for the ordered basis ----

    def pos_of_simple(self):
        """Convex-order position of each simple root, with a consistency
        check that the braid construction reproduces the plain generators."""
        if self._pos_simple_cache is not None:
            return self._pos_simple_cache
        pos = [None] * self.rank
        for root in self.datum.posRoots:
            if root.height == 1:
                i = next(k for k, a in enumerate(root.alpha_coords) if a)
                pos[i] = root.index
        if any(p is None for p in pos):
            raise ConfigError("convex order misses a simple root")
        for i, p in enumerate(pos):
            want = {((), self._zmu, (i,)): ONE}
            if self.root_vector(p, "E").terms != want:
                raise ConfigError("root vector at a simple position is "
                                  "not the plain generator")
        self._pos_simple_cache = pos
        return pos

    def _swap_rule(self, side, q, p):
        """One-sided coordinates of X_{beta_q} X_{beta_p} for q < p.

        This is the wrong-order product; its expansion only involves
        exponent vectors supported between q and p, which the recursion
        in _rmul relies on.
        """
        key = (side, q, p)
        hit = self._swap_memo.get(key)
        if hit is not None:
            return hit
        prod = self.mul(self.root_vector(q, side, twisted=True),
                        self.root_vector(p, side, twisted=True))
        out = {}
        for (fv, mu, ev), c in self.to_pbw(prod, engine="pairing").items():
            vec = ev if side == "E" else fv
            other = fv if side == "E" else ev
            if any(other) or any(mu):
                raise ConfigError("one-sided product left its half")
            out[vec] = c
        self._swap_memo[key] = out
        return out

    def _mixed_rule(self, p, q):
        """Full coordinates of tE_{beta_p} tF_{beta_q}."""
        key = (p, q)
        hit = self._mixed_memo.get(key)
        if hit is not None:
            return hit
        prod = self.mul(self.root_vector(p, "E", twisted=True),
                        self.root_vector(q, "F", twisted=True))
        out = self.to_pbw(prod, engine="pairing")
        self._mixed_memo[key] = out
        return out

    def _rmul(self, side, vec, p):
        """vec * X_{beta_p} in one-sided coordinates."""
        if not any(vec):
            unit = tuple(int(t == p) for t in range(self.num_roots))
            return {unit: ONE}
        q = next(t for t in range(self.num_roots) if vec[t])
        if p <= q:
            return {vec[:p] + (vec[p] + 1,) + vec[p + 1:]: ONE}
        key = (side, vec, p)
        hit = self._rmul_memo.get(key)
        if hit is not None:
            return hit
        vec1 = vec[:q] + (vec[q] - 1,) + vec[q + 1:]
        out = {}
        for mvec, cm in self._swap_rule(side, q, p).items():
            for wvec, cw in self._mono_mul(side, vec1, mvec).items():
                _acc(out, wvec, cm * cw)
        self._rmul_memo[key] = out
        return out

    def _mono_mul(self, side, avec, bvec):
        """Normal ordering of X^{avec} X^{bvec} on one side."""
        cur = {avec: ONE}
        for p in range(self.num_roots - 1, -1, -1):
            for _ in range(bvec[p]):
                nxt = {}
                for v, c in cur.items():
                    for w, cw in self._rmul(side, v, p).items():
                        _acc(nxt, w, c * cw)
                cur = nxt
        return cur

    def _vec_move(self, vec, mu):
        """N * (weight(vec), mu) as an integer."""
        t = 0
        r = self.rank
        for p, k in enumerate(vec):
            if k:
                row = self._prow[p]
                for j in range(r):
                    t += k * row[j] * mu[j]
        return t

    def _cross(self, kvec, rvec):
        """E-monomial times F-monomial, reordered into full coordinates."""
        if not any(kvec) or not any(rvec):
            return {(rvec, self._zmu, kvec): ONE}
        key = (kvec, rvec)
        hit = self._cross_memo.get(key)
        if hit is not None:
            return hit
        a = next(t for t in range(self.num_roots) if kvec[t])
        b = max(t for t in range(self.num_roots) if rvec[t])
        k1 = kvec[:a] + (kvec[a] - 1,) + kvec[a + 1:]
        r1 = rvec[:b] + (rvec[b] - 1,) + rvec[b + 1:]
        out = {}
        for (r2, mu2, k2), c2 in self._mixed_rule(a, b).items():
            for (r3, mu3, k3), c3 in self._cross(k2, r1).items():
                c23 = c2 * c3 * LaurentFrac.t_power(-self._vec_move(r3, mu2))
                g = _tadd(mu2, mu3)
                for r4, c4 in self._mono_mul("F", r2, r3).items():
                    c234 = c23 * c4
                    for (r5, mu5, k5), c5 in self._cross(k1, r4).items():
                        c2345 = c234 * c5 * LaurentFrac.t_power(
                            -self._vec_move(k5, g))
                        mu = _tadd(mu5, g)
                        for k6, c6 in self._mono_mul("E", k5, k3).items():
                            _acc(out, (r5, mu, k6), c2345 * c6)
        self._cross_memo[key] = out
        return out

    def pbw_mul(self, A, B):
        ca_items = A.coords if isinstance(A, PbwElement) else A
        cb_items = B.coords if isinstance(B, PbwElement) else B
        out = {}
        for (r, mu, k), ca in ca_items.items():
            for (rp, mup, kp), cb in cb_items.items():
                c = ca * cb
                madd = _tadd(mu, mup)
                for (r2, mu2, k2), c2 in self._cross(k, rp).items():
                    cc = c * c2 * LaurentFrac.t_power(
                        -self._vec_move(r2, mu) - self._vec_move(k2, mup))
                    mm = _tadd(madd, mu2)
                    for r4, c4 in self._mono_mul("F", r, r2).items():
                        c4c = cc * c4
                        for k6, c6 in self._mono_mul("E", k2, kp).items():
                            _acc(out, (r4, mm, k6), c4c * c6)
        return PbwElement(self, out)

    def pbw_unit(self, fvec=None, mu=None, evec=None, coeff=ONE):
        z = (0,) * self.num_roots
        return PbwElement(self, {(fvec or z, mu or self._zmu, evec or z):
                                 self.scalar(coeff)})

    # ---- word to PBW conversion, straightening route ----

    def _word_fold(self, word, side):
        """One-sided coordinates of the product of twisted simple root
        vectors named by the word, read left to right."""
        if not word:
            return {(0,) * self.num_roots: ONE}
        key = (side, word)
        hit = self._fold_memo.get(key)
        if hit is not None:
            return hit
        pos = self.pos_of_simple()
        prev = self._word_fold(word[:-1], side)
        p = pos[word[-1]]
        out = {}
        for vec, c in prev.items():
            for w, cw in self._rmul(side, vec, p).items():
                _acc(out, w, c * cw)
        self._fold_memo[key] = out
        return out

    def _ls_term_coords(self, f, m, e):
        """Coordinates of one canonical word term via straightening rules."""
        d = self.datum
        cf = Fraction(0)
        for l in range(1, len(f)):
            for mm in range(l):
                cf += d.phi[f[l]][f[mm]]
        de = Fraction(0)
        for qq in range(1, len(e)):
            for pp in range(qq):
                de += d.pair(d.simple_roots[e[qq]], d.nuGT[e[pp]])
        nu_f = d.zero_weight()
        s_lt = d.zero_weight()
        for i in f:
            nu_f = nu_f + d.simple_roots[i]
            s_lt = s_lt + d.nuLT[i]
        nu_e = d.zero_weight()
        s_gt = d.zero_weight()
        for i in e:
            nu_e = nu_e + d.simple_roots[i]
            s_gt = s_gt + d.nuGT[i]
        exp = cf - de - d.pair(nu_f, s_lt) + d.pair(nu_e, s_gt)
        base = self.vq(exp)
        mu = _tadd(s_lt.coords, m, _tneg(s_gt.coords))
        wf = self._word_fold(f, "F")
        we = self._word_fold(e, "E")
        out = {}
        for rv, cr in wf.items():
            for kv, ck in we.items():
                _acc(out, (rv, mu, kv), base * cr * ck)
        return out

    # ---- conversion entry points ----

    def to_pbw(self, x, engine="auto", divided=False, require_even=False):
        """Coordinates over the ordered root vector basis.

        engine 'pairing' uses half-pairing extraction (short words only),
        'ls' uses the straightening rules, 'auto' picks per block.
        """
        coords = {}
        blocks = {}
        for (f, m, e), c in x.terms.items():
            bf = self._letter_counts(f)
            be = self._letter_counts(e)
            blocks.setdefault((bf, be), {})[(f, m, e)] = c
        for (bf, be), terms in sorted(blocks.items()):
            wl = sum(bf) + sum(be)
            if engine == "pairing" or (engine == "auto"
                                       and wl <= self.pair_len_cap):
                from .pairing import extract_block
                got = extract_block(self, bf, be, terms)
            else:
                got = {}
                for (f, m, e), c in terms.items():
                    for kk, cc in self._ls_term_coords(f, m, e).items():
                        _acc(got, kk, c * cc)
            for kk, cc in got.items():
                _acc(coords, kk, cc)
        if require_even:
            for (fv, mu, ev) in coords:
                if any(c % 4 for c in mu):
                    raise NotInSpan("Cartan part %r is outside the even "
                                    "weight lattice" % (mu,))
        if divided:
            coords = {k: c * self._divided_norm(k) for k, c in coords.items()}
        return coords

    def _letter_counts(self, word):
        c = [0] * self.rank
        for l in word:
            c[l] += 1
        return tuple(c)

    def _divided_norm(self, key):
        fv, _, ev = key
        out = ONE
        for p in range(self.num_roots):
            dd = self.datum.posRoots[p].d
            if fv[p] > 1:
                out = out * paren_fact(fv[p], dd, self.N)
            if ev[p] > 1:
                out = out * paren_fact(ev[p], dd, self.N)
        return out

    def from_pbw(self, coords, divided=False):
        acc = self.zero()
        for (fv, mu, ev), c in coords.items():
            c = self.scalar(c)
            if divided:
                c = c / self._divided_norm((fv, mu, ev))
            x = self.mul(self.mul(self.pbw_monomial(fv, "F"),
                                  self.gen_K(mu)),
                         self.pbw_monomial(ev, "E"))
            acc = acc + x.scale(c)
        return acc

    def pbw_of(self, x, **kw):
        return PbwElement(self, self.to_pbw(x, **kw))

    # ---- specialization ----

    def specialize_elem(self, x):
        """Coefficientwise value at the root of unity of the datum."""
        ell = self.datum.ell
        if not ell:
            raise ConfigError("the root datum is generic; nothing to "
                              "specialize at")
        terms = {}
        for t, c in x.terms.items():
            val = specialize(c, ell, self.N)
            if not val.is_zero():
                terms[t] = val
        return SpecElement(self, terms)

    def specialize_coords(self, coords):
        ell = self.datum.ell
        if not ell:
            raise ConfigError("the root datum is generic; nothing to "
                              "specialize at")
        out = {}
        for k, c in coords.items():
            val = specialize(c, ell, self.N)
            if not val.is_zero():
                out[k] = val
        return out

    def warm_up(self):
        """Precompute braid images, root vectors and straightening rules."""
        for i in range(self.rank):
            for flavor in ("E", "F"):
                for j in range(self.rank):
                    for inv in (False, True):
                        self._braid_letter(i, flavor, j, inv)
        for k in range(self.num_roots):
            for flavor in ("E", "F"):
                self.root_vector(k, flavor, twisted=True)
        self.pos_of_simple()
        for q in range(self.num_roots):
            for p in range(q + 1, self.num_roots):
                self._swap_rule("E", q, p)
                self._swap_rule("F", q, p)
        for p in range(self.num_roots):
            for q in range(self.num_roots):
                self._mixed_rule(p, q)
        return self


# ---- module level wrappers, 0-based indices throughout ----

def make_context(datum, cap=8):
    return AlgebraCtx(datum, cap)


def generator(ctx, kind, i=0, n=1, a=0, mu=None, divided=False):
    return ctx.generator(kind, i=i, n=n, a=a, mu=mu, divided=divided)


def multiply(ctx, x, y):
    return ctx.mul(x, y)


def braid_T(ctx, i, x, inverse=False):
    return ctx.braid(i, x, inverse=inverse)


def root_vector(ctx, k, flavor="E", twisted=False, divided=0):
    if divided:
        return ctx.root_divided(k, flavor, divided)
    return ctx.root_vector(k, flavor, twisted=twisted)


def coproduct(ctx, x):
    return ctx.coproduct(x)


def antipode(ctx, x):
    return ctx.antipode(x)


def counit(ctx, x):
    return ctx.counit(x)


def ad_prime(ctx, x, y):
    return ctx.ad_prime(x, y)


def tau(ctx, x):
    return ctx.tau(x)


def to_pbw(ctx, x, engine="auto", divided=False, require_even=False):
    return ctx.to_pbw(x, engine=engine, divided=divided,
                      require_even=require_even)


def from_pbw(ctx, coords, divided=False):
    return ctx.from_pbw(coords, divided=divided)


def specialize_elem(ctx, x):
    return ctx.specialize_elem(x)


_GEN_RE = re.compile(r"^(tE|tF|E|F)(\d+)(?:\^(?:\((\d+)\)|(\d+)))?$")
_K_RE = re.compile(r"^K\[(-?\d+(?:,-?\d+)*)\]$")
_BRK_RE = re.compile(r"^(bK|pK)(\d+)\[(-?\d+),(\d+)\]$")
_NUM_RE = re.compile(r"^(-?\d+)(?:/(\d+))?$")
_VPOW_RE = re.compile(r"^v\^(-?\d+)$")


def parse_element(ctx, text):
    """Parse a product expression like ``tE1^(3)*K[2,0]*tF2``.

    Generator indices are 1-based in the text form; ``^n`` is a plain
    power and ``^(n)`` a divided power.  Summands may be joined by ``+``.
    """
    total = ctx.zero()
    for chunk in text.replace(" ", "").split("+"):
        if not chunk:
            raise ConfigError("empty summand in %r" % text)
        cur = ctx.one()
        for tok in chunk.split("*"):
            m = _NUM_RE.match(tok)
            if m:
                num = int(m.group(1))
                den = int(m.group(2) or 1)
                cur = cur.scale(LaurentFrac(num) / LaurentFrac(den))
                continue
            m = _VPOW_RE.match(tok)
            if m:
                cur = cur.scale(ctx.vq(int(m.group(1))))
                continue
            m = _K_RE.match(tok)
            if m:
                mu = tuple(int(x) for x in m.group(1).split(","))
                if len(mu) != ctx.rank:
                    raise ConfigError("K exponent %r has wrong rank" % tok)
                cur = ctx.mul(cur, ctx.gen_K(mu))
                continue
            m = _BRK_RE.match(tok)
            if m:
                kind = "bracketK" if m.group(1) == "bK" else "parenK"
                cur = ctx.mul(cur, ctx.generator(
                    kind, i=int(m.group(2)) - 1,
                    a=int(m.group(3)), n=int(m.group(4))))
                continue
            m = _GEN_RE.match(tok)
            if not m:
                raise ConfigError("cannot parse token %r" % tok)
            kind, idx, div_n, plain_n = m.groups()
            i = int(idx) - 1
            if not 0 <= i < ctx.rank:
                raise ConfigError("generator index out of range in %r" % tok)
            n = int(div_n or plain_n or 1)
            cur = ctx.mul(cur, ctx.generator(
                kind, i=i, n=n, divided=div_n is not None))
        total = total + cur
    return total
