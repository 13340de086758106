"""Quantum Frobenius at a root of unity and the structures it induces.

At an admissible odd or even root order, the divided-power integral form
maps onto the classical enveloping algebra of a rescaled-Cartan ("dual")
semisimple Lie algebra: divided powers go to classical divided powers with
the exponent divided by the local order, Cartan binomials go to classical
binomials, and everything else goes to zero.  This module builds the
classical target exactly (a Kostant-style integral form realized through
straightened words of matrix generators), evaluates the map on
divided-power PBW coordinates, decides kernel membership, produces the
central subalgebra cut out by the map together with its pairing against
the classical side, and realizes the Poisson bracket obtained by
differentiating central lifts at the root of unity.

All arithmetic is exact: rational matrices for the classical side,
Laurent fractions before specialization, cyclotomic numbers after.
"""

from fractions import Fraction
from math import factorial

from .errors import (ConfigError, ImpurityError, InvalidEll, NotInZFr,
                     NotLusztigForm, PoleAtEpsilon)
from .pairing import pbw_pair_diag
from .rootdata import WeightVec
from .scalars import (Cyclotomic, LaurentFrac, ONE, divide_out_eps_root,
                      is_integral, paren_fact, specialize)
from .uqalg import Element, SpecElement


def _acc(table, key, val):
    cur = table.get(key)
    cur = val if cur is None else cur + val
    if _scalar_zero(cur):
        table.pop(key, None)
    else:
        table[key] = cur


def _scalar_zero(c):
    if isinstance(c, Fraction):
        return c == 0
    if isinstance(c, Cyclotomic):
        return c.is_zero()
    if isinstance(c, LaurentFrac):
        return not c.num
    return not c


# ### exact matrix helpers (tuples of tuples of Fraction) ###

def _mzero(n):
    return tuple(tuple(Fraction(0) for _ in range(n)) for _ in range(n))


def _mid(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n))
                 for i in range(n))


def _madd(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb))
                 for ra, rb in zip(a, b))


def _msub(a, b):
    return tuple(tuple(x - y for x, y in zip(ra, rb))
                 for ra, rb in zip(a, b))


def _mscale(a, c):
    return tuple(tuple(c * x for x in ra) for ra in a)


def _mmul(a, b):
    n = len(a)
    bt = tuple(zip(*b))
    return tuple(tuple(sum(ra[k] * cb[k] for k in range(n)) for cb in bt)
                 for ra in a)


def _mcomm(a, b):
    return _msub(_mmul(a, b), _mmul(b, a))


def _mis_zero(a):
    return all(not x for ra in a for x in ra)


def _mexp_nilpotent(a):
    """exp(a) for a nilpotent matrix, exact over Q."""
    n = len(a)
    out = _mid(n)
    term = _mid(n)
    for k in range(1, n + 1):
        term = _mscale(_mmul(term, a), Fraction(1, k))
        if _mis_zero(term):
            return out
        out = _madd(out, term)
    raise ConfigError("matrix exponential argument is not nilpotent")


def _elem_mat(n, i, j, c=1):
    return tuple(tuple(Fraction(c if (r == i and s == j) else 0)
                       for s in range(n)) for r in range(n))


class _LinSolver:
    """Exact coordinate extraction against a fixed list of spanning
    matrices; used to expand Lie brackets over the chosen basis."""

    def __init__(self, mats):
        self.dim = len(mats)
        n = len(mats[0])
        rows = [[m[i][j] for m in mats] for i in range(n) for j in range(n)]
        # row-reduce [rows | I-selector] once, remember the pivots
        self.rows = rows
        self.n2 = n * n

    def solve(self, mat):
        n = len(mat)
        rhs = [mat[i][j] for i in range(n) for j in range(n)]
        a = [list(r) + [b] for r, b in zip(self.rows, rhs)]
        cols = self.dim
        piv_rows = []
        r = 0
        for c in range(cols):
            p = next((k for k in range(r, len(a)) if a[k][c]), None)
            if p is None:
                piv_rows.append(None)
                continue
            a[r], a[p] = a[p], a[r]
            lead = a[r][c]
            a[r] = [x / lead for x in a[r]]
            for k in range(len(a)):
                if k != r and a[k][c]:
                    f = a[k][c]
                    a[k] = [x - f * y for x, y in zip(a[k], a[r])]
            piv_rows.append(r)
            r += 1
        out = [Fraction(0)] * cols
        for c, pr in enumerate(piv_rows):
            if pr is not None:
                out[c] = a[pr][-1]
        for k in range(len(a)):
            if all(not x for x in a[k][:cols]) and a[k][-1]:
                raise ConfigError("matrix is outside the Lie algebra span")
        return out


class _DualLie:
    """Exact matrix model of the rescaled-Cartan semisimple Lie algebra.

    Covers every shape a rank <= 2 datum can produce: sl2, sl3, and sp4
    with either edge orientation (by relabeling the sp4 model).
    """

    def __init__(self, datum):
        if datum.dual is None:
            raise ConfigError("the dual Lie algebra needs a root-of-unity "
                              "datum")
        self.datum = datum
        self.cartan = datum.dual["cartan"]
        r = datum.rank
        self.rank = r
        a = self.cartan
        if r == 1:
            self._build_sl2()
        elif r == 2 and a[0][1] * a[1][0] == 1:
            self._build_sl3()
        elif r == 2 and a[0][1] * a[1][0] == 2:
            self._build_sp4(swap=(a[0][1] == -1))
        else:
            raise ConfigError("no matrix model for rescaled Cartan %r"
                              % (a,))
        self._check_relations()
        self._build_braid()
        self._build_root_vectors()
        self._build_bracket_table()

    def _build_sl2(self):
        n = 2
        self.msize = n
        self.e = [_elem_mat(n, 0, 1)]
        self.f = [_elem_mat(n, 1, 0)]
        self.h = [_madd(_elem_mat(n, 0, 0), _elem_mat(n, 1, 1, -1))]

    def _build_sl3(self):
        n = 3
        self.msize = n
        self.e = [_elem_mat(n, i, i + 1) for i in range(2)]
        self.f = [_elem_mat(n, i + 1, i) for i in range(2)]
        self.h = [_madd(_elem_mat(n, i, i), _elem_mat(n, i + 1, i + 1, -1))
                  for i in range(2)]

    def _build_sp4(self, swap):
        n = 4
        self.msize = n
        e1 = _madd(_elem_mat(n, 0, 1), _elem_mat(n, 3, 2, -1))
        f1 = _madd(_elem_mat(n, 1, 0), _elem_mat(n, 2, 3, -1))
        h1 = _madd(_madd(_elem_mat(n, 0, 0), _elem_mat(n, 1, 1, -1)),
                   _madd(_elem_mat(n, 2, 2, -1), _elem_mat(n, 3, 3)))
        e2 = _elem_mat(n, 1, 3)
        f2 = _elem_mat(n, 3, 1)
        h2 = _madd(_elem_mat(n, 1, 1), _elem_mat(n, 3, 3, -1))
        # the unswapped model realizes rows [[2,-2],[-1,2]]
        if swap:
            self.e = [e2, e1]
            self.f = [f2, f1]
            self.h = [h2, h1]
        else:
            self.e = [e1, e2]
            self.f = [f1, f2]
            self.h = [h1, h2]

    def _check_relations(self):
        a = self.cartan
        r = self.rank
        for i in range(r):
            if not _mis_zero(_msub(_mcomm(self.e[i], self.f[i]), self.h[i])):
                raise ConfigError("matrix model breaks [e,f]=h at %d" % i)
            for j in range(r):
                if i != j and not _mis_zero(_mcomm(self.e[i], self.f[j])):
                    raise ConfigError("matrix model breaks [e_i,f_j]=0")
                want = _mscale(self.e[j], Fraction(a[i][j]))
                if not _mis_zero(_msub(_mcomm(self.h[i], self.e[j]), want)):
                    raise ConfigError("matrix model breaks [h,e] scaling")
                want = _mscale(self.f[j], Fraction(-a[i][j]))
                if not _mis_zero(_msub(_mcomm(self.h[i], self.f[j]), want)):
                    raise ConfigError("matrix model breaks [h,f] scaling")

    def _build_braid(self):
        self._g = []
        self._gi = []
        for i in range(self.rank):
            pe = _mexp_nilpotent(self.e[i])
            ne = _mexp_nilpotent(_mscale(self.e[i], Fraction(-1)))
            pf = _mexp_nilpotent(self.f[i])
            nf = _mexp_nilpotent(_mscale(self.f[i], Fraction(-1)))
            g = _mmul(_mmul(pe, nf), pe)
            gi = _mmul(_mmul(ne, pf), ne)
            if not _mis_zero(_msub(_mmul(g, gi), _mid(self.msize))):
                raise ConfigError("braid element is not invertible")
            self._g.append(g)
            self._gi.append(gi)
        for i in range(self.rank):
            # the triple-exponential conjugation must swap e and -f
            if not _mis_zero(_madd(self.braid(i, self.e[i]), self.f[i])):
                raise ConfigError("braid action fails on its own e")
            if not _mis_zero(_madd(self.braid(i, self.f[i]), self.e[i])):
                raise ConfigError("braid action fails on its own f")
            for j in range(self.rank):
                # alpha_i takes the value a_ji on h_j
                want = _msub(self.h[j], _mscale(
                    self.h[i], Fraction(self.cartan[j][i])))
                if not _mis_zero(_msub(self.braid(i, self.h[j]), want)):
                    raise ConfigError("braid action fails on the Cartan")
                if i != j:
                    self._check_divided_braid(i, j)

    def _check_divided_braid(self, i, j):
        """Alternating divided-power formula for the braid image of a
        neighbouring generator; guards the sign conventions."""
        m = -self.cartan[i][j]
        acc_e = _mzero(self.msize)
        acc_f = _mzero(self.msize)
        for k in range(m + 1):
            ce = Fraction((-1) ** k, factorial(m - k) * factorial(k))
            pe = _mid(self.msize)
            for _ in range(m - k):
                pe = _mmul(pe, self.e[i])
            pe = _mmul(pe, self.e[j])
            for _ in range(k):
                pe = _mmul(pe, self.e[i])
            acc_e = _madd(acc_e, _mscale(pe, ce))
            pf = _mid(self.msize)
            for _ in range(k):
                pf = _mmul(pf, self.f[i])
            pf = _mmul(pf, self.f[j])
            for _ in range(m - k):
                pf = _mmul(pf, self.f[i])
            acc_f = _madd(acc_f, _mscale(pf, ce))
        if not _mis_zero(_msub(self.braid(i, self.e[j]), acc_e)):
            raise ConfigError("divided-power braid formula fails on e")
        if not _mis_zero(_msub(self.braid(i, self.f[j]), acc_f)):
            raise ConfigError("divided-power braid formula fails on f")

    def braid(self, i, mat):
        return _mmul(_mmul(self._g[i], mat), self._gi[i])

    def _build_root_vectors(self):
        word = self.datum.w0_word
        self.eroot = []
        self.froot = []
        for k, letter in enumerate(word):
            xe = self.e[letter]
            xf = self.f[letter]
            for s in reversed(word[:k]):
                xe = self.braid(s, xe)
                xf = self.braid(s, xf)
            self.eroot.append(xe)
            self.froot.append(xf)
        for root in self.datum.posRoots:
            if root.height == 1:
                i = next(k for k, c in enumerate(root.alpha_coords) if c)
                if not _mis_zero(_msub(self.eroot[root.index], self.e[i])):
                    raise ImpurityError("classical braid chain misses the "
                                        "simple generator %d" % i)

    def _build_bracket_table(self):
        """Letters: f-root p -> p, Cartan i -> N+i, e-root p -> N+r+p.
        The straightening order puts f letters first in decreasing root
        position, then the Cartan, then e letters in decreasing position."""
        nroots = len(self.eroot)
        r = self.rank
        self.num_letters = 2 * nroots + r
        mats = [self.froot[p] for p in range(nroots)] \
            + [self.h[i] for i in range(r)] \
            + [self.eroot[p] for p in range(nroots)]
        self.letter_mats = mats
        order = {}
        for p in range(nroots):
            order[p] = nroots - 1 - p
            order[nroots + r + p] = nroots + r + (nroots - 1 - p)
        for i in range(r):
            order[nroots + i] = nroots + i
        self.order = order
        solver = _LinSolver(mats)
        table = {}
        for a in range(self.num_letters):
            for b in range(self.num_letters):
                if a == b:
                    continue
                coords = solver.solve(_mcomm(mats[a], mats[b]))
                table[(a, b)] = tuple((k, c) for k, c in enumerate(coords)
                                      if c)
        self.bracket = table


# ### the divided-power integral form of the classical side ###

def _stirling2_row(m):
    row = [Fraction(0)] * (m + 1)
    row[0] = Fraction(1)
    for k in range(1, m + 1):
        new = [Fraction(0)] * (m + 1)
        for t in range(1, k + 1):
            new[t] = row[t - 1] + t * row[t]
        row = new
    return row


def _poly_shifted_falling(shift, n):
    """Coefficients over h^m of (h+shift)(h+shift-1)...(h+shift-n+1)."""
    coeffs = [Fraction(1)]
    for s in range(n):
        c = Fraction(shift - s)
        coeffs = [Fraction(0)] + coeffs
        coeffs = [coeffs[k] + (c * coeffs[k + 1] if k + 1 < len(coeffs)
                               else Fraction(0))
                  for k in range(len(coeffs))]
        # note: list grew by one; constant term is c * old constant
    return coeffs


class KostantElement:
    """Element of the classical divided-power form.

    terms maps (f-exponents, Cartan-binomial indices, e-exponents) to a
    coefficient; exponent tuples follow the same decreasing convex order
    as the quantum PBW basis.  Coefficients are Fractions for the
    integral form itself and cyclotomic numbers for Frobenius images."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg, terms):
        self.alg = alg
        self.terms = {k: c for k, c in terms.items() if not _scalar_zero(c)}

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            _acc(out, k, c)
        return KostantElement(self.alg, out)

    def __neg__(self):
        return KostantElement(self.alg, {k: -c for k, c in
                                         self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if _scalar_zero(c):
            return KostantElement(self.alg, {})
        return KostantElement(self.alg, {k: c * x for k, x in
                                         self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, KostantElement):
            return self.alg.mul(self, other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        if not isinstance(other, KostantElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_integral(self):
        """Whether every coefficient is an integer of its coefficient
        ring (denominator one); the integral form is closed under
        products of divided powers and Cartan binomials."""
        for c in self.terms.values():
            den = c.denominator if isinstance(c, Fraction) else c.den
            if den != 1:
                return False
        return True

    def __repr__(self):
        if not self.terms:
            return "KostantElement(0)"
        bits = []
        for (av, tv, bv), c in sorted(self.terms.items()):
            bits.append("%r:(f%s h%s e%s)" % (c, list(av), list(tv),
                                              list(bv)))
        return "KostantElement(" + ", ".join(bits) + ")"


class KostantAlgebra:
    """Straightening container for the classical divided-power form."""

    def __init__(self, datum):
        self.datum = datum
        self.lie = _DualLie(datum)
        self.rank = datum.rank
        self.num_roots = len(datum.posRoots)
        self._zero_vec = (0,) * self.num_roots
        self._zero_t = (0,) * self.rank
        self._pos_simple = [None] * self.rank
        for root in datum.posRoots:
            if root.height == 1:
                i = next(k for k, c in enumerate(root.alpha_coords) if c)
                self._pos_simple[i] = root.index
        self._mul_memo = {}

    # -- constructors --

    def zero(self):
        return KostantElement(self, {})

    def one(self):
        return KostantElement(self,
                              {(self._zero_vec, self._zero_t,
                                self._zero_vec): Fraction(1)})

    def element(self, terms):
        return KostantElement(self, terms)

    def basis_term(self, avec, tvec, bvec, coeff=Fraction(1)):
        return KostantElement(self, {(tuple(avec), tuple(tvec),
                                      tuple(bvec)): coeff})

    def e_divided(self, i, n):
        """e_i^(n) for a simple index i."""
        return self.e_root_divided(self._pos_simple[i], n)

    def f_divided(self, i, n):
        return self.f_root_divided(self._pos_simple[i], n)

    def e_root_divided(self, p, n):
        b = list(self._zero_vec)
        b[p] = n
        return self.basis_term(self._zero_vec, self._zero_t, b)

    def f_root_divided(self, p, n):
        a = list(self._zero_vec)
        a[p] = n
        return self.basis_term(a, self._zero_t, self._zero_vec)

    def h_binom(self, i, n, shift=0):
        """Classical Cartan binomial (h_i + shift choose n), expanded over
        the shift-zero binomial basis."""
        poly = _poly_shifted_falling(shift, n)
        inv = Fraction(1, factorial(n))
        out = {}
        for m, c in enumerate(poly):
            if not c:
                continue
            row = _stirling2_row(m)
            for t in range(m + 1):
                if row[t]:
                    tv = list(self._zero_t)
                    tv[i] = t
                    _acc(out, (self._zero_vec, tuple(tv), self._zero_vec),
                         c * inv * row[t] * factorial(t))
        return KostantElement(self, out)

    # -- multiplication by word straightening --

    def _key_words(self, key):
        """Expand a basis monomial into straightening words; divided
        powers and binomials contribute rational prefactors."""
        avec, tvec, bvec = key
        nroots = self.num_roots
        r = self.rank
        words = {(): Fraction(1)}
        head = []
        c0 = Fraction(1)
        for p in range(nroots - 1, -1, -1):
            if avec[p]:
                head.extend([p] * avec[p])
                c0 /= factorial(avec[p])
        if head:
            words = {tuple(head): c0}
        for i in range(r):
            t = tvec[i]
            if not t:
                continue
            poly = _poly_shifted_falling(0, t)
            inv = Fraction(1, factorial(t))
            new = {}
            for w, c in words.items():
                for m, pc in enumerate(poly):
                    if pc:
                        _acc(new, w + (nroots + i,) * m, c * pc * inv)
            words = new
        tail = []
        c1 = Fraction(1)
        for p in range(nroots - 1, -1, -1):
            if bvec[p]:
                tail.extend([nroots + r + p] * bvec[p])
                c1 /= factorial(bvec[p])
        if tail:
            words = {w + tuple(tail): c * c1 for w, c in words.items()}
        return words

    def _straighten(self, items):
        order = self.lie.order
        bracket = self.lie.bracket
        out = {}
        stack = list(items.items())
        while stack:
            w, c = stack.pop()
            if not c:
                continue
            pos = None
            for idx in range(len(w) - 1):
                if order[w[idx]] > order[w[idx + 1]]:
                    pos = idx
                    break
            if pos is None:
                _acc(out, w, c)
                continue
            a, b = w[pos], w[pos + 1]
            stack.append((w[:pos] + (b, a) + w[pos + 2:], c))
            for letter, sc in bracket[(a, b)]:
                stack.append((w[:pos] + (letter,) + w[pos + 2:], c * sc))
        return out

    def _collect(self, words):
        """Sorted words back to basis keys: repeated letters become
        divided powers and Cartan powers become binomials."""
        nroots = self.num_roots
        r = self.rank
        out = {}
        for w, c in words.items():
            avec = [0] * nroots
            hpow = [0] * r
            bvec = [0] * nroots
            for letter in w:
                if letter < nroots:
                    avec[letter] += 1
                elif letter < nroots + r:
                    hpow[letter - nroots] += 1
                else:
                    bvec[letter - nroots - r] += 1
            base = c
            for p in range(nroots):
                base *= factorial(avec[p]) * factorial(bvec[p])
            parts = [((), base)]
            for i in range(r):
                m = hpow[i]
                if not m:
                    parts = [(tv + (0,), cc) for tv, cc in parts]
                    continue
                row = _stirling2_row(m)
                new = []
                for tv, cc in parts:
                    for t in range(m + 1):
                        if row[t]:
                            new.append((tv + (t,),
                                        cc * row[t] * factorial(t)))
                parts = new
            for tv, cc in parts:
                _acc(out, (tuple(avec), tv, tuple(bvec)), cc)
        return out

    def _mul_basis(self, k1, k2):
        hit = self._mul_memo.get((k1, k2))
        if hit is not None:
            return hit
        w1 = self._key_words(k1)
        w2 = self._key_words(k2)
        prod = {}
        for a, ca in w1.items():
            for b, cb in w2.items():
                _acc(prod, a + b, ca * cb)
        out = self._collect(self._straighten(prod))
        self._mul_memo[(k1, k2)] = out
        return out

    def mul(self, x, y):
        out = {}
        for k1, c1 in x.terms.items():
            for k2, c2 in y.terms.items():
                c = c1 * c2
                if _scalar_zero(c):
                    continue
                for k, sc in self._mul_basis(k1, k2).items():
                    _acc(out, k, c * sc)
        return KostantElement(self, out)


# ### per-context Frobenius state ###

class _FrobState:
    def __init__(self, ctx):
        datum = ctx.datum
        if not datum.ell:
            raise ConfigError("the Frobenius map needs a root-of-unity "
                              "datum")
        self.kostant = KostantAlgebra(datum)
        self.modulus = ctx.N * datum.ell
        self.units = {}
        self.cartan_rows = {}
        self.diag_pairs = {}
        # rational expansion of weight coordinates over simple roots
        r = datum.rank
        cols = [datum.simple_roots[j].coords for j in range(r)]
        self.alpha_mat = [[Fraction(cols[j][i]) for j in range(r)]
                          for i in range(r)]

    def alpha_expand(self, coords):
        """Rational simple-root coordinates of a weight vector."""
        r = len(coords)
        a = [row[:] + [Fraction(coords[i])] for i, row in
             enumerate(self.alpha_mat)]
        for c in range(r):
            p = next(k for k in range(c, r) if a[k][c])
            a[c], a[p] = a[p], a[c]
            lead = a[c][c]
            a[c] = [x / lead for x in a[c]]
            for k in range(r):
                if k != c and a[k][c]:
                    f = a[k][c]
                    a[k] = [x - f * y for x, y in zip(a[k], a[c])]
        return tuple(a[i][-1] for i in range(r))


def _state(ctx):
    st = getattr(ctx, "_frob_state", None)
    if st is None:
        st = _FrobState(ctx)
        ctx._frob_state = st
    return st


def kostant_algebra(ctx):
    """The classical target algebra attached to this context."""
    return _state(ctx).kostant


def as_generic(ctx, x):
    """Generic lift of a specialized element; the class of x decides."""
    if isinstance(x, Element):
        return x
    if isinstance(x, SpecElement):
        return Element(ctx, {k: _lift_scalar(c) for k, c in
                             x.terms.items()})
    raise ConfigError("expected an algebra element, got %r" % type(x))


def _lift_scalar(c):
    num = {k: a for k, a in enumerate(c.coeffs) if a}
    return LaurentFrac(num, c.den)


# ### Cartan block decomposition over the divided-power basis ###

def _cartan_row(ctx, st, i, t):
    """Support of K^{2*floor(t/2) alpha_i} times the round Cartan
    binomial, keyed by the exponent m in K^{2 m alpha_i}."""
    hit = st.cartan_rows.get((i, t))
    if hit is not None:
        return hit
    alf = ctx.datum.simple_roots[i].coords
    shift = tuple((t // 2) * 2 * c for c in alf)
    elem = ctx.mul(ctx.gen_K(shift), ctx.gen_parenK(i, 0, t))
    row = {}
    for (f, mu, e), c in elem.terms.items():
        if f or e:
            raise ConfigError("Cartan binomial expansion left the torus")
        half = st.alpha_expand(tuple(x // 2 for x in mu))
        m = half[i]
        if m.denominator != 1 or any(half[j] for j in range(ctx.rank)
                                     if j != i):
            raise ConfigError("Cartan binomial support is off its axis")
        row[int(m)] = c
    st.cartan_rows[(i, t)] = row
    return row


def _axis_need(keys, axis):
    need = 0
    for k in keys:
        m = k[axis]
        need = max(need, 2 * m if m > 0 else -2 * m - 1)
    return need


def _axis_solve(ctx, st, mono, axis):
    """Triangular elimination along one Cartan direction; returns a dict
    from binomial-index tuples (for axes >= axis) to coefficients."""
    r = ctx.rank
    if axis == r:
        c = mono.get((), None)
        return {(): c} if c is not None and c.num else {}
    cur = dict(mono)
    out = {}
    for t in range(_axis_need(cur, 0), -1, -1):
        mnew = t // 2 if t % 2 == 0 else -(t + 1) // 2
        sub = {}
        for key, c in cur.items():
            if key[0] == mnew:
                sub[key[1:]] = c
        if not sub:
            continue
        row = _cartan_row(ctx, st, axis, t)
        lead = row[mnew]
        coeff = {rest: c / lead for rest, c in sub.items()}
        for m, rc in row.items():
            for rest, c in coeff.items():
                key = (m,) + rest
                cur[key] = cur.get(key, LaurentFrac(0)) - c * rc
                if not cur[key].num:
                    del cur[key]
        for trest, c2 in _axis_solve(ctx, st, coeff, axis + 1).items():
            out[(t,) + trest] = c2
    if cur:
        raise ConfigError("Cartan block solve left a residue")
    return out


def _cartan_block_coords(ctx, st, kmu):
    """Coordinates of a torus element over the divided-power Cartan
    basis, one entry per (coset pick, binomial index).  The coset factor
    maps to 1 downstream, so only the binomial indices are returned."""
    datum = ctx.datum
    for mu in kmu:
        if any(c % 4 for c in mu):
            raise NotLusztigForm("Cartan support %r is outside the even "
                                 "weight lattice" % (mu,))
    classes = {}
    for mu, c in kmu.items():
        half = st.alpha_expand(tuple(x // 2 for x in mu))
        key = tuple(Fraction(x.numerator % x.denominator, x.denominator)
                    for x in half)
        classes.setdefault(key, []).append((mu, c))
    solved = []
    for _, items in sorted(classes.items()):
        items.sort()
        mu0 = items[0][0]
        base = st.alpha_expand(tuple(x // 2 for x in mu0))
        mono = {}
        for mu, c in items:
            half = st.alpha_expand(tuple(x // 2 for x in mu))
            rel = tuple(half[j] - base[j] for j in range(ctx.rank))
            if any(x.denominator != 1 for x in rel):
                raise ConfigError("coset split produced a fractional "
                                  "offset")
            mono[tuple(int(x) for x in rel)] = c
        for tvec, c in _axis_solve(ctx, st, mono, 0).items():
            solved.append((tvec, c))
    return solved


# ### divided words and root-vector units ###

def _compositions(total, parts):
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _alt_divided_words(mvec):
    """Alternating-letter divided words of a fixed rank-2 weight, by
    increasing block count."""
    m0, m1 = mvec
    for nb in range(2, m0 + m1 + 1):
        for start in (0, 1):
            letters = [(start + j) % 2 for j in range(nb)]
            c0 = letters.count(0)
            c1 = nb - c0
            if c0 == 0 or c1 == 0 or c0 > m0 or c1 > m1:
                continue
            for comp0 in _compositions(m0, c0):
                for comp1 in _compositions(m1, c1):
                    it0 = iter(comp0)
                    it1 = iter(comp1)
                    yield tuple((l, next(it0) if l == 0 else next(it1))
                                for l in letters)


class _SpanTracker:
    """Incremental echelon basis over the cyclotomic field, with
    bookkeeping of how each pivot decomposes over the inserted vectors."""

    def __init__(self):
        self.pivots = {}

    @staticmethod
    def _lead(vec):
        return max(vec)

    def _reduce(self, vec, expr):
        vec = dict(vec)
        while vec:
            lead = self._lead(vec)
            hit = self.pivots.get(lead)
            if hit is None:
                return vec, expr
            pvec, pexpr = hit
            f = vec[lead]
            for k, c in pvec.items():
                cur = vec.get(k)
                nxt = (0 if cur is None else cur) - f * c
                if _scalar_zero(nxt):
                    vec.pop(k, None)
                else:
                    vec[k] = nxt
            for k, c in pexpr.items():
                _acc(expr, k, -f * c)
        return {}, expr

    def insert(self, vec, tag):
        """Returns True when the vector enlarged the span."""
        vec, expr = self._reduce(vec, {tag: Cyclotomic.one(
            next(iter(vec.values())).modulus)} if vec else {})
        if not vec:
            return False
        lead = self._lead(vec)
        inv = vec[lead].inverse()
        vec = {k: c * inv for k, c in vec.items()}
        expr = {k: c * inv for k, c in expr.items()}
        self.pivots[lead] = (vec, expr)
        return True

    def express(self, vec):
        """Coefficients over the inserted tags, or None if outside."""
        vec, expr = self._reduce(dict(vec), {})
        if vec:
            return None
        return {k: -c for k, c in expr.items()}


def _spec_divided_coords(ctx, elem):
    return ctx.specialize_coords(ctx.to_pbw(elem, divided=True))


def _word_element(ctx, flavor, word):
    out = ctx.one()
    for i, n in word:
        out = ctx.mul(out, ctx.tilde_gen_div(flavor, i, n))
    return out


def _word_image(ctx, st, flavor, word):
    """Letterwise classical image of a divided word; None when a letter
    dies."""
    datum = ctx.datum
    alg = st.kostant
    out = alg.one()
    for i, n in word:
        li = datum.ellI[i]
        if n % li:
            return None
        scale = Fraction(datum.dual["epsStar"][i]) if flavor == "E" \
            else Fraction(1)
        fac = alg.e_divided(i, n // li) if flavor == "E" \
            else alg.f_divided(i, n // li)
        out = alg.mul(out, fac.scale(scale ** (n // li)))
    return out


def _solve_root_unit(ctx, st, flavor, p):
    """Scalar relating the classical image of the divided local-order
    power of a non-simple twisted root vector to the classical root
    vector; found by expressing the power over simple divided words at
    the root of unity."""
    datum = ctx.datum
    if ctx.rank != 2:
        raise ConfigError("root-vector units are only solved for rank 2")
    lb = datum.ellAlpha[p]
    target = ctx.root_divided(p, flavor, lb)
    tvec = _spec_divided_coords(ctx, target)
    mvec = tuple(lb * a for a in datum.posRoots[p].alpha_coords)
    tracker = _SpanTracker()
    words = []
    solution = None
    for word in _alt_divided_words(mvec):
        elem = _word_element(ctx, flavor, word)
        vec = _spec_divided_coords(ctx, elem)
        if not vec:
            continue
        words.append(word)
        tracker.insert(vec, len(words) - 1)
        solution = tracker.express(tvec)
        if solution is not None:
            break
    if solution is None:
        raise ConfigError("no divided-word expression found for root %d"
                          % p)
    alg = st.kostant
    image = alg.zero()
    for idx, c in solution.items():
        part = _word_image(ctx, st, flavor, words[idx])
        if part is not None:
            image = image + part.scale(c)
    want = [0] * len(datum.posRoots)
    want[p] = 1
    key = (tuple(want), st.kostant._zero_t, st.kostant._zero_vec) \
        if flavor == "F" else \
        (st.kostant._zero_vec, st.kostant._zero_t, tuple(want))
    extra = [k for k in image.terms if k != key]
    if extra or key not in image.terms:
        raise ConfigError("root unit image is not a single root vector: "
                          "%r" % image)
    return image.terms[key]


def _unit(ctx, st, flavor, p):
    hit = st.units.get((flavor, p))
    if hit is not None:
        return hit
    datum = ctx.datum
    root = datum.posRoots[p]
    M = st.modulus
    if root.height == 1:
        i = next(k for k, c in enumerate(root.alpha_coords) if c)
        val = Cyclotomic.from_fraction(
            M, datum.dual["epsStar"][i] if flavor == "E" else 1)
    else:
        val = _solve_root_unit(ctx, st, flavor, p)
        if not isinstance(val, Cyclotomic):
            val = Cyclotomic.from_fraction(M, val)
    st.units[(flavor, p)] = val
    return val


# ### the Frobenius map ###

def frobenius(ctx, x):
    """Classical image of an element of the divided-power form."""
    st = _state(ctx)
    datum = ctx.datum
    x = as_generic(ctx, x)
    coords = ctx.to_pbw(x, divided=True)
    maxd = max(datum.d)
    blocks = {}
    for (fv, mu, ev), c in coords.items():
        blocks.setdefault((fv, ev), {})[mu] = c
    terms = {}
    nroots = len(datum.posRoots)
    for (fv, ev), kmu in sorted(blocks.items()):
        for tvec, c in _cartan_block_coords(ctx, st, kmu):
            if not is_integral(c, maxd, ctx.N):
                raise NotLusztigForm(
                    "a divided-power coordinate is not integral at block "
                    "f%s e%s" % (list(fv), list(ev)))
            try:
                val = specialize(c, datum.ell, ctx.N)
            except PoleAtEpsilon:
                raise NotLusztigForm(
                    "a divided-power coordinate has a pole at the root of "
                    "unity at block f%s e%s" % (list(fv), list(ev)))
            if val.is_zero():
                continue
            if any(fv[p] % datum.ellAlpha[p] for p in range(nroots)):
                continue
            if any(ev[p] % datum.ellAlpha[p] for p in range(nroots)):
                continue
            if any(tvec[i] % datum.ellI[i] for i in range(ctx.rank)):
                continue
            for p in range(nroots):
                if fv[p]:
                    val = val * _unit(ctx, st, "F", p) ** \
                        (fv[p] // datum.ellAlpha[p])
                if ev[p]:
                    val = val * _unit(ctx, st, "E", p) ** \
                        (ev[p] // datum.ellAlpha[p])
            key = (tuple(fv[p] // datum.ellAlpha[p] for p in range(nroots)),
                   tuple(tvec[i] // datum.ellI[i] for i in range(ctx.rank)),
                   tuple(ev[p] // datum.ellAlpha[p] for p in range(nroots)))
            _acc(terms, key, val)
    return KostantElement(st.kostant, terms)


def kernel_member(ctx, x):
    """Whether the element dies under the Frobenius map."""
    return frobenius(ctx, x).is_zero()


# ### the Frobenius center ###

class ZFrGenerators:
    """Generating family of the central subalgebra cut out by the
    Frobenius map: local-order powers of the twisted root vectors and
    the Cartan elements on the rescaled even lattice."""

    def __init__(self, ctx):
        datum = ctx.datum
        if not datum.ell:
            raise ConfigError("the Frobenius center needs a root-of-unity "
                              "datum")
        self.ctx = ctx
        nroots = len(datum.posRoots)
        self.e_powers = [ctx.root_power(p, "E", datum.ellAlpha[p])
                         for p in range(nroots)]
        self.f_powers = [ctx.root_power(p, "F", datum.ellAlpha[p])
                         for p in range(nroots)]
        self.k_elements = []
        for i in range(ctx.rank):
            coords = [0] * ctx.rank
            coords[i] = 4 * datum.ellI[i]
            self.k_elements.append(ctx.gen_K(tuple(coords)))
            self.k_elements.append(ctx.gen_K(tuple(-c for c in coords)))
        self.lambda0 = WeightVec(tuple(2 * li for li in datum.ellI))

    def e_normal_form(self, p):
        """Root power with its Cartan dressing on the right."""
        datum = self.ctx.datum
        lam = datum.ellAlpha[p] * datum.apply_gamma(datum.posRoots[p].weight)
        return self.ctx.mul(self.e_powers[p], self.ctx.gen_K(lam.coords))

    def f_normal_form(self, p):
        datum = self.ctx.datum
        lam = datum.ellAlpha[p] * datum.apply_kappa(datum.posRoots[p].weight)
        return self.ctx.mul(self.f_powers[p], self.ctx.gen_K(lam.coords))

    def all_generators(self):
        return list(self.e_powers) + list(self.f_powers) + \
            list(self.k_elements)


def is_central(ctx, z):
    """Commutation with every algebra generator, checked at the root of
    unity."""
    datum = ctx.datum
    if not datum.ell:
        raise ConfigError("centrality is a root-of-unity question")
    z = as_generic(ctx, z)
    gens = []
    for i in range(ctx.rank):
        gens.append(ctx.gen_tE(i))
        gens.append(ctx.gen_tF(i))
        coords = [0] * ctx.rank
        coords[i] = 4
        gens.append(ctx.gen_K(tuple(coords)))
    for g in gens:
        comm = ctx.mul(z, g) - ctx.mul(g, z)
        if ctx.specialize_coords(ctx.to_pbw(comm)):
            return False
    return True


def ad_kills(ctx, n, i, z, flavor="E"):
    """Whether the twisted adjoint action of the n-th divided power of
    the i-th generator annihilates z at the root of unity."""
    z = as_generic(ctx, z)
    x = ctx.tilde_gen_div(flavor, i, n)
    res = ctx.ad_prime(x, z)
    return not ctx.specialize_coords(ctx.to_pbw(res))


def _in_2Pstar(datum, wv):
    return all(c % (4 * li) == 0 for c, li in zip(wv.coords, datum.ellI))


def _vec_weight_wv(ctx, vec):
    acc = ctx.datum.zero_weight()
    for p, k in enumerate(vec):
        if k:
            acc = acc + k * ctx.datum.posRoots[p].weight
    return acc


def _diag_div_pair(ctx, st, kvec):
    """Half pairing of the matched divided and plain PBW monomials,
    specialized; cached per exponent vector."""
    hit = st.diag_pairs.get(kvec)
    if hit is not None:
        return hit
    val = pbw_pair_diag(ctx, kvec)
    for p, k in enumerate(kvec):
        if k > 1:
            val = val / paren_fact(k, ctx.datum.posRoots[p].d, ctx.N)
    out = specialize(val, ctx.datum.ell, ctx.N)
    st.diag_pairs[kvec] = out
    return out


def _chi_value(ctx, lam, tvec):
    """Character of a Cartan binomial monomial at minus half the given
    weight; an ordinary product of integer binomials against the
    original coroots."""
    datum = ctx.datum
    out = Fraction(1)
    for i, t in enumerate(tvec):
        if not t:
            continue
        top = -datum.pair(lam, datum.simple_roots[i]) / (2 * datum.d[i])
        if top.denominator != 1:
            raise ConfigError("character argument %s is not an integer"
                              % top)
        acc = Fraction(1, factorial(t))
        for s in range(t):
            acc *= (top - s)
        out *= acc
    return out


def zfr_pair(ctx, z, u):
    """Pairing of a Frobenius-central element against a classical one.

    z is paired blockwise: its lower half couples the classical e side
    and its upper half couples the classical f side, with the Cartan
    part evaluated through the classical character.  Raises NotInZFr
    when z has a coordinate outside the center."""
    st = _state(ctx)
    datum = ctx.datum
    M = st.modulus
    z = as_generic(ctx, z)
    if not isinstance(u, KostantElement):
        raise ConfigError("the right argument must be a KostantElement")
    coords = ctx.to_pbw(z)
    nroots = len(datum.posRoots)
    total = Cyclotomic.zero(M)
    for (fv, mu, ev), c in sorted(coords.items()):
        for p in range(nroots):
            if fv[p] % datum.ellAlpha[p] or ev[p] % datum.ellAlpha[p]:
                raise NotInZFr("root power %d is not a multiple of the "
                               "local order" % p)
        nu = _vec_weight_wv(ctx, fv)
        mux = _vec_weight_wv(ctx, ev)
        lam = WeightVec(mu) - datum.apply_kappa(nu) - datum.apply_gamma(mux)
        if not _in_2Pstar(datum, lam):
            raise NotInZFr("Cartan weight %r is outside the doubled "
                           "rescaled lattice" % (lam.coords,))
        reorder = Cyclotomic.zeta_power(
            M, datum.pair_check(mux, datum.apply_gamma(mux)))
        cs = specialize(c, datum.ell, ctx.N)
        for (av, tv, bv), cu in u.terms.items():
            if any(bv[p] * datum.ellAlpha[p] != fv[p] for p in
                   range(nroots)):
                continue
            if any(av[p] * datum.ellAlpha[p] != ev[p] for p in
                   range(nroots)):
                continue
            val = cs * cu * reorder
            val = val * _chi_value(ctx, lam, tv)
            val = val * _diag_div_pair(ctx, st, fv)
            val = val * _diag_div_pair(ctx, st, ev)
            for p in range(nroots):
                if bv[p]:
                    val = val * _unit(ctx, st, "E", p) ** (-bv[p])
                if av[p]:
                    val = val * _unit(ctx, st, "F", p) ** (-av[p])
            total = total + val
    return total


# ### the Poisson structure ###

def _require_poisson_ell(ctx):
    datum = ctx.datum
    if not datum.ell:
        raise ConfigError("Poisson brackets need a root-of-unity datum")
    for i in range(ctx.rank):
        bound = 2
        for j in range(ctx.rank):
            if j != i:
                bound = max(bound, 1 - datum.cartan[i][j])
        if datum.ellI[i] <= bound:
            raise InvalidEll("Poisson operations need every local order "
                             "strictly above max(2, 1 - a_ij); index %d "
                             "has %d" % (i + 1, datum.ellI[i]))


def poisson_bracket(ctx, xhat, u):
    """Specialized PBW coordinates of the derivative bracket {x, u}.

    xhat is a generic lift of a central element; u may be generic or
    specialized (any generic lift gives the same answer when xhat is
    central).  Raises NotDivisible when the commutator does not vanish
    at the root of unity."""
    _require_poisson_ell(ctx)
    datum = ctx.datum
    uhat = as_generic(ctx, u)
    comm = ctx.mul(xhat, uhat) - ctx.mul(uhat, xhat)
    out = {}
    for key, c in ctx.to_pbw(comm).items():
        val = divide_out_eps_root(c, datum.ell, ctx.N)
        if not val.is_zero():
            out[key] = val
    return out


def theta_constant(ctx):
    """Derivative of v^ell - 1 at the root of unity."""
    datum = ctx.datum
    if not datum.ell:
        raise ConfigError("no root of unity selected")
    poly = LaurentFrac({ctx.N * datum.ell: 1}) - ONE
    return divide_out_eps_root(poly, datum.ell, ctx.N)


def p_factor(ctx, i):
    """Derivative of the round factorial of the local order at the root
    of unity; the scalar that matches divided-power adjoint actions with
    Poisson brackets."""
    datum = ctx.datum
    if not datum.ell:
        raise ConfigError("no root of unity selected")
    val = paren_fact(datum.ellI[i], datum.d[i], ctx.N)
    return divide_out_eps_root(val, datum.ell, ctx.N)


def _coords_rmul_k(ctx, coords, lam):
    """Right multiplication of specialized PBW coordinates by a Cartan
    element K^lam."""
    M = ctx.N * ctx.datum.ell
    out = {}
    for (fv, mu, ev), c in coords.items():
        wt = _vec_weight_wv(ctx, ev)
        scale = Cyclotomic.zeta_power(
            M, -ctx.datum.pair_check(wt, lam))
        key = (fv, tuple(a + b for a, b in zip(mu, lam.coords)), ev)
        nxt = c * scale
        if not nxt.is_zero():
            out[key] = nxt
    return out


def poisson_ad_identity(ctx, i, u, flavor="E"):
    """Divided-power adjoint action against the Poisson bracket of the
    plain local-order power, with the Cartan correction on the right."""
    _require_poisson_ell(ctx)
    datum = ctx.datum
    uhat = as_generic(ctx, u)
    if not is_central(ctx, uhat):
        raise ConfigError("the Poisson identity needs a central argument")
    li = datum.ellI[i]
    pfac = p_factor(ctx, i)
    if flavor == "E":
        gen = ctx.gen_tE(i)
        lam = -li * (datum.nuGT[i] + datum.nuLT[i])
    else:
        gen = ctx.gen_tF(i)
        lam = li * datum.apply_kappa(datum.simple_roots[i])
    adres = ctx.ad_prime(ctx.tilde_gen_div(flavor, i, li), uhat)
    lhs = {k: pfac * c for k, c in
           ctx.specialize_coords(ctx.to_pbw(adres)).items()}
    lhs = {k: c for k, c in lhs.items() if not c.is_zero()}
    bracket = poisson_bracket(ctx, gen ** li, uhat)
    rhs = _coords_rmul_k(ctx, bracket, lam)
    return lhs == rhs


# ### freeness over the center, truncated witness ###

def freeness_witness(ctx, height_cap=6, kbox=1):
    """Truncated linear independence of center monomials times coset
    monomials.  Returns (number of products checked, independence)."""
    datum = ctx.datum
    if not datum.ell:
        raise ConfigError("freeness is a root-of-unity question")
    nroots = len(datum.posRoots)
    heights = [r.height for r in datum.posRoots]
    zfr = ZFrGenerators(ctx)

    def boxes(limits):
        if not limits:
            yield ()
            return
        for head in range(limits[0]):
            for rest in boxes(limits[1:]):
                yield (head,) + rest

    z_monos = []
    for zf in boxes(tuple(2 for _ in range(nroots))):
        hf = sum(zf[p] * datum.ellAlpha[p] * heights[p]
                 for p in range(nroots))
        if hf > height_cap:
            continue
        for ze in boxes(tuple(2 for _ in range(nroots))):
            he = sum(ze[p] * datum.ellAlpha[p] * heights[p]
                     for p in range(nroots))
            if hf + he > height_cap:
                continue
            for kv in boxes(tuple(2 * kbox + 1 for _ in range(ctx.rank))):
                z_monos.append((zf, tuple(k - kbox for k in kv), ze,
                                hf + he))
    coset = []
    for av in boxes(tuple(datum.ellAlpha)):
        ha = sum(av[p] * heights[p] for p in range(nroots))
        if ha > height_cap:
            continue
        for bv in boxes(tuple(datum.ellAlpha)):
            hb = sum(bv[p] * heights[p] for p in range(nroots))
            if ha + hb > height_cap:
                continue
            for jv in boxes(tuple(datum.ellI)):
                coset.append((av, jv, bv, ha + hb))
    tracker = _SpanTracker()
    count = 0
    independent = True
    for zf, kv, ze, hz in z_monos:
        zelem = ctx.one()
        for p in range(nroots):
            for _ in range(zf[p]):
                zelem = ctx.mul(zelem, zfr.f_powers[p])
        kcoords = tuple(4 * datum.ellI[i] * kv[i] for i in range(ctx.rank))
        zelem = ctx.mul(zelem, ctx.gen_K(kcoords))
        for p in range(nroots):
            for _ in range(ze[p]):
                zelem = ctx.mul(zelem, zfr.e_powers[p])
        for av, jv, bv, hm in coset:
            if hz + hm > height_cap:
                continue
            m = ctx.pbw_monomial(av, "F")
            m = ctx.mul(m, ctx.gen_K(tuple(4 * j for j in jv)))
            m = ctx.mul(m, ctx.pbw_monomial(bv, "E"))
            prod = ctx.mul(zelem, m)
            vec = ctx.specialize_coords(ctx.to_pbw(prod))
            count += 1
            if not tracker.insert(vec, count):
                independent = False
    return count, independent
