"""Exact coefficient arithmetic.

Two coefficient domains:

* ``LaurentFrac`` -- the generic field Q(v^(1/N)), stored as a reduced
  fraction of integer Laurent polynomials in the formal variable
  t = v^(1/N).  The value of N is not stored on the scalar; every datum
  fixes one N and all scalars in a computation share it.
* ``Cyclotomic`` -- an exact element of Q[x]/Phi_M(x) with zeta = class
  of x a primitive M-th root of unity.  Specialization sends t to zeta
  where M = N*ell, so v goes to epsilon = zeta^N of order exactly ell.

Laurent polynomials are sparse dicts {exponent: int}.  Fractions keep the
denominator a true polynomial (nonzero constant term, positive leading
coefficient) with all unit powers of t pushed into the numerator, the
integer contents of numerator and denominator coprime, and the polynomial
gcd cancelled.  Equality is then equality of stored forms.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import IntegralityError, NotDivisible, PoleAtEpsilon


# ### sparse Laurent-dict helpers ###

def _padd(a, b):
    out = dict(a)
    for e, c in b.items():
        s = out.get(e, 0) + c
        if s:
            out[e] = s
        else:
            out.pop(e, None)
    return out


def _pneg(a):
    return {e: -c for e, c in a.items()}


def _pmul(a, b):
    if not a or not b:
        return {}
    out = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = ea + eb
            s = out.get(e, 0) + ca * cb
            if s:
                out[e] = s
            else:
                out.pop(e, None)
    return out


def _pshift(a, k):
    if k == 0:
        return dict(a)
    return {e + k: c for e, c in a.items()}


def _pcontent(a):
    g = 0
    for c in a.values():
        g = gcd(g, abs(c))
        if g == 1:
            return 1
    return g


def _pscale_exact(a, d):
    if d == 1:
        return dict(a)
    return {e: c // d for e, c in a.items()}


def _to_dense(a):
    """(coeff list from the lowest exponent, that exponent)."""
    if not a:
        return [], 0
    lo = min(a)
    hi = max(a)
    dense = [0] * (hi - lo + 1)
    for e, c in a.items():
        dense[e - lo] = c
    return dense, lo


def _from_dense(dense, shift=0):
    return {i + shift: c for i, c in enumerate(dense) if c}


def _dense_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _dense_divmod_exact(num, den):
    """Exact division of integer dense polynomials; None when not exact."""
    num = list(num)
    _dense_trim(num)
    dn = len(den) - 1
    lc = den[-1]
    if not num:
        return []
    if len(num) - 1 < dn:
        return None
    q = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        if c % lc:
            return None
        f = c // lc
        q[i - dn] = f
        for j, dc in enumerate(den):
            num[i - dn + j] -= f * dc
    if any(num):
        return None
    return q


def _dense_prem(f, g):
    """Pseudo-remainder of integer dense polys, f by g."""
    f = list(f)
    _dense_trim(f)
    dg = len(g) - 1
    lc = g[-1]
    while f and len(f) - 1 >= dg:
        df = len(f) - 1
        c = f[-1]
        f = [x * lc for x in f]
        for j, gc in enumerate(g):
            f[df - dg + j] -= c * gc
        _dense_trim(f)
    return f


def _dense_gcd(f, g):
    """Gcd of integer dense polynomials by the primitive remainder sequence;
    result is primitive with positive leading coefficient."""
    f = _dense_trim(list(f))
    g = _dense_trim(list(g))
    if not f:
        out = g
    elif not g:
        out = f
    else:
        if len(f) < len(g):
            f, g = g, f
        f = [x // _pcontent(_from_dense(f)) for x in f]
        g = [x // _pcontent(_from_dense(g)) for x in g]
        while True:
            r = _dense_prem(f, g)
            if not r:
                break
            cr = _pcontent(_from_dense(r))
            r = [x // cr for x in r]
            f, g = g, r
        out = g
    out = list(out)
    if out and out[-1] < 0:
        out = [-x for x in out]
    return out


def _strip_t(a):
    """Split a Laurent dict into (poly dict with nonzero constant term, shift)."""
    if not a:
        return {}, 0
    lo = min(a)
    if lo:
        return {e - lo: c for e, c in a.items()}, lo
    return dict(a), 0


def _reduce(num, den):
    num = {e: c for e, c in num.items() if c}
    den = {e: c for e, c in den.items() if c}
    if not den:
        raise ZeroDivisionError("zero denominator")
    if not num:
        return {}, {0: 1}
    den, dshift = _strip_t(den)
    nump, nshift = _strip_t(num)
    nshift -= dshift
    cn = _pcontent(nump)
    cd = _pcontent(den)
    g = gcd(cn, cd)
    nump = _pscale_exact(nump, g)
    den = _pscale_exact(den, g)
    cn //= g
    cd //= g
    if len(den) == 1:
        c = den[0]
        if c < 0:
            nump = _pneg(nump)
            c = -c
        return _pshift(nump, nshift), {0: c}
    dn, _ = _to_dense(nump)
    dd, _ = _to_dense(den)
    dn_p = [x // cn for x in dn]
    dd_p = [x // cd for x in dd]
    q = _dense_divmod_exact(dn_p, dd_p)
    if q is not None:
        # q already carries the denominator's sign
        nump = _from_dense([x * cn for x in q])
        return _pshift(nump, nshift), {0: cd}
    gp = _dense_gcd(dn_p, dd_p)
    if len(gp) > 1:
        dn_p = _dense_divmod_exact(dn_p, gp)
        dd_p = _dense_divmod_exact(dd_p, gp)
    if dd_p[-1] < 0:
        dn_p = [-x for x in dn_p]
        dd_p = [-x for x in dd_p]
    nump = _from_dense([x * cn for x in dn_p])
    den = _from_dense([x * cd for x in dd_p])
    return _pshift(nump, nshift), den


class LaurentFrac:
    """Reduced fraction of integer Laurent polynomials in t."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _raw=False):
        if isinstance(num, int):
            num = {0: num} if num else {}
        if den is None:
            den = {0: 1}
        elif isinstance(den, int):
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            den = {0: den}
        if _raw:
            self.num = num
            self.den = den
            return
        self.num, self.den = _reduce(num, den)

    @staticmethod
    def t_power(k, coeff=1):
        return LaurentFrac({k: coeff} if coeff else {}, {0: 1}, _raw=True)

    @staticmethod
    def from_fraction(q):
        q = Fraction(q)
        return LaurentFrac({0: q.numerator} if q.numerator else {},
                           {0: q.denominator}, _raw=True)

    def is_zero(self):
        return not self.num

    def is_one(self):
        return self.num == {0: 1} and self.den == {0: 1}

    def __bool__(self):
        return bool(self.num)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return LaurentFrac(_padd(self.num, other.num), dict(self.den))
        num = _padd(_pmul(self.num, other.den), _pmul(other.num, self.den))
        return LaurentFrac(num, _pmul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return LaurentFrac(_pneg(self.num), dict(self.den), _raw=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        return LaurentFrac(_pmul(self.num, other.num),
                           _pmul(self.den, other.den))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not other.num:
            raise ZeroDivisionError("division by zero scalar")
        poly, shift = _strip_t(other.num)
        num = _pmul(self.num, _pshift(other.den, -shift))
        return LaurentFrac(num, _pmul(self.den, poly))

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n):
        if n < 0:
            return (ONE / self) ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def bar(self):
        """Substitute t -> t^(-1); an involutive ring automorphism."""
        return LaurentFrac({-k: c for k, c in self.num.items()},
                           {-k: c for k, c in self.den.items()})

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((frozenset(self.num.items()),
                     frozenset(self.den.items())))

    def __repr__(self):
        if self.den == {0: 1}:
            return "LaurentFrac(%s)" % _fmt_poly(self.num, "t")
        return "LaurentFrac((%s) / (%s))" % (_fmt_poly(self.num, "t"),
                                             _fmt_poly(self.den, "t"))

    def to_json(self):
        return {"num": sorted(self.num.items()),
                "den": sorted(self.den.items())}


def _coerce(x):
    if isinstance(x, LaurentFrac):
        return x
    if isinstance(x, int):
        return LaurentFrac(x)
    if isinstance(x, Fraction):
        return LaurentFrac.from_fraction(x)
    return NotImplemented


def _fmt_poly(a, var):
    if not a:
        return "0"
    parts = []
    for e in sorted(a, reverse=True):
        c = a[e]
        if e == 0:
            parts.append(str(c))
        elif e == 1:
            cs = "" if c == 1 else ("-" if c == -1 else str(c) + "*")
            parts.append(cs + var)
        else:
            cs = "" if c == 1 else ("-" if c == -1 else str(c) + "*")
            parts.append("%s%s^%d" % (cs, var, e))
    return " + ".join(parts).replace("+ -", "- ")


def to_vstring(x, nroot):
    """Render with v-exponents: exponents of t are divided by nroot."""

    def side(poly):
        if not poly:
            return "0"
        parts = []
        for e in sorted(poly, reverse=True):
            c = poly[e]
            q = Fraction(e, nroot)
            if q == 0:
                parts.append(str(c))
                continue
            cs = "" if c == 1 else ("-" if c == -1 else str(c) + "*")
            if q == 1:
                parts.append(cs + "v")
            else:
                parts.append("%sv^(%s)" % (cs, q))
        return " + ".join(parts).replace("+ -", "- ")

    if x.den == {0: 1}:
        return side(x.num)
    return "(%s) / (%s)" % (side(x.num), side(x.den))


ZERO = LaurentFrac(0)
ONE = LaurentFrac(1)


# ### q-combinatorics ###
#
# The functions take the symmetrizer d_i and the root index N (t = v^(1/N)),
# so v_i = t^(N*d_i).

def vpow(k, nroot=1):
    """v^k as a LaurentFrac; k may be a Fraction with k*nroot integral."""
    e = Fraction(k) * nroot
    if e.denominator != 1:
        raise IntegralityError("v-exponent %s not in (1/%d)Z" % (k, nroot))
    return LaurentFrac.t_power(int(e))


def qint(n, di=1, nroot=1):
    """Bracket integer [n] = (v_i^n - v_i^-n)/(v_i - v_i^-1)."""
    s = nroot * di
    if n == 0:
        return ZERO
    sign = 1
    if n < 0:
        n, sign = -n, -1
    return LaurentFrac({s * (n - 1 - 2 * k): sign for k in range(n)})


def qfact(n, di=1, nroot=1):
    out = ONE
    for k in range(2, n + 1):
        out = out * qint(k, di, nroot)
    return out


def qbinom_bracket(m, s, di=1, nroot=1):
    """Bracket binomial [m choose s]; m any integer, s >= 0."""
    if s < 0:
        return ZERO
    out = ONE
    for j in range(1, s + 1):
        out = out * qint(m - j + 1, di, nroot)
    return out / qfact(s, di, nroot)


def paren_int(n, di=1, nroot=1):
    """Round integer (n) = (1 - v_i^-2n)/(1 - v_i^-2) for n >= 0."""
    s = 2 * nroot * di
    return LaurentFrac({-s * k: 1 for k in range(n)}) if n else ZERO


def paren_fact(n, di=1, nroot=1):
    out = ONE
    for k in range(2, n + 1):
        out = out * paren_int(k, di, nroot)
    return out


def paren_binom(m, s, di=1, nroot=1):
    """Round binomial (m choose s); m any integer, s >= 0."""
    if s < 0:
        return ZERO
    step = 2 * nroot * di
    out = ONE
    one = ONE
    base = one - LaurentFrac.t_power(-step)
    for j in range(1, s + 1):
        n = m - j + 1
        out = out * ((one - LaurentFrac.t_power(-step * n)) / base)
    return out / paren_fact(s, di, nroot)


# ### cyclotomic numbers ###

def _moebius(n):
    m, p, k = 1, 2, n
    while p * p <= k:
        if k % p == 0:
            k //= p
            if k % p == 0:
                return 0
            m = -m
        p += 1
    if k > 1:
        m = -m
    return m


def _dense_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


@lru_cache(maxsize=None)
def cyclotomic_dense(M):
    """Integer coefficient tuple of the M-th cyclotomic polynomial."""
    if M == 1:
        return (-1, 1)
    num = [1]
    dens = []
    for d in range(1, M + 1):
        if M % d:
            continue
        mu = _moebius(M // d)
        if mu == 1:
            f = [0] * (d + 1)
            f[0], f[d] = -1, 1
            num = _dense_mul(num, f)
        elif mu == -1:
            dens.append(d)
    for d in dens:
        f = [0] * (d + 1)
        f[0], f[d] = -1, 1
        num = _dense_divmod_exact(num, f)
    return tuple(_dense_trim(num))


@lru_cache(maxsize=None)
def _reduction_rows(M):
    """x^k mod Phi_M for k in [deg, 2*deg-2], as integer tuples."""
    phi = cyclotomic_dense(M)
    deg = len(phi) - 1
    rows = {}
    cur = [-c for c in phi[:deg]]
    rows[deg] = tuple(cur)
    for k in range(deg + 1, 2 * deg - 1):
        nxt = [0] + cur[:-1]
        carry = cur[-1]
        if carry:
            base = rows[deg]
            nxt = [a + carry * b for a, b in zip(nxt, base)]
        cur = nxt
        rows[k] = tuple(cur)
    return rows, deg


def _reduce_mod_phi(conv, M):
    rows, deg = _reduction_rows(M)
    conv = list(conv)
    for k in range(len(conv) - 1, deg - 1, -1):
        c = conv[k]
        if not c:
            continue
        conv[k] = 0
        row = rows.get(k)
        if row is not None:
            for i, rc in enumerate(row):
                conv[i] += c * rc
        else:
            # x^k = x^(k-deg) * x^deg; indices below k get reduced later
            base = rows[deg]
            for i, rc in enumerate(base):
                conv[k - deg + i] += c * rc
    out = conv[:deg]
    out += [0] * (deg - len(out))
    return out


class Cyclotomic:
    """Element of Q[x]/Phi_M(x); integer coefficients over a common positive
    denominator, gcd-normalized."""

    __slots__ = ("modulus", "coeffs", "den")

    def __init__(self, modulus, coeffs, den=1, _raw=False):
        self.modulus = modulus
        if _raw:
            self.coeffs = coeffs
            self.den = den
            return
        _, deg = _reduction_rows(modulus)
        cs = list(coeffs)
        if len(cs) > deg:
            raise ValueError("coefficient vector longer than the field degree")
        cs += [0] * (deg - len(cs))
        if den < 0:
            den = -den
            cs = [-c for c in cs]
        g = den
        for c in cs:
            g = gcd(g, abs(c))
            if g == 1:
                break
        if g > 1:
            cs = [c // g for c in cs]
            den //= g
        self.coeffs = tuple(cs)
        self.den = den

    @staticmethod
    def zero(M):
        return Cyclotomic(M, [])

    @staticmethod
    def one(M):
        return Cyclotomic(M, [1])

    @staticmethod
    def from_fraction(M, q):
        q = Fraction(q)
        return Cyclotomic(M, [q.numerator], q.denominator)

    @staticmethod
    def zeta_power(M, k):
        """zeta^k where zeta is the class of x (a primitive M-th root)."""
        k %= M
        _, deg = _reduction_rows(M)
        v = [0] * (k + 1)
        v[k] = 1
        if k < deg:
            return Cyclotomic(M, v)
        return Cyclotomic(M, _reduce_mod_phi(v, M))

    def is_zero(self):
        return not any(self.coeffs)

    def is_one(self):
        return self.den == 1 and self.coeffs[0] == 1 and \
            not any(self.coeffs[1:])

    def __bool__(self):
        return any(self.coeffs)

    def _check(self, other):
        if self.modulus != other.modulus:
            raise ValueError("mixed cyclotomic moduli")

    def __add__(self, other):
        other = _ccoerce(other, self.modulus)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        g = gcd(self.den, other.den)
        d = self.den // g * other.den
        a = d // self.den
        b = d // other.den
        return Cyclotomic(self.modulus,
                          [a * x + b * y
                           for x, y in zip(self.coeffs, other.coeffs)], d)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.modulus, tuple(-c for c in self.coeffs),
                          self.den, _raw=True)

    def __sub__(self, other):
        other = _ccoerce(other, self.modulus)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _ccoerce(other, self.modulus) - self

    def __mul__(self, other):
        other = _ccoerce(other, self.modulus)
        if other is NotImplemented:
            return NotImplemented
        self._check(other)
        if self.is_zero() or other.is_zero():
            return Cyclotomic.zero(self.modulus)
        conv = _dense_mul(list(self.coeffs), list(other.coeffs))
        return Cyclotomic(self.modulus, _reduce_mod_phi(conv, self.modulus),
                          self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic")
        phi = [Fraction(c) for c in cyclotomic_dense(self.modulus)]
        a = _ftrim([Fraction(c, self.den) for c in self.coeffs])
        r0, r1 = phi, a
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _fdivmod(r0, r1)
            r0, r1 = r1, _ftrim(r)
            s0, s1 = s1, _ftrim(_fsub(s0, _fmul(q, s1)))
            if not r1:
                raise ZeroDivisionError("element is a zero divisor")
        c = r1[0]
        inv = [x / c for x in s1]
        den = 1
        for x in inv:
            den = den * x.denominator // gcd(den, x.denominator)
        return Cyclotomic(self.modulus,
                          _reduce_mod_phi([int(x * den) for x in inv],
                                          self.modulus), den)

    def __truediv__(self, other):
        other = _ccoerce(other, self.modulus)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _ccoerce(other, self.modulus) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = Cyclotomic.one(self.modulus)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        other = _ccoerce(other, self.modulus)
        if other is NotImplemented:
            return NotImplemented
        return (self.modulus == other.modulus and self.den == other.den
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.modulus, self.den, self.coeffs))

    def as_fraction(self):
        """The rational value when the element is rational; None otherwise."""
        if any(self.coeffs[1:]):
            return None
        return Fraction(self.coeffs[0], self.den)

    def __repr__(self):
        body = _fmt_poly({i: c for i, c in enumerate(self.coeffs) if c}, "z")
        if self.den != 1:
            return "Cyclotomic[%d]((%s)/%d)" % (self.modulus, body, self.den)
        return "Cyclotomic[%d](%s)" % (self.modulus, body)

    def to_json(self):
        return {"modulus": self.modulus, "coeffs": list(self.coeffs),
                "den": self.den}


def _ccoerce(x, M):
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, int):
        return Cyclotomic(M, [x])
    if isinstance(x, Fraction):
        return Cyclotomic.from_fraction(M, x)
    return NotImplemented


def _ftrim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def _fsub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _fmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _fdivmod(a, b):
    a = list(a)
    db = len(b) - 1
    q = [Fraction(0)] * max(len(a) - db, 1)
    lc = b[-1]
    for i in range(len(a) - 1, db - 1, -1):
        if a[i] == 0:
            continue
        f = a[i] / lc
        q[i - db] = f
        for j, bc in enumerate(b):
            a[i - db + j] -= f * bc
    return q, a[:db]


# ### specialization ###

def specialize(x, ell, nroot):
    """Image of a LaurentFrac under t -> zeta, a primitive (nroot*ell)-th
    root of unity.  Raises PoleAtEpsilon when the reduced denominator
    vanishes there."""
    M = nroot * ell
    den = _eval_at_zeta(x.den, M)
    if den.is_zero():
        raise PoleAtEpsilon("denominator vanishes at the primitive %d-th root"
                            % M)
    num = _eval_at_zeta(x.num, M)
    return num / den


def _eval_at_zeta(poly, M):
    acc = [0] * M
    for e, c in poly.items():
        acc[e % M] += c
    return Cyclotomic(M, _reduce_mod_phi(acc, M))


def divide_out_eps_root(x, ell, nroot):
    """Value at epsilon of x/(v - epsilon).

    x must vanish at t = zeta; the division by (v - epsilon)
    = (t^nroot - zeta^nroot) is performed exactly in Q(zeta)[t] and the
    quotient is evaluated at zeta.  Raises NotDivisible when the division
    leaves a remainder."""
    M = nroot * ell
    den_val = _eval_at_zeta(x.den, M)
    if den_val.is_zero():
        raise PoleAtEpsilon("denominator vanishes at the primitive %d-th root"
                            % M)
    num, shift = _strip_t(x.num)
    dense, lo = _to_dense(num)
    shift += lo
    eps = Cyclotomic.zeta_power(M, nroot)
    zero = Cyclotomic.zero(M)
    n = len(dense)
    if n <= nroot:
        if not any(dense):
            return zero
        raise NotDivisible("numerator does not vanish at epsilon")
    q = [zero] * (n - nroot)
    rem = [Cyclotomic(M, [c]) if c else zero for c in dense]
    for i in range(n - 1, nroot - 1, -1):
        c = rem[i]
        if c.is_zero():
            continue
        q[i - nroot] = c
        rem[i] = zero
        rem[i - nroot] = rem[i - nroot] + c * eps
    if any(not c.is_zero() for c in rem[:nroot]):
        raise NotDivisible("numerator does not vanish at epsilon")
    val = zero
    zeta = Cyclotomic.zeta_power(M, 1)
    zp = Cyclotomic.one(M)
    for c in q:
        if not c.is_zero():
            val = val + c * zp
        zp = zp * zeta
    return val * Cyclotomic.zeta_power(M, shift % M) / den_val


def multibinom_check(n, elli, di, ell, nroot):
    """Specialization of the v_i-multinomial (n*elli)!/((elli)!)^n in round
    factorials; the contract is that it equals n! exactly."""
    num = paren_fact(n * elli, di, nroot)
    den = paren_fact(elli, di, nroot) ** n
    return specialize(num / den, ell, nroot)


def is_integral(x, max_d, nroot):
    """Whether the reduced denominator divides a unit times a product of
    polynomials (v^(2j) - 1), j <= max_d, with arbitrary multiplicities:
    membership in the localized integral coefficient ring."""
    den = dict(x.den)
    if _pcontent(den) != 1:
        return False
    dense, _ = _to_dense(den)
    prod = [1]
    for j in range(1, max_d + 1):
        f = [0] * (2 * j * nroot + 1)
        f[0], f[-1] = -1, 1
        prod = _dense_mul(prod, f)
    while len(dense) > 1:
        g = _dense_gcd(dense, prod)
        if len(g) <= 1:
            return False
        dense = _dense_trim(_dense_divmod_exact(dense, g))
    return dense == [1]


def require_integral(x, max_d, nroot, what="scalar"):
    if not is_integral(x, max_d, nroot):
        raise IntegralityError("%s is not integral: %r" % (what, x))
    return x
