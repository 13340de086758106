"""Root systems, lattices, and the arithmetic of root-of-unity orders.

Weights live in the half-fundamental-weight lattice: a WeightVec stores
integer coordinates in the basis {omega_i/2}, which is the finest lattice
any computation touches.  In these coordinates

* alpha_j has coordinates (2 a_1j, ..., 2 a_rj),
* the simple reflection s_i acts by c_k -> c_k - c_i a_ki,
* (mu, alpha_i^vee) = c_i / 2.

All bilinear-form values are exact Fractions; the datum's rootOrderN is
the smallest N with both (1/2)(P/2, P/2) and (kappa^{-1}(P/2), P/2)
inside (1/N)Z, so every q-power exponent times N is an integer.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from .errors import ConfigError, InvalidEll, InvalidOrientation


def _lattice_tables(letter, rank):
    """Cartan matrix (Bourbaki numbering) and symmetrizers d_i."""
    if rank < 1:
        raise ConfigError("rank must be positive")
    edges = []
    d = [1] * rank
    if letter == "A":
        edges = [(i, i + 1) for i in range(1, rank)]
    elif letter == "B":
        if rank < 2:
            raise ConfigError("type B needs rank >= 2")
        edges = [(i, i + 1) for i in range(1, rank)]
        d = [2] * (rank - 1) + [1]
    elif letter == "C":
        if rank < 2:
            raise ConfigError("type C needs rank >= 2")
        edges = [(i, i + 1) for i in range(1, rank)]
        d = [1] * (rank - 1) + [2]
    elif letter == "D":
        if rank < 3:
            raise ConfigError("type D needs rank >= 3")
        edges = [(i, i + 1) for i in range(1, rank - 1)] + [(rank - 2, rank)]
    elif letter == "E":
        if rank not in (6, 7, 8):
            raise ConfigError("type E needs rank in {6,7,8}")
        edges = [(1, 3), (2, 4), (3, 4)] + [(i, i + 1) for i in range(4, rank)]
    elif letter == "F":
        if rank != 4:
            raise ConfigError("type F needs rank 4")
        edges = [(1, 2), (2, 3), (3, 4)]
        d = [2, 2, 1, 1]
    elif letter == "G":
        if rank != 2:
            raise ConfigError("type G needs rank 2")
        edges = [(1, 2)]
        d = [1, 3]
    else:
        raise ConfigError("unknown Cartan letter %r" % letter)
    # a_ij = 2(alpha_i, alpha_j)/(alpha_i, alpha_i); the symmetrized
    # b_ij = d_i a_ij must come out symmetric
    a = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        a[i][i] = 2
    for (i, j) in edges:
        i, j = i - 1, j - 1
        g = gcd(d[i], d[j])
        # (alpha_i, alpha_j) = -lcm(d_i, d_j) for adjacent nodes
        bij = -d[i] * d[j] // g
        a[i][j] = bij // d[i]
        a[j][i] = bij // d[j]
    return a, d, [(i - 1, j - 1) for (i, j) in edges]


@dataclass(frozen=True)
class WeightVec:
    """Integer coordinate vector in the basis {omega_i/2}."""

    coords: tuple

    def __add__(self, other):
        return WeightVec(tuple(x + y
                               for x, y in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return WeightVec(tuple(x - y
                               for x, y in zip(self.coords, other.coords)))

    def __neg__(self):
        return WeightVec(tuple(-x for x in self.coords))

    def __mul__(self, n):
        return WeightVec(tuple(n * x for x in self.coords))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coords)

    def __repr__(self):
        return "WeightVec(%s)" % (self.coords,)


def _mat_inv_fractions(m):
    n = len(m)
    aug = [[Fraction(m[i][j]) for j in range(n)] +
           [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def _mat_mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b)))
             for j in range(len(b[0]))] for i in range(len(a))]


@dataclass(frozen=True)
class PosRoot:
    """One positive root in the convex order."""

    index: int            # position k in the convex order, 0-based
    weight: WeightVec     # coordinates in {omega_i/2}
    alpha_coords: tuple   # expansion over simple roots
    height: int
    word_letter: int      # i_k of the reduced word, 0-based
    d: int                # (beta, beta)/2
    ell_alpha: int | None


class RootDatum:
    """Immutable container for one choice of (type, rank, orientation, ell)."""

    def __init__(self, letter, rank, orientation, ell):
        self.letter = letter
        self.rank = rank
        self.ell = ell
        self.cartan, self.d, edges = _lattice_tables(letter, rank)
        self.b = [[self.d[i] * self.cartan[i][j] for j in range(rank)]
                  for i in range(rank)]
        self._set_orientation(orientation, edges)
        self._set_lattice()
        self._set_roots()
        self._set_ell()
        self._set_dual()
        self._set_root_order()

    # -- construction pieces --

    def _set_orientation(self, orientation, edges):
        r = self.rank
        eps = [[0] * r for _ in range(r)]
        seen = set()
        for pair in orientation or ():
            i, j = pair
            i, j = i - 1, j - 1
            if not (0 <= i < r and 0 <= j < r) or self.cartan[i][j] >= 0:
                raise InvalidOrientation("(%d,%d) is not a Dynkin edge"
                                         % (i + 1, j + 1))
            key = frozenset((i, j))
            if key in seen:
                raise InvalidOrientation("edge {%d,%d} oriented twice"
                                         % (i + 1, j + 1))
            seen.add(key)
            eps[i][j], eps[j][i] = 1, -1
        for (i, j) in edges:
            if frozenset((i, j)) not in seen:
                raise InvalidOrientation("edge {%d,%d} left unoriented"
                                         % (i + 1, j + 1))
        self.epsMatrix = eps
        self.phi = [[Fraction(eps[i][j] * self.b[i][j], 2) for j in range(r)]
                    for i in range(r)]

    def _set_lattice(self):
        r = self.rank
        a_inv = _mat_inv_fractions(self.cartan)
        # Gram matrix of fundamental weights
        self.gram = [[self.d[i] * a_inv[i][j] for j in range(r)]
                     for i in range(r)]
        self.simple_roots = [
            WeightVec(tuple(2 * self.cartan[k][i] for k in range(r)))
            for i in range(r)]
        self.rho = WeightVec((2,) * r)
        # nu^<_i = sum_j phi_ij omega_j^vee has integral {omega/2}-coords
        # because phi_ij omega_j^vee = eps_ij a_ji omega_j / 2
        nu_lt = [WeightVec(tuple(self.epsMatrix[i][j] * self.cartan[j][i]
                                 for j in range(r))) for i in range(r)]
        self.nuLT = nu_lt
        self.nuGT = [nu_lt[i] - self.simple_roots[i] for i in range(r)]
        self.zetaGT = [self.simple_roots[i] - 2 * nu_lt[i] for i in range(r)]
        self.zetaLT = [-self.simple_roots[i] - 2 * nu_lt[i] for i in range(r)]
        # kappa(alpha_i) = -zeta^<_i, gamma(alpha_i) = zeta^>_i; convert
        # columns from the alpha basis to the {omega/2} coordinate basis
        alpha_mat = [[self.simple_roots[j].coords[i] for j in range(r)]
                     for i in range(r)]
        alpha_inv = _mat_inv_fractions(alpha_mat)
        kcols = [[(-self.zetaLT[j]).coords[i] for j in range(r)]
                 for i in range(r)]
        gcols = [[self.zetaGT[j].coords[i] for j in range(r)]
                 for i in range(r)]
        self.kappa = _mat_mul(kcols, alpha_inv)
        self.gamma = _mat_mul(gcols, alpha_inv)
        self.kappa_inv = _mat_inv_fractions(self.kappa)

    def _set_roots(self):
        r = self.rank
        # all roots as the reflection closure of the simple ones
        seen = {self.simple_roots[i].coords: tuple(int(k == i)
                                                   for k in range(r))
                for i in range(r)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for c in frontier:
                for i in range(r):
                    rc = self.reflect_coords(i, c)
                    if rc not in seen:
                        # s_i(beta) = beta - (beta, alpha_i^vee) alpha_i
                        # with (beta, alpha_i^vee) = c_i/2, always integral
                        # on roots
                        old = seen[c]
                        m = c[i] // 2
                        assert c[i] % 2 == 0
                        seen[rc] = tuple(old[k] - m * int(k == i)
                                         for k in range(r))
                        nxt.append(rc)
            frontier = nxt
        positives = {c: a for c, a in seen.items()
                     if all(x >= 0 for x in a) and any(a)}
        self.num_pos_roots = len(positives)
        self.w0_word = self._lex_w0_word()
        assert len(self.w0_word) == self.num_pos_roots
        # convex order beta_k = s_{i_1}...s_{i_{k-1}}(alpha_{i_k})
        roots = []
        for k, ik in enumerate(self.w0_word):
            c = self.simple_roots[ik].coords
            for step in reversed(self.w0_word[:k]):
                c = self.reflect_coords(step, c)
            ac = positives.get(c)
            assert ac is not None, "convex order left the positive roots"
            dd = self.pair(WeightVec(c), WeightVec(c)) / 2
            assert dd.denominator == 1
            roots.append(PosRoot(
                index=k, weight=WeightVec(c), alpha_coords=ac,
                height=sum(ac), word_letter=ik, d=int(dd),
                ell_alpha=None))
        self.posRoots = roots

    def _lex_w0_word(self):
        # greedy descent: repeatedly strip the smallest left descent of w0
        r = self.rank
        lam = list(self.rho.coords)
        mats = []
        # first obtain w0 as the chamber walk from rho to -rho
        cur = list(lam)
        w0_letters = []
        while any(x > 0 for x in cur):
            i = next(k for k in range(r) if cur[k] > 0)
            cur = list(self.reflect_coords(i, tuple(cur)))
            w0_letters.append(i)
        assert cur == [-x for x in self.rho.coords]
        # w0 = s_{j_m} ... s_{j_1} for the letters above; now extract the
        # lexicographically smallest reduced word from the left
        def apply_w(letters, c):
            for i in letters:
                c = self.reflect_coords(i, c)
            return c

        # u starts as w0 (as the chamber-walk letter list, applied
        # first-to-last), and we repeatedly find the smallest i with
        # u^{-1}(alpha_i) negative, replacing u <- s_i u
        prefix = []  # lex word built so far
        n = len(w0_letters)
        for _ in range(n):
            for i in range(r):
                # u = s_{p_t}...s_{p_1} w0, so u^{-1}(alpha_i) applies the
                # prefix letters newest-first and then w0^{-1}; the image is
                # a root, negative exactly when (rho, image) < 0
                c = self.simple_roots[i].coords
                for p in reversed(prefix):
                    c = self.reflect_coords(p, c)
                for wl in reversed(w0_letters):
                    c = self.reflect_coords(wl, c)
                if self.pair(self.rho, WeightVec(c)) < 0:
                    prefix.append(i)
                    break
            else:
                raise AssertionError("no descent found")
        return prefix

    def _set_ell(self):
        ell = self.ell
        if ell == 0:
            self.ellI = None
            self.ellAlpha = None
            return
        for k in range(1, max(self.d) + 1):
            if (2 * k) % ell == 0:
                raise InvalidEll("epsilon^%d = 1 at ell=%d" % (2 * k, ell))
        self.ellI = [ell // gcd(2 * di, ell) for di in self.d]
        for i in range(self.rank):
            for j in range(self.rank):
                if i != j and self.ellI[j] >= 2 and \
                        self.ellI[i] < 1 - self.cartan[i][j]:
                    raise InvalidEll(
                        "ell=%d violates ell_%d >= 1 - a_%d%d"
                        % (ell, i + 1, i + 1, j + 1))
        self.ellAlpha = []
        new_roots = []
        for root in self.posRoots:
            la = ell // gcd(2 * root.d, ell)
            self.ellAlpha.append(la)
            new_roots.append(PosRoot(
                index=root.index, weight=root.weight,
                alpha_coords=root.alpha_coords, height=root.height,
                word_letter=root.word_letter, d=root.d, ell_alpha=la))
        self.posRoots = new_roots

    def _set_dual(self):
        if self.ell == 0:
            self.dual = None
            return
        r = self.rank
        li = self.ellI
        a_star = [[Fraction(li[j] * self.b[i][j], li[i] * self.d[i])
                   for j in range(r)] for i in range(r)]
        for i in range(r):
            for j in range(r):
                if a_star[i][j].denominator != 1:
                    raise InvalidEll("rescaled Cartan entry (%d,%d) is not "
                                     "an integer at ell=%d"
                                     % (i + 1, j + 1, self.ell))
        d_star = [self.d[i] * li[i] ** 2 for i in range(r)]
        eps_star = []
        for i in range(r):
            rem = d_star[i] % self.ell
            if rem == 0:
                eps_star.append(1)
            elif 2 * rem == self.ell:
                eps_star.append(-1)
            else:
                raise InvalidEll("epsilon^(d_%d ell_%d^2) is not a sign"
                                 % (i + 1, i + 1))
        self.dual = {
            "cartan": [[int(x) for x in row] for row in a_star],
            "d": d_star,
            "epsStar": eps_star,
            "alphaStar": [li[i] * self.simple_roots[i] for i in range(r)],
            "omegaStar": [WeightVec(tuple(2 * li[i] * int(k == i)
                                          for k in range(r)))
                          for i in range(r)],
            "phiStar": [[li[i] * li[j] * self.phi[i][j] for j in range(r)]
                        for i in range(r)],
        }

    def _set_root_order(self):
        r = self.rank
        n = 1
        for i in range(r):
            ei = WeightVec(tuple(int(k == i) for k in range(r)))
            for j in range(r):
                ej = WeightVec(tuple(int(k == j) for k in range(r)))
                n = lcm(n, (self.pair(ei, ej) / 2).denominator)
                kin = self.apply_matrix(self.kappa_inv, ei)
                val = sum(kin[a] * self.gram[a][b] * Fraction(ej.coords[b])
                          for a in range(r) for b in range(r)) / 4
                n = lcm(n, val.denominator)
        self.rootOrderN = n

    # -- lattice operations --

    def pair(self, u, w):
        """Bilinear form value (u, w) as a Fraction."""
        r = self.rank
        return sum(Fraction(u.coords[i]) * self.gram[i][j] * w.coords[j]
                   for i in range(r) for j in range(r)) / 4

    def pair_check(self, u, w):
        """(u, w) scaled by rootOrderN, guaranteed integral."""
        val = self.pair(u, w) * self.rootOrderN
        if val.denominator != 1:
            raise ConfigError("pairing value %s exceeds 1/%d precision"
                              % (val, self.rootOrderN))
        return int(val)

    def reflect_coords(self, i, coords):
        ai = self.cartan
        ci = coords[i]
        return tuple(coords[k] - ci * ai[k][i] for k in range(self.rank))

    def reflect(self, i, wv):
        return WeightVec(self.reflect_coords(i, wv.coords))

    def apply_matrix(self, m, wv):
        r = self.rank
        return [sum(Fraction(m[i][j]) * wv.coords[j] for j in range(r))
                for i in range(r)]

    def apply_kappa(self, wv):
        return self._int_image(self.kappa, wv, "kappa")

    def apply_gamma(self, wv):
        return self._int_image(self.gamma, wv, "gamma")

    def apply_kappa_inv(self, wv):
        """May be genuinely rational; returns a list of Fractions."""
        return self.apply_matrix(self.kappa_inv, wv)

    def _int_image(self, m, wv, name):
        img = self.apply_matrix(m, wv)
        if any(x.denominator != 1 for x in img):
            raise ConfigError("%s image of %r is not in the half-weight "
                              "lattice" % (name, wv))
        return WeightVec(tuple(int(x) for x in img))

    # -- membership tests (coords live in the omega/2 basis) --

    def in_P(self, wv):
        return all(c % 2 == 0 for c in wv.coords)

    def in_2P(self, wv):
        return all(c % 4 == 0 for c in wv.coords)

    def alpha_coords_of(self, wv):
        """Expansion over simple roots if it is integral, else None."""
        r = self.rank
        a_inv = _mat_inv_fractions(self.cartan)
        vals = [sum(a_inv[i][j] * Fraction(wv.coords[j], 2)
                    for j in range(r)) for i in range(r)]
        if any(v.denominator != 1 for v in vals):
            return None
        return tuple(int(v) for v in vals)

    def in_Q(self, wv):
        return self.alpha_coords_of(wv) is not None

    def in_Pstar(self, wv):
        if self.ellI is None:
            raise ConfigError("P* needs a root of unity datum")
        return all(c % (2 * li) == 0
                   for c, li in zip(wv.coords, self.ellI))

    def in_Qstar(self, wv):
        if self.ellI is None:
            raise ConfigError("Q* needs a root of unity datum")
        ac = self.alpha_coords_of(wv)
        return ac is not None and \
            all(a % li == 0 for a, li in zip(ac, self.ellI))

    def fundamental(self, i, half=False):
        """omega_i (or omega_i/2) as a WeightVec."""
        return WeightVec(tuple((1 if half else 2) * int(k == i)
                               for k in range(self.rank)))

    def zero_weight(self):
        return WeightVec((0,) * self.rank)

    # -- serialization --

    def to_json(self):
        return {
            "type": self.letter, "rank": self.rank, "ell": self.ell,
            "cartan": self.cartan, "d": self.d,
            "eps": self.epsMatrix,
            "phi": [[str(x) for x in row] for row in self.phi],
            "word": [i + 1 for i in self.w0_word],
            "posRoots": [list(r.weight.coords) for r in self.posRoots],
            "ellI": self.ellI,
            "ellAlpha": self.ellAlpha,
            "rootOrderN": self.rootOrderN,
        }

    def __repr__(self):
        return "RootDatum(%s%d, ell=%d)" % (self.letter, self.rank, self.ell)


def build_datum(letter, rank, orientation=(), ell=0):
    return RootDatum(letter, rank, orientation, ell)


def convex_order(datum):
    return list(datum.posRoots)


def pbw_normalizers(datum, k):
    """Scaling data (b^>, b^<, nu^>, nu^<) for the k-th convex root."""
    root = datum.posRoots[k]
    a = root.alpha_coords
    r = datum.rank
    b_gt = sum(Fraction(a[i] * a[j]) *
               datum.pair(datum.nuGT[i], datum.simple_roots[j])
               for i in range(r) for j in range(i + 1, r))
    b_lt = -sum(Fraction(a[i] * a[j]) *
                datum.pair(datum.nuLT[j], datum.simple_roots[i])
                for i in range(r) for j in range(i + 1, r))
    nu_gt = datum.zero_weight()
    nu_lt = datum.zero_weight()
    for i in range(r):
        nu_gt = nu_gt + a[i] * datum.nuGT[i]
        nu_lt = nu_lt + a[i] * datum.nuLT[i]
    return b_gt, b_lt, nu_gt, nu_lt


_DATUM_RE = re.compile(r"^([A-G])(\d+)$")


def parse_datum_flag(text):
    """Parse a '--datum' value like "A2:or=1>2:ell=5"."""
    parts = text.split(":")
    m = _DATUM_RE.match(parts[0].strip())
    if not m:
        raise ConfigError("bad datum %r; expected like 'B2:or=1>2:ell=5'"
                          % text)
    letter, rank = m.group(1), int(m.group(2))
    orientation = []
    ell = 0
    for part in parts[1:]:
        part = part.strip()
        if part.startswith("or="):
            for edge in part[3:].split(","):
                if not edge:
                    continue
                if ">" in edge:
                    i, j = edge.split(">")
                    orientation.append((int(i), int(j)))
                elif "<" in edge:
                    i, j = edge.split("<")
                    orientation.append((int(j), int(i)))
                else:
                    raise ConfigError("bad edge %r in datum" % edge)
        elif part.startswith("ell="):
            ell = int(part[4:])
        else:
            raise ConfigError("bad datum component %r" % part)
    return build_datum(letter, rank, orientation, ell)


def datum_to_json_str(datum):
    return json.dumps(datum.to_json(), indent=2, sort_keys=True)
