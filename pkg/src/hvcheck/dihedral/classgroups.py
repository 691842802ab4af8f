"""Class groups of quadratic orders through binary quadratic forms.

Imaginary: reduced positive forms with Gauss composition.  Real: narrow
classes as rho-cycles of reduced indefinite forms, composition on cycle
representatives, fundamental unit by the continued fraction of sqrt(D).
All groups here are small; multiplication tables are materialized.
"""

from __future__ import annotations

import math
from math import gcd, isqrt

from ..errors import NotFundamental, WrongUnitNorm


def is_fundamental_disc(D):
    if D == 1 or D % 4 not in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(abs(D))
    m = D // 4
    return _squarefree(abs(m)) and m % 4 in (2, 3)


def _squarefree(n):
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def _solve_linmod(a, b, m):
    """x with a x ≡ b (mod m)."""
    g = gcd(a, m)
    assert b % g == 0
    a, b, m = a // g, b // g, m // g
    return (b * pow(a, -1, m)) % m if m > 1 else 0


def form_eval(f, x, y):
    a, b, c = f
    return a * x * x + b * x * y + c * y * y


def transform_to_leading(f, x0, y0):
    """An SL2(Z)-equivalent form with leading coefficient f(x0, y0);
    (x0, y0) must be primitive."""
    a, b, c = f
    g, u, v = _gcdext_pair(x0, y0)
    assert g == 1, "non-primitive representation"
    # u x0 + v y0 = 1, so det [x0, -v; y0, u] = 1
    m11, m12, m21, m22 = x0, -v, y0, u
    a2 = form_eval(f, m11, m21)
    b2 = 2 * (a * m11 * m12 + c * m21 * m22) + b * (m11 * m22 + m12 * m21)
    c2 = form_eval(f, m12, m22)
    return (a2, b2, c2)


def _gcdext_pair(a, b):
    """(g, u, v) with u a + v b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def compose(f1, f2):
    """Dirichlet composition of primitive forms of equal discriminant.

    f2 is first moved to a leading coefficient coprime to 2 a1 D, then the
    concordant-forms formula applies verbatim (definite or indefinite).
    """
    a1, b1, c1 = f1
    D = b1 * b1 - 4 * a1 * c1
    a2, b2, c2 = f2
    assert D == b2 * b2 - 4 * a2 * c2
    target = 2 * a1 * D
    found = None
    for bound in range(1, 40):
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                if gcd(x, y) != 1:
                    continue
                val = form_eval(f2, x, y)
                if val != 0 and gcd(val, target) == 1:
                    found = (x, y)
                    break
            if found:
                break
        if found:
            break
    assert found, "no coprime representation found"
    a2, b2, c2 = transform_to_leading(f2, *found)
    assert gcd(a1, a2) == 1, "leading coefficients not coprime"
    # concordance: B ≡ b1 (2a1), B ≡ b2 (2a2); then B^2 ≡ D (4 a1 a2)
    t = ((b2 - b1) // 2 * pow(a1, -1, abs(a2))) % abs(a2)
    B = b1 + 2 * a1 * t
    assert (B - b1) % (2 * a1) == 0 and (B - b2) % (2 * a2) == 0
    assert (B * B - D) % (4 * a1 * a2) == 0
    return (a1 * a2, B, (B * B - D) // (4 * a1 * a2))


def reduce_definite(f):
    a, b, c = f
    assert a > 0 and b * b - 4 * a * c < 0
    while True:
        if c < a:
            a, b, c = c, -b, a
        if -a < b <= a:
            break
        r = (a - b) // (2 * a)
        b2 = b + 2 * r * a
        c = a * r * r + b * r + c
        b = b2
    if a == c and b < 0:
        b = -b
    return (a, b, c)


class ImagClassGroup:
    """Cl(K) for K imaginary quadratic of fundamental discriminant D < 0."""

    def __init__(self, D):
        if not (D < 0 and is_fundamental_disc(D)):
            raise NotFundamental(f"{D} is not fundamental < 0")
        self.D = D
        forms = []
        amax = isqrt(-D // 3) + 1
        for a in range(1, amax + 1):
            for b in range(-a + 1, a + 1):
                if (b * b - D) % (4 * a):
                    continue
                c = (b * b - D) // (4 * a)
                if c < a or (a == c and b < 0):
                    continue
                if gcd(gcd(a, abs(b)), c) != 1:
                    continue
                forms.append((a, b, c))
        k = 1 if D % 2 else 0
        ident = (1, k, (k * k - D) // 4)
        ident = reduce_definite(ident)
        forms.sort()
        assert ident in forms
        self.classes = [ident] + [f for f in forms if f != ident]
        self.identity = ident

    @property
    def h(self):
        return len(self.classes)

    def key(self, f):
        return f

    def mul(self, f1, f2):
        return reduce_definite(compose(f1, f2))

    def inv(self, f):
        a, b, c = f
        return reduce_definite((a, -b, c))

    def pow(self, f, n):
        out = self.identity
        g = f if n >= 0 else self.inv(f)
        for _ in range(abs(n)):
            out = self.mul(out, g)
        return out

    def order(self, f):
        k, acc = 1, f
        while acc != self.identity:
            acc = self.mul(acc, f)
            k += 1
        return k

    def span(self, gens):
        out = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out

    def prime_class(self, ell):
        """Class of a prime ideal above a split ell (canonical b choice)."""
        for b in range(ell + 1):
            if (b * b - self.D) % (4 * ell) == 0:
                return reduce_definite((ell, b, (b * b - self.D) // (4 * ell)))
        raise ValueError(f"{ell} does not split for D={self.D}")

    def characters(self):
        """All characters as dicts class -> exponent k of zeta_e (e = exponent)."""
        return abelian_characters(self.classes, self.mul, self.identity)


def abelian_characters(elements, mul, identity):
    """Characters of a small abelian group given by its multiplication.

    Returns (e, chars) with e the group exponent and each character a dict
    element -> exponent mod e (value = zeta_e^exponent).
    """
    elements = list(elements)
    n = len(elements)
    # find a basis greedily: repeatedly pick a maximal-order element of the
    # quotient by the subgroup generated so far.
    idx = {g: i for i, g in enumerate(elements)}

    def order_of(g):
        k, acc = 1, g
        while acc != identity:
            acc = mul(acc, g)
            k += 1
        return k

    basis = []
    sub = {identity}
    while len(sub) < n:
        best, bestord = None, 0
        for g in elements:
            if g in sub:
                continue
            o = order_of(g)
            if o > bestord:
                best, bestord = g, o
        basis.append((best, bestord))
        new = set(sub)
        for s in list(sub):
            acc = s
            for _ in range(bestord - 1):
                acc = mul(acc, best)
                new.add(acc)
        sub = new
        if len(basis) > 20:
            raise RuntimeError("group too large")
    # exponent
    e = 1
    for _, o in basis:
        e = e * o // gcd(e, o)
    # coordinates of every element in the basis
    coords = {}
    from itertools import product as iproduct
    ranges = [range(o) for _, o in basis]
    for tup in iproduct(*ranges):
        g = identity
        for (b, _), k in zip(basis, tup):
            for _ in range(k):
                g = mul(g, b)
        if g not in coords:
            coords[g] = tup
    assert len(coords) == n, "basis does not span"
    chars = []
    char_ranges = [range(o) for _, o in basis]
    for tup in iproduct(*char_ranges):
        ch = {}
        for g, cs in coords.items():
            val = 0
            for (b, o), k, c in zip(basis, tup, cs):
                val += k * c * (e // o)
            ch[g] = val % e
        chars.append(ch)
    return e, chars, basis


# ----------------------------------------------------------------- real case

def _pell(D):
    """Fundamental (x, y, s) with x^2 - D y^2 = s ∈ {1, -1}, x, y > 0."""
    sq = isqrt(D)
    assert sq * sq != D
    m, d, a = 0, 1, sq
    num1, num = 1, sq
    den1, den = 0, 1
    for _ in range(10 ** 7):
        s = num * num - D * den * den
        if s in (1, -1):
            return num, den, s
        m = d * a - m
        d = (D - m * m) // d
        a = (sq + m) // d
        num1, num = num, a * num + num1
        den1, den = den, a * den + den1
    raise WrongUnitNorm("Pell continued fraction did not close")


def fundamental_unit(D):
    """(U, V, norm) with eps = (U + V sqrt(D))/2 the fundamental unit > 1.

    D ≡ 1 (mod 4): the fundamental unit of O_K may be half-integral; it is
    recovered as an exact t-th root (t <= 3) of the fundamental solution of
    x^2 - D y^2 = ±1.
    """
    import mpmath as mp
    assert D > 0 and D % 4 == 1
    x, y, s = _pell(D)
    with mp.workdps(30 + len(str(x)) * 2):
        eps1 = x + y * mp.sqrt(D)
        for t in (3, 2, 1):
            if s == -1 and t == 2:
                continue  # eps1 cannot be a square of a unit of norm ±1
            root = mp.power(eps1, mp.mpf(1) / t)
            for U in {int(mp.nint(root)), int(mp.nint(root)) + 1,
                      int(mp.nint(root)) - 1}:
                for s4 in (4, -4):
                    v2num = U * U - s4
                    if v2num <= 0 or v2num % D:
                        continue
                    V = isqrt(v2num // D)
                    if V > 0 and U * U - D * V * V == s4 and (U - D * V) % 2 == 0:
                        # confirm eps^t = eps1 exactly
                        if _half_unit_pow(U, V, D, t) == (2 * x, 2 * y):
                            return U, V, s4 // 4
    raise WrongUnitNorm(f"no fundamental unit recovered for D={D}")


def _half_unit_pow(U, V, D, t):
    """((U+V sqrt D)/2)^t in half-coordinates (U', V')."""
    RU, RV = 2, 0
    for _ in range(t):
        RU, RV = (RU * U + D * RV * V) // 2, (RU * V + RV * U) // 2
    return RU, RV


def unit_norm_one(D):
    """(U, V) with (U + V sqrt(D))/2 the smallest totally positive unit > 1
    of norm +1 (squares the fundamental unit if its norm is -1)."""
    U, V, s = fundamental_unit(D)
    if s == -1:
        U, V = (U * U + D * V * V) // 2, U * V
    return U, V


def _real_reduced(a, b, c, D, sq):
    return b > 0 and (sq - 2 * abs(a) < b < sq + 2 * abs(a)) and b < sq + 1 \
        and (b * b - D == 4 * a * c) and abs(b - sq) <= sq


def real_rho(f, D, sq):
    """The reduction/cycle step for indefinite forms."""
    a, b, c = f
    # r ≡ -b mod 2c, chosen in the reduction window for c
    ac = abs(c)
    if ac >= sq + 1:
        r = (-b) % (2 * ac)
        if r > ac:
            r -= 2 * ac
    else:
        r = (-b) % (2 * ac)
        while r > sq:
            r -= 2 * ac
        while r < sq - 2 * ac + 1:
            r += 2 * ac
    return (c, r, (r * r - D) // (4 * c))


def is_reduced_indef(f, sq):
    a, b, c = f
    if b <= 0:
        return False
    return abs(sq - 2 * abs(a)) < b <= sq if a != 0 else False


class NarrowClassGroup:
    """Narrow class group C(K) of a real quadratic field, D ≡ 1 mod 4 odd.

    Classes are rho-cycles of reduced indefinite forms; the canonical
    representative of a class is its lexicographically least cycle member.
    """

    def __init__(self, D):
        if not (D > 0 and D % 2 == 1 and is_fundamental_disc(D)):
            raise NotFundamental(f"{D} is not an odd fundamental disc > 0")
        self.D = D
        self.sq = isqrt(D)
        # enumerate reduced forms: 0 < b <= sq, b ≡ D mod 2, 4ac = b^2 - D < 0
        forms = set()
        for b in range(1, self.sq + 1):
            if (b - D) % 2:
                continue
            m = (b * b - D) // 4  # negative
            for a in _divisors_signed(m):
                c = m // a
                f = (a, b, c)
                if is_reduced_indef(f, self.sq):
                    if gcd(gcd(abs(a), b), abs(c)) == 1:
                        forms.add(f)
        cycles = []
        remaining = set(forms)
        while remaining:
            f0 = min(remaining)
            cyc = [f0]
            f = real_rho(f0, D, self.sq)
            while f != f0:
                assert f in remaining or f in cyc, f"rho left the reduced set: {f}"
                cyc.append(f)
                f = real_rho(f, D, self.sq)
            for f in cyc:
                remaining.discard(f)
            cycles.append(min(cyc))
        self._cycle_reps = {}
        for rep in cycles:
            cyc = [rep]
            f = real_rho(rep, D, self.sq)
            while f != rep:
                cyc.append(f)
                f = real_rho(f, D, self.sq)
            for f in cyc:
                self._cycle_reps[f] = rep
        self.classes = sorted(set(self._cycle_reps.values()))
        k = 1  # D odd
        self.identity = self.reduce_class((1, k, (k * k - D) // 4))
        U, V, s = fundamental_unit(D)
        self.unit = (U, V)
        self.unit_norm = s

    @property
    def h_narrow(self):
        return len(self.classes)

    def key(self, f):
        return f

    def reduce_class(self, f):
        a, b, c = f
        sq = self.sq
        # normalize until reduced, then take the cycle representative
        guard = 0
        while not is_reduced_indef((a, b, c), sq):
            a, b, c = real_rho((a, b, c), self.D, sq)
            guard += 1
            assert guard < 10000, "indefinite reduction did not terminate"
        return self._cycle_reps[(a, b, c)]

    def mul(self, f1, f2):
        return self.reduce_class(compose(f1, f2))

    def inv(self, f):
        a, b, c = f
        return self.reduce_class((a, -b, c))

    def span(self, gens):
        out = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in out:
                        out.add(y)
                        nxt.append(y)
            frontier = nxt
        return out

    def characters(self):
        return abelian_characters(self.classes, self.mul, self.identity)


def _divisors_signed(m):
    """All divisors a (positive and negative) of m < 0 with a != 0."""
    out = []
    n = abs(m)
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            out.extend([d, -d, n // d, -(n // d)])
    return sorted(set(out))


def imag_class_group(D):
    return ImagClassGroup(D)
