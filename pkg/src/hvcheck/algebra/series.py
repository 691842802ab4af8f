"""Truncated q-expansions over an exact coefficient ring, plus the Laurent
windows used when building modular polynomials.

QSeries is ring-agnostic: coefficients are whatever the supplied ring
context produces (ints, residues, cyclotomic tuples).  Binary operations
take the min of the truncation bounds; products truncate the convolution.
"""

from __future__ import annotations


class IntRing:
    """Plain integers (or ints mod m when m is given)."""

    def __init__(self, mod=None):
        self.mod = mod

    def red(self, a):
        return a % self.mod if self.mod else a

    def add(self, a, b):
        return (a + b) % self.mod if self.mod else a + b

    def sub(self, a, b):
        return (a - b) % self.mod if self.mod else a - b

    def mul(self, a, b):
        return (a * b) % self.mod if self.mod else a * b

    def neg(self, a):
        return (-a) % self.mod if self.mod else -a

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return self.red(n)

    def is_zero(self, a):
        return self.red(a) == 0


class QSeries:
    """sum_{n=0}^{B} a_n q^n with recorded truncation bound B (inclusive)."""

    __slots__ = ("ring", "coeffs", "bound")

    def __init__(self, ring, coeffs, bound=None):
        self.ring = ring
        coeffs = list(coeffs)
        if bound is None:
            bound = len(coeffs) - 1
        assert bound >= 0
        coeffs = coeffs[:bound + 1]
        coeffs += [ring.zero()] * (bound + 1 - len(coeffs))
        self.coeffs = coeffs
        self.bound = bound

    def __repr__(self):
        head = ", ".join(repr(c) for c in self.coeffs[:6])
        return f"QSeries([{head}, ...], B={self.bound})"

    def __eq__(self, other):
        B = min(self.bound, other.bound)
        return all(self.ring.is_zero(self.ring.sub(a, b))
                   for a, b in zip(self.coeffs[:B + 1], other.coeffs[:B + 1]))

    def a(self, n):
        assert 0 <= n <= self.bound, f"coefficient {n} beyond bound {self.bound}"
        return self.coeffs[n]

    def __add__(self, other):
        B = min(self.bound, other.bound)
        r = self.ring
        return QSeries(r, [r.add(a, b) for a, b in
                           zip(self.coeffs[:B + 1], other.coeffs[:B + 1])], B)

    def __sub__(self, other):
        B = min(self.bound, other.bound)
        r = self.ring
        return QSeries(r, [r.sub(a, b) for a, b in
                           zip(self.coeffs[:B + 1], other.coeffs[:B + 1])], B)

    def __mul__(self, other):
        B = min(self.bound, other.bound)
        r = self.ring
        out = [r.zero()] * (B + 1)
        for i, a in enumerate(self.coeffs[:B + 1]):
            if r.is_zero(a):
                continue
            for j in range(0, B + 1 - i):
                b = other.coeffs[j]
                if not r.is_zero(b):
                    out[i + j] = r.add(out[i + j], r.mul(a, b))
        return QSeries(r, out, B)

    def scale(self, c):
        r = self.ring
        return QSeries(r, [r.mul(r.red(c), a) for a in self.coeffs], self.bound)

    def map_ring(self, newring, f):
        return QSeries(newring, [f(a) for a in self.coeffs], self.bound)


class Laurent:
    """Finite-window Laurent series c_off q^off + ... + c_top q^top.

    Used only by the modular-polynomial generator; `top` is the last exponent
    the window knows exactly (inclusive).  Products intersect windows.
    """

    __slots__ = ("off", "coeffs")

    def __init__(self, off, coeffs):
        self.off = off
        self.coeffs = list(coeffs)

    @property
    def top(self):
        return self.off + len(self.coeffs) - 1

    def __repr__(self):
        return f"Laurent(off={self.off}, len={len(self.coeffs)})"

    def coeff(self, n):
        if self.off <= n <= self.top:
            return self.coeffs[n - self.off]
        assert n < self.off, f"exponent {n} beyond window top {self.top}"
        return 0

    def __add__(self, other):
        off = min(self.off, other.off)
        top = min(self.top, other.top)
        return Laurent(off, [self.coeff(n) + other.coeff(n)
                             for n in range(off, top + 1)])

    def __sub__(self, other):
        off = min(self.off, other.off)
        top = min(self.top, other.top)
        return Laurent(off, [self.coeff(n) - other.coeff(n)
                             for n in range(off, top + 1)])

    def __mul__(self, other):
        # valid through min(self.top + other.off, other.top + self.off)
        off = self.off + other.off
        top = min(self.top + other.off, other.top + self.off)
        out = [0] * (top - off + 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            ei = self.off + i
            jmax = top - ei
            for j, b in enumerate(other.coeffs):
                if other.off + j > jmax:
                    break
                if b:
                    out[ei + other.off + j - off] += a * b
        return Laurent(off, out)

    def scale(self, c):
        return Laurent(self.off, [c * a for a in self.coeffs])

    def shift(self, k):
        return Laurent(self.off + k, self.coeffs)

    def is_zero_window(self):
        return all(c == 0 for c in self.coeffs)
