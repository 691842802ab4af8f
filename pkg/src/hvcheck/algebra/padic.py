"""Truncated p-adics and the local ring O = Z_p[pi]/(P) at working precision.

P is a distinguished (here: Eisenstein) monic polynomial, so O is a discrete
valuation ring with uniformizer pi and v_pi(p) = deg P.  Elements are stored
in the power basis 1, pi, ..., pi^{g-1} with coefficients mod p^K; since the
monomials p^j pi^i (i < g) have pairwise distinct valuations g*j + i, the
valuation of an element is read off the coefficient valuations exactly,
up to the precision floor g*K.
"""

from __future__ import annotations

from ..errors import PrecisionExhausted
from .linalg import poly_trim


class PadicTrunc:
    """An element of Z/p^K with its precision carried along."""

    __slots__ = ("p", "K", "value")

    def __init__(self, p, K, value):
        self.p = p
        self.K = K
        self.value = value % (p ** K)

    def __repr__(self):
        return f"{self.value} + O({self.p}^{self.K})"

    def _check(self, other):
        assert self.p == other.p
        return min(self.K, other.K)

    def __add__(self, other):
        K = self._check(other)
        return PadicTrunc(self.p, K, self.value + other.value)

    def __sub__(self, other):
        K = self._check(other)
        return PadicTrunc(self.p, K, self.value - other.value)

    def __mul__(self, other):
        K = self._check(other)
        return PadicTrunc(self.p, K, self.value * other.value)

    def __eq__(self, other):
        K = self._check(other)
        return (self.value - other.value) % self.p ** K == 0

    def valuation(self):
        if self.value == 0:
            return self.K
        v, x = 0, self.value
        while x % self.p == 0:
            x //= self.p
            v += 1
        return v

    def unit_part(self):
        v = self.valuation()
        if v >= self.K:
            raise PrecisionExhausted("no unit part at this precision")
        return PadicTrunc(self.p, self.K - v, self.value // self.p ** v)

    def inverse(self):
        if self.valuation() > 0:
            raise PrecisionExhausted("inverting a non-unit")
        return PadicTrunc(self.p, self.K, pow(self.value, -1, self.p ** self.K))


def pval(a, p, cap):
    """Valuation of the residue a mod p^cap (cap when a == 0)."""
    if a % p ** cap == 0:
        return cap
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


class LocalO:
    """O = (Z/p^K)[pi]/(P(pi)) for monic Eisenstein P of degree g.

    Elements are tuples of g ints mod p^K.  Valuations are exact below the
    floor g*K; comparisons and divisions that would need more precision
    raise PrecisionExhausted.
    """

    def __init__(self, P, p, K):
        assert K >= 2, "eigenvector computations need K >= 2"
        self.p = p
        self.K = K
        self.mod = p ** K
        P = [c % self.mod for c in P]
        assert P[-1] == 1, "P must be monic"
        self.P = P
        self.g = len(P) - 1
        for c in P[:-1]:
            assert c % p == 0, "P must be distinguished"
        assert P[0] % p ** 2 != 0 or self.g == 0, \
            "P must be Eisenstein (v_p(P(0)) = 1) for O to be a DVR"
        self.prec = self.g * K  # pi-adic precision floor

    def __repr__(self):
        return f"LocalO(p={self.p}, K={self.K}, P={self.P})"

    def zero(self):
        return (0,) * self.g

    def one(self):
        return tuple([1] + [0] * (self.g - 1))

    def pi(self):
        if self.g == 1:
            return ((-self.P[0]) % self.mod,)
        return tuple([0, 1] + [0] * (self.g - 2))

    def from_int(self, n):
        return tuple([n % self.mod] + [0] * (self.g - 1))

    def from_coeffs(self, cs):
        cs = [c % self.mod for c in cs]
        while len(cs) > self.g:
            top = cs.pop()
            if top:
                for i in range(self.g):
                    cs[-self.g + i] = (cs[-self.g + i] - top * self.P[i]) % self.mod
        cs += [0] * (self.g - len(cs))
        return tuple(cs)

    def add(self, x, y):
        return tuple((a + b) % self.mod for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple((a - b) % self.mod for a, b in zip(x, y))

    def neg(self, x):
        return tuple((-a) % self.mod for a in x)

    def scal(self, c, x):
        return tuple((c * a) % self.mod for a in x)

    def mul(self, x, y):
        prod = [0] * (2 * self.g - 1) if self.g > 1 else [0]
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        return self.from_coeffs(prod)

    def is_zero(self, x):
        return all(a % self.mod == 0 for a in x)

    def pow(self, x, n):
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r

    def poly_eval(self, f, x):
        """f(x) for an ascending int-coefficient polynomial."""
        acc = self.zero()
        for c in reversed(f):
            acc = self.add(self.mul(acc, x), self.from_int(c))
        return acc

    def valuation(self, x):
        """v_pi(x), exact below the precision floor g*K."""
        v = self.prec
        for i, c in enumerate(x):
            vc = pval(c, self.p, self.K)
            if vc < self.K:
                v = min(v, self.g * vc + i)
        return v

    def unit_mul_pi_power(self, x, v):
        """Write x = pi^v * u and return u; requires v_pi(x) >= v.

        Division by pi uses pi^{-1} * P(0)-relation: a0/pi =
        -(a0/P0) * (pi^{g-1} + sum_{i>=1} P_i pi^{i-1}).  Each division by pi
        costs one guaranteed digit of precision at the top; here we only
        track the global floor and raise when exhausted.
        """
        if self.valuation(x) < v:
            raise PrecisionExhausted(f"element has valuation < {v}")
        p = self.p
        for _ in range(v):
            a0 = x[0]
            rest = list(x[1:]) + [0]
            if a0 % self.mod != 0:
                # a0 must be divisible by p (valuation >= 1 overall)
                assert a0 % p == 0
                c = (a0 // p) * pow(self.P[0] // p, -1, self.mod) % self.mod
                corr = [0] * self.g
                for i in range(1, self.g):
                    corr[i - 1] = (-c * self.P[i]) % self.mod
                corr[self.g - 1] = (corr[self.g - 1] - c) % self.mod
                x = tuple((r + s) % self.mod for r, s in zip(rest, corr))
            else:
                x = tuple(rest)
        return x

    def congruent_mod_pi(self, x, y, k=1):
        """x ≡ y mod pi^k."""
        return self.valuation(self.sub(x, y)) >= k

    def reduce_mod_pi(self, x):
        """Image in the residue field O/pi = F_p."""
        return x[0] % self.p

    def deriv(self, f=None):
        """P'(pi) as an element of O (or f'(x) for supplied f)."""
        f = self.P if f is None else f
        dcoeffs = [(i * c) for i, c in enumerate(f)][1:]
        return self.from_coeffs(dcoeffs)

    def trace_ratio_series(self, length):
        """b_j with Tr(pi^{g-1+j} / P'(pi)) = b_j, via the 1/X expansion.

        1/P(X) = X^{-g} * (1 + sum_{i<g} P_i X^{i-g})^{-1}; the coefficient
        series of the inverse in X^{-1} gives exactly the traces, starting
        b_0 = 1 at exponent g-1.
        """
        mod = self.mod
        # Ptilde(Y) = 1 + P_{g-1} Y + ... + P_0 Y^g, Y = 1/X
        pt = [1] + [self.P[self.g - 1 - i] % mod for i in range(self.g)]
        # invert as a power series mod Y^length
        inv = [1]
        while len(inv) < length:
            n = min(2 * len(inv), length)
            prod = [0] * n
            for i, a in enumerate(inv):
                if a:
                    for j, b in enumerate(pt[:n - i]):
                        prod[i + j] = (prod[i + j] + a * b) % mod
            err = [(-c) % mod for c in prod]
            err[0] = (1 + err[0]) % mod
            corr = [0] * n
            for i, a in enumerate(inv):
                if a:
                    for j, b in enumerate(err[:n - i]):
                        corr[i + j] = (corr[i + j] + a * b) % mod
            inv = [(a + b) % mod for a, b in
                   zip(inv + [0] * (n - len(inv)), corr)]
        return inv[:length]

    def trace_power_ratio(self, i):
        """Tr_{L/Qp}(pi^i / P'(pi)) for 0 <= i, as an int mod p^K."""
        if i < self.g - 1:
            return 0
        return self.trace_ratio_series(i - self.g + 2)[i - self.g + 1] % self.mod
