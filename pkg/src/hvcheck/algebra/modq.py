"""Prime fields F_q, the quadratic extension F_{N^2}, and small extensions F_p[x]/(f).

Elements are plain ints (prime field) or coefficient tuples (extensions); the
field object certifies its defining data at construction and carries the
arithmetic.  Everything is exact and deterministic: element iteration and the
root multisets returned by :func:`poly_roots` are sorted lexicographically on
canonical residues.
"""

from __future__ import annotations

import numpy as np
from sympy import isprime

from ..errors import NotPrime


class Fp:
    """The prime field F_q. Elements are ints reduced to [0, q)."""

    def __init__(self, q):
        if not isprime(q):
            raise NotPrime(f"{q} is not prime")
        self.q = q
        self.char = q

    def __repr__(self):
        return f"Fp({self.q})"

    def __eq__(self, other):
        return isinstance(other, Fp) and self.q == other.q

    def red(self, a):
        return a % self.q

    def add(self, a, b):
        return (a + b) % self.q

    def sub(self, a, b):
        return (a - b) % self.q

    def mul(self, a, b):
        return (a * b) % self.q

    def neg(self, a):
        return (-a) % self.q

    def inv(self, a):
        return pow(a, -1, self.q)

    def pow(self, a, n):
        return pow(a, n, self.q)

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.q

    def is_zero(self, a):
        return a % self.q == 0

    def elements(self):
        return range(self.q)

    def sort_key(self, a):
        return a

    def is_square(self, a):
        a %= self.q
        return a == 0 or pow(a, (self.q - 1) // 2, self.q) == 1

    def legendre(self, a):
        """Quadratic character, 0 on 0."""
        a %= self.q
        if a == 0:
            return 0
        return 1 if pow(a, (self.q - 1) // 2, self.q) == 1 else -1


def smallest_nonresidue(q):
    for c in range(2, q):
        if pow(c, (q - 1) // 2, q) == q - 1:
            return c
    raise NotPrime(f"no quadratic non-residue mod {q}")


class Fq2:
    """F_{N^2} = F_N[theta]/(theta^2 - c), c the smallest non-residue mod N.

    Elements are pairs (a, b) meaning a + b*theta.  The non-residue is
    certified by Euler's criterion at construction.
    """

    def __init__(self, N):
        self.base = Fp(N)
        self.N = N
        self.c = smallest_nonresidue(N)
        assert pow(self.c, (N - 1) // 2, N) == N - 1

    def __repr__(self):
        return f"Fq2({self.N}; theta^2={self.c})"

    def __eq__(self, other):
        return isinstance(other, Fq2) and self.N == other.N

    def red(self, x):
        a, b = x
        return (a % self.N, b % self.N)

    def from_int(self, n):
        return (n % self.N, 0)

    def from_base(self, a):
        return (a % self.N, 0)

    def zero(self):
        return (0, 0)

    def one(self):
        return (1, 0)

    def theta(self):
        return (0, 1)

    def is_zero(self, x):
        return x[0] % self.N == 0 and x[1] % self.N == 0

    def add(self, x, y):
        return ((x[0] + y[0]) % self.N, (x[1] + y[1]) % self.N)

    def sub(self, x, y):
        return ((x[0] - y[0]) % self.N, (x[1] - y[1]) % self.N)

    def neg(self, x):
        return ((-x[0]) % self.N, (-x[1]) % self.N)

    def mul(self, x, y):
        a, b = x
        u, v = y
        return ((a * u + self.c * b * v) % self.N, (a * v + b * u) % self.N)

    def norm(self, x):
        # x * frob(x) = a^2 - c b^2 in F_N
        a, b = x
        return (a * a - self.c * b * b) % self.N

    def frob(self, x):
        """x -> x^N."""
        return (x[0] % self.N, (-x[1]) % self.N)

    def inv(self, x):
        n = self.norm(x)
        ninv = pow(n, -1, self.N)
        a, b = x
        return ((a * ninv) % self.N, (-b * ninv) % self.N)

    def pow(self, x, n):
        if n < 0:
            return self.pow(self.inv(x), -n)
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r

    def in_base(self, x):
        return x[1] % self.N == 0

    def elements(self):
        for a in range(self.N):
            for b in range(self.N):
                yield (a, b)

    def sort_key(self, x):
        return (x[0], x[1])

    def is_square(self, x):
        # chi_{F_{N^2}}(x) = legendre_{F_N}(Norm(x))
        if self.is_zero(x):
            return True
        return self.base.legendre(self.norm(x)) == 1


class GFext:
    """F_p[x]/(f) for a monic f without repeated factors; elements are tuples.

    Used to reduce cyclotomic integers modulo a prime above p; f is the
    residual factor picked by the declared root choice.
    """

    def __init__(self, p, modpoly):
        self.base = Fp(p)
        self.p = p
        f = [c % p for c in modpoly]
        assert f and f[-1] == 1, "modpoly must be monic"
        self.f = tuple(f)
        self.deg = len(f) - 1

    def __repr__(self):
        return f"GFext(p={self.p}, f={list(self.f)})"

    def red(self, coeffs):
        # reduce an arbitrary-degree poly mod f
        c = [x % self.p for x in coeffs]
        while len(c) > self.deg:
            top = c.pop()
            if top:
                for i in range(self.deg):
                    c[-self.deg + i] = (c[-self.deg + i] - top * self.f[i]) % self.p
        c += [0] * (self.deg - len(c))
        return tuple(c)

    def zero(self):
        return (0,) * self.deg

    def one(self):
        return self.red([1])

    def from_int(self, n):
        return self.red([n])

    def gen(self):
        return self.red([0, 1])

    def is_zero(self, x):
        return all(c % self.p == 0 for c in x)

    def add(self, x, y):
        return tuple((a + b) % self.p for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple((a - b) % self.p for a, b in zip(x, y))

    def neg(self, x):
        return tuple((-a) % self.p for a in x)

    def mul(self, x, y):
        prod = [0] * (2 * self.deg - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        return self.red(prod)

    def pow(self, x, n):
        r = self.one()
        while n:
            if n & 1:
                r = self.mul(r, x)
            x = self.mul(x, x)
            n >>= 1
        return r

    def inv(self, x):
        # F_{p^deg} is a field when f is irreducible; fall back on x^(q-2)
        q = self.p ** self.deg
        return self.pow(x, q - 2)

    def sort_key(self, x):
        return tuple(x)


def poly_eval(coeffs, x, field):
    """Horner evaluation; coeffs ascending degree."""
    acc = field.zero()
    for c in reversed(coeffs):
        acc = field.add(field.mul(acc, x), c)
    return acc


def _synth_div(coeffs, r, field):
    """Divide by (X - r); return (quotient, remainder)."""
    out = [field.zero()] * (len(coeffs) - 1)
    acc = field.zero()
    for i in range(len(coeffs) - 1, -1, -1):
        acc = field.add(coeffs[i], field.mul(acc, r))
        if i > 0:
            out[i - 1] = acc
    return out, acc


def _fp_root_candidates(coeffs, field):
    q = field.q
    cs = np.array([c % q for c in coeffs], dtype=np.int64)
    xs = np.arange(q, dtype=np.int64)
    acc = np.zeros(q, dtype=np.int64)
    for c in cs[::-1]:
        acc = (acc * xs + c) % q
    return [int(x) for x in np.nonzero(acc == 0)[0]]


def _fq2_root_candidates(coeffs, field):
    N = field.N
    c = field.c
    a = np.repeat(np.arange(N, dtype=np.int64), N)
    b = np.tile(np.arange(N, dtype=np.int64), N)
    ra = np.zeros(N * N, dtype=np.int64)
    rb = np.zeros(N * N, dtype=np.int64)
    for ca, cb in [field.red(x) for x in coeffs][::-1]:
        # (ra + rb*t)(a + b*t) + coeff
        na = (ra * a + c * rb * b + ca) % N
        rb = (ra * b + rb * a + cb) % N
        ra = na
    hits = np.nonzero((ra == 0) & (rb == 0))[0]
    return [(int(a[i]), int(b[i])) for i in hits]


def poly_roots(coeffs, field):
    """All roots in `field` with multiplicity, sorted on canonical residues.

    coeffs is ascending degree over `field`.  Returns a list of
    (root, multiplicity).  Exhaustive-evaluation search (vectorized), then
    multiplicity by synthetic division; exact throughout.
    """
    coeffs = list(coeffs)
    while coeffs and field.is_zero(coeffs[-1]):
        coeffs.pop()
    if len(coeffs) <= 1:
        return []
    if isinstance(field, Fp):
        cands = _fp_root_candidates(coeffs, field)
    elif isinstance(field, Fq2):
        cands = _fq2_root_candidates(coeffs, field)
    else:
        cands = [x for x in field.elements()
                 if field.is_zero(poly_eval(coeffs, x, field))]
    out = []
    for r in sorted(cands, key=field.sort_key):
        mult = 0
        cur = coeffs
        while True:
            quot, rem = _synth_div(cur, r, field)
            if not field.is_zero(rem):
                break
            mult += 1
            cur = quot
            if len(cur) <= 1:
                break
        assert mult >= 1
        out.append((r, mult))
    return out
