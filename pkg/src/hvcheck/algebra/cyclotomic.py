"""Cyclotomic integers Z[zeta_m] in the power basis.

Values of class-group and ray-class characters, coefficients of theta
series and of the traced form all live here.  Reduction modulo a prime
above p goes through a declared root of the m-th cyclotomic polynomial in
an extension of F_p; the root choice is recorded by callers in run reports.
"""

from __future__ import annotations

from math import gcd

from sympy import primerange

from .modq import Fp, GFext, poly_roots


def cyclotomic_poly(m):
    """Coefficients of Phi_m, ascending, by exact division of X^m - 1."""
    # divide X^m - 1 by all Phi_d, d | m, d < m (computed recursively)
    f = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            g = cyclotomic_poly(d)
            f = _exact_div(f, g)
    return f


def _exact_div(f, g):
    f = list(f)
    out = [0] * (len(f) - len(g) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = f[i + len(g) - 1] // g[-1]
        out[i] = c
        if c:
            for j, b in enumerate(g):
                f[i + j] -= c * b
    assert all(x == 0 for x in f)
    return out


class CycRing:
    """Z[zeta_m]; elements are tuples of phi(m) ints (power basis)."""

    def __init__(self, m):
        self.m = m
        self.phi = cyclotomic_poly(m)
        self.deg = len(self.phi) - 1
        # zeta^k in the power basis, for all k mod m
        pows = []
        cur = [1] + [0] * (self.deg - 1)
        for _ in range(m):
            pows.append(tuple(cur))
            cur = self._shift(cur)
        self.zeta_pows = pows

    def __repr__(self):
        return f"CycRing(zeta_{self.m})"

    def _shift(self, c):
        # multiply by zeta
        out = [0] + list(c)
        top = out.pop()
        if top:
            for i in range(self.deg):
                out[i] -= top * self.phi[i]
        return out

    def zero(self):
        return (0,) * self.deg

    def one(self):
        return tuple([1] + [0] * (self.deg - 1))

    def from_int(self, n):
        return tuple([n] + [0] * (self.deg - 1))

    def zeta(self, k=1):
        return self.zeta_pows[k % self.m]

    def add(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def sub(self, x, y):
        return tuple(a - b for a, b in zip(x, y))

    def neg(self, x):
        return tuple(-a for a in x)

    def scal(self, c, x):
        return tuple(c * a for a in x)

    def mul(self, x, y):
        prod = [0] * (2 * self.deg - 1) if self.deg > 1 else [0]
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    prod[i + j] += a * b
        # reduce mod Phi_m
        while len(prod) > self.deg:
            top = prod.pop()
            if top:
                for i in range(self.deg):
                    prod[-self.deg + i] -= top * self.phi[i]
        prod += [0] * (self.deg - len(prod))
        return tuple(prod)

    def is_zero(self, x):
        return all(a == 0 for a in x)

    def conj(self, x):
        """Complex conjugation zeta -> zeta^{-1}."""
        out = self.zero()
        for k, a in enumerate(x):
            if a:
                out = self.add(out, self.scal(a, self.zeta_pows[(-k) % self.m]))
        return out

    def abs_square(self, x):
        return self.mul(x, self.conj(x))

    def as_rational_int(self, x):
        """Return n if x = n * 1, else None."""
        if all(a == 0 for a in x[1:]):
            return x[0]
        return None

    def embed_complex(self, x, mp):
        """Complex value at zeta = exp(2 pi i / m) with mpmath context mp."""
        z = mp.mpc(0)
        for k, a in enumerate(x):
            if a:
                z += a * mp.expjpi(mp.mpf(2 * k) / self.m)
        return z

    def residue_field(self, p, root_index=0):
        """(GFext, reduction map) modulo a prime above p, p coprime to m.

        The residue field is F_p[x]/(h) for an irreducible factor h of Phi_m
        mod p; `root_index` selects the factor deterministically (factors
        sorted by coefficient tuples).  Requires p not dividing m.
        """
        assert gcd(p, self.m) == 1
        fp = Fp(p)
        factors = _factor_cyclotomic_mod_p(self.phi, self.m, p)
        h = factors[root_index % len(factors)]
        F = GFext(p, h)
        xbar = F.gen()

        def reduce(x):
            acc = F.zero()
            pw = F.one()
            for a in x:
                if a % p:
                    acc = F.add(acc, F.mul(F.from_int(a), pw))
                pw = F.mul(pw, xbar)
            return acc

        return F, reduce, h


def _factor_cyclotomic_mod_p(phi, m, p):
    """Irreducible factors of Phi_m mod p, each of degree ord_m(p)."""
    fp = Fp(p)
    d = 1
    while pow(p, d, m) != 1:
        d += 1
    if d == 1:
        roots = poly_roots([c % p for c in phi], fp)
        return sorted([[(-r) % p, 1] for r, _ in roots])
    # roots of Phi_m live in F_{p^d}; build factors by orbit products over
    # a root zeta found in F_p[x]/(irreducible seed of degree d)
    seed = _find_irreducible(p, d)
    F = GFext(p, seed)
    zeta = _element_of_order(F, m, p, d)
    factors = []
    seen = set()
    for k in range(m):
        if gcd(k, m) != 1 or k in seen:
            continue
        orbit = []
        j = k
        while True:
            orbit.append(j)
            seen.add(j)
            j = (j * p) % m
            if j == k:
                break
        # product of (X - zeta^j) over the orbit, coefficients in F_p
        poly = [F.one()]
        for j in orbit:
            zj = F.pow(zeta, j)
            new = [F.zero()] * (len(poly) + 1)
            for i, c in enumerate(poly):
                new[i + 1] = F.add(new[i + 1], c)
                new[i] = F.sub(new[i], F.mul(c, zj))
            poly = new
        coeffs = []
        for c in poly:
            assert all(x == 0 for x in c[1:]), "orbit product not rational"
            coeffs.append(c[0] % p)
        factors.append(coeffs)
    return sorted(factors)


def _find_irreducible(p, d):
    """Smallest monic irreducible of degree d over F_p (lexicographic scan)."""
    fp = Fp(p)
    from itertools import product as iproduct
    for tail in iproduct(range(p), repeat=d):
        f = list(tail) + [1]
        if _is_irreducible(f, p, d):
            return f
    raise RuntimeError("unreachable")


def _is_irreducible(f, p, d):
    """x^(p^k) == x tests via repeated Frobenius in F_p[x]/(f)."""
    F = GFext(p, f)
    x = F.gen()
    fr = x
    for _ in range(d):
        fr = F.pow(fr, p)
    if fr != x:
        return False
    for e in _prime_divisors(d):
        fr = x
        for _ in range(d // e):
            fr = F.pow(fr, p)
        if fr == x:
            return False
    return True


def _prime_divisors(n):
    return [q for q in primerange(2, n + 1) if n % q == 0]


def _element_of_order(F, m, p, d):
    """An element of multiplicative order m in F = F_{p^d}, deterministic."""
    q = p ** d
    assert (q - 1) % m == 0
    cof = (q - 1) // m
    # scan field elements in lexicographic order
    from itertools import product as iproduct
    for tup in iproduct(range(p), repeat=F.deg):
        if all(t == 0 for t in tup):
            continue
        z = F.pow(tuple(tup), cof)
        if _mult_order(F, z, m) == m:
            return z
    raise RuntimeError("no element of the requested order")


def _mult_order(F, z, m):
    k = 1
    acc = z
    while acc != F.one():
        acc = F.mul(acc, z)
        k += 1
        if k > m:
            return -1
    return k
