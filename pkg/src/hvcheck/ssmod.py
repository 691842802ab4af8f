"""The supersingular module Z[S] at a prime N.

Enumeration goes through the Legendre-Hasse polynomial
H(x) = sum_i binom(m,i)^2 x^i, m = (N-1)/2, whose roots in F_{N^2} are the
supersingular Legendre parameters; every class is then certified by exact
point counting (trace of Frobenius ≡ 0 mod N) and the whole list by the
Eichler mass identity sum 1/w_E = (N-1)/12.  Hecke operators come from
root multiplicities of the table-backed modular polynomials, guarded by
the column-sum certificate; W_N is the signed Frobenius permutation, and
T_0 is the rescaled Eisenstein projector.

Gross points: roots of H_D mod N (N inert) inside the basis, with class
labels pinned by root multiplicities, the Frobenius twist and Phi_ell
adjacency; the leftover translation/conjugation torsor is recorded as an
orientation, never guessed.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from sympy import isprime
from sympy.functions.combinatorial.numbers import kronecker_symbol

from .algebra.modq import Fp, Fq2, poly_roots, _synth_div
from .algebra.linalg import mat_mul, identity, mat_scal, mat_add
from .errors import (BasisMismatch, NoModularPolynomial, NotInert,
                     CharacterOrderMismatch, TheoremViolation)
from . import modpoly
from .cm import hilbert_class_poly


class SupersingularBasis:
    def __init__(self, N, js, weights, field):
        self.N = N
        self.field = field
        self.js = js                    # sorted F_{N^2} elements
        self.weights = weights          # parallel list, values in {1,2,3}
        self.index = {j: i for i, j in enumerate(js)}
        self.n = len(js)

    def __repr__(self):
        return f"SupersingularBasis(N={self.N}, n={self.n})"

    def mass(self):
        return sum(Fraction(1, w) for w in self.weights)


def _curve_coeffs(j, F):
    """A Weierstrass curve y^2 = x^3 + ax + b with the given j-invariant."""
    if F.is_zero(j):
        return F.zero(), F.one()
    j1728 = F.from_int(1728)
    if F.is_zero(F.sub(j, j1728)):
        return F.one(), F.zero()
    t = F.mul(j, F.sub(j1728, j))        # j(1728-j)
    a = F.mul(F.from_int(3), t)
    b = F.mul(F.from_int(2), F.mul(t, F.sub(j1728, j)))
    return a, b


def _trace_frobenius(j, F):
    """Trace of Frobenius of a curve with invariant j over its field of
    definition (F_N if j is rational, else F_{N^2}), by exact counting."""
    N = F.N
    leg = np.zeros(N, dtype=np.int64)
    xs = np.arange(N, dtype=np.int64)
    sq = np.unique((xs * xs) % N)
    leg[:] = -1
    leg[sq] = 1
    leg[0] = 0
    a, b = _curve_coeffs(j, F)
    if F.in_base(j):
        aa, bb = a[0], b[0]
        f = (xs * xs % N * xs + aa * xs + bb) % N
        count = int(1 + N + leg[f].sum())
        return N + 1 - count
    c = F.c
    x0 = np.repeat(xs, N)
    x1 = np.tile(xs, N)
    # (x0 + x1 th)^2 = x0^2 + c x1^2 + 2 x0 x1 th ; then * (x0 + x1 th)
    s0 = (x0 * x0 + c * x1 * x1) % N
    s1 = (2 * x0 * x1) % N
    t0 = (s0 * x0 + c * s1 * x1) % N
    t1 = (s0 * x1 + s1 * x0) % N
    f0 = (t0 + a[0] * x0 + c * a[1] * x1 + b[0]) % N
    f1 = (t1 + a[0] * x1 + a[1] * x0 + b[1]) % N
    # quadratic character of F_{N^2} via the norm
    nrm = (f0 * f0 - c * f1 * f1) % N
    count = int(1 + N * N + leg[nrm].sum())
    return N * N + 1 - count


def enumerate_supersingular(N):
    """Complete supersingular basis at N >= 5 prime, fully certified."""
    assert isprime(N) and N >= 5
    F = Fq2(N)
    m = (N - 1) // 2
    H = [0] * (m + 1)
    binom = 1
    for i in range(m + 1):
        H[i] = (binom * binom) % N
        binom = binom * (m - i) * pow(i + 1, -1, N) % N
    lam_roots = poly_roots([F.from_int(c) for c in H], F)
    js = set()
    for lam, _ in lam_roots:
        l2 = F.mul(lam, lam)
        num = F.sub(F.add(l2, F.one()), lam)           # lam^2 - lam + 1
        num3 = F.mul(F.mul(num, num), num)
        den = F.mul(l2, F.mul(F.sub(lam, F.one()), F.sub(lam, F.one())))
        assert not F.is_zero(den), "degenerate Legendre parameter"
        js.add(F.mul(F.from_int(256), F.mul(num3, F.inv(den))))
    js = sorted(js, key=F.sort_key)
    weights = []
    for j in js:
        if F.is_zero(j):
            weights.append(3)
        elif F.is_zero(F.sub(j, F.from_int(1728))):
            weights.append(2)
        else:
            weights.append(1)
        t = _trace_frobenius(j, F)
        assert t % N == 0, f"point count refutes supersingularity of {j}"
    basis = SupersingularBasis(N, js, weights, F)
    assert basis.mass() == Fraction(N - 1, 12), "Eichler mass certificate failed"
    if N % 3 == 2:
        assert F.zero() in basis.index
    if N % 4 == 3:
        assert F.from_int(1728) in basis.index
    return basis


def hecke_Tl(basis, ell):
    """Integer matrix of T_ell, (T)_{E',E} = #{ell-isogenies E -> E'}.

    Columns indexed by source E; column sums are certified to be ell+1.
    """
    if ell == basis.N:
        return mat_scal(-1, atkin_lehner_WN(basis))
    if ell not in modpoly.SUPPORTED:
        raise NoModularPolynomial(f"ell={ell}")
    F = basis.field
    n = basis.n
    T = [[0] * n for _ in range(n)]
    for col, j in enumerate(basis.js):
        poly = modpoly.phi_y_poly(ell, j, F)
        total = 0
        for row, jp in enumerate(basis.js):
            mult = 0
            cur = poly
            while len(cur) > 1:
                quot, rem = _synth_div(cur, jp, F)
                if not F.is_zero(rem):
                    break
                mult += 1
                cur = quot
            T[row][col] = mult
            total += mult
        if total != ell + 1:
            raise TheoremViolation(
                f"column sum {total} != {ell + 1} at N={basis.N}, ell={ell}",
                witness={"j": j})
    return T


def atkin_lehner_WN(basis):
    """[E] -> -[E^(N)] as a signed permutation matrix."""
    F = basis.field
    n = basis.n
    W = [[0] * n for _ in range(n)]
    for col, j in enumerate(basis.js):
        row = basis.index[F.frob(j)]
        W[row][col] = -1
    return W


class HeckeTables:
    """Cache of T_n on a fixed basis, built multiplicatively from T_ell."""

    def __init__(self, basis):
        self.basis = basis
        self._prime = {}
        self._cache = {1: identity(basis.n)}

    def T_prime(self, ell):
        if ell not in self._prime:
            self._prime[ell] = hecke_Tl(self.basis, ell)
        return self._prime[ell]

    def T(self, n):
        if n in self._cache:
            return self._cache[n]
        N = self.basis.N
        # factor n
        m, fac = n, {}
        d = 2
        while d * d <= m:
            while m % d == 0:
                fac[d] = fac.get(d, 0) + 1
                m //= d
            d += 1
        if m > 1:
            fac[m] = fac.get(m, 0) + 1
        if len(fac) > 1:
            out = identity(self.basis.n)
            for q, e in fac.items():
                out = mat_mul(out, self.T(q ** e))
            self._cache[n] = out
            return out
        (q, e), = fac.items()
        if q == N:
            out = self.T_prime(N)
            for _ in range(e - 1):
                out = mat_mul(out, self.T_prime(N))
            self._cache[n] = out
            return out
        if e == 1:
            out = self.T_prime(q)
        else:
            tq = self.T_prime(q)
            out = mat_add(mat_mul(tq, self.T(q ** (e - 1))),
                          mat_scal(-q, self.T(q ** (e - 2))))
        self._cache[n] = out
        return out


def sigma0_fraction(basis):
    return [Fraction(1, w) for w in basis.weights]


def sigma0_mod(basis, mod):
    return [pow(w, -1, mod) for w in basis.weights]


def ss_pairing(basis, x, y):
    """<x, y> = sum w_E x_E y_E; exact in whatever ring the entries live."""
    if len(x) != basis.n or len(y) != basis.n:
        raise BasisMismatch("vector length does not match basis")
    return sum(w * a * b for w, a, b in zip(basis.weights, x, y))


def deg(x):
    return sum(x)


def T0_fraction(basis):
    """Emerton element: kills the cuspidal part, acts on Sigma_0 by
    (N-1)/gcd(N-1,12).  Entries lie in Z[1/6] (checked)."""
    g12 = math.gcd(basis.N - 1, 12)
    s0 = sigma0_fraction(basis)
    scale = Fraction(12, g12)
    T0 = [[scale * s0[i] for _ in range(basis.n)] for i in range(basis.n)]
    for row in T0:
        for a in row:
            assert a.denominator in (1, 2, 3, 6), "T0 not integral on Z[S][1/6]"
    return T0


def T0_mod(basis, mod):
    g12 = math.gcd(basis.N - 1, 12)
    s0 = sigma0_mod(basis, mod)
    scale = 12 * pow(g12, -1, mod) % mod
    return [[scale * s0[i] % mod for _ in range(basis.n)] for i in range(basis.n)]


# ---------------------------------------------------------------- Gross points

class GrossPointSet:
    def __init__(self, D, N, class_group, labels, orientation):
        self.D = D
        self.N = N
        self.class_group = class_group
        self.labels = labels            # dict class-key -> basis index
        self.orientation = orientation  # record of all residual choices

    def multiplicity(self, basis_index):
        return sum(1 for v in self.labels.values() if v == basis_index)


def gross_points(D, N, basis, cache_dir=None):
    """Label the roots of H_D mod N by ideal classes of Cl(K).

    Constraints used: root multiplicities, Frobenius (j -> j^N realizes
    I -> c·I^{-1} for one global class c), and Phi_ell adjacency for split
    generators.  The surviving ambiguity is a translation (character value)
    and possibly a global conjugation; both are recorded.
    """
    from .dihedral import imag_class_group
    if D >= 0 or D % 2 == 0:
        raise NotInert(f"D={D} must be negative and odd here")
    if math.gcd(D, N) != 1 or kronecker_symbol(D, N) != -1:
        raise NotInert(f"N={N} is not inert in Q(sqrt({D}))")
    F = basis.field
    H = hilbert_class_poly(D, cache_dir=cache_dir)
    roots = poly_roots([F.from_int(c) for c in H], F)
    G = imag_class_group(D)
    h = len(G.classes)
    assert sum(m for _, m in roots) == h, "H_D root count != class number"
    for r, _ in roots:
        if r not in basis.index:
            raise TheoremViolation("H_D root is not supersingular",
                                   witness={"root": r})
    # split generators with Phi tables
    gens = []
    acc = {G.identity}
    for ell in modpoly.SUPPORTED:
        if kronecker_symbol(D, ell) == 1:
            gcls = G.prime_class(ell)
            if gcls in acc:
                continue
            gens.append((ell, gcls))
            acc = G.span([g for _, g in gens])
            if len(acc) == h:
                break
    if len(acc) != h:
        raise TheoremViolation("class group not generated by split ell <= 13",
                               witness={"D": D})
    adjacency = {}
    rootset = [r for r, _ in roots]
    for ell, _ in gens:
        pairs = set()
        for r in rootset:
            poly = modpoly.phi_y_poly(ell, r, F)
            for r2 in rootset:
                from .algebra.modq import poly_eval
                if F.is_zero(poly_eval(poly, r2, F)):
                    pairs.add((r, r2))
        adjacency[ell] = pairs
    # BFS order over the class group using the generators
    order = [G.identity]
    parent = {}
    seen = {G.identity}
    qi = 0
    while qi < len(order):
        cur = order[qi]
        qi += 1
        for ell, gcls in gens:
            nxt = G.mul(cur, gcls)
            if nxt not in seen:
                seen.add(nxt)
                parent[nxt] = (cur, ell)
                order.append(nxt)
    budget0 = {r: m for r, m in roots}
    solutions = []

    def backtrack(i, assign, budget):
        if i == len(order):
            # full adjacency check on every generator edge
            for ell, gcls in gens:
                for c in order:
                    if (assign[c], assign[G.mul(c, gcls)]) not in adjacency[ell]:
                        return
            # Frobenius: exists c0 with assign(c0 * I^{-1}) = frob(assign(I))
            for c0 in G.classes:
                if all(assign[G.mul(c0, G.inv(I))] == F.frob(assign[I])
                       for I in order):
                    solutions.append(dict(assign))
                    return
            return
        cls = order[i]
        cands = rootset if cls == G.identity else [
            r2 for r2 in rootset
            if (assign[parent[cls][0]], r2) in adjacency[parent[cls][1]]]
        for r in cands:
            if budget[r] == 0:
                continue
            assign[cls] = r
            budget[r] -= 1
            backtrack(i + 1, assign, budget)
            budget[r] += 1
            del assign[cls]

    backtrack(0, {}, dict(budget0))
    if not solutions:
        raise TheoremViolation("no consistent Gross-point labeling",
                               witness={"D": D, "N": N})
    solutions.sort(key=lambda a: tuple(F.sort_key(a[c]) for c in order))
    chosen = solutions[0]
    orientation = {
        "base_root": F.sort_key(chosen[G.identity]),
        "generators": [(ell, G.key(g)) for ell, g in gens],
        "n_solutions": len(solutions),
        "torsor_ambiguity": "translation x conjugation (recorded, not fixed)",
    }
    labels = {G.key(c): basis.index[r] for c, r in chosen.items()}
    return GrossPointSet(D, N, G, labels, orientation)


def chi_vector(points, chi, ring):
    """[chi] = sum_I chi^{-1}(I) [E_I] over the cyclotomic ring `ring`.

    chi maps class keys to ring elements; multiplicativity is the caller's
    responsibility (checked for order consistency here)."""
    G = points.class_group
    n_basis = max(points.labels.values()) + 1
    out = [ring.zero() for _ in range(n_basis)]
    for c in G.classes:
        key = G.key(c)
        val = chi(key)
        inv_val = chi(G.key(G.inv(c)))
        if not ring.is_zero(ring.sub(ring.mul(val, inv_val), ring.one())):
            raise CharacterOrderMismatch("chi(I) chi(I^-1) != 1")
        idx = points.labels[key]
        out[idx] = ring.add(out[idx], inv_val)
    return out
