"""Exact dense linear algebra over F_p, Z/p^K, Q and small finite fields.

Z/p^K systems are put in Smith form by full pivoting on minimal-valuation
entries; row and column transforms are exact ring operations, so solutions
and kernel bases are exact modulo p^K.  Generic-field elimination covers
F_N, F_{N^2} and cyclotomic residue fields through the field-context
interface of :mod:`hvcheck.algebra.modq`.  Characteristic polynomials use
Berkowitz's division-free algorithm, valid over any coefficient ring.
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import InconsistentSystem, PrecisionExhausted


def _val(a, p, K):
    """p-adic valuation of the residue class a mod p^K (K if a == 0)."""
    if a == 0:
        return K
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return min(v, K)


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(A, B, mod=None):
    n, k, m = len(A), len(B), len(B[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        oi = out[i]
        for t in range(k):
            a = Ai[t]
            if a == 0:
                continue
            Bt = B[t]
            for j in range(m):
                oi[j] += a * Bt[j]
        if mod is not None:
            for j in range(m):
                oi[j] %= mod
    return out


def mat_vec(A, v, mod=None):
    out = []
    for row in A:
        s = sum(a * x for a, x in zip(row, v))
        out.append(s % mod if mod is not None else s)
    return out


def mat_add(A, B, mod=None):
    n, m = len(A), len(A[0])
    return [[(A[i][j] + B[i][j]) % mod if mod else A[i][j] + B[i][j]
             for j in range(m)] for i in range(n)]


def mat_scal(c, A, mod=None):
    return [[(c * a) % mod if mod else c * a for a in row] for row in A]


def transpose(A):
    return [list(col) for col in zip(*A)]


class SmithSystem:
    """Smith-diagonalization of an integer matrix modulo p^K.

    Produces U M V = D with D = diag(p^{v_1}, ..., p^{v_r}, 0, ...), where
    only the column transform V is retained (kernels and solution sets live
    in column space).  Pivots are chosen with minimal p-valuation, as the
    local ring requires.
    """

    def __init__(self, M, p, K):
        self.p = p
        self.K = K
        self.mod = p ** K
        self.nrows = len(M)
        self.ncols = len(M[0]) if M else 0
        A = [[a % self.mod for a in row] for row in M]
        n, m, mod = self.nrows, self.ncols, self.mod
        V = identity(m)
        diag = []
        k = 0
        while k < min(n, m):
            best = None
            for i in range(k, n):
                for j in range(k, m):
                    if A[i][j] != 0:
                        v = _val(A[i][j], p, K)
                        if best is None or v < best[0]:
                            best = (v, i, j)
                            if v == 0:
                                break
                if best and best[0] == 0:
                    break
            if best is None:
                break
            v, pi, pj = best
            if pi != k:
                A[k], A[pi] = A[pi], A[k]
            if pj != k:
                for row in A:
                    row[k], row[pj] = row[pj], row[k]
                for row in V:
                    row[k], row[pj] = row[pj], row[k]
            piv = A[k][k]
            u = piv // (p ** v)
            uinv = pow(u, -1, mod)
            A[k] = [(uinv * a) % mod for a in A[k]]
            pk = p ** v
            for i in range(n):
                if i == k or A[i][k] == 0:
                    continue
                q = A[i][k] // pk
                Ak = A[k]
                Ai = A[i]
                for j in range(k, m):
                    Ai[j] = (Ai[j] - q * Ak[j]) % mod
            for j in range(k + 1, m):
                if A[k][j] == 0:
                    continue
                q = A[k][j] // pk
                for i in range(n):
                    A[i][j] = (A[i][j] - q * A[i][k]) % mod
                for i in range(m):
                    V[i][j] = (V[i][j] - q * V[i][k]) % mod
            diag.append(v)
            k += 1
        self.A = A
        self.V = V
        self.diag = diag
        self.rank_units = sum(1 for v in diag if v == 0)

    def kernel(self):
        """Basis of {x : Mx = 0 mod p^K} as column vectors."""
        p, K, mod = self.p, self.K, self.mod
        gens = []
        for i, v in enumerate(self.diag):
            if v > 0:
                scale = p ** (K - v)
                gens.append([(scale * self.V[r][i]) % mod
                             for r in range(self.ncols)])
        for i in range(len(self.diag), self.ncols):
            gens.append([self.V[r][i] % mod for r in range(self.ncols)])
        return gens


def solve_mod_pk(M, b, p, K, want_kernel=True):
    """One solution of Mx = b mod p^K plus a kernel basis.

    Raises InconsistentSystem when no solution exists at this precision.
    """
    mod = p ** K
    n = len(M)
    m = len(M[0]) if M else 0
    aug = [list(row) + [b[i]] for i, row in enumerate(M)]
    sm = SmithSystem([row[:m] for row in aug], p, K)
    # redo elimination carrying b: simplest is to rerun with augmented column
    # that is never eligible as pivot.
    A = [[a % mod for a in row] for row in aug]
    V = identity(m)
    diag = []
    k = 0
    while k < min(n, m):
        best = None
        for i in range(k, n):
            for j in range(k, m):
                if A[i][j] != 0:
                    v = _val(A[i][j], p, K)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best and best[0] == 0:
                break
        if best is None:
            break
        v, pi, pj = best
        if pi != k:
            A[k], A[pi] = A[pi], A[k]
        if pj != k:
            for row in A:
                row[k], row[pj] = row[pj], row[k]
            for row in V:
                row[k], row[pj] = row[pj], row[k]
        piv = A[k][k]
        u = piv // (p ** v)
        uinv = pow(u, -1, mod)
        A[k] = [(uinv * a) % mod for a in A[k]]
        pk = p ** v
        for i in range(n):
            if i == k or A[i][k] == 0:
                continue
            q = A[i][k] // pk
            Ak = A[k]
            Ai = A[i]
            for j in range(k, m + 1):
                Ai[j] = (Ai[j] - q * Ak[j]) % mod
        for j in range(k + 1, m):
            if A[k][j] == 0:
                continue
            q = A[k][j] // pk
            for i in range(n):
                A[i][j] = (A[i][j] - q * A[i][k]) % mod
            for i in range(m):
                V[i][j] = (V[i][j] - q * V[i][k]) % mod
        diag.append(v)
        k += 1
    r = len(diag)
    y = [0] * m
    for i in range(r):
        rhs = A[i][m]
        pv = p ** diag[i]
        if rhs % pv != 0:
            raise InconsistentSystem(
                f"pivot p^{diag[i]} does not divide rhs {rhs} (mod {p}^{K})")
        y[i] = (rhs // pv) % mod
    for i in range(r, n):
        if A[i][m] % mod != 0:
            raise InconsistentSystem("zero row with nonzero rhs")
    x = mat_vec(V, y, mod)
    kern = sm.kernel() if want_kernel else []
    return x, kern


def kernel_mod_pk(M, p, K):
    return SmithSystem(M, p, K).kernel()


class FractionField:
    """Field-context adapter so the generic elimination also runs over Q."""

    def red(self, a):
        return Fraction(a)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / Fraction(a)

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def is_zero(self, a):
        return a == 0

    def from_int(self, n):
        return Fraction(n)


def field_rref(M, field, augment=None):
    """Row-reduce over an arbitrary field context; returns (R, pivots, aug)."""
    A = [[field.red(a) for a in row] for row in M]
    B = [list(row) for row in augment] if augment is not None else None
    n = len(A)
    m = len(A[0]) if A else 0
    pivots = []
    r = 0
    for c in range(m):
        pr = None
        for i in range(r, n):
            if not field.is_zero(A[i][c]):
                pr = i
                break
        if pr is None:
            continue
        A[r], A[pr] = A[pr], A[r]
        if B is not None:
            B[r], B[pr] = B[pr], B[r]
        inv = field.inv(A[r][c])
        A[r] = [field.mul(inv, a) for a in A[r]]
        if B is not None:
            B[r] = [field.mul(inv, a) for a in B[r]]
        for i in range(n):
            if i != r and not field.is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [field.sub(a, field.mul(f, b)) for a, b in zip(A[i], A[r])]
                if B is not None:
                    B[i] = [field.sub(a, field.mul(f, b))
                            for a, b in zip(B[i], B[r])]
        pivots.append(c)
        r += 1
        if r == n:
            break
    return A, pivots, B


def field_solve(M, b, field):
    """One solution plus kernel basis of Mx = b over a field context."""
    n = len(M)
    m = len(M[0]) if M else 0
    R, pivots, Bv = field_rref(M, field, augment=[[x] for x in b])
    r = len(pivots)
    for i in range(r, n):
        if not field.is_zero(Bv[i][0]):
            raise InconsistentSystem("rank-deficient rhs over field")
    x = [field.zero()] * m
    for i, c in enumerate(pivots):
        x[c] = Bv[i][0]
    free = [c for c in range(m) if c not in set(pivots)]
    kern = []
    for fcol in free:
        v = [field.zero()] * m
        v[fcol] = field.one()
        for i, c in enumerate(pivots):
            v[c] = field.neg(R[i][fcol])
        kern.append(v)
    return x, kern


def field_kernel(M, field):
    if not M:
        return []
    zero = [field.zero()] * len(M)
    _, kern = field_solve(M, zero, field)
    return kern


def solve_linear(M, b, ring):
    """Spec-level dispatcher.

    ring is ('Fp', p), ('ZpK', p, K), ('Q',) or a field context object.
    Returns (solution, kernel_basis).
    """
    if isinstance(ring, tuple):
        if ring[0] == 'Fp':
            return solve_mod_pk(M, b, ring[1], 1)
        if ring[0] == 'ZpK':
            return solve_mod_pk(M, b, ring[1], ring[2])
        if ring[0] == 'Q':
            return field_solve(M, b, FractionField())
        raise ValueError(f"unknown ring {ring}")
    return field_solve(M, b, ring)


def charpoly(M, mod=None):
    """Characteristic polynomial det(XI - M), ascending coefficients.

    Berkowitz's division-free algorithm; `mod` reduces every step when given.
    """
    n = len(M)
    if n == 0:
        return [1]

    def red(x):
        return x % mod if mod is not None else x

    # Berkowitz: iteratively build the char poly of leading principal minors.
    C = [1]  # char poly of the empty matrix (degree 0), leading first
    for k in range(1, n + 1):
        # principal k x k block data
        a = M[k - 1][k - 1]
        R = M[k - 1][:k - 1]          # row vector
        S = [M[i][k - 1] for i in range(k - 1)]  # column vector
        A = [row[:k - 1] for row in M[:k - 1]]
        # Toeplitz column: t_0 = 1 (X coeff), t_1 = -a, t_{i+2} = -(R A^i S)
        t = [1, red(-a)]
        vec = S
        for _ in range(k - 1):
            t.append(red(-sum(r * v for r, v in zip(R, vec))))
            vec = mat_vec(A, vec, mod)
        # multiply polynomial C (length k) by the Toeplitz operator
        newC = [0] * (k + 1)
        for i, c in enumerate(C):
            if c == 0:
                continue
            for j, tv in enumerate(t):
                if i + j <= k:
                    newC[i + j] += c * tv
        C = [red(x) for x in newC]
    C.reverse()  # ascending
    return C


# --- polynomial arithmetic mod p^K (ascending coefficient lists) ---

def poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def poly_mul_mod(f, g, mod):
    out = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return [c % mod for c in out]


def poly_divmod_monic(f, g, mod):
    """Divide by monic g; exact ring division, ascending coefficients."""
    assert g and g[-1] % mod == 1
    f = [c % mod for c in f]
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [], f
    q = [0] * (len(f) - dg)
    r = list(f)
    for i in range(len(f) - 1, dg - 1, -1):
        c = r[i] % mod
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                r[i - dg + j] = (r[i - dg + j] - c * g[j]) % mod
    return q, poly_trim(r)


def poly_eval_mat(f, M, mod):
    """f(M) for a square matrix, ascending coefficients."""
    n = len(M)
    out = [[0] * n for _ in range(n)]
    P = identity(n)
    for c in f:
        if c:
            out = mat_add(out, mat_scal(c, P, mod), mod)
        P = mat_mul(P, M, mod)
    return out


def hensel_split_at_zero(chi, p, K):
    """Factor chi = A*B mod p^K with A ≡ X^m (mod p), B(0) a unit.

    m is the multiplicity of the zero root of chi mod p.  Also returns a
    Bezout pair (U, V) with U*A + V*B ≡ 1 mod p^K.  chi must be monic.
    """
    mod = p ** K
    chi = [c % mod for c in chi]
    assert chi[-1] == 1, "charpoly must be monic"
    m = 0
    while m < len(chi) and chi[m] % p == 0:
        m += 1
    if m == len(chi):
        raise PrecisionExhausted("polynomial vanishes identically mod p")
    # mod-p split
    A = [0] * m + [1]                       # X^m
    B = [(chi[m + i]) % p for i in range(len(chi) - m)]  # unit part mod p
    if m == 0:
        return [1], chi, [1], [0]
    # Bezout mod p: U*X^m + V*B = 1.  V = B^{-1} mod X^m, U from the identity.
    Bp = [b % p for b in B]
    Vp = _series_inverse(Bp, m, p)
    UA = [(x % p) for x in _poly_sub([1], poly_mul_mod(Vp, Bp, p), p)]
    # UA is divisible by X^m
    Up = [(c % p) for c in UA[m:]] or [0]
    A, B, U, V = _hensel_lift(chi, A, B, Up, Vp, p, K)
    return A, B, U, V


def _poly_sub(f, g, mod):
    n = max(len(f), len(g))
    f = f + [0] * (n - len(f))
    g = g + [0] * (n - len(g))
    return [(a - b) % mod for a, b in zip(f, g)]


def _series_inverse(f, prec, p):
    """Inverse of f mod (X^prec, p); f(0) must be a unit mod p."""
    inv0 = pow(f[0] % p, -1, p)
    g = [inv0]
    while len(g) < prec:
        n = min(2 * len(g), prec)
        fg = poly_mul_mod(f[:n], g, p)[:n]
        err = _poly_sub([1], fg, p)[:n]
        corr = poly_mul_mod(g, err, p)[:n]
        g = [(a + b) % p for a, b in
             zip(g + [0] * (n - len(g)), corr + [0] * (n - len(corr)))]
    return poly_trim(g[:prec]) or [0]


def _hensel_lift(chi, A, B, U, V, p, K):
    """Lift chi ≡ A·B and U·A + V·B ≡ 1 from mod p to mod p^K (linear steps)."""
    for j in range(1, K):
        mod = p ** (j + 1)
        AB = poly_mul_mod(A, B, mod)
        diff = _poly_sub(chi, AB, mod)
        assert all(c % p ** j == 0 for c in diff)
        E = [(c // p ** j) % p for c in diff]
        # dA = (V*E mod A), dB = U*E + B*floor(V*E/A)
        VE = poly_mul_mod(V, E, p)
        q, dA = poly_divmod_monic(VE, A, p)
        dB = [(a + b) % p for a, b in _zip_pad(poly_mul_mod(U, E, p),
                                               poly_mul_mod(B, q, p))]
        A = [(a + p ** j * d) % mod for a, d in _zip_pad(A, dA)]
        B = poly_trim([(b + p ** j * d) % mod for b, d in _zip_pad(B, dB)])
        # refresh Bezout to the same precision
        UA = poly_mul_mod(U, A, mod)
        VB = poly_mul_mod(V, B, mod)
        err = _poly_sub([1], [(a + b) % mod for a, b in _zip_pad(UA, VB)], mod)
        assert all(c % p ** j == 0 for c in err)
        E2 = [(c // p ** j) % p for c in err]
        # correct U, V: (U + p^j dU) A + (V + p^j dV) B = 1, i.e. dU*A + dV*B = E2 mod p
        VE2 = poly_mul_mod(V, E2, p)
        q2, dV = poly_divmod_monic(VE2, A, p)
        dU = [(a + b) % p for a, b in _zip_pad(poly_mul_mod(U, E2, p),
                                               poly_mul_mod(B, q2, p))]
        U = [(u + p ** j * d) % mod for u, d in _zip_pad(U, dU)]
        V = [(v + p ** j * d) % mod for v, d in _zip_pad(V, dV)]
    return A, B, U, V


def _zip_pad(f, g):
    n = max(len(f), len(g))
    return zip(f + [0] * (n - len(f)), g + [0] * (n - len(g)))
