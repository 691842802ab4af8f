"""Eisenstein completions, higher Eisenstein chains and the eigenvector
identities, over matrices mod p^K.

The generalized Eisenstein eigenspace ("the local part") is cut out by
Hensel-lifted idempotents of the commuting Hecke matrices; on it the
calibrated generator eta has characteristic polynomial X * P(X) with P
monic distinguished of degree g_p, and the local ring O = Z_p[pi]/(P)
drives every identity: valuation of <e_F, e_F'>, the trace ratios, and the
congruence <e_F,e_F'> ≡ <e_0, e'_g> * P'(pi) mod pi^{v+1}.

All checks raise TheoremViolation with a witness dump when an identity
fails on actual data; they are the regression tripwires of the engine.
"""

from __future__ import annotations

import random

from .algebra.linalg import (charpoly, hensel_split_at_zero, identity,
                             mat_mul, mat_vec, mat_add, mat_scal,
                             poly_eval_mat, poly_mul_mod, kernel_mod_pk,
                             solve_mod_pk, transpose)
from .algebra.padic import LocalO, pval
from .errors import (ChainTooShort, InconsistentSystem, NotDistinguished,
                     NotGenerator, TheoremViolation)


class HeckeAction:
    """Commuting matrices over Z/p^K labelled by the primes they represent."""

    def __init__(self, p, K, matrices, check_commute=True):
        self.p = p
        self.K = K
        self.mod = p ** K
        self.matrices = {ell: [[a % self.mod for a in row] for row in M]
                         for ell, M in matrices.items()}
        dims = {len(M) for M in self.matrices.values()}
        assert len(dims) == 1
        self.dim = dims.pop()
        if check_commute:
            items = sorted(self.matrices)
            for i, l1 in enumerate(items):
                for l2 in items[i + 1:]:
                    A, B = self.matrices[l1], self.matrices[l2]
                    AB = mat_mul(A, B, self.mod)
                    BA = mat_mul(B, A, self.mod)
                    if AB != BA:
                        raise TheoremViolation(
                            f"T_{l1} and T_{l2} do not commute")


def calibrate_eta(action, log):
    """eta = ((ell0-1) log ell0)^{-1} (T_ell0 - ell0 - 1) for the smallest
    usable ell0; returns (eta_matrix, ell0, unit)."""
    p, mod = action.p, action.mod
    for ell0 in sorted(action.matrices):
        if ell0 == log.N or ell0 == p:
            continue
        if ((ell0 - 1) * log(ell0)) % p == 0:
            continue
        unit = pow((ell0 - 1) * log(ell0) % mod, -1, mod)
        T = action.matrices[ell0]
        eta = [[(unit * (T[i][j] - (ell0 + 1 if i == j else 0))) % mod
                for j in range(action.dim)] for i in range(action.dim)]
        return eta, ell0, unit
    raise NotGenerator("no prime with (ell-1) log(ell) a unit mod p")


def _shifted_idempotent(M, shift, p, K):
    """Idempotent onto the generalized eigenspace of M for eigenvalue `shift`
    (i.e. the zero-eigenspace of M - shift)."""
    mod = p ** K
    n = len(M)
    S = [[(M[i][j] - (shift if i == j else 0)) % mod for j in range(n)]
         for i in range(n)]
    chi = charpoly(S, mod)
    A, B, U, V = hensel_split_at_zero(chi, p, K)
    if len(A) == 1:  # no zero-eigenvalue part
        return [[0] * n for _ in range(n)]
    VB = poly_mul_mod(V, B, mod)
    return poly_eval_mat(VB, S, mod)


class PPart:
    """The Eisenstein block: inclusion, eta matrix, local ring."""

    def __init__(self, action, include, eta_V, P, O):
        self.action = action
        self.p = action.p
        self.K = action.K
        self.mod = action.mod
        self.include = include          # dim x r matrix (columns = basis)
        self.rank = len(include[0])
        self.eta = eta_V                # r x r
        self.P = P
        self.g_p = len(P) - 1
        self.O = O

    def to_coords(self, vec, K=None):
        K = K if K is not None else self.K
        x, _ = solve_mod_pk(self.include, vec, self.p, K, want_kernel=False)
        return x

    def from_coords(self, coords):
        return mat_vec(self.include, coords, self.mod)


def complete_at_eisenstein(action, eta):
    """Projector onto the Eisenstein generalized eigenspace, the local
    algebra of eta there, and g_p."""
    p, K, mod = action.p, action.K, action.mod
    n = action.dim
    e = _shifted_idempotent(eta, 0, p, K)
    for ell, T in sorted(action.matrices.items()):
        e_ell = _shifted_idempotent(T, ell + 1, p, K)
        e = mat_mul(e, e_ell, mod)
    e2 = mat_mul(e, e, mod)
    assert e2 == e, "joint projector is not idempotent"
    one_minus = mat_add(identity(n), mat_scal(-1, e, mod), mod)
    basis = kernel_mod_pk(one_minus, p, K)
    include = [[b[i] for b in basis] for i in range(n)]
    r = len(basis)
    eta_cols = []
    for b in basis:
        img = mat_vec(eta, b, mod)
        coords, _ = solve_mod_pk(include, img, p, K, want_kernel=False)
        eta_cols.append(coords)
    eta_V = [[eta_cols[j][i] for j in range(r)] for i in range(r)]
    chi = charpoly(eta_V, mod)
    if chi[0] % mod != 0:
        raise NotDistinguished("eta is invertible on the local part")
    P = chi[1:]
    for c in P[:-1]:
        if c % p != 0:
            raise NotDistinguished(
                f"char poly {chi} of eta is not X * (distinguished)")
    if len(P) > 1 and P[0] % p ** 2 == 0:
        raise NotDistinguished(
            "P(0) has valuation >= 2; the local ring is not a DVR "
            "(p^2 | N-1 or data error)")
    if len(P) - 1 >= 1:
        O = LocalO(P, p, K)
    else:
        raise NotDistinguished("empty cuspidal part")
    return PPart(action, include, eta_V, P, O)


def eis_chain(ppart, e0_module_vec, eta_full=None):
    """Higher Eisenstein chain e_0..e_{g_p} in local-part coordinates mod p.

    e0 must be an Eisenstein eigenvector mod p; the chain solves
    eta e_{i+1} = e_i and certifies maximality (no e_{g_p+1})."""
    p = ppart.p
    e0 = ppart.to_coords([a % p for a in e0_module_vec], K=1) \
        if len(e0_module_vec) == ppart.action.dim else [a % p for a in e0_module_vec]
    eta_p = [[a % p for a in row] for row in ppart.eta]
    if any(a % p for a in mat_vec(eta_p, e0, p)):
        raise TheoremViolation("e0 is not an Eisenstein eigenvector mod p")
    chain = [e0]
    for i in range(ppart.g_p):
        try:
            x, _ = solve_mod_pk(eta_p, chain[-1], p, 1, want_kernel=False)
        except InconsistentSystem:
            raise ChainTooShort(
                f"chain stops at index {i}; expected length {ppart.g_p + 1}")
        chain.append(x)
    try:
        solve_mod_pk(eta_p, chain[-1], p, 1, want_kernel=False)
        raise TheoremViolation("chain extends past g_p; rank hypothesis broken")
    except InconsistentSystem:
        pass
    return chain


class SideModule:
    """Quotient (cuspidal image) or kernel (cuspidal subspace) of T0 on V."""

    def __init__(self, ppart, T0_full, side):
        assert side in ("quotient", "subspace")
        self.side = side
        self.ppart = ppart
        p, K, mod = ppart.p, ppart.K, ppart.mod
        r = ppart.rank
        # T0 in V-coordinates
        cols = []
        for j in range(r):
            v = [ppart.include[i][j] for i in range(ppart.action.dim)]
            img = mat_vec(T0_full, v, mod)
            cols.append(ppart.to_coords(img))
        T0V = [[cols[j][i] for j in range(r)] for i in range(r)]
        self.T0V = T0V
        if side == "subspace":
            basis = kernel_mod_pk(T0V, p, K)
            assert len(basis) == ppart.g_p, \
                f"ker T0 has rank {len(basis)} != g_p"
            self.basis = basis          # vectors in V-coords
            self.inc = [[b[i] for b in basis] for i in range(r)]
            self.eta = self._restrict(ppart.eta)
        else:
            # image of T0V is rank one; normalize a generator column
            img = [mat_vec(T0V, [1 if i == j else 0 for i in range(r)], mod)
                   for j in range(r)]
            w = None
            for col in img:
                if any(c % p for c in col):
                    w = col
                    break
            assert w is not None, "T0 vanishes on the local part"
            piv = next(i for i, c in enumerate(w) if c % p)
            self.drop = piv
            winv = pow(w[piv], -1, mod)
            self.wnorm = [(winv * c) % mod for c in w]
            keep = [i for i in range(r) if i != piv]
            self.keep = keep
            # eta_q[:, j] = quotient coordinates of eta(e_j), j kept
            eta_q = []
            for j in keep:
                lift = [0] * r
                lift[j] = 1
                eta_q.append(self._q_coords(mat_vec(ppart.eta, lift, mod)))
            self.eta = [[eta_q[jj][ii] for jj in range(len(keep))]
                        for ii in range(len(keep))]

    def _restrict(self, M):
        p, K, mod = self.ppart.p, self.ppart.K, self.ppart.mod
        cols = []
        for b in self.basis:
            img = mat_vec(M, b, mod)
            x, _ = solve_mod_pk(self.inc, img, p, K, want_kernel=False)
            cols.append(x)
        return [[cols[j][i] for j in range(len(cols))]
                for i in range(len(cols))]

    # quotient-side helpers -------------------------------------------------
    def _q_coords(self, vec_V):
        """Coordinates in V/(w) using the kept indices."""
        mod = self.ppart.mod
        c = vec_V[self.drop] % mod
        red = [(v - c * wn) % mod for v, wn in zip(vec_V, self.wnorm)]
        assert red[self.drop] % mod == 0
        return [red[i] for i in self.keep]

    def _q_lift_unit(self, j):
        r = self.ppart.rank
        lift = [0] * r
        lift[j] = 1
        return lift

    def project(self, vec_V):
        """V-coordinates -> side coordinates (mod p^K)."""
        if self.side == "quotient":
            return self._q_coords(vec_V)
        x, _ = solve_mod_pk(self.inc, vec_V, self.ppart.p, self.ppart.K,
                            want_kernel=False)
        return x

    def lift(self, coords):
        """Side coordinates -> a V-coordinate representative."""
        mod = self.ppart.mod
        r = self.ppart.rank
        if self.side == "quotient":
            out = [0] * r
            for c, i in zip(coords, self.keep):
                out[i] = c % mod
            return out
        return mat_vec(self.inc, coords, mod)

    def generates(self, m):
        """Does m generate the side module over Z_p[eta]?"""
        p = self.ppart.p
        g = len(self.eta)
        vecs = []
        cur = [a % p for a in m]
        for _ in range(g):
            vecs.append(cur)
            cur = [a % p for a in
                   mat_vec([[x % p for x in row] for row in self.eta], cur, p)]
        from .algebra.linalg import SmithSystem
        sm = SmithSystem([list(col) for col in zip(*vecs)], p, 1)
        return sm.rank_units == g


def eigenvector_eF(side, O, m):
    """e_F = sum_i (sum_{k>i} a_k eta^{k-1-i}) m  (x)  pi^i, checked to
    satisfy eta e_F = pi e_F at working precision."""
    if not side.generates(m):
        raise NotGenerator("m does not generate the side module")
    mod = O.mod
    g = O.g
    a = list(O.P)  # a_0..a_{g-1}, a_g = 1
    eta = side.eta
    comps = []
    for i in range(g):
        coeffs = [a[k] for k in range(i + 1, g + 1)]  # eta^0 .. eta^{g-1-i}
        M = poly_eval_mat(coeffs, eta, mod)
        comps.append(mat_vec(M, m, mod))
    _check_eigen(side, O, comps)
    return comps


def _check_eigen(side, O, comps):
    mod = O.mod
    g = O.g
    lhs = [mat_vec(side.eta, v, mod) for v in comps]
    # pi * e_F: shift indices, reduce pi^g = -sum a_i pi^i
    top = comps[g - 1]
    rhs = []
    for i in range(g):
        prev = comps[i - 1] if i >= 1 else [0] * len(top)
        rhs.append([(pv - O.P[i] * tv) % mod for pv, tv in zip(prev, top)])
    if lhs != rhs:
        raise TheoremViolation("eta e_F != pi e_F", witness={
            "lhs": lhs, "rhs": rhs})


def normalize_eF(side, O, comps, target_modp):
    """Scale e_F by a unit so that e_F ≡ target (mod pi)."""
    p, mod = O.p, O.mod
    bottom = [a % p for a in comps[0]]
    tgt = [a % p for a in target_modp]
    num = den = None
    for x, y in zip(tgt, bottom):
        if y % p:
            num, den = x, y
            break
    if den is None:
        raise TheoremViolation("e_F vanishes mod pi")
    c = num * pow(den, -1, p) % p
    if any((c * y - x) % p for x, y in zip(bottom, tgt)):
        raise TheoremViolation("e_F mod pi is not proportional to the chain anchor",
                               witness={"bottom": bottom, "target": tgt})
    return [[(c * a) % mod for a in v] for v in comps]


def pair_into_O(O, gram_pairing, comps, comps_prime):
    """<e_F, e_F'> = sum_{i,j} <v_i, w_j> pi^{i+j} as an element of O."""
    g = O.g
    coeffs = [0] * (2 * g - 1) if g > 1 else [0]
    for i, v in enumerate(comps):
        for j, w in enumerate(comps_prime):
            coeffs[i + j] += gram_pairing(v, w)
    return O.from_coeffs(coeffs)


def trace_power_ratio(O, i):
    """Tr_{L/Qp}(pi^i / P'(pi)) computed from the 1/X expansion of 1/P."""
    return O.trace_power_ratio(i)


def chain_coordinates(chain, vec_modp, p):
    """Coefficients of vec in the chain basis mod p (must be in the span)."""
    M = [[chain[j][i] % p for j in range(len(chain))]
         for i in range(len(chain[0]))]
    x, _ = solve_mod_pk(M, [a % p for a in vec_modp], p, 1, want_kernel=False)
    return x


def theorem_26_check(O, gram, eF, eFp, side_chain, c_pair, xs, p):
    """<e_F,e_F'> λ_F(x) ≡ c · λ_top(x) P'(pi) mod pi^{v+1} for supplied x.

    xs are vectors in quotient-side coordinates mod p^K; side_chain is the
    quotient-side chain (anchored at index 1).  Returns the residual list.
    """
    mod = O.mod
    g = O.g
    bser = O.trace_ratio_series(2 * g)
    pairing_val = pair_into_O(O, gram, eF, eFp)
    Pprime = O.deriv()
    vP = O.valuation(Pprime)
    out = []
    for x in xs:
        # solve x = sum_j mu_j (sum_i b_{i+j+1-g} v_i)
        cols = []
        for j in range(g):
            acc = [0] * len(x)
            for i in range(g):
                idx = i + j + 1 - g
                if idx >= 0:
                    b = bser[idx]
                    acc = [(a + b * v) % mod for a, v in zip(acc, eF[i])]
            cols.append(acc)
        M = [[cols[j][i] for j in range(g)] for i in range(len(x))]
        mu, _ = solve_mod_pk(M, x, O.p, O.K, want_kernel=False)
        lam_top = chain_coordinates(side_chain, [a % p for a in x], p)[-1]
        lhs = O.mul(pairing_val, O.from_coeffs(mu))
        rhs = O.scal((c_pair * lam_top) % mod, Pprime)
        ok = O.valuation(O.sub(lhs, rhs)) >= vP + 1
        if not ok:
            raise TheoremViolation("eigen-coordinate congruence failed",
                                   witness={"x": x, "mu": mu,
                                            "lhs": lhs, "rhs": rhs})
        out.append(0)
    return out


# ------------------------------------------------------------ synthetic data

def synthetic_instance(seed, p, K, g):
    """A seeded instance: Eisenstein P, module Z/p^K[x]/(xP), eta, a
    perfect equivariant pairing, and T0 = P(eta)."""
    rng = random.Random(seed)
    mod = p ** K
    # Eisenstein P: a_0 = p * unit, a_i = p * anything
    a0 = p * rng.randrange(1, p ** (K - 1))
    while a0 % (p * p) == 0:
        a0 = p * rng.randrange(1, p ** (K - 1))
    P = [a0] + [p * rng.randrange(0, p ** (K - 1)) for _ in range(g - 1)] + [1]
    # companion matrix of x * P(x) on basis 1, x, ..., x^g
    xP = [0] + P
    n = g + 1
    eta0 = [[0] * n for _ in range(n)]
    for i in range(1, n):
        eta0[i][i - 1] = 1
    for i in range(n):
        eta0[i][n - 1] = (-xP[i]) % mod
    # random change of basis
    while True:
        S = [[rng.randrange(mod) for _ in range(n)] for _ in range(n)]
        try:
            Sinv = _mat_inv(S, p, K)
            break
        except InconsistentSystem:
            continue
    eta = mat_mul(mat_mul(S, eta0, mod), Sinv, mod)
    # Hecke operators (ell+1) + c_ell * eta + d_ell * eta^2
    matrices = {}
    eta2 = mat_mul(eta, eta, mod)
    for ell in (2, 3, 5):
        c = rng.randrange(1, mod)
        d = rng.randrange(0, mod)
        T = mat_add(mat_scal(ell + 1, identity(n), mod),
                    mat_add(mat_scal(c, eta, mod), mat_scal(d, eta2, mod), mod),
                    mod)
        matrices[ell] = T
    action = HeckeAction(p, K, matrices)
    # pairing <f, g> = lambda(f g) on R = Z[x]/(xP); Gram in x-basis is the
    # Hankel matrix lambda(x^{i+j}); transported through S
    lam = [rng.randrange(mod) for _ in range(n)]
    while lam[n - 1] % p == 0:
        lam[n - 1] = rng.randrange(mod)
    xpow = _xpowers_mod_xP(xP, 2 * n - 1, mod)
    hank = [[sum(lam[t] * xpow[i + j][t] for t in range(n)) % mod
             for j in range(n)] for i in range(n)]
    SinvT = transpose(Sinv)
    gram = mat_mul(mat_mul(SinvT, hank, mod), Sinv, mod)
    T0 = poly_eval_mat(P, eta, mod)
    e0 = mat_vec(S, [0] * g + [1], mod)   # x^g spans ker eta mod p
    return {
        "p": p, "K": K, "g": g, "P": P, "eta": eta, "action": action,
        "gram": gram, "T0": T0, "e0": e0, "seed": seed,
    }


def _xpowers_mod_xP(xP, count, mod):
    n = len(xP) - 1
    out = []
    cur = [1] + [0] * (n - 1)
    for _ in range(count):
        out.append(list(cur))
        nxt = [0] + cur[:-1]
        top = cur[-1]
        if top:
            for i in range(n):
                nxt[i] = (nxt[i] - top * xP[i]) % mod
        cur = nxt
    return out


def _mat_inv(M, p, K):
    n = len(M)
    mod = p ** K
    cols = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        x, _ = solve_mod_pk(M, e, p, K, want_kernel=False)
        cols.append(x)
    inv = [[cols[j][i] for j in range(n)] for i in range(n)]
    if mat_mul(M, inv, mod) != identity(n):
        raise InconsistentSystem("matrix not invertible")
    return inv
