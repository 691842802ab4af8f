"""Classical modular polynomials Phi_ell over Z, table-backed.

Tables ship as data files (`data/phi_ell/<ell>.txt`, lines `i j c`); they
were produced by :func:`compute_phi` below, which works purely with exact
integer q-expansions:

  Phi_ell(j(q), Y) = (Y - j(q^ell)) * prod_k (Y - j(zeta^k q^{1/ell}))

The inner product over k is assembled from power sums: summing over the
ell-th roots of unity kills every exponent not divisible by ell, so
sum_k j(zeta^k u)^m = ell * (restriction of j^m to u-exponents = 0 mod ell),
a plain integer q-series.  Newton's identities then give the elementary
symmetric functions, and each Y-coefficient is matched against powers of
j(q) by peeling leading Laurent terms.  The match must terminate with an
exactly zero window, which certifies the table together with the symmetry
and Kronecker-congruence checks in :func:`verify_phi`.
"""

from __future__ import annotations

import os
from functools import lru_cache

from .algebra.series import Laurent
from .errors import NoModularPolynomial

DATA_DIR = os.path.join(os.path.dirname(__file__), "data", "phi_ell")
SUPPORTED = (2, 3, 5, 7, 11, 13)


def eta_terms(n):
    """Coefficients of prod_{k>=1} (1 - q^k) through q^n (pentagonal)."""
    out = [0] * (n + 1)
    k = 0
    while True:
        for kk in (k, -k) if k else (0,):
            e = kk * (3 * kk - 1) // 2
            if e > n:
                continue
            out[e] += 1 if kk % 2 == 0 else -1
        if k * (3 * k - 1) // 2 > n and k * (3 * k + 1) // 2 > n:
            break
        k += 1
    return out


def _ser_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[:n + 1]):
        if x:
            for j, y in enumerate(b[:n + 1 - i]):
                if y:
                    out[i + j] += x * y
    return out


def _ser_inv(a, n):
    """Inverse of a unit integer series (a[0] = ±1) through q^n."""
    assert a[0] in (1, -1)
    inv = [a[0]]
    for k in range(1, n + 1):
        s = 0
        for i in range(1, min(k, len(a) - 1) + 1):
            s += a[i] * inv[k - i]
        inv.append(-a[0] * s)
    return inv


@lru_cache(maxsize=None)
def j_coeffs(top):
    """c_n with j = q^{-1} sum_{n>=0} c_n q^n, exact, through n = top + 1."""
    n = top + 1
    e4 = [1] + [0] * n
    for m in range(1, n + 1):
        s3 = sum(d ** 3 for d in range(1, m + 1) if m % d == 0)
        e4[m] = 240 * s3
    e43 = _ser_mul(_ser_mul(e4, e4, n), e4, n)
    eta = eta_terms(n)
    eta24 = eta
    for _ in range(3):
        eta24 = _ser_mul(eta24, eta24, n)  # ^8
    eta24 = _ser_mul(_ser_mul(eta24, eta24, n), eta24, n)  # ^24
    return _ser_mul(e43, _ser_inv(eta24, n), n)


def j_laurent(top):
    """j(q) as a Laurent window [-1, top]."""
    return Laurent(-1, j_coeffs(top)[:top + 2])


def _restrict_mod(L, ell):
    """Pick u-exponents divisible by ell; reindex as q-series."""
    lo = -((-L.off) // ell) if L.off < 0 else (L.off + ell - 1) // ell
    hi = L.top // ell
    return Laurent(lo, [L.coeff(ell * t) for t in range(lo, hi + 1)])


def _stretch(L, ell):
    """Substitute q -> q^ell."""
    out = [0] * (ell * (len(L.coeffs) - 1) + 1)
    for i, c in enumerate(L.coeffs):
        out[ell * i] = c
    return Laurent(ell * L.off, out)


def _wide_one(top):
    return Laurent(0, [1] + [0] * top)


def compute_phi(ell):
    """Phi_ell as a dict {(i, j): c} for c * X^i Y^j, exact over Z."""
    qtop = 2 * ell + 8
    utop = ell * qtop
    j_u = j_laurent(utop)        # j in the variable u = q^{1/ell}
    # power sums of the ell "finite" roots, as q-series
    powers = [None, j_u]
    psums = [None]
    for m in range(1, ell + 2):
        if m > 1:
            powers.append(powers[-1] * j_u)
        psums.append(_restrict_mod(powers[m], ell).scale(ell))
    # Newton's identities -> elementary symmetric functions of finite roots
    efin = [_wide_one(qtop)]
    for k in range(1, ell + 1):
        acc = None
        for i in range(1, k + 1):
            term = efin[k - i] * psums[i]
            if i % 2 == 0:
                term = term.scale(-1)
            acc = term if acc is None else acc + term
        coeffs = []
        for c in acc.coeffs:
            assert c % k == 0, "Newton identity division failed"
            coeffs.append(c // k)
        efin.append(Laurent(acc.off, coeffs))
    # include the root at infinity: e_i(all) = e_i(fin) + j(q^ell) e_{i-1}(fin)
    j_q = j_laurent(qtop)
    jinf = _stretch(j_q, ell)
    s = [None] * (ell + 2)
    for i in range(1, ell + 2):
        b = jinf * efin[i - 1]
        s[i] = (efin[i] + b) if i <= ell else b
    # Y-coefficient of Y^{ell+1-i} is (-1)^i s_i; match against powers of j(q)
    jpow = [_wide_one(qtop)]
    for d in range(1, ell + 2):
        jpow.append(jpow[-1] * j_q)
    table = {(0, ell + 1): 1}
    for i in range(1, ell + 2):
        cur = s[i].scale((-1) ** i)
        ydeg = ell + 1 - i
        for d in range(-cur.off, -1, -1):
            c = cur.coeff(-d)
            if c:
                table[(d, ydeg)] = table.get((d, ydeg), 0) + c
                cur = cur - jpow[d].scale(c)
        assert cur.top >= 2, "insufficient certification window"
        assert cur.is_zero_window(), "j-power matching left a remainder"
    table = {k: v for k, v in table.items() if v != 0}
    return table


def verify_phi(ell, table):
    """Symmetry, Kronecker congruence mod ell, and the functional identity."""
    for (i, j), c in table.items():
        assert table.get((j, i), 0) == c, f"asymmetric at {(i, j)}"
    # Kronecker congruence: Phi_ell ≡ (X^ell - Y)(X - Y^ell) mod ell
    expand = {}
    for (i1, j1, c1) in [(ell, 0, 1), (0, 1, -1)]:
        for (i2, j2, c2) in [(1, 0, 1), (0, ell, -1)]:
            k = (i1 + i2, j1 + j2)
            expand[k] = expand.get(k, 0) + c1 * c2
    keys = set(table) | set(expand)
    for k in keys:
        assert (table.get(k, 0) - expand.get(k, 0)) % ell == 0, \
            f"Kronecker congruence fails at {k}"
    # functional identity Phi(j(q), j(q^ell)) = 0 on a certified window
    top = (ell + 1) ** 2 + 2
    jq = j_laurent(top)
    jql = _stretch(j_laurent((top // ell) + 2), ell)
    jp = [_wide_one(top)]
    for d in range(1, ell + 2):
        jp.append(jp[-1] * jq)
    jlp = [_wide_one(ell * ((top // ell) + 2))]
    for d in range(1, ell + 2):
        jlp.append(jlp[-1] * jql)
    acc = None
    for (i, j), c in sorted(table.items()):
        term = (jp[i] * jlp[j]).scale(c)
        acc = term if acc is None else acc + term
    assert acc.top >= 1, "verification window collapsed"
    assert acc.is_zero_window(), "Phi_ell(j, j(q^ell)) != 0"
    return True


def save_phi(ell, table, path=None):
    path = path or os.path.join(DATA_DIR, f"{ell}.txt")
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "w") as fh:
        fh.write(f"# phi-ell v1 ell={ell}\n")
        for (i, j) in sorted(table):
            fh.write(f"{i} {j} {table[(i, j)]}\n")


@lru_cache(maxsize=None)
def load_phi(ell):
    path = os.path.join(DATA_DIR, f"{ell}.txt")
    if not os.path.exists(path):
        raise NoModularPolynomial(f"no Phi_{ell} table at {path}")
    table = {}
    with open(path) as fh:
        header = fh.readline()
        assert header.startswith("# phi-ell v1"), "unversioned Phi table"
        for line in fh:
            if line.startswith("#") or not line.strip():
                continue
            i, j, c = line.split()
            table[(int(i), int(j))] = int(c)
    return table


def phi_y_poly(ell, jval, field):
    """Phi_ell(jval, Y) over `field`, ascending Y-coefficients."""
    table = load_phi(ell)
    out = [field.zero()] * (ell + 2)
    jpow = [field.one()]
    for _ in range(ell + 1):
        jpow.append(field.mul(jpow[-1], jval))
    for (i, j), c in table.items():
        out[j] = field.add(out[j], field.mul(field.from_int(c), jpow[i]))
    return out
