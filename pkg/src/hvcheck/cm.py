"""Hilbert class polynomials by complex CM evaluation with integer rounding.

H_D = prod (X - j(tau_Q)) over reduced forms Q of discriminant D < 0.  The
evaluation runs at a heuristic precision, is certified by re-evaluation at
doubled precision, and every coefficient must round with margin; otherwise
precision escalates (error only at the escalation cap).  Results are cached
as version-stamped decimal files, ascending degree.
"""

from __future__ import annotations

import math
import os

import mpmath as mp

from .errors import NotFundamental, RoundingUncertain


def is_fundamental(D):
    if D >= 0 or D % 4 not in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(-D)
    m = D // 4
    return _squarefree(-m) and (m % 4 in (-2 % 4, -3 % 4, 2, 3))


def _squarefree(n):
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        d += 1
    return True


def reduced_forms(D):
    """All reduced forms (a, b, c) of discriminant D < 0."""
    assert D < 0 and D % 4 in (0, 1)
    forms = []
    amax = int(math.isqrt(-D // 3)) + 1
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, abs(b)), c) != 1:
                continue
            forms.append((a, b, c))
    return sorted(forms)


def _j_value(tau):
    """j(tau) by eta-quotient at the current mpmath precision."""
    q = mp.expjpi(2 * tau)  # e^{2 pi i tau}
    tol = mp.mpf(10) ** (-(mp.mp.dps + 8))
    # eta-product (without the q^{1/24} factor, which cancels in Delta/q^...):
    # Delta = q prod (1-q^n)^24, E4 = 1 + 240 sum sigma_3(n) q^n
    prod = mp.mpc(1)
    qi = q
    n = 1
    while abs(qi) > tol:
        prod *= (1 - qi) ** 24
        qi *= q
        n += 1
        if n > 10 ** 6:
            raise RoundingUncertain("eta product did not converge")
    delta = q * prod
    e4 = mp.mpc(1)
    qi = q
    n = 1
    while True:
        s3 = sum(d ** 3 for d in range(1, n + 1) if n % d == 0)
        term = 240 * s3 * qi
        e4 += term
        if abs(qi) < tol:
            break
        qi *= q
        n += 1
    return e4 ** 3 / delta


def _compute_H(D, dps):
    with mp.workdps(dps):
        taus = [(-b + mp.sqrt(mp.mpc(D))) / (2 * a) for a, b, c in reduced_forms(D)]
        js = [_j_value(t) for t in taus]
        coeffs = [mp.mpc(1)]
        for j in js:
            new = [mp.mpc(0)] * (len(coeffs) + 1)
            for i, c in enumerate(coeffs):
                new[i + 1] += c
                new[i] -= c * j
            coeffs = new
        ints = []
        worst = 0.0
        for c in coeffs:
            n = mp.nint(c.real)
            err = float(abs(c - n))
            worst = max(worst, err)
            ints.append(int(n))
        return ints, worst


def hilbert_class_poly(D, cache_dir=None, max_dps=4000):
    """Coefficients of H_D, ascending degree, exact integers."""
    if not is_fundamental(D):
        raise NotFundamental(f"{D} is not a fundamental discriminant < 0")
    if cache_dir:
        path = os.path.join(cache_dir, "hdpoly", f"{-D}.txt")
        if os.path.exists(path):
            with open(path) as fh:
                header = fh.readline()
                assert header.startswith("# hdpoly v1"), "unversioned H_D cache"
                return [int(line) for line in fh if line.strip()]
    h = len(reduced_forms(D))
    dps = int(3.2 * math.pi * math.sqrt(-D) / math.log(10)) + 12 * h + 30
    while True:
        ints, worst = _compute_H(D, dps)
        if worst < 0.1:
            ints2, worst2 = _compute_H(D, 2 * dps)
            if ints2 == ints and worst2 < worst:
                break
        dps *= 2
        if dps > max_dps:
            raise RoundingUncertain(
                f"H_{D} coefficients uncertain at {dps} digits (worst {worst})")
    if cache_dir:
        os.makedirs(os.path.join(cache_dir, "hdpoly"), exist_ok=True)
        with open(os.path.join(cache_dir, "hdpoly", f"{-D}.txt"), "w") as fh:
            fh.write(f"# hdpoly v1 D={D}\n")
            for c in ints:
                fh.write(f"{c}\n")
    return ints
