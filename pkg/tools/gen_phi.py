#!/usr/bin/env python3
"""Regenerate the shipped modular-polynomial tables and certify them."""

import sys
import time

sys.path.insert(0, "src")

from hvcheck import modpoly


def main():
    for ell in modpoly.SUPPORTED:
        t0 = time.time()
        table = modpoly.compute_phi(ell)
        modpoly.verify_phi(ell, table)
        modpoly.save_phi(ell, table)
        print(f"Phi_{ell}: {len(table)} monomials, {time.time()-t0:.1f}s")


if __name__ == "__main__":
    main()
