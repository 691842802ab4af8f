"""The fixed surjection log : (Z/NZ)^x -> Z/pZ, p | N-1.

Determined by sending the smallest primitive root r of N to 1; the table
holds all N-1 values, so later evaluations are O(1) lookups.  The unique
extension to F_{N^2}^x (via the norm when needed) is handled in ssmod.
"""

from __future__ import annotations

from sympy import isprime, primitive_root

from ..errors import NotPrime


class LogTable:
    def __init__(self, N, p):
        if not isprime(N):
            raise NotPrime(f"{N} is not prime")
        assert (N - 1) % p == 0, "log needs p | N-1"
        self.N = N
        self.p = p
        self.root = int(primitive_root(N))
        table = [0] * N  # table[x] = log(x); index 0 unused
        acc = 1
        for k in range(N - 1):
            table[acc] = k % p
            acc = (acc * self.root) % N
        self.table = table

    def __call__(self, x):
        x %= self.N
        assert x != 0, "log of 0"
        return self.table[x]

    def dlog_full(self, x):
        """Discrete log to the base root, mod N-1 (not reduced mod p)."""
        x %= self.N
        assert x != 0
        acc, k = 1, 0
        while acc != x:
            acc = (acc * self.root) % self.N
            k += 1
        return k


def fixed_log(N, p):
    return LogTable(N, p)
