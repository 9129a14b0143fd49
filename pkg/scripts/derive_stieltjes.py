"""Stieltjes constants from their limit definition, to 30+ digits.

    gamma_k = lim_N  sum_{n<=N} (log n)^k / n  -  (log N)^{k+1} / (k+1)

The partial sum is completed with Euler-Maclaurin at N, so a modest N
already gives far more than 30 digits.  Only mpmath arithmetic and
differentiation are used (not mpmath.stieltjes).

Usage: python3 scripts/derive_stieltjes.py [kmax]
"""
import sys

import mpmath as mp


def stieltjes_em(k: int, N: int = 60, terms: int = 24) -> mp.mpf:
    f = lambda x: mp.log(x) ** k / x
    total = mp.fsum(f(n) for n in range(1, N))
    total += f(N) / 2 - mp.log(N) ** (k + 1) / (k + 1)
    for j in range(1, terms + 1):
        total -= mp.bernoulli(2 * j) / mp.factorial(2 * j) * mp.diff(f, N, 2 * j - 1)
    return total


if __name__ == "__main__":
    kmax = int(sys.argv[1]) if len(sys.argv) > 1 else 10
    mp.mp.dps = 60
    for k in range(kmax + 1):
        a = stieltjes_em(k, N=60)
        b = stieltjes_em(k, N=90)
        assert abs(a - b) < mp.mpf(10) ** -35, (k, a - b)
        print(f'    "{mp.nstr(a, 34, min_fixed=-50, max_fixed=50)}",')
