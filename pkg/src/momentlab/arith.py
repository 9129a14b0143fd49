"""Integer and multiplicative arithmetic on small inputs."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

TRIAL_LIMIT = 10**6


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    @property
    def cubefree(self) -> bool:
        return all(e <= 2 for _, e in self.factors)

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out


@dataclass(frozen=True)
class Constants:
    theta: Fraction = Fraction(7, 64)
    eta: Fraction = Fraction(11, 448)
    lambda_max: Fraction = Fraction(11, 8064)
    euler_gamma: str = "0.577215664901532860606512090082402431"

    @property
    def gamma(self) -> float:
        return float(self.euler_gamma)


CONSTANTS = Constants()
EULER_GAMMA = CONSTANTS.gamma


def primes_up_to(n: int) -> np.ndarray:
    """Primes <= n by an odd-only sieve of Eratosthenes."""
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    # index i stands for 2i+1
    sieve = np.ones((n + 1) // 2, dtype=bool)
    sieve[0] = False
    for i in range(1, (math.isqrt(n) - 1) // 2 + 1):
        if sieve[i]:
            p = 2 * i + 1
            sieve[p * p // 2 :: p] = False
    odd = 2 * np.flatnonzero(sieve) + 1
    return np.concatenate(([2], odd)).astype(np.int64)


@lru_cache(maxsize=1)
def _small_primes() -> tuple[int, ...]:
    return tuple(int(p) for p in primes_up_to(TRIAL_LIMIT))


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_probable_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24 (covers 64-bit)."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    if n <= 0:
        raise ValueError(f"factorize needs a positive integer, got {n}")
    if n >= 2**63:
        raise ValueError("factorize supports n < 2**63")
    factors = []
    m = n
    for p in _small_primes():
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            factors.append((p, e))
    if m > 1:
        if m < TRIAL_LIMIT**2 or is_probable_prime(m):
            factors.append((m, 1))
        else:
            raise ValueError(f"cofactor {m} of {n} has no prime factor below {TRIAL_LIMIT}")
    return Factorization(n, tuple(factors))


@dataclass(frozen=True)
class Basics:
    tau: int
    mobius: int
    phi: int
    cubefree: bool


def multiplicative_basics(n: int) -> Basics:
    fac = factorize(n)
    tau, phi, mob = 1, 1, 1
    for p, e in fac.factors:
        tau *= e + 1
        phi *= (p - 1) * p ** (e - 1)
        mob = 0 if e > 1 else -mob
    return Basics(tau=tau, mobius=mob, phi=phi, cubefree=fac.cubefree)


def tau(n: int) -> int:
    return multiplicative_basics(n).tau


def mobius(n: int) -> int:
    return multiplicative_basics(n).mobius


def euler_phi(n: int) -> int:
    return multiplicative_basics(n).phi


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).factors:
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def mod_inverse(a: int, m: int) -> int:
    if m < 2:
        raise ValueError("modulus must be >= 2")
    if math.gcd(a, m) != 1:
        raise ValueError(f"{a} is not invertible mod {m}")
    return pow(a, -1, m)


def require_cubefree(n: int) -> Factorization:
    fac = factorize(n)
    if not fac.cubefree:
        raise ValueError(f"{n} is not cubefree")
    return fac


def check_pair(ell1: int, ell2: int, q: int | None = None) -> None:
    """Validate the standing hypotheses on a twist pair (and modulus)."""
    for ell in (ell1, ell2):
        if ell < 1:
            raise ValueError("twists must be positive")
        require_cubefree(ell)
    if math.gcd(ell1, ell2) != 1:
        raise ValueError(f"ell1={ell1} and ell2={ell2} are not coprime")
    if q is not None:
        if q < 3 or not is_probable_prime(q):
            raise ValueError(f"q={q} must be an odd prime")
        if math.gcd(ell1 * ell2, q) != 1:
            raise ValueError(f"ell1*ell2 must be coprime to q={q}")


# vectorised sieves for the brute-force sums


def divisor_count_table(n: int) -> np.ndarray:
    """tau(k) for 0 <= k <= n (entry 0 unused)."""
    tau_arr = np.ones(n + 1, dtype=np.int64)
    tau_arr[0] = 0
    for p in primes_up_to(n):
        p = int(p)
        # (exponent + 1) for the multiples of p
        mult = np.full(n // p, 2, dtype=np.int64)
        pk = p * p
        while pk <= n:
            mult[pk // p - 1 :: pk // p] += 1
            pk *= p
        tau_arr[p::p] *= mult
    return tau_arr


def mobius_table(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    mu[0] = 0
    for p in primes_up_to(n):
        p = int(p)
        mu[p::p] *= -1
        if p * p <= n:
            mu[p * p :: p * p] = 0
    return mu


def valuation_table(n: int, p: int) -> np.ndarray:
    """v_p(k) for 0 <= k <= n."""
    v = np.zeros(n + 1, dtype=np.int64)
    pk = p
    while pk <= n:
        v[pk::pk] += 1
        pk *= p
    return v
