"""Kloosterman and Ramanujan sums, and the character-separated sum S-hat."""
from __future__ import annotations

import math

import numpy as np

from .arith import divisors, euler_phi, mobius
from .characters import characters_mod


def _units(c: int) -> np.ndarray:
    x = np.arange(c)
    return x[np.gcd(x, c) == 1]


def _inverses(x: np.ndarray, c: int) -> np.ndarray:
    if c == 1:
        return np.zeros_like(x)
    return np.array([pow(int(y), -1, c) for y in x], dtype=np.int64)


def kloosterman_exponents(n: int, m: int, c: int) -> np.ndarray:
    """The residues n x + m x^-1 mod c over the units x mod c."""
    x = _units(c)
    return (n * x + m * _inverses(x, c)) % c


def kloosterman_sum(n: int, m: int, c: int) -> complex:
    if c < 1:
        raise ValueError("modulus must be positive")
    e = kloosterman_exponents(n, m, c)
    return complex(np.sum(np.exp(2j * np.pi * e / c)))


def ramanujan_sum(n: int, ell: int) -> int:
    """c_ell(n) = sum_{ab = ell, b | n} mu(a) b."""
    if ell < 1:
        raise ValueError("ell must be positive")
    return sum(mobius(ell // b) * b for b in divisors(ell) if n % b == 0)


def ramanujan_sum_direct(n: int, ell: int) -> complex:
    k = _units(ell)
    return complex(np.sum(np.exp(2j * np.pi * k * n / ell)))


def weil_bound_violations(p: int) -> list[tuple[int, int, float]]:
    """(n, m, |S|) with |S(n, m; p)| > 2 sqrt(p), over 1 <= n, m < p."""
    x = np.arange(1, p)
    xinv = _inverses(x, p)
    bound = 2 * math.sqrt(p) * (1 + 1e-12)
    bad = []
    for n in range(1, p):
        # all m at once: rows m, columns x
        e = (n * x[None, :] + np.arange(1, p)[:, None] * xinv[None, :]) % p
        vals = np.abs(np.sum(np.exp(2j * np.pi * e / p), axis=1))
        for m in np.flatnonzero(vals > bound):
            bad.append((n, int(m) + 1, float(vals[m])))
    return bad


def twisted_mult_check(a: int, b: int, r: int, s: int) -> bool:
    """S(a, b; rs) = S(a, s^-2 b; r) S(a, r^-2 b; s) for coprime r, s.

    Both sides are sums of roots of unity of order rs; the check compares
    the multisets of exponents, so equality is exact.
    """
    if math.gcd(r, s) != 1:
        raise ValueError("moduli must be coprime")
    c = r * s
    lhs = np.bincount(kloosterman_exponents(a, b, c), minlength=c)
    s_inv = pow(s, -1, r) if r > 1 else 0
    r_inv = pow(r, -1, s) if s > 1 else 0
    e1 = kloosterman_exponents(a, s_inv * s_inv * b, r)
    e2 = kloosterman_exponents(a, r_inv * r_inv * b, s)
    # e(e1/r) e(e2/s) = e((e1 s + e2 r)/(rs))
    combined = (e1[:, None] * s + e2[None, :] * r) % c
    rhs = np.bincount(combined.ravel(), minlength=c)
    return bool(np.array_equal(lhs, rhs))


# ---------------------------------------------------------------------------
# the character-separated sum


def split_modulus(d: int, ell: int) -> tuple[int, int]:
    """d = d_star d_prime with gcd(d_star, ell) = 1 and d_prime | ell^infinity."""
    d_prime = 1
    rest = d
    g = math.gcd(rest, ell)
    while g > 1:
        d_prime *= g
        rest //= g
        g = math.gcd(rest, ell)
    return rest, d_prime


def _crt(residues: list[tuple[int, int]]) -> int:
    x, mod = 0, 1
    for r, m in residues:
        if m == 1:
            continue
        t = ((r - x) * pow(mod, -1, m)) % m
        x += mod * t
        mod *= m
    return x % mod


def s_hat_shift(n: int, m: int, d1: int, d2: int, ell1p: int, ell2p: int) -> tuple[int, int]:
    """(v, B) with v = d1' d2' and B = d1 ell1'^-1 n - d2 ell2'^-1 m mod v.

    Modulo d1' the first term vanishes and ell2' is inverted mod d1';
    modulo d2' the second term vanishes and ell1' is inverted mod d2'.
    """
    if math.gcd(ell1p, ell2p) != 1:
        raise ValueError("ell1' and ell2' must be coprime")
    _, d1p = split_modulus(d1, ell1p)
    _, d2p = split_modulus(d2, ell2p)
    if math.gcd(d1p, d2p) != 1:
        raise ValueError("d1' and d2' must be coprime")
    v = d1p * d2p
    parts = []
    if d1p > 1:
        parts.append(((-d2 * pow(ell2p, -1, d1p) * m) % d1p, d1p))
    if d2p > 1:
        parts.append(((d1 * pow(ell1p, -1, d2p) * n) % d2p, d2p))
    return v, _crt(parts)


def s_hat_sum(chi: np.ndarray, n: int, m: int, d1: int, d2: int, ell1p: int, ell2p: int,
              h: int, d: int) -> complex:
    """sum_{y mod v, (y, v) = 1} conj(chi)(y) S(hd y^-1, B y^-1; v).

    ``chi`` is a row of character values modulo v = d1' d2'.
    """
    v, B = s_hat_shift(n, m, d1, d2, ell1p, ell2p)
    chi = np.asarray(chi)
    if chi.size != v:
        raise ValueError(f"character must be given modulo v={v}")
    if v == 1:
        return complex(np.conj(chi[0]) * kloosterman_sum(h * d, B, 1))
    total = 0j
    for y in _units(v):
        yi = pow(int(y), -1, v)
        total += np.conj(chi[y]) * kloosterman_sum(h * d * yi, B * yi, v)
    return complex(total)


def s_hat_reconstruction(n: int, m: int, d1: int, d2: int, ell1p: int, ell2p: int,
                         h: int, d: int, c: int) -> tuple[complex, complex]:
    """Both sides of the character expansion of the v-part Kloosterman factor.

    Left: (1/phi(v)) sum_chi conj(chi)(C) S-hat(conj chi), C = c d1* d2*.
    Right: S(hd, C^-2 B; v).
    """
    v, B = s_hat_shift(n, m, d1, d2, ell1p, ell2p)
    d1s, _ = split_modulus(d1, ell1p)
    d2s, _ = split_modulus(d2, ell2p)
    C = c * d1s * d2s
    if math.gcd(C, v) != 1:
        raise ValueError("c d1* d2* must be coprime to v")
    chars = characters_mod(v)
    lhs = sum(np.conj(chi[C % v]) * s_hat_sum(np.conj(chi), n, m, d1, d2, ell1p, ell2p, h, d)
              for chi in chars) / euler_phi(v)
    Ci = pow(C, -1, v) if v > 1 else 0
    rhs = kloosterman_sum(h * d, Ci * Ci * B, v)
    return complex(lhs), rhs
