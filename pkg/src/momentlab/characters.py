"""Dirichlet characters and exact central values L(chi, 1/2)."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import euler_phi, factorize, is_probable_prime
from .specfun import gamma, hurwitz_zeta

MAX_Q = 10**5


def primitive_root(n: int) -> int:
    """Smallest generator of (Z/n)^*, for n with a cyclic unit group."""
    phi = euler_phi(n)
    if n <= 2:
        return 1
    primes = [p for p, _ in factorize(phi).factors]
    for g in range(2, n):
        if math.gcd(g, n) != 1:
            continue
        if all(pow(g, phi // p, n) != 1 for p in primes):
            return g
    raise ValueError(f"(Z/{n})^* is not cyclic")


@dataclass(frozen=True)
class CharacterTable:
    """chi_k(g^m) = e(k m / (q - 1)) for a prime q and primitive root g."""

    q: int
    g: int
    dlog: np.ndarray  # dlog[a] = m with g^m = a (mod q); dlog[0] = -1
    powers: np.ndarray  # powers[m] = g^m mod q

    @property
    def order(self) -> int:
        return self.q - 1

    def is_even(self, k: int) -> bool:
        return k % 2 == 0

    def parity(self, k: int) -> int:
        return k % 2

    def value(self, k: int, a: int) -> complex:
        a %= self.q
        if a == 0:
            return 0j
        return complex(np.exp(2j * np.pi * ((k * int(self.dlog[a])) % self.order) / self.order))

    def values(self, k: int) -> np.ndarray:
        """chi_k(a) for a = 0..q-1."""
        out = np.zeros(self.q, dtype=complex)
        m = self.dlog[1:]
        out[1:] = np.exp(2j * np.pi * ((k * m) % self.order) / self.order)
        return out

    def at(self, a: int) -> np.ndarray:
        """chi_k(a) for all k = 0..q-2."""
        a %= self.q
        if a == 0:
            return np.zeros(self.order, dtype=complex)
        k = np.arange(self.order)
        return np.exp(2j * np.pi * ((k * int(self.dlog[a])) % self.order) / self.order)


@lru_cache(maxsize=16)
def character_table(q: int) -> CharacterTable:
    if q < 3 or q > MAX_Q or not is_probable_prime(q):
        raise ValueError(f"q={q} must be an odd prime <= {MAX_Q}")
    g = primitive_root(q)
    powers = np.empty(q - 1, dtype=np.int64)
    x = 1
    for m in range(q - 1):
        powers[m] = x
        x = x * g % q
    dlog = np.full(q, -1, dtype=np.int64)
    dlog[powers] = np.arange(q - 1)
    powers.setflags(write=False)
    dlog.setflags(write=False)
    return CharacterTable(q=q, g=g, dlog=dlog, powers=powers)


# ---------------------------------------------------------------------------
# central values


def _hurwitz_vector(table: CharacterTable, s: complex = 0.5) -> np.ndarray:
    """q^-s zeta(s, g^m / q) for m = 0..q-2."""
    q = table.q
    return q ** (-s) * np.asarray(hurwitz_zeta(s, table.powers / q), dtype=complex)


def dft_naive(x: np.ndarray, threads: int = 1, chunk: int = 256) -> np.ndarray:
    """X_k = sum_m x_m e(k m / N) by direct summation, in chunks of k."""
    n = x.size
    m = np.arange(n)

    def block(k0: int) -> np.ndarray:
        k = np.arange(k0, min(k0 + chunk, n))
        phase = (k[:, None] * m[None, :]) % n
        return np.exp(2j * np.pi * phase / n) @ x

    starts = range(0, n, chunk)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(block, starts))
    else:
        parts = [block(k0) for k0 in starts]
    return np.concatenate(parts)


def dft_bluestein(x: np.ndarray) -> np.ndarray:
    """X_k = sum_m x_m e(k m / N) via the chirp factorisation km = (k^2 + m^2 - (k-m)^2)/2."""
    n = x.size
    j = np.arange(n)
    # phases reduced mod 2n before scaling keep the chirp accurate for large n
    chirp = np.exp(1j * np.pi * ((j * j) % (2 * n)) / n)
    size = 1 << int(math.ceil(math.log2(2 * n - 1)))
    a = np.zeros(size, dtype=complex)
    a[:n] = x * chirp
    b = np.zeros(size, dtype=complex)
    b[:n] = np.conj(chirp)
    b[size - n + 1:] = np.conj(chirp[1:][::-1])
    conv = np.fft.ifft(np.fft.fft(a) * np.fft.fft(b))[:n]
    return chirp * conv


def all_l_values(q: int, s: complex = 0.5, method: str = "naive", threads: int = 1) -> np.ndarray:
    """L(chi_k, s) for every k = 0..q-2 (k = 0 is the principal character)."""
    table = character_table(q)
    h = _hurwitz_vector(table, s)
    if method == "naive":
        return dft_naive(h, threads=threads)
    if method == "bluestein":
        return dft_bluestein(h)
    raise ValueError(f"unknown method {method!r}")


def central_values_all(q: int, method: str = "naive", threads: int = 1) -> np.ndarray:
    """L(chi_k, 1/2) for the nontrivial characters k = 1..q-2."""
    return all_l_values(q, 0.5, method, threads)[1:]


def gauss_sum(table: CharacterTable, k: int) -> complex:
    """q^-1/2 sum_x chi_k(x) e(x / q)."""
    if k % table.order == 0:
        raise ValueError("the Gauss sum is taken over nontrivial characters")
    x = np.arange(1, table.q)
    return complex(np.sum(table.values(k)[1:] * np.exp(2j * np.pi * x / table.q))
                   / math.sqrt(table.q))


def l_value(table: CharacterTable, k: int, s: complex) -> complex:
    """L(chi_k, s) = q^-s sum_a chi_k(a) zeta(s, a/q)."""
    q = table.q
    a = np.arange(1, q)
    return complex(q ** (-s) * np.sum(table.values(k)[1:]
                                      * np.asarray(hurwitz_zeta(s, a / q), dtype=complex)))


def completed_l(table: CharacterTable, k: int, s: complex) -> complex:
    kappa = table.parity(k)
    q = table.q
    return complex((q / math.pi) ** ((s + kappa) / 2) * gamma((s + kappa) / 2)
                   * l_value(table, k, s))


def functional_equation_residual(table: CharacterTable, k: int,
                                 s: complex = 0.3 + 0.2j) -> float:
    """|Lambda^2(chi, s) - chi(-1) eps^2 Lambda^2(conj chi, 1 - s)| relative to |Lambda^2(chi, s)|."""
    lhs = completed_l(table, k, s) ** 2
    sign = 1 if table.is_even(k) else -1
    eps = gauss_sum(table, k)
    rhs = sign * eps**2 * completed_l(table, -k % table.order, 1 - s) ** 2
    return abs(lhs - rhs) / abs(lhs)


# ---------------------------------------------------------------------------
# identities


def even_character_sum(table: CharacterTable, m: int) -> float:
    """sum over even nontrivial chi of chi(m), by direct summation."""
    vals = table.at(m)
    return float(np.sum(vals[2::2]).real)


def orthogonality_rhs(q: int, m: int) -> int:
    """(1/2) sum_+- sum_{d | q, m = +-1 (d)} phi(d) mu(q/d) for prime q."""
    total = 0
    for sign in (1, -1):
        for d, mu in ((1, -1), (q, 1)):
            if (m - sign) % d == 0:
                total += euler_phi(d) * mu
    assert total % 2 == 0
    return total // 2


def orthogonality_check(q: int) -> list[tuple[int, int, int]]:
    """Rows (m, lhs, rhs) for every m mod q coprime to q; lhs rounded to an integer."""
    table = character_table(q)
    rows = []
    for m in range(1, q):
        lhs = even_character_sum(table, m)
        lhs_int = int(round(lhs))
        if abs(lhs - lhs_int) > 1e-9:
            raise ArithmeticError(f"character sum at m={m} is not an integer: {lhs}")
        rows.append((m, lhs_int, orthogonality_rhs(q, m)))
    return rows


def parseval_check(q: int) -> tuple[float, float]:
    """sum over all chi of |L(chi, 1/2)|^2, via the L-values and via the Hurwitz norm."""
    table = character_table(q)
    h = _hurwitz_vector(table)
    lhs = float(np.sum(np.abs(all_l_values(q)) ** 2))
    rhs = float(table.order * np.sum(np.abs(h) ** 2))
    return lhs, rhs


# ---------------------------------------------------------------------------
# characters to a general (small) modulus


@lru_cache(maxsize=64)
def characters_mod(v: int) -> np.ndarray:
    """All Dirichlet characters mod v as rows chi(a), a = 0..v-1.

    Built as products over the prime-power factors; each factor must have a
    cyclic unit group, which holds for odd prime powers and for 2 and 4.
    """
    if v == 1:
        return np.ones((1, 1), dtype=complex)
    rows = np.ones((1, v), dtype=complex)
    a = np.arange(v)
    for p, e in factorize(v).factors:
        pe = p**e
        if p == 2 and e > 2:
            raise ValueError("moduli divisible by 8 are not supported")
        g = primitive_root(pe)
        order = euler_phi(pe)
        dlog = np.full(pe, -1)
        x = 1
        for m in range(order):
            dlog[x] = m
            x = x * g % pe
        local = dlog[a % pe]
        block = np.zeros((order, v), dtype=complex)
        for k in range(order):
            block[k] = np.where(local >= 0, np.exp(2j * np.pi * k * local / order), 0)
        rows = (rows[:, None, :] * block[None, :, :]).reshape(-1, v)
    return rows
