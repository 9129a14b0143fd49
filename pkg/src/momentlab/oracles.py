"""Brute-force moments and the approximate functional equation."""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .arith import check_pair, divisor_count_table
from .characters import central_values_all, character_table
from .functions import DEFAULT_Q, EVEN, ODD, G_value, Parity, QChoice
from .main_terms import MainTermBreakdown, theorem1_prediction

IMAG_TOL = 1e-9

# trapezoid on a vertical line: step and half-height
V_STEP = 0.05
V_HEIGHT = 60.0
V_LINE = 2.0
# below this x the factor x^-2 on Re s = 2 costs digits; Re s = 1/2 is used instead
V_SMALL_X = 1.0
V_LINE_SMALL = 0.5
# |V| below this is dropped from the approximate functional equation
AFE_V_TOL = 1e-13


def _V_and_slope(x, parity: Parity, q_weight: QChoice, step: float, height: float):
    """V(x) and x V'(x); the slope integrand carries an extra factor -s."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    t = np.arange(0.0, height + step / 2, step)
    weights = np.full(t.size, step)
    weights[0] = step / 2
    val = np.empty(x.size)
    slope = np.empty(x.size)
    for sigma, mask in ((V_LINE, x >= V_SMALL_X), (V_LINE_SMALL, x < V_SMALL_X)):
        if not mask.any():
            continue
        s = sigma + 1j * t
        kernel = G_value(parity, s, q_weight) / s * weights
        kernels = np.stack([kernel, -s * kernel], axis=1)
        logx = np.log(x[mask])
        out = np.empty((logx.size, 2))
        chunk = 4096
        for i in range(0, logx.size, chunk):
            # the integrand at conj(s) is the conjugate, so fold onto t >= 0
            out[i:i + chunk] = (np.exp(-np.outer(logx[i:i + chunk], s)) @ kernels).real / math.pi
        val[mask] = out[:, 0]
        slope[mask] = out[:, 1]
    return val, slope


def V(x, parity: Parity = EVEN, q_weight: QChoice = DEFAULT_Q,
      step: float = V_STEP, height: float = V_HEIGHT) -> np.ndarray:
    """(1/2 pi i) int G(s) x^-s ds / s by the trapezoid rule on a vertical line.

    The line is Re s = 2, except for x < 1 where x^-2 would magnify
    rounding; there Re s = 1/2 is used.  No pole lies between the two lines.
    """
    return _V_and_slope(x, parity, q_weight, step, height)[0]


@dataclass(frozen=True)
class VTable:
    """Cubic Hermite interpolant of V in log x on a uniform grid."""

    log_lo: float
    h: float
    val: np.ndarray
    slope: np.ndarray

    def __call__(self, x) -> np.ndarray:
        y = (np.log(np.asarray(x, dtype=float)) - self.log_lo) / self.h
        i = np.clip(np.floor(y).astype(np.int64), 0, self.val.size - 2)
        t = y - i
        t2, t3 = t * t, t * t * t
        return ((2 * t3 - 3 * t2 + 1) * self.val[i] + (t3 - 2 * t2 + t) * self.h * self.slope[i]
                + (-2 * t3 + 3 * t2) * self.val[i + 1] + (t3 - t2) * self.h * self.slope[i + 1])


@lru_cache(maxsize=16)
def v_table(parity: Parity, q_weight: QChoice, x_lo: float, x_hi: float,
            h: float = 1e-3) -> VTable:
    log_lo = math.log(x_lo)
    n = int(math.ceil((math.log(x_hi) - log_lo) / h)) + 2
    xs = np.exp(log_lo + h * np.arange(n))
    val, slope = _V_and_slope(xs, parity, q_weight, V_STEP, V_HEIGHT)
    return VTable(log_lo, h, val, slope)


@lru_cache(maxsize=8)
def v_cutoff(parity: Parity, q_weight: QChoice = DEFAULT_Q, tol: float = 1e-14) -> float:
    """Smallest x (on a log grid) beyond which |V| stays below tol."""
    xs = np.geomspace(1.0, 1e4, 400)
    vals = np.abs(V(xs, parity, q_weight))
    above = np.flatnonzero(vals >= tol)
    return float(xs[min(above[-1] + 1, xs.size - 1)]) if above.size else 1.0


# ---------------------------------------------------------------------------
# brute moments


def _character_twist(q: int, ell1: int, ell2: int) -> np.ndarray:
    """chi_k(ell1) conj(chi_k)(ell2) for k = 1..q-2."""
    table = character_table(q)
    return (table.at(ell1) * np.conj(table.at(ell2)))[1:]


def twisted_fourth_moment_brute(ell1: int, ell2: int, q: int, parity_mode: str = "all_primitive",
                                values: np.ndarray | None = None, method: str = "naive",
                                threads: int = 1) -> float:
    """Average of |L(chi, 1/2)|^4 chi(ell1) conj(chi)(ell2) over nontrivial characters.

    even_only and odd_only carry the weight 2 / (q - 2); all_primitive is the
    plain average, so it equals the mean of the two.
    """
    if math.gcd(ell1 * ell2, q) != 1:
        raise ValueError("ell1 ell2 must be coprime to q")
    if values is None:
        values = central_values_all(q, method=method, threads=threads)
    terms = np.abs(values) ** 4 * _character_twist(q, ell1, ell2)
    k = np.arange(1, q - 1)
    if parity_mode == "even_only":
        total = 2 * np.sum(terms[k % 2 == 0]) / (q - 2)
    elif parity_mode == "odd_only":
        total = 2 * np.sum(terms[k % 2 == 1]) / (q - 2)
    elif parity_mode == "all_primitive":
        total = np.sum(terms) / (q - 2)
    else:
        raise ValueError(f"unknown parity mode {parity_mode!r}")
    if abs(total.imag) > IMAG_TOL * max(1.0, abs(total)):
        raise ArithmeticError(f"moment has imaginary part {total.imag:.3e}")
    return float(total.real)


@dataclass(frozen=True)
class AfeResult:
    afe_value: float
    exact_value: float

    @property
    def rel_error(self) -> float:
        return abs(self.afe_value - self.exact_value) / abs(self.exact_value)


def _pair_histogram(tau: np.ndarray, w: np.ndarray, q: int, dlog: np.ndarray,
                    block: int = 1 << 22) -> np.ndarray:
    """sum over n m <= N, (nm, q) = 1 of tau(n) tau(m) w(nm), binned by dlog n - dlog m mod q - 1."""
    order = q - 1
    n_max = tau.size - 1
    ns = np.arange(1, n_max + 1)
    ns = ns[ns % q != 0]
    tops = n_max // ns
    cum = np.cumsum(tops)
    hist = np.zeros(order)
    start = 0
    while start < ns.size:
        # take whole rows until the block holds about `block` pairs
        stop = max(int(np.searchsorted(cum, cum[start] - tops[start] + block, side="right")), start + 1)
        nb, tb = ns[start:stop], tops[start:stop]
        offsets = np.cumsum(tb) - tb
        n = np.repeat(nb, tb)
        m = np.arange(tb.sum()) - np.repeat(offsets, tb) + 1
        keep = m % q != 0
        n, m = n[keep], m[keep]
        r = (dlog[n % q] - dlog[m % q]) % order
        hist += np.bincount(r, weights=tau[n] * tau[m] * w[n * m], minlength=order)
        start = stop
    return hist


def afe_all(q: int, q_weight: QChoice = DEFAULT_Q, tol: float = AFE_V_TOL) -> np.ndarray:
    """|L(chi_k, 1/2)|^4 from the approximate functional equation, k = 1..q-2.

    The double sum is grouped by the class of dlog(n) - dlog(m) mod q - 1,
    so every character comes out of one DFT of a histogram.  The sum is cut
    at nm <= q^2 max(log^2 q, X) with |V(x)| < tol beyond X.
    """
    table = character_table(q)
    order = table.order
    out = np.zeros(order - 1)
    for parity in (EVEN, ODD):
        x_max = max(math.log(q) ** 2, v_cutoff(parity, q_weight, tol))
        n_max = int(q * q * x_max)
        tau = divisor_count_table(n_max).astype(np.float32)
        vt = v_table(parity, q_weight, 1.0 / q**2, x_max)
        w = np.zeros(n_max + 1)
        for i in range(1, n_max + 1, 1 << 22):
            N = np.arange(i, min(i + (1 << 22), n_max + 1), dtype=float)
            w[i:i + N.size] = vt(N / q**2) / np.sqrt(N)
        hist = _pair_histogram(tau, w, q, table.dlog)
        del tau, w
        k = np.arange(order)
        # sum_r hist[r] e(k r / order), real by the n <-> m symmetry
        vals = 2 * (np.exp(2j * np.pi * np.outer(k, np.arange(order)) / order) @ hist).real
        sel = (k % 2 == parity.kappa) & (k > 0)
        out[k[sel] - 1] = vals[sel]
    return out


def afe_check(table, k: int, q_weight: QChoice = DEFAULT_Q, tol: float = AFE_V_TOL) -> AfeResult:
    if k % table.order == 0:
        raise ValueError("the approximate functional equation needs a nontrivial character")
    afe = afe_all(table.q, q_weight, tol)[k - 1]
    exact = abs(central_values_all(table.q)[k - 1]) ** 4
    return AfeResult(afe_value=float(afe), exact_value=float(exact))


def diagonal_sum_brute(ell1: int, ell2: int, q: int, parity: Parity = EVEN,
                       cutoff: float = 1e8, q_weight: QChoice = DEFAULT_Q) -> float:
    """2 sum_{ell1 n = ell2 m, (nm, q) = 1, nm <= cutoff} tau(n) tau(m) (nm)^-1/2 V(nm / q^2).

    With n = ell2 j, m = ell1 j the sum runs over j <= sqrt(cutoff / ell1 ell2).
    """
    check_pair(ell1, ell2, q)
    J = int(math.isqrt(int(cutoff // (ell1 * ell2))))
    from .functions import _tau_of_multiples

    j = np.arange(1, J + 1)
    t1 = _tau_of_multiples(ell1, J)
    t2 = _tau_of_multiples(ell2, J)
    nm = ell1 * ell2 * j.astype(float) ** 2
    keep = j % q != 0
    vals = V(nm[keep] / q**2, parity, q_weight)
    return float(2 * math.fsum(t1[keep] * t2[keep] / np.sqrt(nm[keep]) * vals))


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class MomentReport:
    q: int
    ell1: int
    ell2: int
    brute_value: float
    predicted: MainTermBreakdown
    abs_error: float
    rel_error: float
    wall_time_ms: int

    def as_dict(self) -> dict:
        d = asdict(self)
        d["predicted"] = self.predicted.as_dict()
        return d


def moment_report(q: int, ell1: int = 1, ell2: int = 1, method: str = "bluestein",
                  threads: int = 1, q_weight: QChoice = DEFAULT_Q) -> MomentReport:
    t0 = time.perf_counter()
    brute = twisted_fourth_moment_brute(ell1, ell2, q, "all_primitive", method=method,
                                        threads=threads)
    pred = theorem1_prediction(ell1, ell2, q, q_weight)
    err = abs(brute - pred.total)
    ms = int(round(1000 * (time.perf_counter() - t0)))
    return MomentReport(q=q, ell1=ell1, ell2=ell2, brute_value=brute, predicted=pred,
                        abs_error=err, rel_error=err / abs(brute) if brute else float("inf"),
                        wall_time_ms=ms)
