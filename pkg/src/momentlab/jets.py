"""Truncated Laurent series in s with polynomial dependence on u1, u2.

A Jet stores, for every u-monomial u1^i u2^j (i, j <= udeg), a Laurent
polynomial in s on the exponent window [smin, smax].  Each u-monomial also
carries its own precision ``prec[i, j]``: coefficients of s^e with
e < prec are exact (up to rounding), everything from prec upward is
unknown.  Tracking precision per monomial matters because the u-parts of
the main-term integrands have higher pole orders than the pure s-part, so a
single global precision would be needlessly pessimistic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .arith import EULER_GAMMA


POLY = 10**6


class WindowError(ArithmeticError):
    """Raised when a result would need exponents outside the window."""


@dataclass(frozen=True)
class Window:
    smin: int = -8
    smax: int = 8
    udeg: int = 2

    @property
    def ns(self) -> int:
        return self.smax - self.smin + 1

    @property
    def nu(self) -> int:
        return self.udeg + 1

    @property
    def exact(self) -> int:
        """Precision marker for polynomials (no unknown coefficients at all)."""
        return POLY

    @property
    def top(self) -> int:
        """First exponent past the window."""
        return self.smax + 1


DEFAULT_WINDOW = Window()
S_ONLY = Window(udeg=0)


def _first_nonzero(row: np.ndarray, upto: int) -> int | None:
    nz = np.flatnonzero(row[: max(upto, 0)])
    return int(nz[0]) if nz.size else None


class Jet:
    __slots__ = ("c", "prec", "window")

    def __init__(self, c: np.ndarray, prec: np.ndarray, window: Window):
        self.window = window
        prec = np.asarray(prec, dtype=np.int64).copy()
        # anything near the sentinel came from exact-times-exact arithmetic
        prec[prec >= POLY // 2] = POLY
        c = np.array(c, dtype=complex)
        # unknown coefficients are stored as zero
        for (i, j), p in np.ndenumerate(prec):
            if p <= window.smax:
                c[i, j, max(p - window.smin, 0) :] = 0.0
        self.c = c
        self.prec = prec
        self.c.setflags(write=False)
        self.prec.setflags(write=False)

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, window: Window = DEFAULT_WINDOW) -> "Jet":
        nu = window.nu
        return cls(np.zeros((nu, nu, window.ns)), np.full((nu, nu), window.exact), window)

    @classmethod
    def const(cls, value: complex, window: Window = DEFAULT_WINDOW) -> "Jet":
        return cls.linear(value, 0, 0, 0, window)

    @classmethod
    def linear(cls, c0: complex, a: complex = 0, b: complex = 0, c: complex = 0,
               window: Window = DEFAULT_WINDOW) -> "Jet":
        """The exact polynomial c0 + a*s + b*u1 + c*u2."""
        if window.smin > 0 or window.smax < 1:
            raise WindowError("window must contain s^0 and s^1")
        nu = window.nu
        arr = np.zeros((nu, nu, window.ns), dtype=complex)
        i0 = -window.smin
        arr[0, 0, i0] = c0
        arr[0, 0, i0 + 1] = a
        if window.udeg >= 1:
            arr[1, 0, i0] = b
            arr[0, 1, i0] = c
        elif b or c:
            raise WindowError("u-variables need udeg >= 1")
        return cls(arr, np.full((nu, nu), window.exact), window)

    @classmethod
    def s(cls, window: Window = DEFAULT_WINDOW) -> "Jet":
        return cls.linear(0, 1, 0, 0, window)

    @classmethod
    def u1(cls, window: Window = DEFAULT_WINDOW) -> "Jet":
        return cls.linear(0, 0, 1, 0, window)

    @classmethod
    def u2(cls, window: Window = DEFAULT_WINDOW) -> "Jet":
        return cls.linear(0, 0, 0, 1, window)

    @classmethod
    def from_s_coeffs(cls, coeffs: Sequence[complex], start: int = 0,
                      prec: int | None = None, window: Window = DEFAULT_WINDOW) -> "Jet":
        """Laurent series sum_k coeffs[k] s^(start+k); prec defaults to exact."""
        nu = window.nu
        arr = np.zeros((nu, nu, window.ns), dtype=complex)
        truncated = False
        for k, v in enumerate(coeffs):
            e = start + k
            if e > window.smax:
                truncated = truncated or v != 0
                continue
            if e < window.smin:
                if v != 0:
                    raise WindowError(f"exponent {e} below window")
                continue
            arr[0, 0, e - window.smin] = v
        p = np.full((nu, nu), window.exact)
        if prec is not None:
            p[0, 0] = prec
        elif truncated:
            p[0, 0] = window.top
        return cls(arr, p, window)

    # bookkeeping ----------------------------------------------------------
    def _check(self, other: "Jet") -> None:
        if other.window != self.window:
            raise WindowError("jets live on different windows")

    def valuations(self) -> np.ndarray:
        w = self.window
        out = np.empty_like(self.prec)
        for (i, j), p in np.ndenumerate(self.prec):
            k = _first_nonzero(self.c[i, j], min(p, w.top) - w.smin)
            if k is not None:
                out[i, j] = k + w.smin
            else:
                out[i, j] = p if p < w.top else POLY
        return out

    def s_valuation(self) -> int:
        return int(self.valuations()[0, 0])

    def coerce(self, x) -> "Jet":
        if isinstance(x, Jet):
            self._check(x)
            return x
        return Jet.const(complex(x), self.window)

    # ring operations --------------------------------------------------------
    def __add__(self, other) -> "Jet":
        o = self.coerce(other)
        return Jet(self.c + o.c, np.minimum(self.prec, o.prec), self.window)

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(-self.c, self.prec, self.window)

    def __sub__(self, other) -> "Jet":
        return self + (-self.coerce(other))

    def __rsub__(self, other) -> "Jet":
        return self.coerce(other) - self

    def scale(self, factor: complex) -> "Jet":
        if factor == 0:
            return Jet.zero(self.window)
        return Jet(self.c * factor, self.prec, self.window)

    def __mul__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return self.scale(complex(other))
        self._check(other)
        w = self.window
        nu, ns = w.nu, w.ns
        va, vb = self.valuations(), other.valuations()
        out = np.zeros((nu, nu, ns), dtype=complex)
        prec = np.full((nu, nu), w.exact, dtype=np.int64)
        lo = -w.smin  # offset of exponent smin inside the full convolution
        for i1 in range(nu):
            for i2 in range(nu):
                a = self.c[i1, i2]
                for j1 in range(nu - i1):
                    for j2 in range(nu - i2):
                        t = (i1 + j1, i2 + j2)
                        p = min(self.prec[i1, i2] + vb[j1, j2], other.prec[j1, j2] + va[i1, i2])
                        prec[t] = min(prec[t], p)
                        b = other.c[j1, j2]
                        if not (a.any() and b.any()):
                            continue
                        conv = np.convolve(a, b)
                        if np.any(conv[:lo]):
                            raise WindowError("product valuation below window")
                        out[t] += conv[lo : lo + ns]
                        if np.any(conv[lo + ns :]):
                            prec[t] = min(prec[t], w.top)
        return Jet(out, prec, w)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Jet":
        if n < 0:
            return self.inverse() ** (-n)
        result = Jet.const(1.0, self.window)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def u_free_part(self) -> "Jet":
        """The u^0 component as an exact-in-u jet."""
        w = self.window
        c = np.zeros_like(self.c)
        c[0, 0] = self.c[0, 0]
        p = np.full_like(self.prec, w.exact)
        p[0, 0] = self.prec[0, 0]
        return Jet(c, p, w)

    def _inverse_s(self) -> "Jet":
        w = self.window
        v, p = self.s_valuation(), int(self.prec[0, 0])
        if v >= min(p, w.top):
            raise ZeroDivisionError("division by a jet that is zero on its window")
        if -v < w.smin:
            raise WindowError("inverse valuation below window")
        poly = p >= POLY
        lead = self.c[0, 0, v - w.smin]
        if poly and not self.c[0, 0, v - w.smin + 1 :].any():
            return Jet.from_s_coeffs([1.0 / lead], start=-v, window=w)
        n = (w.smax + v + 1) if poly else min(p, w.top) - v
        b = np.zeros(max(n, 1), dtype=complex)
        known = self.c[0, 0, v - w.smin : min(p, w.top) - w.smin][:n]
        b[: known.size] = known
        d = np.zeros(n, dtype=complex)
        d[0] = 1.0 / b[0]
        for k in range(1, n):
            d[k] = -np.dot(b[1 : k + 1], d[k - 1 :: -1][:k]) / b[0]
        return Jet.from_s_coeffs(d, start=-v, prec=(w.top if poly else p - 2 * v), window=w)

    def inverse(self) -> "Jet":
        inv0 = self.u_free_part()._inverse_s()
        rest = self - self.u_free_part()
        if not rest.c.any() and (rest.prec >= self.window.exact).all():
            return inv0
        r = rest * inv0
        term = Jet.const(1.0, self.window)
        total = term
        for _ in range(2 * self.window.udeg):
            term = -(term * r)
            total = total + term
        return inv0 * total

    def __truediv__(self, other) -> "Jet":
        if not isinstance(other, Jet):
            return self.scale(1.0 / complex(other))
        return self * other.inverse()

    def __rtruediv__(self, other) -> "Jet":
        return self.coerce(other) * self.inverse()

    # transcendental helpers --------------------------------------------
    def constant_term(self) -> complex:
        w = self.window
        if w.smin > 0 or self.prec[0, 0] <= 0 or w.smax < 0:
            raise WindowError("constant term not available")
        return complex(self.c[0, 0, -w.smin])

    def exp(self) -> "Jet":
        if self.s_valuation() < 0:
            raise WindowError("exp of a jet with a pole in s")
        c0 = self.constant_term()
        r = self - c0
        return compose_taylor(_exp_coeffs(self.window), r).scale(np.exp(c0))

    # extraction --------------------------------------------------------------
    def coefficient(self, e_s: int, e1: int = 0, e2: int = 0) -> complex:
        w = self.window
        if not (w.smin <= e_s <= w.smax) or max(e1, e2) > w.udeg or min(e1, e2) < 0:
            raise WindowError(f"exponent ({e_s},{e1},{e2}) outside window")
        if e_s >= self.prec[e1, e2]:
            raise WindowError(
                f"coefficient s^{e_s} u^({e1},{e2}) unknown (precision {self.prec[e1, e2]})")
        return complex(self.c[e1, e2, e_s - w.smin])

    def residue(self) -> complex:
        return self.coefficient(-1)

    def constant(self) -> complex:
        return self.coefficient(0)

    def s_coeffs(self, e1: int = 0, e2: int = 0) -> dict[int, complex]:
        """Known coefficients of the u1^e1 u2^e2 component, keyed by s-exponent."""
        w = self.window
        return {e: complex(self.c[e1, e2, e - w.smin])
                for e in range(w.smin, min(int(self.prec[e1, e2]), w.top))}

    def odd_ratio(self, e1: int = 0, e2: int = 0) -> float:
        """max |odd s-coefficient| / max |coefficient| over the known range."""
        co = self.s_coeffs(e1, e2)
        big = max((abs(v) for v in co.values()), default=0.0)
        if big == 0:
            return 0.0
        return max((abs(v) for e, v in co.items() if e % 2), default=0.0) / big

    def with_prec(self, prec: int) -> "Jet":
        return Jet(self.c, np.minimum(self.prec, prec), self.window)

    def __repr__(self) -> str:
        parts = []
        for (i, j), p in np.ndenumerate(self.prec):
            co = {e: v for e, v in self.s_coeffs(i, j).items() if v != 0}
            if co:
                terms = " + ".join(f"({v:.6g})s^{e}" for e, v in co.items())
                tail = "" if p >= POLY else f" + O(s^{p})"
                parts.append(f"u^({i},{j})[{terms}{tail}]")
        return "Jet(" + ("; ".join(parts) or "0") + ")"


def _exp_coeffs(window: Window) -> list[float]:
    n = window.ns + 2 * window.udeg + 2
    return [1.0 / math.factorial(k) for k in range(n)]


def compose_taylor(coeffs: Sequence[complex], t: Jet) -> Jet:
    """sum_k coeffs[k] t^k for a jet t without constant term.

    The omitted tail O(t^len(coeffs)) lowers the precision accordingly.
    """
    if t.s_valuation() < 1 and t.u_free_part().c.any():
        raise WindowError("inner jet must vanish at s = 0")
    w = t.window
    result = Jet.const(coeffs[-1], w)
    for ck in reversed(coeffs[:-1]):
        result = result * t + ck
    tail = t ** len(coeffs)
    tv = tail.valuations()
    return Jet(result.c, np.minimum(result.prec, np.minimum(tail.prec, tv)), w)


def taylor_jet(center_coeffs: Sequence[complex], a: complex, b: complex = 0, c: complex = 0,
               window: Window = DEFAULT_WINDOW) -> Jet:
    """Compose a Taylor expansion sum_k c_k t^k with the linear form t = a s + b u1 + c u2."""
    t = Jet.linear(0, a, b, c, window)
    return compose_taylor(list(center_coeffs), t)


# differential operators at u = 0 ---------------------------------------------


def apply_D_gamma(a: Jet, gamma: float = EULER_GAMMA) -> Jet:
    """(d/du1 + 2 gamma)(d/du2 + 2 gamma) at u = 0, as an s-jet."""
    w = a.window
    if w.udeg < 1:
        raise WindowError("D_gamma needs u-degree >= 1")
    nu = w.nu
    c = np.zeros_like(a.c)
    c[0, 0] = 4 * gamma**2 * a.c[0, 0] + 2 * gamma * (a.c[1, 0] + a.c[0, 1]) + a.c[1, 1]
    p = np.full((nu, nu), w.exact)
    p[0, 0] = min(a.prec[0, 0], a.prec[1, 0], a.prec[0, 1], a.prec[1, 1])
    return Jet(c, p, w)


def D_gamma_parts(a: Jet, gamma: float = EULER_GAMMA) -> tuple[Jet, Jet, Jet]:
    """The three pieces 4g^2 a, 2g(a_u1 + a_u2), a_u1u2 of D_gamma, as s-jets."""
    w = a.window
    nu = w.nu
    pieces = []
    for coeff, idx in ((4 * gamma**2, [(0, 0)]), (2 * gamma, [(1, 0), (0, 1)]), (1.0, [(1, 1)])):
        c = np.zeros_like(a.c)
        c[0, 0] = coeff * sum(a.c[i] for i in idx)
        p = np.full((nu, nu), w.exact)
        p[0, 0] = min(int(a.prec[i]) for i in idx)
        pieces.append(Jet(c, p, w))
    return tuple(pieces)


def apply_D_q4(a: Jet, log_q: float) -> Jet:
    """The order-four operator at s = u = 0, returned as a constant jet."""
    val = (a.coefficient(4)
           + log_q**2 * 2 * a.coefficient(2)
           + log_q * 2 * (a.coefficient(2, 1, 0) + a.coefficient(2, 0, 1))
           + 2 * a.coefficient(2, 1, 1))
    return Jet.const(val, a.window)


def extract(a: Jet, which: str | tuple[int, int, int]) -> complex:
    if which == "residue_in_s":
        return a.residue()
    if which == "constant_in_s":
        return a.constant()
    e_s, e1, e2 = which
    return a.coefficient(e_s, e1, e2)


def product(jets: Iterable[Jet]) -> Jet:
    it = iter(jets)
    out = next(it)
    for j in it:
        out = out * j
    return out


def max_rel_diff(a: Jet, b: Jet) -> float:
    """Largest coefficient difference over the commonly known part, relative to max |b|."""
    a._check(b)
    known = np.arange(a.window.ns)[None, None, :] + a.window.smin < np.minimum(a.prec, b.prec)[:, :, None]
    scale = np.max(np.abs(b.c[known])) if known.any() else 0.0
    diff = np.max(np.abs(a.c - b.c)[known]) if known.any() else 0.0
    return float(diff / scale) if scale else float(diff)
