"""Voronoi summation for the divisor function twisted by e(dn/ell), as a numeric identity."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import EULER_GAMMA, divisor_count_table
from .specfun import bessel

# K0(x) < 1e-18 beyond this argument
K0_CUTOFF = 40.0
MAX_DUAL_TERMS = 200_000
DUAL_BLOCK = 500
DUAL_TOL = 1e-9
NODES_PER_WAVE = 3.0


@dataclass(frozen=True)
class Bump:
    """exp(-1/(1 - t^2)) with t = (2x - 3X)/X, supported on [X, 2X]."""

    X: float

    @property
    def support(self) -> tuple[float, float]:
        return self.X, 2 * self.X

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = (2 * x - 3 * self.X) / self.X
        out = np.zeros_like(t)
        inside = np.abs(t) < 1
        out[inside] = np.exp(-1 / (1 - t[inside] ** 2))
        return out


@dataclass(frozen=True)
class VoronoiResult:
    lhs: float
    rhs: float
    abs_err: float
    main: float
    dual_k: float
    dual_y: float
    dual_terms: int


def _nodes(g: Bump, n: int) -> tuple[np.ndarray, np.ndarray]:
    a, b = g.support
    t, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (b - a) * t + 0.5 * (a + b), 0.5 * (b - a) * w


def _node_count(n_top: int, g: Bump, ell: int, per_wave: float = NODES_PER_WAVE) -> int:
    """Enough Gauss nodes for the oscillation of Y0(4 pi sqrt(n x) / ell) at n = n_top."""
    a, b = g.support
    waves = 2 * math.sqrt(n_top) * (math.sqrt(b) - math.sqrt(a)) / ell
    return int(max(200, per_wave * waves + 100))


def _twist(n: np.ndarray, a: int, ell: int) -> np.ndarray:
    return np.exp(2j * np.pi * ((a * n) % ell) / ell)


def voronoi_check(X: float = 10.0, d: int = 1, ell: int = 3, tol: float = DUAL_TOL,
                  per_wave: float = NODES_PER_WAVE) -> VoronoiResult:
    """Both sides of the twisted Voronoi formula for the bump on [X, 2X].

    rhs = (1/ell) int (log x + 2 gamma - 2 log ell) g
          + sum tau(n) [e(d' n / ell) g+(n) + e(-d' n / ell) g-(n)],
    g+ = (4/ell) int g K0 and g- = -(2 pi/ell) int g Y0,
    with d d' = 1 mod ell and Bessel argument 4 pi sqrt(n x) / ell.
    """
    if ell < 1 or math.gcd(d, ell) != 1:
        raise ValueError("need ell >= 1 and gcd(d, ell) = 1")
    g = Bump(X)
    lo, hi = g.support
    dbar = pow(d, -1, ell) if ell > 1 else 0

    n = np.arange(math.ceil(lo), math.floor(hi) + 1)
    tau = divisor_count_table(int(hi) + 1)
    lhs = complex(np.sum(tau[n] * _twist(n, d, ell) * g(n)))

    x, w = _nodes(g, 400)
    gw = g(x) * w
    main = float(np.sum((np.log(x) + 2 * EULER_GAMMA - 2 * math.log(ell)) * gw)) / ell

    # K0 branch: negligible once the smallest argument passes K0_CUTOFF
    n_k = int((K0_CUTOFF * ell / (4 * math.pi)) ** 2 / lo) + 1
    nk = np.arange(1, n_k + 1)
    arg = 4 * np.pi * np.sqrt(np.outer(nk, x)) / ell
    gk = 4 / ell * (bessel("K0", arg) @ gw)
    tau_k = divisor_count_table(n_k)
    dual_k = complex(np.sum(tau_k[1:] * _twist(nk, dbar, ell) * gk))

    # Y0 branch: blocks of n until the transform is negligible
    tau_y = divisor_count_table(MAX_DUAL_TERMS)
    dual_y = 0j
    start = 1
    while True:
        if start > MAX_DUAL_TERMS:
            raise ArithmeticError("Y0 dual sum did not converge")
        stop = min(start + DUAL_BLOCK, MAX_DUAL_TERMS + 1)
        ny = np.arange(start, stop)
        xy, wy = _nodes(g, _node_count(stop, g, ell, per_wave))
        arg = 4 * np.pi * np.sqrt(np.outer(ny, xy)) / ell
        gy = -2 * np.pi / ell * (bessel("Y0", arg) @ (g(xy) * wy))
        dual_y += complex(np.sum(tau_y[ny] * _twist(ny, -dbar, ell) * gy))
        start = stop
        if np.max(np.abs(tau_y[ny] * gy)) < tol:
            break

    rhs = main + dual_k + dual_y
    return VoronoiResult(lhs=lhs.real, rhs=rhs.real, abs_err=abs(lhs - rhs), main=main,
                         dual_k=dual_k.real, dual_y=dual_y.real, dual_terms=start - 1)
