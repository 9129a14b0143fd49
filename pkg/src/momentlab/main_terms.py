"""Diagonal and off-diagonal main terms of the twisted fourth moment."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from .arith import EULER_GAMMA, check_pair
from .functions import (DEFAULT_Q, EVEN, ODD, ZETA2, A_value, B_derivatives, B_value,
                        G_value, Parity, QChoice, f_value, variables)
from .jets import S_ONLY, D_gamma_parts, Jet, Window, apply_D_gamma
from .specfun import log_pow, zeta_of

IMAG_TOL = 1e-9
# one u-degree is all the operator (d/du1 + 2g)(d/du2 + 2g) needs
OFFDIAG_WINDOW = Window(udeg=1)


def _real(z: complex, what: str) -> float:
    z = complex(z)
    if abs(z.imag) > IMAG_TOL * max(1.0, abs(z)):
        raise ArithmeticError(f"{what}: imaginary part {z.imag:.3e} is not negligible")
    return z.real


def _validate(ell1: int, ell2: int, q: int) -> None:
    check_pair(ell1, ell2, q)


# ---------------------------------------------------------------------------
# diagonal


def diagonal_kernel(ell1: int, ell2: int, parity: Parity, s, q_weight: QChoice = DEFAULT_Q):
    """G(s) f(ell1 ell2; 1+2s) zeta^4(1+2s) / (s zeta(2+4s) (ell1 ell2)^(1/2+s)), without q^2s."""
    m = ell1 * ell2
    return (G_value(parity, s, q_weight) * f_value(m, 1 + 2 * s) * zeta_of(1 + 2 * s) ** 4
            / (s * zeta_of(2 + 4 * s)) * log_pow(m, -(0.5 + s)))


def diagonal_log_poly(ell1: int, ell2: int, parity: Parity = EVEN,
                      q_weight: QChoice = DEFAULT_Q) -> np.ndarray:
    """Coefficients c_0..c_4 with diagonal term = sum_k c_k (log q)^k.

    q^2s = sum_k (2 log q)^k s^k / k!, so c_k = 2 (2^k / k!) [s^(-1-k)] of
    the kernel, which has a pole of order five.
    """
    check_pair(ell1, ell2)
    kernel = diagonal_kernel(ell1, ell2, parity, Jet.s(S_ONLY), q_weight)
    coeffs = [2 * 2**k / math.factorial(k) * kernel.coefficient(-1 - k) for k in range(5)]
    return np.array([_real(c, "diagonal coefficient") for c in coeffs])


def diagonal_main_term(ell1: int, ell2: int, q: int, parity: Parity = EVEN,
                       q_weight: QChoice = DEFAULT_Q) -> float:
    _validate(ell1, ell2, q)
    poly = diagonal_log_poly(ell1, ell2, parity, q_weight)
    return float(np.polynomial.polynomial.polyval(math.log(q), poly))


def diagonal_integrand(ell1: int, ell2: int, q: int, parity: Parity,
                       q_weight: QChoice = DEFAULT_Q) -> Callable:
    """Pointwise 2 q^2s kernel(s); its residue at 0 is the diagonal term."""

    def f(s):
        return 2 * log_pow(q, 2 * s) * diagonal_kernel(ell1, ell2, parity, s, q_weight)

    return f


# ---------------------------------------------------------------------------
# off-diagonal


def offdiag_product(ell1: int, ell2: int, q: int, parity: Parity, s, u1, u2,
                    q_weight: QChoice = DEFAULT_Q):
    return A_value(q, parity, s, u1, u2, q_weight) * B_value(ell1, ell2, s, u1, u2)


def offdiag_F_parts(ell1: int, ell2: int, q: int, parity: Parity = EVEN,
                    q_weight: QChoice = DEFAULT_Q) -> tuple[Jet, Jet, Jet]:
    """The three pieces of (d/du1 + 2g)(d/du2 + 2g){A B} at u = 0, as s-jets.

    Each piece is even in s, so its residue against 1/s is its constant term.
    """
    _validate(ell1, ell2, q)
    product = offdiag_product(ell1, ell2, q, parity, *variables(OFFDIAG_WINDOW), q_weight)
    return D_gamma_parts(product)


def offdiag_main_term(ell1: int, ell2: int, q: int, parity: Parity = EVEN,
                      route: str = "direct_F", q_weight: QChoice = DEFAULT_Q) -> float:
    """Off-diagonal main term.

    ``direct_F`` takes the constant term of the full operator applied to
    A B.  ``B_decomposition`` keeps only the terms in which the analytic
    factor of A is frozen at its value -1/zeta(2) and so drops its
    derivatives; for (1, 1) it vanishes identically.
    """
    _validate(ell1, ell2, q)
    if route == "direct_F":
        product = offdiag_product(ell1, ell2, q, parity, *variables(OFFDIAG_WINDOW), q_weight)
        return _real(apply_D_gamma(product).constant(), "off-diagonal term")
    if route == "B_decomposition":
        b = B_derivatives(ell1, ell2)
        L = math.log(q)
        inner = (b.B0.coefficient(4) + L**2 * 2 * b.B0.coefficient(2)
                 + L * 2 * b.B1.coefficient(2) + 2 * b.B2.coefficient(2))
        return _real(-1 / ZETA2 / 8 * inner, "off-diagonal term")
    raise ValueError(f"unknown route {route!r}")


def offdiag_integrand(ell1: int, ell2: int, q: int, parity: Parity,
                      q_weight: QChoice = DEFAULT_Q, u_nodes: int = 16,
                      u_scale: float = 0.25) -> Callable:
    """Pointwise s -> (d/du1 + 2g)(d/du2 + 2g){A B}(s, 0, 0) by nested Cauchy circles.

    The u-circles have radius u_scale |s|, which keeps the poles at
    u1 + u2 = +-2s outside them.
    """
    theta = 2 * np.pi * np.arange(u_nodes) / u_nodes
    e = np.exp(1j * theta)
    g = EULER_GAMMA

    def f(s):
        rho = u_scale * abs(s)
        u1 = rho * e[:, None]
        u2 = rho * e[None, :]
        vals = offdiag_product(ell1, ell2, q, parity, s, u1, u2, q_weight)
        f00 = np.mean(vals)
        d1 = np.mean(vals / u1)
        d2 = np.mean(vals / u2)
        d12 = np.mean(vals / (u1 * u2))
        return 4 * g * g * f00 + 2 * g * (d1 + d2) + d12

    return f


# ---------------------------------------------------------------------------
# contour oracle


@dataclass(frozen=True)
class ResidueResult:
    residue: complex
    constant_term: complex


def residue_oracle(f: Callable, radius: float = 0.2, nodes: int = 64) -> ResidueResult:
    """Trapezoidal quadrature of (1/2 pi i) of f and f/s around |s| = radius."""
    theta = 2 * np.pi * (np.arange(nodes) + 0.5) / nodes
    s = radius * np.exp(1j * theta)
    vals = np.array([complex(f(x)) for x in s])
    if not np.all(np.isfinite(vals)):
        raise ArithmeticError("non-finite integrand sample on the contour")
    return ResidueResult(residue=complex(np.mean(vals * s)), constant_term=complex(np.mean(vals)))


# ---------------------------------------------------------------------------
# assembled prediction


@dataclass(frozen=True)
class MainTermBreakdown:
    ell1: int
    ell2: int
    q: int
    diag_even: float
    diag_odd: float
    offdiag_even: float
    offdiag_odd: float
    total: float
    q_weight_id: str
    offdiag_even_bdecomp: float = float("nan")
    offdiag_odd_bdecomp: float = float("nan")

    @property
    def even(self) -> float:
        return self.diag_even + self.offdiag_even

    @property
    def odd(self) -> float:
        return self.diag_odd + self.offdiag_odd

    def as_dict(self) -> dict:
        return asdict(self)


def theorem1_prediction(ell1: int, ell2: int, q: int,
                        q_weight: QChoice = DEFAULT_Q) -> MainTermBreakdown:
    """Per-parity predictions; total is their average (all nontrivial characters)."""
    _validate(ell1, ell2, q)
    d = {p.name: diagonal_main_term(ell1, ell2, q, p, q_weight) for p in (EVEN, ODD)}
    o = {p.name: offdiag_main_term(ell1, ell2, q, p, "direct_F", q_weight) for p in (EVEN, ODD)}
    b = {p.name: offdiag_main_term(ell1, ell2, q, p, "B_decomposition", q_weight)
         for p in (EVEN, ODD)}
    total = 0.5 * (d["even"] + o["even"] + d["odd"] + o["odd"])
    return MainTermBreakdown(
        ell1=ell1, ell2=ell2, q=q,
        diag_even=d["even"], diag_odd=d["odd"],
        offdiag_even=o["even"], offdiag_odd=o["odd"],
        total=total,
        q_weight_id=f"Q={q_weight.ident};total=(even+odd)/2;parity=2/(q-2)*sum",
        offdiag_even_bdecomp=b["even"], offdiag_odd_bdecomp=b["odd"],
    )
