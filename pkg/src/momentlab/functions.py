"""Arithmetic and analytic building blocks of the twisted fourth moment.

Every function here accepts either plain complex numbers or jets for its
continuous arguments, so one formula yields both the pointwise value
(Lanczos gamma, Euler-Maclaurin zeta) and the jet expansion (polygamma and
Stieltjes data).  The two evaluation paths share no numerical code, which
is what makes the finite-difference cross-checks meaningful.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arith import (check_pair, factorize, mobius_table, primes_up_to,
                    require_cubefree)
from .jets import DEFAULT_WINDOW, S_ONLY, Jet, Window
from .specfun import (exp_of, gamma_of, hurwitz_zeta, log_pow, zeta_of,
                      zeta_one_regular, zeta_value)

SQRT_PI = math.sqrt(math.pi)
ZETA2 = math.pi**2 / 6


@dataclass(frozen=True)
class Parity:
    kappa: int

    def __post_init__(self):
        if self.kappa not in (0, 1):
            raise ValueError("kappa must be 0 (even) or 1 (odd)")

    @property
    def shift(self) -> float:
        """1/2 + kappa: the argument of the gamma factor at the centre."""
        return 0.5 + self.kappa

    @property
    def sign(self) -> int:
        return 1 if self.kappa == 0 else -1

    @property
    def name(self) -> str:
        return "even" if self.kappa == 0 else "odd"


EVEN = Parity(0)
ODD = Parity(1)


@dataclass(frozen=True)
class QChoice:
    """The even weight Q(s) = exp(c s^2) used inside V."""

    c: float = 1.0

    @property
    def ident(self) -> str:
        return f"exp({self.c:g}*s^2)"

    def __call__(self, s):
        return exp_of(s * s * self.c)


DEFAULT_Q = QChoice(1.0)


def variables(window: Window = DEFAULT_WINDOW) -> tuple[Jet, Jet, Jet]:
    """The coordinate jets s, u1, u2."""
    if window.udeg == 0:
        return Jet.s(window), Jet.zero(window), Jet.zero(window)
    return Jet.s(window), Jet.u1(window), Jet.u2(window)


def _one_like(x):
    return x.coerce(1.0) if isinstance(x, Jet) else 1.0


# ---------------------------------------------------------------------------
# multiplicative functions supported on cubefree integers


def _prime_power_product(ell: int, local):
    fac = require_cubefree(ell)
    out = None
    for p, e in fac.factors:
        v = local(p, e)
        out = v if out is None else out * v
    return out


def f_value(ell: int, s):
    """The multiplicative f(ell; s) of the diagonal Dirichlet series."""

    def local(p, e):
        x = log_pow(p, -s)
        if e == 1:
            return 2 / (1 + x)
        return (3 - x) / (1 + x)

    out = _prime_power_product(ell, local)
    return _one_like(s) if out is None else out


def mu2(n: int, nu) -> complex:
    """Dirichlet inverse of sigma_nu: mu_{2,nu}(p) = -1 - p^nu, mu_{2,nu}(p^2) = p^nu."""
    out = 1.0 + 0j
    for p, e in factorize(n).factors:
        if e >= 3:
            return 0j
        out *= (-1 - p**nu) if e == 1 else p**nu
    return out


DELTA_FORMS = ("series", "displayed")


def delta_value(ell: int, s, u1, u2, form: str = "series"):
    """The multiplicative delta(ell; s, u1, u2) of the off-diagonal series.

    At p^2 the ``series`` form carries 1 + p^-(2 + 2u1 + 2u2) in the last
    bracket, which is what the local factor of the defining double sum
    gives; ``displayed`` carries 1 + p^-(2u1 + 2u2).  They agree at p.
    """
    if form not in DELTA_FORMS:
        raise ValueError(f"unknown delta form {form!r}")
    shift = 2 if form == "series" else 0

    def local(p, e):
        a1 = 1 - log_pow(p, -(1 + 2 * u1))
        a2 = 1 - log_pow(p, -(1 + 2 * u2))
        norm = 1 - log_pow(p, -(2 + 2 * u1 + 2 * u2))
        if e == 1:
            num = log_pow(p, -(s + u2)) * a1 + log_pow(p, -(-s + u1)) * a2
        else:
            num = (log_pow(p, -(2 * s + 2 * u2)) * a1
                   + log_pow(p, -(-2 * s + 2 * u1)) * a2
                   + log_pow(p, -(u1 + u2)) * (1 + log_pow(p, -(shift + 2 * u1 + 2 * u2))
                                               - log_pow(p, -(1 + 2 * u1))
                                               - log_pow(p, -(1 + 2 * u2))))
        return num / norm

    out = _prime_power_product(ell, local)
    return _one_like(s + u1 + u2) if out is None else out


def delta_local_sum(p: int, v1: int, v2: int, s: complex, u1: complex, u2: complex,
                    terms: int = 200) -> complex:
    """Local factor at p of the defining double sum over a in {0, 1}, b >= 0.

    Divided by (1 - p^-r) / (1 - p^-t) it is delta(p^v1; s, u1, u2) for
    v2 = 0 and delta(p^v2; s, u2, u1) for v1 = 0.
    """
    r = 2 + 2 * u1 + 2 * u2
    t = 1 + 2 * s + u1 + u2
    total = 0j
    for a in (0, 1):
        for b in range(terms):
            k = a + b
            total += ((-1) ** a * p ** (min(k, v1) * (1 + 2 * u1) + min(k, v2) * (1 + 2 * u2))
                      / p ** (a * r + b * t))
    total *= p ** (v1 * (s - u1)) * p ** (v2 * (s - u2))
    return total * (1 - p ** (-t)) / (1 - p ** (-r))


# ---------------------------------------------------------------------------
# gamma-factor functions


def G_value(parity: Parity, s, q_weight: QChoice = DEFAULT_Q):
    """pi^(-2s) Gamma((c + s)/2)^4 / Gamma(c/2)^4 Q(s), c = 1/2 or 3/2."""
    c = parity.shift
    ratio = gamma_of((c + s) / 2) / complex(gamma_of(c / 2))
    return log_pow(math.pi, -2 * s) * ratio**4 * q_weight(s)


def H_value(parity: Parity, s, u1, u2, route: str = "gamma_identity"):
    """H(s, u1, u2): the gamma-ratio kernel of the off-diagonal term.

    ``definition_sum`` adds the two Mellin kernels directly; the dual-term
    piece enters with sign +1 for even and -1 for odd characters.
    ``gamma_identity`` is the closed product form of the same function.
    """
    w = u1 + u2
    if route == "definition_sum":
        lead = gamma_of(2 * s - w) * (
            gamma_of(0.5 - s + u2) / gamma_of(0.5 + s - u1)
            + gamma_of(0.5 - s + u1) / gamma_of(0.5 + s - u2))
        dual = gamma_of(0.5 - s + u1) * gamma_of(0.5 - s + u2) / gamma_of(1 - 2 * s + w)
        return lead + dual if parity.kappa == 0 else lead - dual
    if route == "gamma_identity":
        c = parity.shift
        return (SQRT_PI * gamma_of((2 * s - w) / 2) / gamma_of((1 + w - 2 * s) / 2)
                * gamma_of((c + u1 - s) / 2) * gamma_of((c + u2 - s) / 2)
                / (gamma_of((c - u1 + s) / 2) * gamma_of((c - u2 + s) / 2)))
    raise ValueError(f"unknown H route {route!r}")


def H_regular(parity: Parity, s, u1, u2):
    """(2s - u1 - u2) H(s, u1, u2), analytic at the origin."""
    w = u1 + u2
    c = parity.shift
    return (2 * SQRT_PI * gamma_of(1 + (2 * s - w) / 2) / gamma_of((1 + w - 2 * s) / 2)
            * gamma_of((c + u1 - s) / 2) * gamma_of((c + u2 - s) / 2)
            / (gamma_of((c - u1 + s) / 2) * gamma_of((c - u2 + s) / 2)))


def A_value(q: int, parity: Parity, s, u1, u2, q_weight: QChoice = DEFAULT_Q,
            h_route: str = "gamma_identity"):
    """G H zeta(2s - w) zeta(1 + 2s + w) q^w / zeta(2 + 2w), w = u1 + u2."""
    w = u1 + u2
    return (G_value(parity, s, q_weight) * H_value(parity, s, u1, u2, h_route)
            * zeta_of(2 * s - w) * zeta_of(1 + 2 * s + w) * log_pow(q, w)
            / zeta_of(2 + 2 * w))


def script_A_value(parity: Parity, s, u1, u2, q_weight: QChoice = DEFAULT_Q):
    """The analytic factor with A = q^w scriptA / ((2s + w)(2s - w))."""
    w = u1 + u2
    return (G_value(parity, s, q_weight) * H_regular(parity, s, u1, u2)
            * zeta_of(2 * s - w) * zeta_one_regular(1 + 2 * s + w) / zeta_of(2 + 2 * w))


def A_polar_value(q: int, parity: Parity, s, u1, u2, q_weight: QChoice = DEFAULT_Q):
    w = u1 + u2
    return (log_pow(q, w) * script_A_value(parity, s, u1, u2, q_weight)
            / ((2 * s + w) * (2 * s - w)))


def A_jet(q: int, parity: Parity, window: Window = DEFAULT_WINDOW,
          q_weight: QChoice = DEFAULT_Q, assembly: str = "direct") -> Jet:
    s, u1, u2 = variables(window)
    if assembly == "direct":
        return A_value(q, parity, s, u1, u2, q_weight)
    if assembly == "polar":
        return A_polar_value(q, parity, s, u1, u2, q_weight)
    raise ValueError(f"unknown assembly {assembly!r}")


def H_jet(parity: Parity, route: str = "gamma_identity",
          window: Window = DEFAULT_WINDOW) -> Jet:
    return H_value(parity, *variables(window), route=route)


def G_jet(parity: Parity, q_weight: QChoice = DEFAULT_Q,
          window: Window = DEFAULT_WINDOW) -> Jet:
    return G_value(parity, Jet.s(window), q_weight)


def parity_kernel(s):
    """zeta(2s) zeta(1 + 2s) Gamma(s) / Gamma(1/2 - s) pi^(-2s): even in s."""
    return (zeta_of(2 * s) * zeta_of(1 + 2 * s) * gamma_of(s) / gamma_of(0.5 - s)
            * log_pow(math.pi, -2 * s))


# ---------------------------------------------------------------------------
# the B factor and the Dirichlet series L


def B_value(ell1: int, ell2: int, s, u1, u2):
    check_pair(ell1, ell2)
    return (delta_value(ell1, s, u1, u2) * delta_value(ell2, s, u2, u1)
            / math.sqrt(ell1 * ell2))


def B_jet(ell1: int, ell2: int, window: Window = DEFAULT_WINDOW) -> Jet:
    return B_value(ell1, ell2, *variables(window))


@dataclass(frozen=True)
class BDerivatives:
    B0: Jet
    B1: Jet
    B2: Jet


def _u_slice(a: Jet, parts) -> Jet:
    w = a.window
    c = np.zeros_like(a.c)
    c[0, 0] = sum(a.c[i] for i in parts)
    p = np.full_like(a.prec, w.exact)
    p[0, 0] = min(int(a.prec[i]) for i in parts)
    return Jet(c, p, w)


def B_derivatives(ell1: int, ell2: int, window: Window = DEFAULT_WINDOW) -> BDerivatives:
    """B at u = 0, (d/du1 + d/du2) B and d^2 B / du1 du2, as s-jets."""
    b = B_jet(ell1, ell2, window)
    return BDerivatives(_u_slice(b, [(0, 0)]), _u_slice(b, [(1, 0), (0, 1)]),
                        _u_slice(b, [(1, 1)]))


def L_closed(s, u1, u2, ell1: int, ell2: int):
    """zeta(1 + 2s + w) / zeta(2 + 2w) delta(ell1; s, u1, u2) delta(ell2; s, u2, u1)."""
    check_pair(ell1, ell2)
    w = u1 + u2
    return (zeta_of(1 + 2 * s + w) / zeta_of(2 + 2 * w)
            * delta_value(ell1, s, u1, u2) * delta_value(ell2, s, u2, u1))


def L_brute(s: complex, u1: complex, u2: complex, ell1: int, ell2: int,
            cutoff: int = 10**6, normalized: bool = True) -> complex:
    """The defining double sum over a, b of the off-diagonal Dirichlet series.

    The a-sum is truncated at ``cutoff``.  For each a the b-sum is carried
    out exactly (up to the Hurwitz evaluation) by splitting b into residue
    classes modulo ell1 ell2, on which the gcd factors are constant.  With
    ``normalized`` the result carries ell1^(s-u1) ell2^(s-u2).
    """
    check_pair(ell1, ell2)
    beta = 1 + 2 * s + u1 + u2
    if beta.real <= 1:
        raise ValueError("the b-series diverges for Re(1 + 2s + u1 + u2) <= 1")
    m = ell1 * ell2
    mob = mobius_table(cutoff)
    a = np.flatnonzero(mob[1:]) + 1
    a_weight = mob[a] * a.astype(float) ** (-(2 + 2 * u1 + 2 * u2))
    # b-sum per class r mod m: m^-beta zeta(beta, r/m)
    r = np.arange(1, m + 1)
    hz = np.asarray(hurwitz_zeta(beta, r / m)) * m ** (-beta)
    total = 0j
    a_mod = a % m
    for cls in np.unique(a_mod):
        sel = a_mod == cls
        wsum = a_weight[sel].sum()
        g = np.gcd(int(cls) * r, m)
        g1 = np.gcd(g, ell1).astype(float)
        g2 = np.gcd(g, ell2).astype(float)
        total += wsum * np.sum(g1 ** (1 + 2 * u1) * g2 ** (1 + 2 * u2) * hz)
    if normalized:
        total *= ell1 ** (s - u1) * ell2 ** (s - u2)
    return complex(total)


# ---------------------------------------------------------------------------
# Euler products


@dataclass(frozen=True)
class EulerProductResult:
    value: float
    p_max: int
    tail_estimate: float


def _prime_tail(p_max: int, exponent: float) -> float:
    """sum_{p > P} p^-exponent, by the prime number theorem density 1/log t."""
    return p_max ** (1 - exponent) / ((exponent - 1) * math.log(p_max))


def _mu2_local(p: float, k: int, nu) -> complex:
    if k == 0:
        return 1.0
    if k == 1:
        return -1 - p**nu
    if k == 2:
        return p**nu
    return 0.0


def diag_local_factor(p: float, s=0.0, z=(0.0, 0.0, 0.0, 0.0)):
    """Local factor at p of the diagonal mollifier series, by direct summation."""
    z1, z2, z3, z4 = z
    total = 0j
    for d in range(3):
        for l1 in range(3 - d):
            for l2 in range(3 - d):
                if l1 and l2:
                    continue
                term = _mu2_local(p, d + l1, z1 - z2) * _mu2_local(p, d + l2, z3 - z4)
                if term == 0:
                    continue
                for le in (l1, l2):
                    if le:
                        x = p ** (-(1 + 2 * s))
                        term *= 2 / (1 + x) if le == 1 else (3 - x) / (1 + x)
                total += term * p ** (-(d * (1 + z1 + z3) + l1 * (1 + z1 + s)
                                         + l2 * (1 + z3 + s)))
    return total


def offdiag_local_factor(p):
    """1 + 2 (1 + 1/p) / (p^2 (1 - 1/p)^3)."""
    return 1 + 2 * (1 + 1 / p) / (p**2 * (1 - 1 / p) ** 3)


def zeta_factor_local(p: float, s, z) -> complex:
    """Local factor of prod_i zeta(1+z_i+z_{i+2}) zeta(1+z_2+z_{i+2}) / (zeta^2(1+z_i+s) zeta^2(1+z_{i+2}+s))."""
    z1, z2, z3, z4 = z
    zl = lambda x: 1 / (1 - p ** (-x))
    num = zl(1 + z1 + z3) * zl(1 + z1 + z4) * zl(1 + z2 + z3) * zl(1 + z2 + z4)
    den = 1.0
    for zi in (z1, z2, z3, z4):
        den *= zl(1 + zi + s) ** 2
    return num / den


def euler_product(which: str, p_max: int = 10**6, s: complex = 0.0,
                  z: tuple = (0.0, 0.0, 0.0, 0.0)) -> EulerProductResult:
    """Truncated Euler products of the mollifier analysis.

    diag_F        prod_p L_p(0) (1 - 1/p)^-4, which should equal zeta(2)
    offdiag_F     zeta(2) prod_p (1 + 2 (1 + 1/p) / (p^2 (1 - 1/p)^3))
    offdiag_F_series
                  prod_p L_p(0) (1 - 1/p)^-4 for the off-diagonal series with the
                  series form of delta at p^2
    mollified_L_check
                  prod_p of the brute local factor divided by the local
                  zeta factors, at the supplied (s, z)
    """
    if p_max < 100:
        raise ValueError("p_max must be at least 100")
    primes = primes_up_to(p_max).astype(float)
    if which == "diag_F":
        logs = np.array([math.log(diag_local_factor(p).real) for p in primes[:200]])
        rest = primes[200:]
        if rest.size:
            # closed form of the same local factor, vectorised for the long tail
            loc = (1 + 4 / rest - 8 / (rest + 1) - 8 / (rest * (rest + 1)) + rest**-2
                   + (2 / rest) * (3 - 1 / rest) / (1 + rest))
            logs = np.concatenate([logs, np.log(loc)])
        logs = logs - 4 * np.log1p(-1 / primes)
        return EulerProductResult(float(np.exp(np.sum(logs))), p_max, _prime_tail(p_max, 2) * 1.0)
    if which == "offdiag_F":
        logs = np.log(offdiag_local_factor(primes))
        return EulerProductResult(float(ZETA2 * np.exp(np.sum(logs))), p_max,
                                  _prime_tail(p_max, 2) * 2.0)
    if which == "offdiag_F_series":
        # sum over k + l_i <= 2, l1 l2 = 0 of mu2 mu2 delta delta / p^(k + l1 + l2), nu = 0
        x = 1 / primes
        mu = {0: 1.0, 1: -2.0, 2: 1.0}
        dl = {0: 1.0, 1: 2 * (1 - x) / (1 - x * x),
              2: (2 * (1 - x) + (1 + x * x - 2 * x)) / (1 - x * x)}
        loc = 0.0
        for k in range(3):
            for l1 in range(3 - k):
                for l2 in range(3 - k):
                    if l1 and l2:
                        continue
                    loc = loc + mu[k + l1] * mu[k + l2] * dl[l1] * dl[l2] * x ** (k + l1 + l2)
        logs = np.log(loc) - 4 * np.log1p(-x)
        return EulerProductResult(float(np.exp(np.sum(logs))), p_max, _prime_tail(p_max, 2) * 1.0)
    if which == "mollified_L_check":
        logs = np.array([np.log(diag_local_factor(p, s, z) / zeta_factor_local(p, s, z))
                         for p in primes])
        # fit the decay of the local logs to size the tail
        hi = primes > p_max / 4
        mags = np.abs(logs[hi]) + 1e-300
        slope = -np.polyfit(np.log(primes[hi]), np.log(mags), 1)[0]
        const = float(np.max(mags * primes[hi] ** slope))
        tail = const * _prime_tail(p_max, slope) if slope > 1 else float("inf")
        value = np.exp(np.sum(logs))
        return EulerProductResult(complex(value).real, p_max, tail)
    raise ValueError(f"unknown Euler product {which!r}")


# ---------------------------------------------------------------------------
# the diagonal Dirichlet series


def diagonal_series_closed(ell1: int, ell2: int, s: complex) -> complex:
    """(ell1 ell2)^(1/2+s) sum_{ell1 n = ell2 m} tau(n) tau(m) (nm)^(-1/2-s), closed form."""
    check_pair(ell1, ell2)
    return complex(f_value(ell1 * ell2, 1 + 2 * s) * zeta_value(1 + 2 * s) ** 4
                   / zeta_value(2 + 4 * s))


def _tau_of_multiples(ell: int, J: int) -> np.ndarray:
    """tau(ell j) for j = 1..J via tau(j) and p-adic corrections at p | ell."""
    from .arith import divisor_count_table, valuation_table

    tau = divisor_count_table(J).astype(float)[1:]
    out = tau.copy()
    for p, e in factorize(ell).factors:
        v = valuation_table(J, p)[1:]
        out *= (v + e + 1) / (v + 1)
    return out


def diagonal_series_truncated(ell1: int, ell2: int, s: float, X: float,
                              smooth: bool = True) -> float:
    """The diagonal sum over n m <= X (smoothed or sharp), times (ell1 ell2)^(1/2+s).

    With n = ell2 j, m = ell1 j the constraint nm <= X becomes j <= J with
    J = sqrt(X / (ell1 ell2)).  The smooth version weights j by
    phi(j/J) = (1 - (j/J)^2)^4, whose Mellin transform is known exactly.
    """
    check_pair(ell1, ell2)
    J = int(math.sqrt(X / (ell1 * ell2)))
    t1 = _tau_of_multiples(ell1, J)
    t2 = _tau_of_multiples(ell2, J)
    j = np.arange(1, J + 1, dtype=float)
    terms = t1 * t2 * j ** (-(1 + 2 * s))
    if smooth:
        terms = terms * (1 - (j / J) ** 2) ** 4
    return float(math.fsum(terms))


def _smoothing_mellin(w):
    """Mellin transform of (1 - x^2)^4 on [0, 1]: 12 / prod_{k<5} (w/2 + k)."""
    out = w / 2
    for k in range(1, 5):
        out = out * (w / 2 + k)
    return 12 / out


def diagonal_polar_tail(ell1: int, ell2: int, s: float, J: float) -> float:
    """Residue at w = -2s of F(w) Mellin(w) J^w, F the diagonal Dirichlet series.

    F(w) = f(ell1 ell2; 1 + 2s + w) zeta^4(1 + 2s + w) / zeta(2 + 4s + 2w) has a
    pole of order four there; with w = -2s + t the residue is read off a jet
    in t.
    """
    t = Jet.s(S_ONLY)
    w = t - 2 * s
    integrand = (f_value(ell1 * ell2, 1 + t) * zeta_of(1 + t) ** 4 / zeta_of(2 + 2 * t)
                 * _smoothing_mellin(w) * log_pow(J, w))
    return integrand.residue().real


def divisor_factorisation_check(ell1: int, ell2: int, s: float, X: float = 1e7) -> dict:
    """Compare the truncated diagonal sum with its closed form.

    The smoothed sum S(J) = sum_j a_j j^-(1+2s) (1 - (j/J)^2)^4 equals the
    limit D plus the residue at w = -2s (order-four pole) plus terms of size
    J^-(3/4 + 2s) from the zeros of the denominator.  The polar term is
    computed exactly and subtracted.  J = sqrt(X / (ell1 ell2)).
    """
    closed = diagonal_series_closed(ell1, ell2, s).real
    smoothed = diagonal_series_truncated(ell1, ell2, s, X, smooth=True)
    sharp = diagonal_series_truncated(ell1, ell2, s, X, smooth=False)
    J = int(math.sqrt(X / (ell1 * ell2)))
    corrected = smoothed - diagonal_polar_tail(ell1, ell2, s, J)
    return {
        "closed": closed,
        "corrected": corrected,
        "sharp_truncation": sharp,
        "rel_error": abs(corrected - closed) / abs(closed),
        "rel_error_sharp": abs(sharp - closed) / abs(closed),
    }
