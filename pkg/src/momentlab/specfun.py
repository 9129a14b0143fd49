"""Special functions, pointwise and as jets.

Pointwise: Lanczos gamma, Euler-Maclaurin zeta and Hurwitz zeta, digamma
and polygamma, Bessel J0/Y0/K0.  Jets: gamma around any centre (including
its poles), zeta(1 + w) from Stieltjes constants, and zeta around regular
points from Cauchy integrals of the pointwise evaluator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
import numpy as np

from .jets import DEFAULT_WINDOW, Jet, Window, WindowError, compose_taylor

# Stieltjes constants gamma_0..gamma_14, from scripts/derive_stieltjes.py
STIELTJES = (
    "0.5772156649015328606065120900824024",
    "-0.07281584548367672486058637587490132",
    "-0.009690363192872318484530386035212529",
    "0.002053834420303345866160046542753384",
    "0.002325370065467300057468170177526068",
    "0.0007933238173010627017533348774444448",
    "-0.0002387693454301996098724218419080043",
    "-0.0005272895670577510460740975054788583",
    "-0.0003521233538030395096020521650012087",
    "-0.00003439477441808804817791462379822739",
    "0.0002053328149090647946837222892370653",
    "0.0002701844395439035266729020820679557",
    "0.0001672729121051401933535015433411834",
    "-0.00002746380660376015886000760369335518",
    "-0.000209209262059299945837139697344585",
)

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

# B_2k / (2k)! for k = 1..10
_BERN = (
    1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510,
    43867 / 798, -174611 / 330,
)
_BERN_FACT = tuple(b / math.factorial(2 * k + 2) for k, b in enumerate(_BERN))


def _as_complex(z):
    return np.asarray(z, dtype=complex)


def _scalar_out(x, like):
    return x if np.ndim(like) else x[()]


# ----------------------------------------------------------------------------
# Gamma and friends


def _gamma_right(z: np.ndarray) -> np.ndarray:
    z = z - 1
    x = np.full_like(z, _LANCZOS[0])
    for i in range(1, 9):
        x = x + _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return np.sqrt(2 * np.pi) * t ** (z + 0.5) * np.exp(-t) * x


def gamma(z):
    """Gamma function on the complex plane (Lanczos, g = 7, with reflection)."""
    z = _as_complex(z)
    out = np.empty_like(z)
    left = z.real < 0.5
    out[~left] = _gamma_right(z[~left])
    zl = z[left]
    with np.errstate(divide="ignore", invalid="ignore"):
        out[left] = np.pi / (np.sin(np.pi * zl) * _gamma_right(1 - zl))
    return _scalar_out(out, z)


def rgamma(z):
    """1/Gamma, zero at the poles."""
    z = _as_complex(z)
    out = np.empty_like(z)
    left = z.real < 0.5
    out[~left] = 1 / _gamma_right(z[~left])
    zl = z[left]
    out[left] = np.sin(np.pi * zl) * _gamma_right(1 - zl) / np.pi
    return _scalar_out(out, z)


def digamma(z):
    """psi(z) by upward recurrence and the asymptotic series."""
    z = _as_complex(z)
    out = np.zeros_like(z)
    left = z.real < 0.5
    # reflection: psi(1 - z) - psi(z) = pi cot(pi z)
    w = np.where(left, 1 - z, z)
    acc = np.zeros_like(w)
    while True:
        small = np.abs(w) < 12
        if not small.any():
            break
        acc = acc - np.where(small, 1 / w, 0)
        w = np.where(small, w + 1, w)
    inv2 = 1 / (w * w)
    series = np.log(w) - 0.5 / w
    powk = inv2
    for k, b in enumerate(_BERN[:8], start=1):
        series = series - b / (2 * k) * powk
        powk = powk * inv2
    out = acc + series
    out = np.where(left, out - np.pi / np.tan(np.pi * z), out)
    return _scalar_out(out, z)


def polygamma(n: int, z):
    """psi^(n)(z); n >= 1 goes through the Hurwitz zeta function."""
    if n == 0:
        return digamma(z)
    z = _as_complex(z)
    if np.any(z.real <= 0):
        raise ValueError("polygamma of order >= 1 implemented for Re z > 0")
    return (-1) ** (n + 1) * math.factorial(n) * hurwitz_zeta(n + 1, z)


# ----------------------------------------------------------------------------
# zeta functions


def _em_hurwitz(z: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Euler-Maclaurin for sum_{n>=0} (n+x)^-z, Re x > 0, z != 1."""
    big = float(np.max(np.abs(z))) if z.size else 0.0
    n_terms = int(30 + big)
    total = np.zeros(np.broadcast(z, x).shape, dtype=complex)
    for n in range(n_terms):
        total = total + (n + x) ** (-z)
    a = n_terms + x
    total = total + a ** (1 - z) / (z - 1) + 0.5 * a ** (-z)
    # rising factorial z (z+1) ... (z+2k-2) times a^(-z-2k+1)
    rising = z.copy()
    power = a ** (-z - 1)
    inv2 = 1 / (a * a)
    for k, c in enumerate(_BERN_FACT):
        total = total + c * rising * power
        rising = rising * (z + 2 * k + 1) * (z + 2 * k + 2)
        power = power * inv2
    return total


def hurwitz_zeta(z, x):
    """zeta(z, x) = sum_{n>=0} (n + x)^(-z) for Re x > 0, z != 1."""
    z = _as_complex(z)
    xa = _as_complex(x)
    if np.any(z == 1):
        raise ZeroDivisionError("Hurwitz zeta has a pole at z = 1")
    if np.any(xa.real <= 0):
        raise ValueError("Hurwitz zeta needs Re x > 0")
    out = _em_hurwitz(z, xa)
    return _scalar_out(out, np.broadcast(z, xa))


def zeta_value(z):
    """Riemann zeta: Euler-Maclaurin for Re z >= -1/2, functional equation below.

    The reflected argument 1 - z then has real part above 3/2, well away
    from the pole.
    """
    z = _as_complex(z)
    if np.any(z == 1):
        raise ZeroDivisionError("zeta has a pole at z = 1")
    out = np.empty_like(z)
    right = z.real >= -0.5
    if right.any():
        out[right] = _em_hurwitz(z[right], np.ones(1))
    zl = z[~right]
    if zl.size:
        w = 1 - zl
        out[~right] = (2**zl * np.pi ** (zl - 1) * np.sin(np.pi * zl / 2)
                       * gamma(w) * _em_hurwitz(w, np.ones(1)))
    return _scalar_out(out, z)


# ----------------------------------------------------------------------------
# Bessel functions of order zero

_BESSEL_SWITCH_J = 12.0
_BESSEL_SWITCH_K = 8.0


def _check_positive(x):
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("Bessel functions here need x > 0")
    return x


def _j0_y0_series(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    t = -(x * x) / 4
    term = np.ones_like(x)
    j0 = np.ones_like(x)
    harm = 0.0
    tail = np.zeros_like(x)  # sum (-1)^(k+1) H_k (x^2/4)^k / (k!)^2
    for k in range(1, 80):
        term = term * t / (k * k)
        harm += 1.0 / k
        j0 = j0 + term
        tail = tail - harm * term
        if np.all(np.abs(term) * harm < 1e-18):
            break
    y0 = (2 / np.pi) * ((np.log(x / 2) + 0.5772156649015329) * j0 + tail)
    return j0, y0


def _j0_y0_asym(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # a_k = prod_{j<=k} (2j-1)^2 / (k! 8^k x^k);  P = a_0 - a_2 + a_4 - ...,
    # Q = -a_1 + a_3 - ...; each sum stops at its smallest term
    p = np.ones_like(x)
    q = np.zeros_like(x)
    a = np.ones_like(x)
    last = np.full_like(x, np.inf)
    alive = np.ones(x.shape, dtype=bool)
    for k in range(1, 80):
        a = a * ((2 * k - 1) ** 2) / (k * 8 * x)
        mag = np.abs(a)
        alive &= mag < last
        last = np.where(alive, mag, last)
        sign = (-1) ** (k // 2) * (-1 if k % 2 else 1)
        c = np.where(alive, sign * a, 0.0)
        if k % 2:
            q = q + c
        else:
            p = p + c
        if not alive.any():
            break
    chi = x - np.pi / 4
    amp = np.sqrt(2 / (np.pi * x))
    return amp * (p * np.cos(chi) - q * np.sin(chi)), amp * (p * np.sin(chi) + q * np.cos(chi))


def _k0_series(x: np.ndarray) -> np.ndarray:
    t = x * x / 4
    term = np.ones_like(x)
    i0 = np.ones_like(x)
    harm = 0.0
    tail = np.zeros_like(x)
    for k in range(1, 80):
        term = term * t / (k * k)
        harm += 1.0 / k
        i0 = i0 + term
        tail = tail + harm * term
        if np.all(term * harm < 1e-18 * i0):
            break
    return -(np.log(x / 2) + 0.5772156649015329) * i0 + tail


def _k0_asym(x: np.ndarray) -> np.ndarray:
    s = np.ones_like(x)
    a = np.ones_like(x)
    last = np.full_like(x, np.inf)
    alive = np.ones(x.shape, dtype=bool)
    for k in range(1, 60):
        a = a * (-((2 * k - 1) ** 2)) / (k * 8 * x)
        alive &= np.abs(a) < last
        last = np.where(alive, np.abs(a), last)
        s = s + np.where(alive, a, 0.0)
        if not alive.any():
            break
    return np.sqrt(np.pi / (2 * x)) * np.exp(-x) * s


def bessel(kind: str, x):
    """J0, Y0 or K0 at x > 0 (series below the switch point, asymptotics above)."""
    xa = np.atleast_1d(_check_positive(x)).astype(float)
    out = np.empty_like(xa)
    if kind in ("J0", "Y0"):
        lo = xa <= _BESSEL_SWITCH_J
        if lo.any():
            j, y = _j0_y0_series(xa[lo])
            out[lo] = j if kind == "J0" else y
        if (~lo).any():
            j, y = _j0_y0_asym(xa[~lo])
            out[~lo] = j if kind == "J0" else y
    elif kind == "K0":
        lo = xa <= _BESSEL_SWITCH_K
        if lo.any():
            out[lo] = _k0_series(xa[lo])
        if (~lo).any():
            out[~lo] = _k0_asym(xa[~lo])
    else:
        raise ValueError(f"unknown Bessel kind {kind!r}")
    return out if np.ndim(x) else float(out[0])


# ----------------------------------------------------------------------------
# jets


@dataclass(frozen=True)
class ExpansionPoint:
    """Taylor data of a function at ``center``.

    For gamma the cached derivatives are psi^(k)(center), k = 0, 1, ...;
    for zeta at 1 they are the Stieltjes constants.
    """

    center: complex
    value: complex
    cached_derivatives: tuple[complex, ...]


def _n_coeffs(window: Window) -> int:
    # enough terms that the u-parts at degree (udeg, udeg) reach s^smax
    return window.smax + 2 * window.udeg + 1


@lru_cache(maxsize=256)
def gamma_expansion(center: complex, order: int) -> ExpansionPoint:
    c = complex(center)
    derivs = [complex(digamma(c))]
    derivs += [complex(polygamma(n, c)) for n in range(1, order)]
    return ExpansionPoint(c, complex(gamma(c)), tuple(derivs))


def _gamma_taylor_coeffs(center: complex, n: int) -> list[complex]:
    """Coefficients of log Gamma(center + t) - log Gamma(center)."""
    ep = gamma_expansion(complex(center), n)
    return [0.0] + [ep.cached_derivatives[k - 1] / math.factorial(k) for k in range(1, n)]


def _is_pole(center: complex) -> bool:
    return center.imag == 0 and center.real <= 0 and float(center.real).is_integer()


def gamma_jet(center: complex, a: float = 0.0, b: float = 0.0, c: float = 0.0,
              window: Window = DEFAULT_WINDOW) -> Jet:
    """Gamma(center + a s + b u1 + c u2) as a jet, Laurent at the poles."""
    center = complex(center)
    if _is_pole(center) and a == 0:
        raise WindowError("pole of Gamma needs an s-dependent argument")
    return gamma_of(Jet.linear(center, a, b, c, window))


def zeta_one_jet(a: float = 1.0, b: float = 0.0, c: float = 0.0,
                 window: Window = DEFAULT_WINDOW) -> Jet:
    """zeta(1 + w) for the linear form w = a s + b u1 + c u2."""
    return zeta_of(Jet.linear(1.0, a, b, c, window))


@lru_cache(maxsize=64)
def zeta_taylor(center: complex, n: int, nodes: int = 128) -> tuple[complex, ...]:
    """Taylor coefficients of zeta at a regular point from a Cauchy integral.

    The circle stays well inside the disc of convergence (radius |center - 1|),
    so the trapezoid rule converges geometrically.
    """
    center = complex(center)
    if center == 1:
        raise ValueError("zeta has a pole at 1")
    radius = min(0.5, 0.6 * abs(center - 1))
    theta = 2 * np.pi * np.arange(nodes) / nodes
    pts = center + radius * np.exp(1j * theta)
    vals = zeta_value(pts)
    fft = np.fft.fft(vals) / nodes
    return tuple(complex(fft[k]) / radius**k for k in range(n))


def zeta_jet(center: complex, a: float = 0.0, b: float = 0.0, c: float = 0.0,
             window: Window = DEFAULT_WINDOW) -> Jet:
    """zeta(center + a s + b u1 + c u2) as a jet; centre 1 gives the Laurent jet."""
    return zeta_of(Jet.linear(complex(center), a, b, c, window))


# ----------------------------------------------------------------------------
# generic evaluation: the same formula serves numbers and jets


def _split(x: Jet) -> tuple[complex, Jet]:
    x0 = x.constant_term()
    return x0, x - x0


def exp_of(x):
    return x.exp() if isinstance(x, Jet) else np.exp(x)


def log_pow(base: float, x):
    """base ** x for a number or a jet."""
    return exp_of(x * math.log(base))


def gamma_of(x):
    """Gamma of a number or of a jet.

    Jets are expanded around their constant term; centres in the left
    half-plane are first shifted by the recurrence, which also produces the
    Laurent jet at the poles.
    """
    if not isinstance(x, Jet):
        return gamma(x)
    x0, t = _split(x)
    n = 0 if x0.real > 0 else int(math.ceil(1 - x0.real))
    den = None
    for j in range(n):
        factor = x + j
        den = factor if den is None else den * factor
    n_coeffs = _n_coeffs(x.window)
    log_part = compose_taylor(_gamma_taylor_coeffs(x0 + n, n_coeffs), t)
    out = log_part.exp().scale(gamma_expansion(x0 + n, n_coeffs).value)
    return out if den is None else out / den


def zeta_of(x):
    """Riemann zeta of a number or of a jet (Laurent jet when the centre is 1)."""
    if not isinstance(x, Jet):
        return zeta_value(x)
    x0, t = _split(x)
    if x0 == 1:
        n = min(_n_coeffs(x.window), len(STIELTJES))
        coeffs = [(-1) ** k * float(STIELTJES[k]) / math.factorial(k) for k in range(n)]
        return 1 / t + compose_taylor(coeffs, t)
    return compose_taylor(list(zeta_taylor(complex(x0), _n_coeffs(x.window))), t)


def zeta_one_regular(x):
    """(x - 1) zeta(x), analytic at x = 1; numbers or jets."""
    if not isinstance(x, Jet):
        x = np.asarray(x, dtype=complex)
        with np.errstate(invalid="ignore"):
            out = np.where(x == 1, 1.0, (x - 1) * zeta_value(np.where(x == 1, 2, x)))
        return out[()] if out.ndim == 0 else out
    x0, t = _split(x)
    if x0 != 1:
        return (x - 1) * zeta_of(x)
    n = min(_n_coeffs(x.window), len(STIELTJES) + 1)
    coeffs = [1.0] + [(-1) ** k * float(STIELTJES[k]) / math.factorial(k) for k in range(n - 1)]
    return compose_taylor(coeffs, t)
