"""Mollified fourth moment: combinatorial constants and the asymptotic coefficients.

With the mollifier coefficients mu(l) P(log(L/l)/log L), P(X) = X^2 and
L = q^lambda, both main terms reduce to the four-fold contour constant

    I(j) = (2 pi i)^-4 int e^(w1+w2+w3+w4) / ((w1+w3)(w1+w4)(w2+w3)(w2+w4))
                         prod_k dw_k / w_k^(1+j_k),

and the moment is sum_i a_i lambda^-i + O(1/log q).
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .arith import CONSTANTS
from .functions import ZETA2, euler_product

# exact values of I(j) for 0 <= j_k <= 2, sum(j) <= 4; regenerate with
# scripts/derive_contour_constants.py (iterated residues)
CONTOUR_CONSTANTS: dict[tuple[int, int, int, int], Fraction] = {
    (0, 0, 0, 0): Fraction(1, 6),
    (0, 0, 0, 1): Fraction(1, 15),
    (0, 0, 0, 2): Fraction(13, 720),
    (0, 0, 1, 0): Fraction(1, 15),
    (0, 0, 1, 1): Fraction(1, 40),
    (0, 0, 1, 2): Fraction(11, 1680),
    (0, 0, 2, 0): Fraction(13, 720),
    (0, 0, 2, 1): Fraction(11, 1680),
    (0, 0, 2, 2): Fraction(17, 10080),
    (0, 1, 0, 0): Fraction(1, 15),
    (0, 1, 0, 1): Fraction(11, 360),
    (0, 1, 0, 2): Fraction(1, 112),
    (0, 1, 1, 0): Fraction(11, 360),
    (0, 1, 1, 1): Fraction(11, 840),
    (0, 1, 1, 2): Fraction(149, 40320),
    (0, 1, 2, 0): Fraction(1, 112),
    (0, 1, 2, 1): Fraction(149, 40320),
    (0, 2, 0, 0): Fraction(13, 720),
    (0, 2, 0, 1): Fraction(1, 112),
    (0, 2, 0, 2): Fraction(11, 4032),
    (0, 2, 1, 0): Fraction(1, 112),
    (0, 2, 1, 1): Fraction(83, 20160),
    (0, 2, 2, 0): Fraction(11, 4032),
    (1, 0, 0, 0): Fraction(1, 15),
    (1, 0, 0, 1): Fraction(11, 360),
    (1, 0, 0, 2): Fraction(1, 112),
    (1, 0, 1, 0): Fraction(11, 360),
    (1, 0, 1, 1): Fraction(11, 840),
    (1, 0, 1, 2): Fraction(149, 40320),
    (1, 0, 2, 0): Fraction(1, 112),
    (1, 0, 2, 1): Fraction(149, 40320),
    (1, 1, 0, 0): Fraction(1, 40),
    (1, 1, 0, 1): Fraction(11, 840),
    (1, 1, 0, 2): Fraction(83, 20160),
    (1, 1, 1, 0): Fraction(11, 840),
    (1, 1, 1, 1): Fraction(11, 1680),
    (1, 1, 2, 0): Fraction(83, 20160),
    (1, 2, 0, 0): Fraction(11, 1680),
    (1, 2, 0, 1): Fraction(149, 40320),
    (1, 2, 1, 0): Fraction(149, 40320),
    (2, 0, 0, 0): Fraction(13, 720),
    (2, 0, 0, 1): Fraction(1, 112),
    (2, 0, 0, 2): Fraction(11, 4032),
    (2, 0, 1, 0): Fraction(1, 112),
    (2, 0, 1, 1): Fraction(83, 20160),
    (2, 0, 2, 0): Fraction(11, 4032),
    (2, 1, 0, 0): Fraction(11, 1680),
    (2, 1, 0, 1): Fraction(149, 40320),
    (2, 1, 1, 0): Fraction(149, 40320),
    (2, 2, 0, 0): Fraction(17, 10080),
}


# ---------------------------------------------------------------------------
# the hand-evaluated constants of the residue computation


def beta(a: int, b: int, c: int) -> Fraction:
    _check_indices((a, b, c))
    return Fraction((-1) ** (b + c), math.factorial(a))


def _compositions(total: int):
    for k in range(total + 1):
        for l in range(total - k + 1):
            yield k, l, total - k - l


def gamma4(j1: int, j2: int, j3: int, j4: int) -> Fraction:
    _check_indices((j1, j2, j3, j4))
    acc = Fraction(0)
    for k, l, n in _compositions(j3):
        acc += beta(k, l, n) / math.factorial(4 + j1 + j2 + j4 + l + n)
    return (-1) ** (1 + j4) * acc


def eta4(j1: int, j2: int, j3: int, j4: int) -> Fraction:
    _check_indices((j1, j2, j3, j4))
    acc = Fraction(0)
    for k, l, n in _compositions(j4):
        for a, b, c in _compositions(j3):
            acc += (beta(k, l, n) * beta(a, b, c)
                    / (math.factorial(2 + j2 + n + c) * math.factorial(2 + j1 + l + b)))
    return acc


def frakS(j1: int, j2: int, j3: int, j4: int) -> Fraction:
    """The hand-assembled pole-by-pole value standing in for I(j)."""
    return 2 * gamma4(j1, j2, j3, j4) + 2 * gamma4(j1, j2, j4, j3) + eta4(j1, j2, j3, j4)


def scrB(*idx: int) -> Fraction:
    """(-1)^(j1+..+j4) / prod(i_k! j_k!) for idx = (i1, j1, ..., i4, j4)."""
    if len(idx) != 8:
        raise ValueError("scrB takes eight indices (i1, j1, ..., i4, j4)")
    _check_indices(idx)
    den = 1
    for x in idx:
        den *= math.factorial(x)
    return Fraction((-1) ** sum(idx[1::2]), den)


def _check_indices(idx) -> None:
    if any((not isinstance(x, (int, np.integer))) or x < 0 for x in idx):
        raise ValueError(f"indices must be non-negative integers, got {idx}")


_KINDS = {"beta": (beta, 3), "gamma4": (gamma4, 4), "eta4": (eta4, 4),
          "frakS": (frakS, 4), "scrB": (scrB, 8)}


def combinatorial_constants(kind: str, *idx: int) -> Fraction:
    if kind not in _KINDS:
        raise ValueError(f"unknown constant {kind!r}")
    fn, arity = _KINDS[kind]
    if len(idx) != arity:
        raise ValueError(f"{kind} takes {arity} indices, got {len(idx)}")
    return fn(*idx)


def contour_constant(j) -> Fraction:
    j = tuple(int(x) for x in j)
    if j not in CONTOUR_CONSTANTS:
        raise KeyError(f"no frozen contour constant for {j}")
    return CONTOUR_CONSTANTS[j]


# ---------------------------------------------------------------------------
# independent numerical value of I(j)


def _gl(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def polytope_constant(j, nodes: int = 8) -> float:
    """I(j) as an integral over a polytope in four dimensions.

    Writing 1/(w_a + w_b) = int_0^inf e^(-x (w_a + w_b)) dx turns each w-line
    integral into t_+^j / j!, with t1 = 1 - x13 - x14, t2 = 1 - x23 - x24,
    t3 = 1 - x13 - x23, t4 = 1 - x14 - x24.  The integrand is a polynomial
    on the polytope where all t_k >= 0, so Gauss-Legendre with the domain
    split at the kink x23 = x14 is exact up to rounding.
    """
    j1, j2, j3, j4 = (int(x) for x in j)
    fact = math.factorial(j1) * math.factorial(j2) * math.factorial(j3) * math.factorial(j4)
    gx, gw = _gl(nodes)

    def nodes_on(a, b):
        return 0.5 * (b - a) * gx + 0.5 * (b + a), 0.5 * (b - a) * gw

    total = 0.0
    x13s, w13s = nodes_on(0.0, 1.0)
    for x13, w13 in zip(x13s, w13s):
        x14s, w14s = nodes_on(0.0, 1.0 - x13)
        for x14, w14 in zip(x14s, w14s):
            t1 = 1.0 - x13 - x14
            for lo, hi in ((0.0, min(x14, 1.0 - x13)), (min(x14, 1.0 - x13), 1.0 - x13)):
                if hi <= lo:
                    continue
                x23, w23 = nodes_on(lo, hi)
                upper = np.minimum(1.0 - x23, 1.0 - x14)
                # innermost x24 in [0, upper], vectorised over x23
                x24 = 0.5 * upper[:, None] * (gx[None, :] + 1.0)
                w24 = 0.5 * upper[:, None] * gw[None, :]
                t2 = 1.0 - x23[:, None] - x24
                t3 = 1.0 - x13 - x23
                t4 = 1.0 - x14 - x24
                f = t1**j1 * t2**j2 * t3[:, None] ** j3 * t4**j4
                total += w13 * w14 * float(np.sum(w23[:, None] * w24 * f))
    return total / fact


# ---------------------------------------------------------------------------
# exact expansion of the off-diagonal numerator

# variable order: s, u1, u2, z1, z2, z3, z4
_NVARS = 7


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = defaultdict(Fraction)
    for ea, ca in a.items():
        for eb, cb in b.items():
            out[tuple(x + y for x, y in zip(ea, eb))] += ca * cb
    return {e: c for e, c in out.items() if c}


def _linear(*terms) -> dict:
    """Polynomial sum of (coefficient, variable index) pairs."""
    out = {}
    for coef, var in terms:
        e = [0] * _NVARS
        e[var] = 1
        out[tuple(e)] = Fraction(coef)
    return out


S, U1, U2, Z1, Z2, Z3, Z4 = range(_NVARS)


def offdiag_numerator() -> dict:
    """The numerator of the off-diagonal rational factor, expanded exactly."""
    factors = [
        _linear((1, Z1), (1, S), (1, U2)), _linear((1, Z1), (-1, S), (1, U1)),
        _linear((1, Z2), (1, S), (1, U2)), _linear((1, Z2), (-1, S), (1, U1)),
        _linear((1, Z3), (1, S), (1, U1)), _linear((1, Z3), (-1, S), (1, U2)),
        _linear((1, Z4), (1, S), (1, U1)), _linear((1, Z4), (-1, S), (1, U2)),
    ]
    out = {tuple([0] * _NVARS): Fraction(1)}
    for f in factors:
        out = _poly_mul(out, f)
    return out


def _slice(poly: dict, s_deg: int, u1_deg: int, u2_deg: int, factor: int) -> dict:
    out: dict = defaultdict(Fraction)
    for e, c in poly.items():
        if e[S] == s_deg and e[U1] == u1_deg and e[U2] == u2_deg:
            out[e[Z1:]] += factor * c
    return dict(out)


def apply_offdiag_operator(poly: dict) -> dict[int, dict]:
    """The order-four operator at s = u = 0, grouped by power of log q.

    (1/4!) d_s^4 + log^2 q d_s^2 + log q d_s^2 (d_u1 + d_u2) + d_s^2 d_u1 d_u2
    acting on a polynomial; returns {k: {z-exponent: coefficient}}.
    """
    p2 = _slice(poly, 2, 0, 0, 2)
    p1 = defaultdict(Fraction)
    for part in (_slice(poly, 2, 1, 0, 2), _slice(poly, 2, 0, 1, 2)):
        for e, c in part.items():
            p1[e] += c
    p0 = defaultdict(Fraction)
    for part in (_slice(poly, 4, 0, 0, 1), _slice(poly, 2, 1, 1, 2)):
        for e, c in part.items():
            p0[e] += c
    clean = lambda d: {e: c for e, c in d.items() if c}
    return {0: clean(p0), 1: clean(p1), 2: clean(p2)}


def scrB_expansion(z: np.ndarray) -> tuple[float, float]:
    """Both sides of the scrB-sum identity at a z-tuple.

    Left: sum over (i, j) in {0,1}^8 with total 4 of scrB prod z_k^(2-i_k-j_k).
    Right: the s^4 coefficient of prod_k (z_k + s)(z_k - s).
    """
    lhs = 0.0
    for idx in itertools.product((0, 1), repeat=8):
        if sum(idx) != 4:
            continue
        term = float(scrB(*idx))
        for k in range(4):
            term *= z[k] ** (2 - idx[2 * k] - idx[2 * k + 1])
        lhs += term
    poly = np.array([1.0])
    for zk in z:
        # (z_k^2 - s^2), coefficients in increasing powers of s
        poly = np.polynomial.polynomial.polymul(poly, [zk * zk, 0.0, -1.0])
    return lhs, float(poly[4])


# ---------------------------------------------------------------------------
# assembly


@dataclass(frozen=True)
class MollifiedCoefficients:
    a: np.ndarray
    lam: float
    diagnostic: bool
    route: str
    parts: str
    offdiag_euler: float = field(default=float("nan"))

    @property
    def value(self) -> float:
        return float(sum(c * self.lam ** (-i) for i, c in enumerate(self.a)))

    def as_dict(self) -> dict:
        return {"a": [float(x) for x in self.a], "lambda": self.lam,
                "diagnostic": self.diagnostic, "route": self.route, "parts": self.parts,
                "offdiag_euler": self.offdiag_euler, "value": self.value}


def _table(route: str):
    if route == "contour":
        return contour_constant
    if route == "frakS":
        return lambda j: frakS(*j)
    raise ValueError(f"unknown route {route!r}")


def _alpha(j: int) -> int:
    return 1 if j == 0 else 2


def diagonal_coefficients(route: str = "contour") -> list[Fraction]:
    """a_i of the diagonal part, exact: 2 * 2^i * sum_{|j| = 4 - i} C_{i,j} X(j)."""
    table = _table(route)
    out = []
    for i in range(5):
        acc = Fraction(0)
        for j in itertools.product(range(3), repeat=4):
            if sum(j) != 4 - i:
                continue
            weight = Fraction(math.prod(_alpha(x) for x in j),
                              math.factorial(i) * math.prod(math.factorial(x) for x in j))
            acc += weight * table(j)
        out.append(2 * 2**i * acc)
    return out


def offdiag_coefficients(route: str = "contour", assembly: str | None = None) -> list[Fraction]:
    """sum_e c_e X(2 - e) per power of 1/lambda, before the factor -2 F_OD / zeta(2).

    ``exact`` expands the operator on the numerator; ``literal`` follows the
    four displayed index sums term by term.  By default the contour route uses
    the exact expansion and the frakS route the literal sums.
    """
    table = _table(route)
    assembly = assembly or ("exact" if route == "contour" else "literal")
    out = [Fraction(0)] * 5
    if assembly == "exact":
        for k, poly in apply_offdiag_operator(offdiag_numerator()).items():
            out[k] = sum((c * table(tuple(2 - x for x in e)) for e, c in poly.items()),
                         Fraction(0))
        return out
    if assembly != "literal":
        raise ValueError(f"unknown assembly {assembly!r}")
    patterns = list(itertools.product((0, 1), repeat=8))

    def merged(idx):
        # a factor z_k -+ s contributing s lowers the power of z_k, which
        # raises the index of the constant by one
        return [idx[2 * k] + idx[2 * k + 1] for k in range(4)]

    # first term: (1/4!) d_s^4, prefactor -2/zeta(2) = (-2/zeta(2)) * 1
    m1 = sum((scrB(*p) * table(tuple(merged(p)))
              for p in patterns if sum(p) == 4), Fraction(0))
    # the other three carry -4/zeta(2) = (-2/zeta(2)) * 2
    m2 = sum((scrB(*p) * table(tuple(merged(p)))
              for p in patterns if sum(p) == 2), Fraction(0))
    m3 = Fraction(0)
    for ell in range(4):
        for p in patterns:
            if sum(p) != 2 or p[2 * ell] * p[2 * ell + 1]:
                continue
            m = merged(p)
            m[ell] += 1
            m3 += scrB(*p) * table(tuple(m))
    m4 = Fraction(0)
    for n in range(4):
        for ell in range(4):
            for p in patterns:
                if sum(p) != 2 or p[2 * n] or p[2 * ell + 1]:
                    continue
                m = merged(p)
                m[n] += 1
                m[ell] += 1
                if max(m) > 2:
                    continue
                m4 += scrB(*p) * table(tuple(m))
    out[0] = m1 + 2 * m4
    out[1] = 2 * m3
    out[2] = 2 * m2
    return out


OFFDIAG_EULER = {"displayed": "offdiag_F", "series": "offdiag_F_series"}


def mollified_asymptotic(lam: float, parts: str = "both", route: str = "contour",
                         polynomial: tuple = (0, 0, 1), p_max: int = 10**6,
                         offdiag_euler: str = "displayed") -> MollifiedCoefficients:
    """Coefficients a_0..a_4 of the mollified fourth moment in powers of 1/lambda.

    ``offdiag_euler`` picks the off-diagonal Euler product: the closed
    product (``displayed``) or the product of local sums built from the
    series form of delta (``series``), which equals zeta(2).
    """
    if tuple(polynomial) != (0, 0, 1):
        raise ValueError("only the mollifier polynomial P(X) = X^2 is supported")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if parts not in ("diag", "offdiag", "both"):
        raise ValueError(f"unknown parts {parts!r}")
    if offdiag_euler not in OFFDIAG_EULER:
        raise ValueError(f"unknown off-diagonal Euler product {offdiag_euler!r}")
    diagnostic = lam >= float(CONSTANTS.lambda_max)
    a = np.zeros(5)
    f_od = float("nan")
    if parts in ("diag", "both"):
        a += np.array([float(x) for x in diagonal_coefficients(route)])
    if parts in ("offdiag", "both"):
        f_od = euler_product(OFFDIAG_EULER[offdiag_euler], p_max).value
        a += -2 * f_od / ZETA2 * np.array([float(x) for x in offdiag_coefficients(route)])
    return MollifiedCoefficients(a=a, lam=lam, diagnostic=diagnostic, route=route,
                                 parts=parts, offdiag_euler=f_od)
