import math
from fractions import Fraction

import numpy as np
import pytest

from momentlab.functions import EVEN, ODD, f_value
from momentlab.main_terms import (diagonal_integrand, diagonal_log_poly, diagonal_main_term,
                                  offdiag_F_parts, offdiag_integrand, offdiag_main_term,
                                  residue_oracle, theorem1_prediction)

PARAMS = [(1, 1, 101), (2, 3, 101), (12, 5, 211), (4, 9, 1009), (1, 1, 1009)]


def test_leading_log_coefficient():
    assert diagonal_log_poly(1, 1)[4] == pytest.approx(1 / (2 * math.pi**2), abs=1e-12)


def test_leading_coefficient_scales_with_f():
    ratio = diagonal_log_poly(2, 3)[4] / diagonal_log_poly(1, 1)[4]
    assert ratio == pytest.approx(f_value(6, 1.0) / math.sqrt(6), rel=1e-12)


@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_log_poly_matches_fit_through_five_primes(parity):
    qs = [101, 211, 499, 1009, 2003]
    vals = [diagonal_main_term(1, 1, q, parity) for q in qs]
    fit = np.polynomial.polynomial.polyfit(np.log(qs), vals, 4)
    coeffs = diagonal_log_poly(1, 1, parity)
    assert np.max(np.abs(fit - coeffs) / np.abs(coeffs)) < 1e-8


def test_residue_oracle_examples():
    assert residue_oracle(lambda s: 1 / s).residue == pytest.approx(1, rel=1e-14)
    f = lambda s: np.exp(s) / s**5
    assert residue_oracle(f).residue == pytest.approx(1 / 24, rel=1e-12)
    # at radius 0.05 rounding is amplified by 0.05^-4; still below 1e-10
    assert abs(residue_oracle(f, radius=0.05, nodes=64).residue - 1 / 24) < 1e-10
    with pytest.raises(ArithmeticError):
        residue_oracle(lambda s: np.nan)


@pytest.mark.parametrize("ell1, ell2, q", [(1, 1, 101), (1, 1, 1009)])
def test_diagonal_matches_contour(ell1, ell2, q):
    for parity in (EVEN, ODD):
        oracle = residue_oracle(diagonal_integrand(ell1, ell2, q, parity)).residue
        jet = diagonal_main_term(ell1, ell2, q, parity)
        assert abs(jet - oracle) < 1e-8 * abs(oracle)


def test_offdiag_matches_contour_1009():
    for parity in (EVEN, ODD):
        oracle = residue_oracle(offdiag_integrand(1, 1, 1009, parity)).constant_term
        jet = offdiag_main_term(1, 1, 1009, parity)
        assert abs(jet - oracle) < 1e-8 * abs(oracle)


@pytest.mark.parametrize("ell1, ell2", [(1, 1), (2, 3), (12, 5)])
@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_offdiag_parts_are_even(ell1, ell2, parity):
    for part in offdiag_F_parts(ell1, ell2, 101, parity):
        assert part.odd_ratio() < 1e-9


def test_b_decomposition_vanishes_at_trivial_twist():
    for parity in (EVEN, ODD):
        assert offdiag_main_term(1, 1, 101, parity, "B_decomposition") == 0


def test_prediction_examples():
    b = theorem1_prediction(1, 1, 101)
    assert b.total > 0 and all(math.isfinite(x) for x in (b.diag_even, b.diag_odd,
                                                          b.offdiag_even, b.offdiag_odd))
    assert b.total == pytest.approx((b.even + b.odd) / 2)
    assert "total=(even+odd)/2" in b.q_weight_id
    b = theorem1_prediction(2, 3, 101)
    assert math.isfinite(b.total)
    with pytest.raises(ValueError):
        theorem1_prediction(2, 4, 101)
    with pytest.raises(ValueError):
        theorem1_prediction(1, 1, 100)
    with pytest.raises(ValueError):
        theorem1_prediction(1, 101, 101)
