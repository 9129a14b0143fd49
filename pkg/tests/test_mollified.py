import itertools
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentlab.arith import CONSTANTS
from momentlab.functions import ZETA2, euler_product
from momentlab.mollified import (CONTOUR_CONSTANTS, beta, combinatorial_constants,
                                 diagonal_coefficients, eta4, frakS, gamma4, mollified_asymptotic,
                                 offdiag_coefficients, polytope_constant, scrB, scrB_expansion)

SMALL = [j for j in itertools.product(range(5), repeat=4) if sum(j) <= 4]


def test_constant_examples():
    assert beta(0, 1, 1) == 1
    assert gamma4(0, 0, 0, 0) == Fraction(-1, 24)
    assert eta4(0, 0, 0, 0) == Fraction(1, 4)
    assert frakS(0, 0, 0, 0) == Fraction(1, 12)
    assert combinatorial_constants("frakS", 0, 0, 0, 0) == Fraction(1, 12)
    assert scrB(0, 1, 0, 0, 1, 0, 0, 0) == -1
    assert scrB(0, 1, 0, 1, 0, 0, 0, 0) == 1
    assert scrB(1, 1, 0, 0, 0, 0, 0, 0) == -1


@pytest.mark.parametrize("call", [
    lambda: combinatorial_constants("frakS", 0, 0, 0),
    lambda: combinatorial_constants("nope", 0),
    lambda: beta(-1, 0, 0),
    lambda: scrB(0, 0, 0),
])
def test_malformed_indices(call):
    with pytest.raises(ValueError):
        call()


@pytest.mark.parametrize("j", SMALL)
def test_frakS_symmetry(j):
    j1, j2, j3, j4 = j
    assert frakS(j1, j2, j3, j4) == frakS(j2, j1, j4, j3)


def test_contour_constants_match_polytope_quadrature():
    for j, exact in CONTOUR_CONSTANTS.items():
        assert polytope_constant(j) == pytest.approx(float(exact), rel=1e-12)


def test_contour_constant_symmetries():
    for (j1, j2, j3, j4), v in CONTOUR_CONSTANTS.items():
        assert CONTOUR_CONSTANTS[(j2, j1, j3, j4)] == v
        assert CONTOUR_CONSTANTS[(j1, j2, j4, j3)] == v
        assert CONTOUR_CONSTANTS[(j3, j4, j1, j2)] == v


@settings(max_examples=10, deadline=None)
@given(st.lists(st.floats(-1, 1), min_size=4, max_size=4))
def test_scrB_identity(z):
    lhs, rhs = scrB_expansion(np.array(z))
    assert abs(lhs - rhs) <= 1e-10 * max(1.0, abs(rhs))


def test_diagonal_top_coefficient():
    # only j = 0 survives: 2 * 2^4 / 4! * I(0,0,0,0)
    a = diagonal_coefficients("contour")
    assert a[4] == 2 * 16 * Fraction(1, 24) * Fraction(1, 6) == Fraction(2, 9)
    oracle = 2 * 16 / 24 * polytope_constant((0, 0, 0, 0))
    assert float(a[4]) == pytest.approx(oracle, rel=1e-4)


def test_series_euler_gives_unit_constant_term():
    m = mollified_asymptotic(1e-3, offdiag_euler="series")
    assert m.a[0] == pytest.approx(1.0, abs=1e-6)
    exact = diagonal_coefficients("contour")[0] - 2 * offdiag_coefficients("contour")[0]
    assert exact == 1


def test_mollified_contract():
    m = mollified_asymptotic(1e-3)
    assert m.a.shape == (5,) and np.all(np.isfinite(m.a)) and np.isrealobj(m.a)
    assert math.isfinite(m.value)
    assert m.diagnostic is False
    again = mollified_asymptotic(1e-3)
    assert np.array_equal(m.a, again.a)
    assert mollified_asymptotic(float(CONSTANTS.lambda_max)).diagnostic is True
    with pytest.raises(ValueError):
        mollified_asymptotic(1e-3, polynomial=(0, 1))
    with pytest.raises(ValueError):
        mollified_asymptotic(0.0)
    with pytest.raises(ValueError):
        mollified_asymptotic(1e-3, offdiag_euler="other")


def test_parts_add_up():
    both = mollified_asymptotic(1e-3, "both")
    d = mollified_asymptotic(1e-3, "diag")
    o = mollified_asymptotic(1e-3, "offdiag")
    assert np.allclose(both.a, d.a + o.a, rtol=1e-14, atol=0)
    assert o.offdiag_euler == euler_product("offdiag_F", 10**6).value


def test_frakS_route_top_coefficient():
    # the displayed constant frakS(0,0,0,0) = 1/12 is half the contour value 1/6
    assert diagonal_coefficients("frakS")[4] == Fraction(1, 9)
    m = mollified_asymptotic(1e-3, route="frakS")
    assert m.route == "frakS" and np.all(np.isfinite(m.a))
    with pytest.raises(ValueError):
        diagonal_coefficients("other")
