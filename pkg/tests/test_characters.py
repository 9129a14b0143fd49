import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentlab.characters import (central_values_all, character_table, functional_equation_residual,
                                  gauss_sum, orthogonality_check, parseval_check)
from momentlab.oracles import twisted_fourth_moment_brute

PRIMES = [3, 5, 7, 11, 13, 101]


def test_table_examples():
    t = character_table(5)
    assert sum(1 for k in range(1, t.order) if t.is_even(k)) == 1
    t = character_table(7)
    assert t.g == 3
    for k in range(6):
        assert t.value(k, 3) == pytest.approx(cmath.exp(2j * math.pi * k / 6))
    with pytest.raises(ValueError):
        character_table(4)


@pytest.mark.parametrize("q", PRIMES)
def test_table_invariants(q):
    t = character_table(q)
    rng = np.random.default_rng(q)
    assert sum(t.is_even(k) for k in range(t.order)) == (q - 1) // 2
    for k in range(t.order):
        assert (abs(t.value(k, -1) - 1) < 1e-12) == t.is_even(k)
        assert t.value(0, int(rng.integers(1, q))) == pytest.approx(1)
        a, b = (int(x) for x in rng.integers(1, q, 2))
        assert t.value(k, a * b) == pytest.approx(t.value(k, a) * t.value(k, b), abs=1e-12)


def _mp_l_half(q, chi):
    return complex(mpmath.dirichlet(0.5, [0] + [chi[a] for a in range(1, q)]))


def test_q3_value():
    v = central_values_all(3)
    assert v.shape == (1,)
    # real and positive; mpmath gives 0.480867557696829...
    assert abs(v[0].imag) < 1e-14 and v[0].real > 0
    assert v[0].real == pytest.approx(_mp_l_half(3, [0, 1, -1]), rel=1e-12)


@pytest.mark.parametrize("q", [5, 7, 13])
def test_central_values_against_mpmath(q):
    t = character_table(q)
    vals = central_values_all(q)
    for k in range(1, t.order):
        assert vals[k - 1] == pytest.approx(_mp_l_half(q, list(t.values(k))), rel=1e-11)


@pytest.mark.parametrize("q", [11, 101])
def test_conjugate_symmetry_and_finiteness(q):
    vals = central_values_all(q)
    assert vals.size == q - 2 and np.all(np.isfinite(vals))
    # chi_{order - k} = conj(chi_k)
    assert np.max(np.abs(vals[::-1] - np.conj(vals))) < 1e-12


def test_dft_paths_agree():
    a = central_values_all(211, method="naive")
    b = central_values_all(211, method="bluestein")
    c = central_values_all(211, method="naive", threads=4)
    assert np.max(np.abs(a - b)) < 1e-10
    assert np.array_equal(a, c)


def test_gauss_sums():
    t5 = character_table(5)
    assert gauss_sum(t5, 2) == pytest.approx(1, abs=1e-13)
    for q in (3, 5, 7, 11, 101):
        t = character_table(q)
        for k in range(1, t.order):
            assert abs(gauss_sum(t, k)) == pytest.approx(1, abs=1e-12)
    with pytest.raises(ValueError):
        gauss_sum(t5, 0)


@pytest.mark.parametrize("q", [5, 7, 11])
def test_functional_equation(q):
    t = character_table(q)
    for k in range(1, t.order):
        assert functional_equation_residual(t, k, 0.3 + 0.2j) < 1e-8


def test_orthogonality_example():
    rows = {m: (lhs, rhs) for m, lhs, rhs in orthogonality_check(5)}
    assert rows[2] == (-1, -1)


@pytest.mark.parametrize("q", [5, 7, 11, 13, 101])
def test_parseval(q):
    lhs, rhs = parseval_check(q)
    assert abs(lhs - rhs) < 1e-9 * rhs


def test_moment_examples():
    v = central_values_all(5)
    m = twisted_fourth_moment_brute(1, 1, 5)
    assert m == pytest.approx(np.mean(np.abs(v) ** 4), rel=1e-14) and m > 0
    twisted = twisted_fourth_moment_brute(2, 3, 101)
    assert math.isfinite(twisted)
    for ell in (2, 3, 7):
        assert twisted_fourth_moment_brute(ell, ell, 101) == pytest.approx(
            twisted_fourth_moment_brute(1, 1, 101), rel=1e-13)
    even = twisted_fourth_moment_brute(2, 3, 101, "even_only")
    odd = twisted_fourth_moment_brute(2, 3, 101, "odd_only")
    assert twisted == pytest.approx((even + odd) / 2, rel=1e-13)
    with pytest.raises(ValueError):
        twisted_fourth_moment_brute(1, 101, 101)
    with pytest.raises(ValueError):
        twisted_fourth_moment_brute(1, 1, 101, "mixed")
