import math

import mpmath
import numpy as np
import pytest

from momentlab.arith import tau
from momentlab.characters import character_table
from momentlab.functions import DEFAULT_Q, EVEN, ODD, G_value
from momentlab.main_terms import residue_oracle
from momentlab.oracles import (V, V_HEIGHT, V_STEP, afe_all, afe_check, diagonal_sum_brute,
                               moment_report, v_table)
from momentlab.specfun import zeta_value


def _V_mpmath(x, c, sigma=2.0):
    mpmath.mp.dps = 25

    def f(t):
        s = sigma + 1j * t
        return (mpmath.pi ** (-2 * s) * mpmath.gamma((c + s) / 2) ** 4 / mpmath.gamma(c / 2) ** 4
                * mpmath.exp(s * s) * mpmath.mpf(x) ** (-s) / s).real

    return float(mpmath.quad(f, [-30, -10, 0, 10, 30]) / (2 * mpmath.pi))


@pytest.mark.parametrize("parity, c", [(EVEN, 0.5), (ODD, 1.5)])
def test_V_against_mpmath(parity, c):
    for x in (0.01, 0.5, 2.0, 50.0):
        assert V(x, parity)[0] == pytest.approx(_V_mpmath(x, c), rel=1e-11, abs=1e-17)


def test_V_small_x_limit():
    # the next pole of G after s = 0 sits at -1/2 (even) or -3/2 (odd), so
    # 1 - V(x) decays like a power of x, with log factors
    xs = 10.0 ** -np.arange(2, 10)
    for parity, c in ((EVEN, 0.5), (ODD, 1.5)):
        gap = 1 - V(xs, parity)
        assert np.all(gap > 0) and np.all(np.diff(gap) < 0)
        assert V(1e-9, parity)[0] == pytest.approx(_V_mpmath(1e-9, c, 0.5), rel=1e-10)
    assert 1 - V(1e-9, ODD)[0] < 1e-7


def test_V_below_1e8_beyond_50():
    xs = np.geomspace(50, 1e4, 50)
    assert np.all(np.abs(V(xs, EVEN)) < 1e-8)


def test_V_step_doubling():
    xs = np.geomspace(1e-4, 1e3, 60)
    for parity in (EVEN, ODD):
        a = V(xs, parity)
        b = V(xs, parity, step=V_STEP / 2, height=2 * V_HEIGHT)
        assert np.max(np.abs(a - b)) < 1e-10


def test_V_table_interpolation():
    vt = v_table(EVEN, DEFAULT_Q, 1e-4, 100.0)
    xs = np.geomspace(1.1e-4, 90, 333)
    assert np.max(np.abs(vt(xs) - V(xs, EVEN))) < 1e-13


def test_afe_q5():
    t = character_table(5)
    for k in range(1, 4):
        r = afe_check(t, k)
        assert r.rel_error < 1e-6
    with pytest.raises(ValueError):
        afe_check(t, 0)


def test_diagonal_reparametrisation():
    # (2, 3): n = 3j, m = 2j
    q, cutoff = 101, 10**5
    direct = 0.0
    for j in range(1, int(math.isqrt(cutoff // 6)) + 1):
        if j % q == 0:
            continue
        n, m = 3 * j, 2 * j
        direct += 2 * tau(n) * tau(m) / math.sqrt(n * m) * V(n * m / q**2, EVEN)[0]
    assert diagonal_sum_brute(2, 3, q, EVEN, cutoff) == pytest.approx(direct, rel=1e-13)


def test_diagonal_brute_converges_monotonically():
    vals = [diagonal_sum_brute(1, 1, 101, EVEN, c) for c in (1e2, 1e4, 1e6, 1e8)]
    gaps = np.abs(np.diff(vals))
    assert np.all(np.diff(gaps) < 0)


@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_diagonal_brute_closure(parity):
    """The truncated diagonal sum equals its Mellin integral shifted past s = 0.

    Removing multiples of q multiplies the series by (1 - q^-w)^4 / (1 - q^-2w),
    w = 1 + 2s.  Between Re s = 0 and Re s = -0.3 the only pole is the one at 0.
    """
    q = 101

    def kernel(s):
        w = 1 + 2 * s
        local = (1 - q ** (-w)) ** 4 / (1 - q ** (-2 * w))
        return (2 * G_value(parity, s) * q ** (2 * s) * zeta_value(w) ** 4 / zeta_value(2 * w)
                * local / s)

    residue = residue_oracle(kernel).residue
    t = np.arange(-60, 60 + 0.025, 0.025)
    line = np.sum(kernel(-0.3 + 1j * t)).real * 0.025 / (2 * np.pi)
    brute = diagonal_sum_brute(1, 1, q, parity, 1e8)
    assert brute == pytest.approx(residue.real + line, rel=1e-10)


@pytest.mark.parametrize("parity", [EVEN, ODD], ids=["even", "odd"])
def test_diagonal_brute_near_main_term(parity):
    from momentlab.main_terms import diagonal_main_term

    brute = diagonal_sum_brute(1, 1, 101, parity, 1e8)
    assert brute == pytest.approx(diagonal_main_term(1, 1, 101, parity), rel=5e-2)


def test_moment_report_fields():
    r = moment_report(101)
    assert r.rel_error == pytest.approx(abs(r.brute_value - r.predicted.total) / abs(r.brute_value))
    assert r.wall_time_ms >= 0
    d = r.as_dict()
    assert d["predicted"]["q"] == 101
