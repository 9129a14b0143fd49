import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from momentlab.arith import factorize
from momentlab.functions import (EVEN, ODD, ZETA2, B_derivatives, G_jet, G_value, H_jet, H_value,
                                 L_brute, L_closed, A_jet, A_value, A_polar_value, QChoice,
                                 delta_local_sum, delta_value, euler_product, f_value, mu2,
                                 offdiag_local_factor, parity_kernel, script_A_value)
from momentlab.jets import S_ONLY, Jet, Window, max_rel_diff
from momentlab.specfun import digamma, zeta_value

U1 = Window(udeg=1)
CUBEFREE = [n for n in range(1, 101) if factorize(n).cubefree]


def test_f_examples():
    assert f_value(1, 0.7) == 1
    assert f_value(2, 1.0) == pytest.approx(4 / 3)
    assert f_value(4, 1.0) == pytest.approx(5 / 3)
    with pytest.raises(ValueError):
        f_value(8, 1.0)


def test_mu2_examples():
    assert mu2(2, 0) == -2
    assert mu2(4, 0) == 1
    assert mu2(8, 0.3 + 0.1j) == 0


def test_delta_examples():
    assert delta_value(1, 0.2, 0.1, 0.3) == 1
    assert complex(delta_value(2, 0.0, 0.0, 0.0)) == pytest.approx(4 / 3)
    assert complex(delta_value(4, 0.0, 0.0, 0.0, form="displayed")) == pytest.approx(8 / 3)
    # the local factor of the defining sum gives (3 - 1/p) / (1 + 1/p) at p^2
    assert complex(delta_value(4, 0.0, 0.0, 0.0)) == pytest.approx(5 / 3)
    assert complex(delta_value(4, 0.0, 0.0, 0.0)) == pytest.approx(f_value(4, 1.0))
    with pytest.raises(ValueError):
        delta_value(8, 0.0, 0.0, 0.0)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("v", [1, 2])
def test_delta_matches_defining_local_sum(p, v):
    rng = np.random.default_rng(p * 10 + v)
    for _ in range(5):
        s = complex(rng.uniform(0.1, 0.4), rng.uniform(-1, 1))
        u1, u2 = rng.uniform(-0.1, 0.1, 2) + 1j * rng.uniform(-0.1, 0.1, 2)
        ref = delta_local_sum(p, v, 0, s, u1, u2)
        assert complex(delta_value(p**v, s, u1, u2)) == pytest.approx(ref, rel=1e-12)
        ref2 = delta_local_sum(p, 0, v, s, u1, u2)
        assert complex(delta_value(p**v, s, u2, u1)) == pytest.approx(ref2, rel=1e-12)


def test_displayed_delta_differs_from_local_sum_at_p_squared():
    ref = delta_local_sum(2, 2, 0, 0.0, 0.0, 0.0)
    assert abs(complex(delta_value(4, 0.0, 0.0, 0.0, form="displayed")) - ref) > 0.5


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(CUBEFREE), st.sampled_from(CUBEFREE),
       st.complex_numbers(max_magnitude=0.4))
def test_multiplicativity(m, n, z):
    if math.gcd(m, n) != 1 or not factorize(m * n).cubefree:
        return
    s = 0.3 + z
    assert complex(f_value(m * n, s)) == pytest.approx(complex(f_value(m, s) * f_value(n, s)))
    assert mu2(m * n, z) == pytest.approx(mu2(m, z) * mu2(n, z))
    u1, u2 = 0.1 * z, -0.05 * z
    assert complex(delta_value(m * n, s, u1, u2)) == pytest.approx(
        complex(delta_value(m, s, u1, u2) * delta_value(n, s, u1, u2)))


@pytest.mark.parametrize("ell", [2, 3, 4, 9])
def test_delta_symmetry(ell):
    rng = np.random.default_rng(ell)
    for _ in range(5):
        s = complex(rng.uniform(-0.4, 0.4), rng.uniform(-1, 1))
        a = delta_value(ell, Jet.const(-s, U1), Jet.u1(U1), Jet.u2(U1))
        b = delta_value(ell, Jet.const(s, U1), Jet.u1(U1), Jet.u2(U1))
        lhs = a.coefficient(0, 1, 0) / a.coefficient(0)
        rhs = b.coefficient(0, 0, 1) / b.coefficient(0)
        assert abs(lhs - rhs) < 1e-9 * max(1, abs(rhs))


# -- H, G, A --------------------------------------------------------------


@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_H_examples(parity):
    h = H_jet(parity)
    if parity is EVEN:
        assert h.residue() == pytest.approx(1, rel=1e-13)
    swapped = H_value(parity, Jet.s(), Jet.u2(), Jet.u1())
    assert max_rel_diff(h, swapped) < 1e-14
    a = complex(H_value(parity, 0.1, 0.01, 0.02, "definition_sum"))
    b = complex(H_value(parity, 0.1, 0.01, 0.02, "gamma_identity"))
    assert abs(a - b) < 1e-9 * abs(b)


@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_H_routes_agree_as_jets(parity):
    a = H_jet(parity, "definition_sum")
    b = H_jet(parity, "gamma_identity")
    assert max_rel_diff(a, b) < 1e-9


def test_G_examples():
    for parity in (EVEN, ODD):
        assert G_jet(parity, window=S_ONLY).constant() == pytest.approx(1, rel=1e-14)
    for parity, c in ((EVEN, 0.25), (ODD, 0.75)):
        g = G_jet(parity, window=S_ONLY)
        slope = g.coefficient(1) / g.constant()
        assert slope == pytest.approx(-2 * math.log(math.pi) + 2 * complex(digamma(c)), rel=1e-12)
        h = 1e-4
        fd = (math.log(abs(G_value(parity, h))) - math.log(abs(G_value(parity, -h)))) / (2 * h)
        assert slope.real == pytest.approx(fd, rel=1e-6)
    assert abs(complex(G_value(EVEN, 0.3)) - complex(G_value(ODD, 0.3))) > 1e-3


def test_G_against_mpmath():
    for parity, c in ((EVEN, 0.5), (ODD, 1.5)):
        for s in (0.3, 2 + 5j, 0.5 - 10j):
            ref = (mpmath.pi ** (-2 * s) * mpmath.gamma((c + s) / 2) ** 4
                   / mpmath.gamma(c / 2) ** 4 * mpmath.exp(s * s))
            assert complex(G_value(parity, s)) == pytest.approx(complex(ref), rel=1e-12)
    assert complex(G_value(EVEN, 0.3, QChoice(2.0))) == pytest.approx(
        complex(G_value(EVEN, 0.3)) * math.exp(0.09), rel=1e-14)


@pytest.mark.parametrize("parity", [EVEN, ODD])
def test_A_examples(parity):
    assert complex(script_A_value(parity, 0.0, 0.0, 0.0)) == pytest.approx(-1 / ZETA2, rel=1e-12)
    a0 = A_jet(101, parity, S_ONLY)
    assert a0.odd_ratio() < 1e-9
    direct = A_jet(101, parity)
    polar = A_jet(101, parity, assembly="polar")
    assert max_rel_diff(direct, polar) < 1e-9
    s, u1, u2 = 0.13 + 0.05j, 0.02, -0.01
    reg = complex(A_value(101, parity, s, u1, u2)) * (2 * s + u1 + u2) * (2 * s - u1 - u2)
    assert reg == pytest.approx(complex(101 ** (u1 + u2) * script_A_value(parity, s, u1, u2)),
                                rel=1e-12)


def test_parity_kernel_is_even():
    co = parity_kernel(Jet.s(S_ONLY)).s_coeffs()
    assert max(abs(v) for e, v in co.items() if e % 2) < 1e-10


# -- B and L ----------------------------------------------------------------


def test_B_examples():
    b = B_derivatives(1, 1)
    assert b.B0.constant() == pytest.approx(1)
    assert all(abs(v) < 1e-15 for v in b.B1.s_coeffs().values())
    assert all(abs(v) < 1e-15 for v in b.B2.s_coeffs().values())
    b = B_derivatives(2, 3)
    assert b.B0.odd_ratio() < 1e-12
    assert b.B1.odd_ratio() < 1e-12


def test_L_closed_examples():
    s, u1, u2 = 0.3 + 0.1j, 0.02, -0.01
    assert complex(L_closed(s, u1, u2, 1, 1)) == pytest.approx(
        complex(zeta_value(1 + 2 * s + u1 + u2) / zeta_value(2 + 2 * u1 + 2 * u2)))
    assert complex(L_closed(0.25, 0, 0, 1, 1)) == pytest.approx(
        complex(zeta_value(1.5)) / ZETA2, rel=1e-12)
    assert complex(zeta_value(1.5)).real == pytest.approx(2.6123753487)


def test_L_brute_examples():
    assert L_brute(0.5, 0, 0, 1, 1, 10**6) == pytest.approx(1, abs=1e-5)
    closed = complex(L_closed(0.3, 0.01, -0.02, 2, 3))
    assert abs(L_brute(0.3, 0.01, -0.02, 2, 3, 10**6) - closed) < 1e-5 * abs(closed)
    errs = [abs(L_brute(0.3, 0.01, -0.02, 2, 3, c) - closed) for c in (10, 10**3, 10**6)]
    assert errs[0] > errs[1] > errs[2]


def test_L_brute_rejects_divergent_region():
    with pytest.raises(ValueError):
        L_brute(-0.1, 0, 0, 1, 1)


# -- Euler products ----------------------------------------------------------


def test_euler_product_examples():
    r = euler_product("diag_F", 10**6)
    assert abs(r.value - math.pi**2 / 6) < 1e-6
    assert r.tail_estimate < 1e-6
    assert offdiag_local_factor(2) == pytest.approx(7)
    assert offdiag_local_factor(3) == pytest.approx(2)
    with pytest.raises(ValueError):
        euler_product("diag_F", 50)


def test_offdiag_series_product_is_zeta2():
    r = euler_product("offdiag_F_series", 10**6)
    assert abs(r.value - ZETA2) < 1e-6


def test_mollified_L_check_spot():
    z = (0.01, -0.02, 0.015, 0.005)
    r = euler_product("mollified_L_check", 10**4, s=0.02, z=z)
    assert math.isfinite(r.value) and r.tail_estimate < 1e-2
    r0 = euler_product("mollified_L_check", 10**4)
    # at the origin the series factor is zeta(2)
    assert r0.value == pytest.approx(ZETA2, abs=1e-3)
