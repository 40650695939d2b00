import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from accelcv.special import (
    BesselConvergenceError,
    PoleError,
    ScaledComplex,
    bessel_I_imag_order,
    log_gamma_complex,
    rindler_radial_profile,
)

mpmath.mp.dps = 40


def mp_loggamma(z):
    return complex(mpmath.loggamma(mpmath.mpc(z.real, z.imag)))


@pytest.mark.parametrize(
    "z",
    [0.5, 1.0, 2.5, 10.0, 1 + 1j, 0.3 + 50j, 1 + 500j, -3.7 + 0.2j, -10.5 - 4j, -20.3 + 100j, 20.7 - 3j, 1e-3 + 1e-3j],
)
def test_log_gamma_matches_mpmath(z):
    got = log_gamma_complex(z)
    want = mp_loggamma(complex(z))
    assert abs(got - want) <= 1e-13 * max(1.0, abs(want))


@given(
    st.floats(min_value=-15.0, max_value=15.0),
    st.floats(min_value=-300.0, max_value=300.0),
)
def test_log_gamma_random_against_mpmath(x, y):
    z = complex(x, y)
    nearest = min(round(x), 0)
    if abs(z - nearest) < 1e-3:
        return
    got = log_gamma_complex(z)
    want = mp_loggamma(z)
    assert abs(got - want) <= 1e-12 * max(1.0, abs(want))


@given(st.floats(min_value=0.1, max_value=20.0), st.floats(min_value=-200.0, max_value=200.0))
def test_log_gamma_recurrence(x, y):
    z = complex(x, y)
    lhs = log_gamma_complex(z + 1)
    rhs = cmath.log(z) + log_gamma_complex(z)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_log_gamma_real_axis_agrees_with_lgamma():
    for x in [0.25, 1.0, 3.0, 7.5, 30.0]:
        assert log_gamma_complex(x) == pytest.approx(math.lgamma(x), rel=1e-14)


def test_log_gamma_array_input():
    z = np.array([1 + 1j, 2 - 3j, -0.5 + 0.5j])
    out = log_gamma_complex(z)
    assert out.shape == z.shape
    for zi, oi in zip(z, out):
        assert oi == pytest.approx(mp_loggamma(complex(zi)), abs=1e-13)


@pytest.mark.parametrize("z", [0.0, -1.0, -7.0, -3 + 1e-16j])
def test_log_gamma_poles(z):
    with pytest.raises(PoleError):
        log_gamma_complex(z)


def test_gamma_modulus_on_imaginary_line():
    # |Gamma(1 + i nu)|^2 = pi nu / sinh(pi nu)
    for nu in [0.5, 3.0, 40.0, 250.0]:
        lhs = 2 * log_gamma_complex(1 + 1j * nu).real
        rhs = math.log(math.pi * nu) - (math.pi * nu + math.log1p(-math.exp(-2 * math.pi * nu)) - math.log(2))
        assert lhs == pytest.approx(rhs, rel=1e-13)


@pytest.mark.parametrize("nu,z", [(0.5, 0.1), (5.0, 1.0), (50.0, 1.0), (10.0, 3.0), (200.0, 5.0), (500.0, 10.0)])
def test_bessel_matches_mpmath(nu, z):
    got = bessel_I_imag_order(nu, z)
    want = mpmath.besseli(mpmath.mpc(0, nu), z)
    assert got.log_magnitude == pytest.approx(float(mpmath.log(abs(want))), abs=1e-12)
    dphase = got.phase - float(mpmath.arg(want))
    assert abs(math.remainder(dphase, 2 * math.pi)) < 1e-11


def test_bessel_real_order_series_oracle():
    # at nu -> small, I_{i nu} approaches I_0, which scipy evaluates independently
    from scipy.special import i0

    for z in [0.2, 1.0, 4.0]:
        got = bessel_I_imag_order(1e-9, z).to_complex()
        assert got.real == pytest.approx(i0(z), rel=1e-8)
        assert abs(got.imag) < 1e-7 * i0(z)


def test_bessel_negative_order_is_conjugate():
    a = bessel_I_imag_order(-7.0, 2.0)
    b = bessel_I_imag_order(7.0, 2.0)
    assert a.log_magnitude == b.log_magnitude
    assert a.phase == -b.phase


def test_bessel_large_order_does_not_overflow():
    v = bessel_I_imag_order(600.0, 3.0)
    assert math.isfinite(v.log_magnitude)
    # magnitude ~ exp(pi nu / 2) / sqrt(...)
    assert v.log_magnitude > 900


def test_bessel_rejects_nonpositive_argument():
    with pytest.raises(ValueError):
        bessel_I_imag_order(1.0, 0.0)


def test_bessel_series_budget():
    from accelcv.special import _reduced_series

    with pytest.raises(BesselConvergenceError):
        _reduced_series(1.0, np.array([50.0]), max_terms=10)


def test_scaled_complex_roundtrip_and_product():
    a = ScaledComplex.from_complex(3 - 4j)
    assert a.to_complex() == pytest.approx(3 - 4j, rel=1e-15)
    b = ScaledComplex.from_complex(-1j)
    assert (a * b).to_complex() == pytest.approx((3 - 4j) * -1j, rel=1e-15)
    assert -math.pi < (a * b).phase <= math.pi
    assert ScaledComplex.from_complex(0).log_magnitude == -math.inf


def test_profile_vanishes_at_centre_and_matches_direct_product():
    nu, m, x0 = 20.0, 0.1, 4.0
    chi = np.array([3.0, x0, 5.0])
    prof = rindler_radial_profile(nu, m, x0, chi)
    assert prof[1] == 0.0
    # direct product from mpmath, with the same 1/|Gamma|^2 factor removed
    common = float(mpmath.log(abs(mpmath.gamma(1 + 1j * nu)) ** -2))
    for c, p in zip(chi, prof):
        direct = mpmath.im(mpmath.besseli(-1j * nu, m * x0) * mpmath.besseli(1j * nu, m * c))
        assert p == pytest.approx(float(direct / mpmath.exp(common)), rel=1e-11, abs=1e-14)


def test_profile_reference_only_rescales():
    chi = np.linspace(2.0, 6.0, 7)
    a = rindler_radial_profile(30.0, 0.1, 4.0, chi)
    b = rindler_radial_profile(30.0, 0.1, 4.0, chi, log_reference=10.0)
    ratio = b[a != 0] / a[a != 0]
    assert np.allclose(ratio, ratio[0], rtol=1e-13)
    assert ratio[0] > 0
