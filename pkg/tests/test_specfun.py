import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_radiance.errors import DomainError
from mirror_radiance.specfun import (
    BesselKValue,
    ComplexOrder,
    bessel_k,
    bessel_k_log_substitution,
    gamma_abs_sq_imag,
    log_abs_sq_bessel_k,
    log_cosh,
    log_sinh,
    log_sinhc,
)

mpmath.mp.dps = 40


def mp_abs_sq(re, im, x):
    return float(abs(mpmath.besselk(mpmath.mpc(re, im), x)) ** 2)


@pytest.mark.parametrize("x", [1e-3, 0.01, 0.5, 1.0, 3.0, 10.0, 40.0])
def test_half_integer_closed_form(x):
    exact = math.sqrt(math.pi / (2.0 * x)) * math.exp(-x)
    k = bessel_k(0.5, x)
    assert k.value.real == pytest.approx(exact, rel=1e-13)
    assert abs(k.value.imag) <= 1e-13 * exact
    assert k.abs_sq == pytest.approx(exact * exact, rel=1e-13)


@pytest.mark.parametrize("x", [1e-3, 0.1, 1.0, 2.5, 10.0])
def test_gamma_identity(x):
    assert gamma_abs_sq_imag(x) * x * math.sinh(math.pi * x) == pytest.approx(math.pi, rel=1e-12)
    assert float(abs(mpmath.gamma(1j * x)) ** 2) == pytest.approx(gamma_abs_sq_imag(x), rel=1e-12)


def test_gamma_pole():
    with pytest.raises(DomainError):
        gamma_abs_sq_imag(0.0)


@pytest.mark.parametrize(
    "re, im, x",
    [
        (0.0, 0.0, 1.0),
        (0.0, 1.0, 1.0),
        (0.0, 5.0, 0.5),
        (0.0, 20.0, 1.0),
        (0.0, 40.0, 45.0),
        (0.5, 0.3, 2.0),
        (0.5, 4.275, 5.0),
        (0.5, 12.0, 0.2),
        (0.5, 30.0, 3.0),
        (0.5, 0.0, 1e-3),
        (0.0, 50.0, 1e-3),
    ],
)
def test_against_arbitrary_precision(re, im, x):
    expected = mp_abs_sq(re, im, x)
    got = math.exp(float(log_abs_sq_bessel_k(re, im, x)))
    assert got == pytest.approx(expected, rel=1e-11)


def test_complex_value_against_arbitrary_precision():
    k = bessel_k(ComplexOrder(0.5, 2.0), 1.5)
    ref = complex(mpmath.besselk(mpmath.mpc(0.5, 2.0), 1.5))
    assert abs(k.value - ref) <= 1e-12 * abs(ref)
    conj = bessel_k(ComplexOrder(0.5, -2.0), 1.5)
    assert conj.value == pytest.approx(k.value.conjugate(), rel=1e-15)


def test_vectorised_matches_scalar():
    mu = np.array([0.0, 0.5, 3.0, 9.0])
    x = np.array([0.2, 1.0, 4.0, 7.0])
    vec = log_abs_sq_bessel_k(0.5, mu, x)
    for m, xx, v in zip(mu, x, vec):
        assert v == pytest.approx(bessel_k(0.5 + 1j * m, xx).log_abs_sq, rel=1e-13)


def test_log_form_survives_underflow():
    # |K_{i mu}(x)|^2 ~ exp(-pi mu) for mu >> x and ~ exp(-2x) for x >> mu
    assert math.isfinite(float(log_abs_sq_bessel_k(0.0, 400.0, 5.0)))
    assert float(log_abs_sq_bessel_k(0.5, 0.0, 500.0)) == pytest.approx(
        math.log(math.pi / 1000.0) - 1000.0, rel=1e-12)


@given(st.floats(0.0, 30.0), st.floats(0.01, 30.0), st.sampled_from([0.0, 0.5]))
@settings(max_examples=60, deadline=None)
def test_modulus_even_in_imaginary_order(mu, x, c):
    a = bessel_k(complex(c, mu), x).abs_sq
    b = bessel_k(complex(c, -mu), x).abs_sq
    assert a == pytest.approx(b, rel=1e-12, abs=0.0)


@given(st.floats(0.1, 20.0), st.floats(0.0, 20.0), st.sampled_from([0.0, 0.5]))
@settings(max_examples=40, deadline=None)
def test_two_routes_agree(x, mu, c):
    main = bessel_k(complex(c, mu), x)
    other = bessel_k_log_substitution(complex(c, mu), x)
    scale = math.sqrt(main.abs_sq)
    assert abs(main.value - other.value) <= 1e-8 * scale


@given(st.floats(0.01, 30.0), st.floats(0.01, 30.0))
@settings(max_examples=40, deadline=None)
def test_positive_real_order_is_real_and_positive(x, nu):
    k = bessel_k(nu, x)
    assert k.value.real > 0
    assert abs(k.value.imag) <= 1e-12 * k.value.real


@pytest.mark.parametrize("x", [0.0, -1.0, math.nan])
def test_nonpositive_argument_rejected(x):
    with pytest.raises(DomainError):
        bessel_k(0.5, x)


def test_value_record_fields():
    k = bessel_k(0.0, 1.0)
    assert isinstance(k, BesselKValue)
    assert k.log_abs_sq == pytest.approx(math.log(k.abs_sq), rel=1e-14)
    assert k.abs_err >= 0.0


@pytest.mark.parametrize("z", [0.0, 1e-9, 1e-5, 1e-3, 0.5, 5.0, 25.0, 300.0])
def test_log_sinhc_branches(z):
    expected = float(mpmath.log(mpmath.sinh(z) / z)) if z else 0.0
    assert float(log_sinhc(z)) == pytest.approx(expected, rel=1e-12, abs=1e-300)
    assert float(log_sinhc(-z)) == float(log_sinhc(z))


@pytest.mark.parametrize("z", [1e-3, 0.7, 30.0, 800.0])
def test_log_hyperbolics(z):
    assert float(log_sinh(z)) == pytest.approx(float(mpmath.log(mpmath.sinh(z))), rel=1e-13)
    assert float(log_cosh(z)) == pytest.approx(float(mpmath.log(mpmath.cosh(z))), rel=1e-13)


@pytest.mark.parametrize("order, x, expected", [
    (0.0, 1.0, 0.42102443824070834),
    (0.5, 2.0, 0.11993777196806151),
])
def test_reference_values(order, x, expected):
    assert abs(bessel_k(order, x).value) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("x, expected", [(1.0, 0.2720290549821332), (-1.0, 0.2720290549821332),
                                         (2.0, 0.005866764826350947)])
def test_gamma_reference_values(x, expected):
    assert gamma_abs_sq_imag(x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("nu", [0.0, 0.5, 1.0, 3.7])
def test_real_order_decreasing_in_x(nu):
    x = np.geomspace(1e-3, 50.0, 60)
    k = np.array([bessel_k(nu, xx).value.real for xx in x])
    assert np.all(np.diff(k) < 0)
