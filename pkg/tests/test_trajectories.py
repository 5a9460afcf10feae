import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mirror_radiance.errors import DomainError
from mirror_radiance.trajectories import (
    EnergyBudget,
    Kind,
    TrajectoryParams,
    feynman_power,
    feynman_power_betak_closed,
    larmor_power,
    power_samples,
    state,
    total_energy_closed,
    total_energy_numeric,
)

SPEEDS = [0.1, 0.3, 0.5, 0.7, 0.9, 0.95]
KINDS = [Kind.SELF_DUAL, Kind.BETA_K]


def finite_difference_alpha(params, t, h=1e-5):
    # proper acceleration as d(gamma v)/dt, from positions only
    def gv(tt):
        x = state(params, np.array([tt - h, tt, tt + h])).x
        v = (x[2] - x[0]) / (2 * h)
        return v / math.sqrt(1 - v * v)

    return (gv(t + h) - gv(t - h)) / (2 * h)


@pytest.mark.parametrize("name, kind", [("self-dual", Kind.SELF_DUAL), ("SD", Kind.SELF_DUAL),
                                        ("betak", Kind.BETA_K), ("beta_k", Kind.BETA_K)])
def test_kind_parse(name, kind):
    assert Kind.parse(name) is kind


@pytest.mark.parametrize("v, kappa", [(1.0, 1.0), (-0.1, 1.0), (0.5, 0.0), (0.5, math.inf)])
def test_invalid_params(v, kappa):
    with pytest.raises(DomainError):
        TrajectoryParams(Kind.SELF_DUAL, v, kappa)


def test_worldline_shapes():
    t = np.linspace(-3, 3, 13)
    sd = state(TrajectoryParams(Kind.SELF_DUAL, 0.9), t)
    bk = state(TrajectoryParams(Kind.BETA_K, 0.9), t)
    assert np.allclose(sd.x, sd.x[::-1])
    assert np.allclose(bk.x, -bk.x[::-1])
    assert sd.x[6] == 0.0 and bk.x[6] == 0.0


def test_peak_speeds():
    sd = state(TrajectoryParams(Kind.SELF_DUAL, 0.9, 2.0), np.array([-0.5, 0.5]))
    assert np.allclose(np.abs(sd.v), 0.9, rtol=1e-15)
    bk = state(TrajectoryParams(Kind.BETA_K, 0.9), 0.0)
    assert float(bk.v) == pytest.approx(-0.9, rel=1e-15)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("t", [-2.0, -0.4, 0.3, 1.7])
def test_proper_acceleration_matches_positions(kind, t):
    p = TrajectoryParams(kind, 0.8)
    assert float(state(p, t).alpha) == pytest.approx(finite_difference_alpha(p, t), rel=1e-5, abs=1e-8)


@pytest.mark.parametrize("kind", KINDS)
@given(t=st.floats(-50, 50), v=st.floats(0.01, 0.99))
@settings(max_examples=50, deadline=None)
def test_larmor_is_alpha_squared(kind, t, v):
    p = TrajectoryParams(kind, v)
    alpha = float(state(p, t).alpha)
    assert float(larmor_power(p, t)) == pytest.approx(alpha * alpha / (6 * math.pi), rel=1e-10, abs=1e-300)


@given(t=st.floats(-30, 30), v=st.floats(0.01, 0.99))
@settings(max_examples=50, deadline=None)
def test_betak_closed_feynman_matches_analytic(t, v):
    p = TrajectoryParams(Kind.BETA_K, v)
    a = float(feynman_power(p, t))
    b = float(feynman_power_betak_closed(p, t))
    assert b == pytest.approx(a, rel=1e-8, abs=1e-14 * float(larmor_power(p, 0.5)))


def test_closed_feynman_only_for_betak():
    with pytest.raises(DomainError):
        feynman_power_betak_closed(TrajectoryParams(Kind.SELF_DUAL, 0.5), 0.0)


def test_powers_vanish_at_infinity_and_for_static():
    p = TrajectoryParams(Kind.SELF_DUAL, 0.9)
    assert larmor_power(p, np.inf) == 0.0 and feynman_power(p, -np.inf) == 0.0
    s = TrajectoryParams(Kind.BETA_K, 0.0)
    assert np.all(power_samples(s, np.linspace(-1, 1, 5)).larmor == 0.0)


def test_self_dual_feynman_zero_at_larmor_maxima():
    # P_L peaks where alpha is extremal, so d alpha / dt and hence P_F vanish
    # there; at v = 0.9 there are two peaks on each side of t = 0
    p = TrajectoryParams(Kind.SELF_DUAL, 0.9)
    t = np.linspace(-4, 4, 80001)
    pl = larmor_power(p, t)
    peaks = np.nonzero((pl[1:-1] > pl[:-2]) & (pl[1:-1] > pl[2:]))[0] + 1
    assert len(peaks) == 4
    assert np.allclose(t[peaks], -t[peaks][::-1])
    scale = np.max(np.abs(feynman_power(p, t)))
    for i in peaks:
        assert abs(feynman_power(p, t[i])) < 1e-3 * scale


def test_betak_feynman_sign_change_location():
    v0 = 0.9
    p = TrajectoryParams(Kind.BETA_K, v0)
    V2 = 2 * v0 * v0 / (3 - v0 * v0)
    t0 = math.sqrt(v0 * v0 / V2 - 1.0)
    assert abs(float(feynman_power(p, t0))) < 1e-14


@pytest.mark.parametrize("kind, v, expected", [(Kind.SELF_DUAL, 0.9, 0.6397982209719155),
                                               (Kind.BETA_K, 0.9, 0.20375739521398586)])
def test_closed_energy_values(kind, v, expected):
    assert total_energy_closed(TrajectoryParams(kind, v)) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("v", SPEEDS)
def test_energy_routes_agree(kind, v):
    b = total_energy_numeric(TrajectoryParams(kind, v))
    assert isinstance(b, EnergyBudget)
    assert b.max_relative_spread() < 1e-9


@pytest.mark.parametrize("kind", KINDS)
def test_energy_linear_in_kappa(kind):
    e1 = total_energy_numeric(TrajectoryParams(kind, 0.7, 1.0), which="larmor").e_larmor
    e2 = total_energy_numeric(TrajectoryParams(kind, 0.7, 2.0), which="larmor").e_larmor
    assert e2 == pytest.approx(2 * e1, rel=1e-10)


def test_energy_route_selection():
    b = total_energy_numeric(TrajectoryParams(Kind.BETA_K, 0.5), which="feynman")
    assert math.isnan(b.e_larmor) and math.isfinite(b.e_feynman)
    with pytest.raises(DomainError):
        total_energy_numeric(TrajectoryParams(Kind.BETA_K, 0.5), which="abraham")


def test_energy_monotone_and_self_dual_larger():
    v = np.linspace(0.01, 0.99, 50)
    sd = [total_energy_closed(TrajectoryParams(Kind.SELF_DUAL, x)) for x in v]
    bk = [total_energy_closed(TrajectoryParams(Kind.BETA_K, x)) for x in v]
    assert np.all(np.diff(sd) > 0) and np.all(np.diff(bk) > 0)
    assert np.all(np.array(bk) < np.array(sd))


def test_static_limit_energy_is_zero():
    for kind in KINDS:
        b = total_energy_numeric(TrajectoryParams(kind, 0.0))
        assert b.e_larmor == b.e_feynman == b.e_closed == 0.0
