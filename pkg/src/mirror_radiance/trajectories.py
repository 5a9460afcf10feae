"""Kinematics, Larmor/Feynman powers and radiated energy of the two worldlines.

Units are natural with unit charge, so the Larmor power is ``alpha^2 / 6 pi``
and ``kappa`` (an inverse time) is the only dimensionful input.  Both
worldlines are written with the leading minus sign of their usual form:

* self-dual: ``x(t) = -(v / kappa) ln(kappa^2 t^2 + 1)``, even in ``t``,
  peak speed ``v`` reached at ``kappa t = +-1``;
* betaK: ``x(t) = -(v0 / kappa) asinh(kappa t)``, odd in ``t``, peak speed
  ``v0`` at ``t = 0``.

The radiation-reaction force is taken as ``F = (d alpha / d tau) / 6 pi`` and
the Feynman power as ``P_F = -F v``.  With ``d tau = dt / gamma`` this gives
``P_F = -gamma v (d alpha / dt) / 6 pi``, whose time integral equals that of
the Larmor power for any asymptotically inertial motion (integrate by parts
using ``d(gamma v)/dt = alpha``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import integrate, require_converged

__all__ = [
    "Kind",
    "TrajectoryParams",
    "WorldlineState",
    "PowerSample",
    "EnergyBudget",
    "state",
    "larmor_power",
    "feynman_power",
    "feynman_power_betak_closed",
    "power_samples",
    "total_energy_closed",
    "total_energy_numeric",
]


class Kind(enum.Enum):
    SELF_DUAL = "self-dual"
    BETA_K = "betak"

    @classmethod
    def parse(cls, name) -> "Kind":
        if isinstance(name, cls):
            return name
        key = str(name).lower().replace("_", "-")
        aliases = {"selfdual": "self-dual", "sd": "self-dual", "beta-k": "betak", "bk": "betak"}
        return cls(aliases.get(key, key))


@dataclass(frozen=True)
class TrajectoryParams:
    """Which worldline, its peak speed and its acceleration scale.

    ``v_max = 0`` is accepted as the static limit (everything radiated is
    zero); the interesting range is ``0 < v_max < 1``.
    """

    kind: Kind
    v_max: float
    kappa: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind.parse(self.kind))
        if not (0.0 <= self.v_max < 1.0):
            raise DomainError(f"v_max must lie in [0, 1), got {self.v_max}")
        if not (self.kappa > 0.0 and math.isfinite(self.kappa)):
            raise DomainError(f"kappa must be positive and finite, got {self.kappa}")

    @property
    def gamma_max(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.v_max * self.v_max)


@dataclass(frozen=True)
class WorldlineState:
    t: np.ndarray
    x: np.ndarray
    v: np.ndarray
    gamma: np.ndarray
    alpha: np.ndarray


@dataclass(frozen=True)
class PowerSample:
    t: np.ndarray
    larmor: np.ndarray
    feynman: np.ndarray


@dataclass(frozen=True)
class EnergyBudget:
    e_larmor: float
    e_feynman: float
    e_closed: float
    err_larmor: float
    err_feynman: float

    def max_relative_spread(self) -> float:
        vals = [self.e_larmor, self.e_feynman, self.e_closed]
        ref = max(abs(v) for v in vals)
        if ref == 0.0:
            return 0.0
        return max(abs(a - b) for a in vals for b in vals) / ref


def _derivatives(params: TrajectoryParams, t):
    """Velocity, acceleration, jerk and 1 - v^2 as closed forms in s = kappa t."""
    k = params.kappa
    vm = params.v_max
    s = k * np.asarray(t, dtype=float)
    s2 = s * s
    if params.kind is Kind.SELF_DUAL:
        d = s2 + 1.0
        v = -2.0 * vm * s / d
        a = -2.0 * vm * k * (1.0 - s2) / (d * d)
        j = 4.0 * vm * k * k * s * (3.0 - s2) / (d * d * d)
        one_minus_v2 = (d * d - 4.0 * vm * vm * s2) / (d * d)
    else:
        d = s2 + 1.0
        r = np.sqrt(d)
        v = -vm / r
        a = vm * k * s / (d * r)
        j = vm * k * k * (1.0 - 2.0 * s2) / (d * d * r)
        one_minus_v2 = (d - vm * vm) / d
    return v, a, j, one_minus_v2


def state(params: TrajectoryParams, t) -> WorldlineState:
    """Position, velocity, Lorentz factor and proper acceleration at time ``t``."""
    t = np.asarray(t, dtype=float)
    k = params.kappa
    s = k * t
    if params.kind is Kind.SELF_DUAL:
        x = -(params.v_max / k) * np.log1p(s * s)
    else:
        x = -(params.v_max / k) * np.arcsinh(s)
    v, a, _, omv = _derivatives(params, t)
    gamma = 1.0 / np.sqrt(omv)
    alpha = gamma ** 3 * a
    return WorldlineState(t, x, v, gamma, alpha)


def _finite_limit(t, values):
    # both powers vanish at t = +-inf; the closed forms give inf/inf there
    return np.where(np.isinf(t), 0.0, values)


def larmor_power(params: TrajectoryParams, t):
    """Larmor power ``alpha^2 / 6 pi`` from the closed forms of each worldline."""
    t = np.asarray(t, dtype=float)
    k = params.kappa
    vm = params.v_max
    if vm == 0.0:
        return np.zeros_like(t)
    with np.errstate(invalid="ignore", over="ignore"):
        if params.kind is Kind.SELF_DUAL:
            s2 = (k * t) ** 2
            num = 2.0 * k * k * vm * vm * (s2 * s2 - 1.0) ** 2
            den = 3.0 * math.pi * ((s2 + 1.0) ** 2 - 4.0 * s2 * vm * vm) ** 3
            out = num / den
        else:
            s2 = (k * t) ** 2
            V = -vm / np.sqrt(s2 + 1.0)
            gamma2 = 1.0 / (1.0 - V * V)
            # v0^2 - V^2 written as v0^2 s^2 / (1 + s^2), which does not cancel near t = 0
            gap = vm * vm * s2 / (s2 + 1.0)
            out = (k * k / (6.0 * math.pi)) * gamma2 ** 3 * gap * V ** 4 / vm ** 4
    return _finite_limit(t, out)


def feynman_power(params: TrajectoryParams, t):
    """Feynman power ``P_F = -F v`` with ``F = (d alpha / d tau) / 6 pi``.

    Evaluated from the analytic derivative
    ``d alpha / dt = 3 gamma^5 v a^2 + gamma^3 j`` (``a``, ``j`` the
    coordinate acceleration and jerk), so no finite differencing is involved.
    """
    t = np.asarray(t, dtype=float)
    if params.v_max == 0.0:
        return np.zeros_like(t)
    with np.errstate(invalid="ignore", over="ignore"):
        v, a, j, omv = _derivatives(params, t)
        gamma = 1.0 / np.sqrt(omv)
        g3 = gamma ** 3
        dalpha_dt = 3.0 * g3 * gamma * gamma * v * a * a + g3 * j
        out = -gamma * v * dalpha_dt / (6.0 * math.pi)
    return _finite_limit(t, out)


def feynman_power_betak_closed(params: TrajectoryParams, t):
    """betaK Feynman power through the Larmor power and ``V(t)``.

    ``P_F = -P_L [2 - V^2 (1 - v0^2) / (v0^2 - V^2)]``.  The bracket form is
    usually quoted without the leading minus, which makes its time integral
    ``-E``; the sign here matches :func:`feynman_power`.
    """
    if params.kind is not Kind.BETA_K:
        raise DomainError("closed-form Feynman power is only known for betaK")
    t = np.asarray(t, dtype=float)
    vm = params.v_max
    if vm == 0.0:
        return np.zeros_like(t)
    s2 = (params.kappa * t) ** 2
    V2 = vm * vm / (s2 + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        bracket = 2.0 - V2 * (1.0 - vm * vm) / (vm * vm * s2 / (s2 + 1.0))
        out = -larmor_power(params, t) * bracket
    # P_L ~ s^2 and the bracket ~ -(1 - v0^2) / s^2 near t = 0, where v0^2 - V^2
    # cancels; switch to the limit before that loses digits
    limit = (params.kappa ** 2) * vm * vm / (6.0 * math.pi * (1.0 - vm * vm) ** 2)
    return _finite_limit(t, np.where(s2 < 1e-10, limit, out))


def power_samples(params: TrajectoryParams, t) -> PowerSample:
    t = np.asarray(t, dtype=float)
    return PowerSample(t, larmor_power(params, t), feynman_power(params, t))


def total_energy_closed(params: TrajectoryParams) -> float:
    """Total radiated energy from the closed forms of the two worldlines."""
    v = params.v_max
    g = params.gamma_max
    if params.kind is Kind.SELF_DUAL:
        return params.kappa / 24.0 * g * v * v * (g * g + 3.0)
    return params.kappa / 48.0 * g ** 3 * v * v


def _time_integral(params, power, rtol):
    # integrate in s = kappa t so the feature scale is O(1) for any kappa
    k = params.kappa

    def f(s):
        return power(params, s / k) / k

    res = integrate(f, -math.inf, math.inf, tol=1e-300, rtol=rtol, points=(-1.0, 0.0, 1.0))
    return require_converged(res, f"{power.__name__} time integral")


def total_energy_numeric(params: TrajectoryParams, which=None, rtol: float = 1e-11) -> EnergyBudget:
    """Energy from time-integrating the Larmor and/or Feynman power.

    ``which`` selects ``"larmor"`` or ``"feynman"``; ``None`` does both.  The
    route not computed is reported as NaN.
    """
    if which is not None and which not in ("larmor", "feynman"):
        raise DomainError(f"unknown energy route {which!r}")
    e_closed = total_energy_closed(params)
    if params.v_max == 0.0:
        return EnergyBudget(0.0, 0.0, e_closed, 0.0, 0.0)
    nan = math.nan
    e_l = e_f = err_l = err_f = nan
    if which in (None, "larmor"):
        r = _time_integral(params, larmor_power, rtol)
        e_l, err_l = r.value, r.abs_err
    if which in (None, "feynman"):
        r = _time_integral(params, feynman_power, rtol)
        e_f, err_f = r.value, r.abs_err
    return EnergyBudget(e_l, e_f, e_closed, err_l, err_f)
