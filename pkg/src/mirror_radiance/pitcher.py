"""Relativistic projectile under a constant vertical force.

A unit-mass particle starts at the origin moving horizontally with speed
``v0`` and feels a constant force ``alpha_y`` along ``y``.  The equations of
motion ``d(gamma v)/dt = (0, alpha_y, 0)`` keep ``gamma v_x = gamma0 v0``
fixed, so the growing ``gamma`` of the vertical fall slows the horizontal
motion.  With ``kappa = alpha_y / gamma0`` the horizontal worldline is
``x(t) = (v0 / kappa) asinh(kappa t)``, the betaK trajectory up to the sign
of the initial velocity, and ``y(t)`` is a hyperbola.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import ConvergenceError, DomainError
from .trajectories import Kind, TrajectoryParams

__all__ = [
    "ProjectileParams",
    "ProjectileState",
    "closed_form_state",
    "integrate_eom",
    "hyperbola_residual",
]


@dataclass(frozen=True)
class ProjectileParams:
    v0: float
    alpha_y: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.v0 < 1.0):
            raise DomainError(f"v0 must lie in (0, 1), got {self.v0}")
        if not (self.alpha_y > 0 and math.isfinite(self.alpha_y)):
            raise DomainError(f"alpha_y must be positive and finite, got {self.alpha_y}")

    @property
    def gamma0(self) -> float:
        return 1.0 / math.sqrt(1.0 - self.v0 * self.v0)

    @property
    def kappa(self) -> float:
        return self.alpha_y / self.gamma0

    def betak(self) -> TrajectoryParams:
        """The betaK worldline traced (mirrored in ``x``) by the horizontal motion."""
        return TrajectoryParams(Kind.BETA_K, self.v0, self.kappa)


@dataclass(frozen=True)
class ProjectileState:
    t: np.ndarray
    x: np.ndarray
    y: np.ndarray
    v_x: np.ndarray
    v_y: np.ndarray
    gamma: np.ndarray
    z: np.ndarray | None = None
    v_z: np.ndarray | None = None


def closed_form_state(params: ProjectileParams, t) -> ProjectileState:
    t = np.asarray(t, dtype=float)
    k = params.kappa
    s = k * t
    root = np.sqrt(1.0 + s * s)
    v_x = params.v0 / root
    v_y = s / root
    x = (params.v0 / k) * np.arcsinh(s)
    # (sqrt(1 + s^2) - 1) / kappa without cancellation at small s
    y = s * s / (root + 1.0) / k
    gamma = params.gamma0 * root
    return ProjectileState(t, x, y, v_x, v_y, gamma)


def hyperbola_residual(params: ProjectileParams, state: ProjectileState):
    """``(kappa y + 1)^2 - (kappa t)^2 - 1``, zero on the exact orbit."""
    k = params.kappa
    return (k * state.y + 1.0) ** 2 - (k * state.t) ** 2 - 1.0


def _rhs(alpha):
    alpha = np.asarray(alpha, dtype=float)

    def f(t, y):
        # y = (position[3], momentum per unit mass[3])
        u = y[3:]
        gamma = math.sqrt(1.0 + float(u @ u))
        return np.concatenate([u / gamma, alpha])

    return f


def integrate_eom(params: ProjectileParams, t_end: float, step_tol: float = 1e-13,
                  t_eval=None) -> ProjectileState:
    """Integrate ``d(gamma v)/dt = (0, alpha_y, 0)`` in three dimensions.

    The state is position and momentum ``u = gamma v``.  The force is constant
    in these variables and ``|v| = |u| / sqrt(1 + |u|^2) < 1`` holds for any
    ``u``, so nothing stiffens as the particle approaches light speed.
    """
    if not (math.isfinite(t_end) and t_end > 0):
        raise DomainError("t_end must be positive and finite")
    if not step_tol > 0:
        raise DomainError("step_tol must be positive")
    g0 = params.gamma0
    u0 = np.array([g0 * params.v0, 0.0, 0.0])
    y0 = np.concatenate([np.zeros(3), u0])
    if t_eval is None:
        t_eval = np.linspace(0.0, t_end, 201)
    sol = solve_ivp(_rhs((0.0, params.alpha_y, 0.0)), (0.0, t_end), y0, method="DOP853",
                    t_eval=np.asarray(t_eval, dtype=float), rtol=step_tol, atol=step_tol * 1e-2)
    if not sol.success:
        raise ConvergenceError(f"equation of motion integration failed: {sol.message}")
    pos = sol.y[:3]
    u = sol.y[3:]
    gamma = np.sqrt(1.0 + np.sum(u * u, axis=0))
    vel = u / gamma
    return ProjectileState(sol.t, pos[0], pos[1], vel[0], vel[1], gamma, pos[2], vel[2])
