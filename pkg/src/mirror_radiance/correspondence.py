"""Dictionary between the charge's radiation and the mirror's particle spectrum.

Splitting the photon frequency ``omega`` by the direction cosine ``T``,

    p = omega (1 + T) / 2,    q = omega (1 - T) / 2,

turns the pair ``(omega, T)`` into an out/in mode pair with ``dp dq =
(omega / 2) d omega dT``.  Under this map

    |beta_pq|^2 = (4 pi / omega^2) [dI/dOmega(omega, T) + dI/dOmega(omega, -T)],

the sum over ``+-T`` accounting for the two sides of the mirror, which see
opposite parity.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError
from .spectra import ModePair, beta_sq, spectral_distribution
from .trajectories import TrajectoryParams

__all__ = [
    "RESIDUAL_FLOOR",
    "modes_from_angle",
    "angle_from_modes",
    "jacobian",
    "parity_sum",
    "identity_sides",
    "verify_identity",
    "direction_note",
]

RESIDUAL_FLOOR = 1e-300


def modes_from_angle(omega: float, T: float) -> ModePair:
    if not omega > 0:
        raise DomainError("omega must be positive")
    if not abs(T) <= 1.0:
        raise DomainError("direction cosine must lie in [-1, 1]")
    return ModePair(0.5 * omega * (1.0 + T), 0.5 * omega * (1.0 - T))


def angle_from_modes(p: float, q: float) -> tuple[float, float]:
    if not (p > 0 and q > 0):
        raise DomainError("mode frequencies must be positive")
    omega = p + q
    return omega, (p - q) / omega


def jacobian(omega):
    """``|d(p, q) / d(omega, T)|``."""
    return 0.5 * np.asarray(omega, dtype=float)


def parity_sum(params: TrajectoryParams, omega, T):
    return spectral_distribution(params, omega, T) + spectral_distribution(params, omega, -np.asarray(T))


def identity_sides(params: TrajectoryParams, omega, T):
    """``(|beta_pq|^2, (4 pi / omega^2) [f(T) + f(-T)])`` at the mapped mode pair."""
    omega, T = np.broadcast_arrays(np.asarray(omega, dtype=float), np.asarray(T, dtype=float))
    if np.any(~(omega > 0)) or np.any(~(np.abs(T) <= 1.0)):
        raise DomainError("need omega > 0 and |T| <= 1")
    f_plus = spectral_distribution(params, omega, T)
    f_minus = spectral_distribution(params, omega, -T)
    # the sum over sides collapses to 2 f only because f is even; check rather than assume
    if not np.allclose(f_plus, f_minus, rtol=1e-12, atol=0.0):
        raise ArithmeticError("spectral distribution is not even in T")
    p = 0.5 * omega * (1.0 + T)
    q = 0.5 * omega * (1.0 - T)
    lhs = beta_sq(params, p, q)
    rhs = 4.0 * math.pi / omega ** 2 * (f_plus + f_minus)
    return lhs, rhs


def verify_identity(params: TrajectoryParams, omega, T):
    """Relative residual ``|lhs - rhs| / max(lhs, rhs, floor)`` of the identity."""
    lhs, rhs = identity_sides(params, omega, T)
    out = np.abs(lhs - rhs) / np.maximum(np.maximum(lhs, rhs), RESIDUAL_FLOOR)
    return out if np.ndim(out) else float(out)


def direction_note() -> str:
    """Which way the dictionary can be read.

    Given a radiating charge, the map above produces a mirror spectrum.  The
    reverse reading needs the angle convention fixed first: a mode pair only
    determines ``|T|`` up to which side of the mirror is looked at, and the
    parity sum has already merged the two.
    """
    return ("charge radiation -> mirror spectrum; the inverse (p, q) -> (omega, T) "
            "map assumes T = (p - q) / (p + q) and does not recover the one-sided "
            "distribution")
