"""Bogolyubov spectra of the moving-mirror analogs and the classical angular
spectral distributions of the two worldlines.

Every closed form is a product of an algebraic prefactor, a hyperbolic factor
and ``|K|^2`` of complex order.  At high frequency the hyperbolic factor
overflows while ``|K|^2`` underflows, so products are assembled in log space.

The removable singularities (``sigma = p - q = 0`` in the self-dual
``|beta|^2`` and ``T = 0`` in its distribution) are handled by writing the
``sinh(z) / z`` ratio through :func:`~mirror_radiance.specfun.log_sinhc`,
which takes the limit explicitly for small ``z``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import integrate, integrate_2d, require_converged
from .specfun import log_abs_sq_bessel_k, log_cosh, log_sinhc
from .trajectories import Kind, TrajectoryParams, total_energy_closed

__all__ = [
    "ModePair",
    "AngularPoint",
    "ParticleCount",
    "beta_sq",
    "particle_spectrum",
    "energy_from_modes",
    "spectral_distribution",
    "spectral_distribution_directed",
    "energy_spectrum",
    "energy_from_distribution",
    "particle_count",
    "particle_count_classical",
    "particle_count_modes",
    "PlanckFit",
    "planck_fit",
]


@dataclass(frozen=True)
class ModePair:
    """Out-going (``p``) and in-going (``q``) mode frequencies.

    One of them may vanish (forward or backward emission), not both.
    """

    p: float
    q: float

    def __post_init__(self):
        if not (self.p >= 0 and self.q >= 0 and self.p + self.q > 0):
            raise DomainError("mode frequencies must be non-negative with a positive sum")

    @property
    def omega(self) -> float:
        return self.p + self.q

    @property
    def sigma(self) -> float:
        return self.p - self.q


@dataclass(frozen=True)
class AngularPoint:
    omega: float
    T: float

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError("omega must be positive")
        if not abs(self.T) <= 1.0:
            raise DomainError("direction cosine must lie in [-1, 1]")


@dataclass(frozen=True)
class ParticleCount:
    classical: float
    modes: float

    @property
    def relative_gap(self) -> float:
        ref = max(abs(self.classical), abs(self.modes))
        return abs(self.classical - self.modes) / ref if ref else 0.0


def _exp(logs):
    with np.errstate(under="ignore"):
        return np.exp(logs)


def beta_sq(params: TrajectoryParams, p, q):
    """``|beta_pq|^2`` of the double-sided mirror, symmetric under ``p <-> q``."""
    p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
    if np.any(p < 0) or np.any(q < 0):
        raise DomainError("mode frequencies must be non-negative")
    k = params.kappa
    v = params.v_max
    if v == 0.0:
        return np.zeros(p.shape)
    omega = p + q
    sigma = p - q
    mu = v * sigma / k
    with np.errstate(divide="ignore"):
        log_pq = np.log(p) + np.log(q)
    if params.kind is Kind.SELF_DUAL:
        # 16 v p q / (pi^2 k^2 sigma omega) sinh(pi v sigma / k) |K_{1/2 + i mu}(omega / k)|^2
        logk = log_abs_sq_bessel_k(0.5, mu, omega / k)
        logs = (math.log(16.0 * v * v / (math.pi * k ** 3)) + log_pq - np.log(omega)
                + log_sinhc(math.pi * mu) + logk)
    else:
        # 8 v^2 p q / (pi^2 k^2 omega^2) cosh(pi v sigma / k) |K_{i mu}(omega / k)|^2
        logk = log_abs_sq_bessel_k(0.0, mu, omega / k)
        logs = (math.log(8.0 * v * v / (math.pi ** 2 * k * k)) + log_pq - 2.0 * np.log(omega)
                + log_cosh(math.pi * mu) + logk)
    out = _exp(logs)
    return out if out.ndim else float(out)


def _check_angles(omega, T):
    omega, T = np.broadcast_arrays(np.asarray(omega, dtype=float), np.asarray(T, dtype=float))
    if np.any(~(omega > 0)):
        raise DomainError("omega must be positive")
    if np.any(~(np.abs(T) <= 1.0)):
        raise DomainError("direction cosine must lie in [-1, 1]")
    return omega, T


def _distribution(params: TrajectoryParams, omega, T, directed: bool):
    omega, T = _check_angles(omega, T)
    k = params.kappa
    v = params.v_max
    if v == 0.0:
        return np.zeros(omega.shape)
    mu = v * T * omega / k
    x = omega / k
    if params.kind is Kind.SELF_DUAL:
        # v w^2 / (k^2 pi^3) (1 - T^2) / (2 T) sinh(pi v T w / k) |K_{1/2 + i mu}(w / k)|^2
        logk = log_abs_sq_bessel_k(0.5, mu, x)
        logs = (math.log(v * v / (2.0 * math.pi ** 2 * k ** 3)) + 3.0 * np.log(omega)
                + log_sinhc(math.pi * mu) + logk)
    else:
        # v0^2 w^2 / (4 k^2 pi^3) (1 - T^2) cosh(pi mu) |K_{i mu}(w / k)|^2
        logk = log_abs_sq_bessel_k(0.0, mu, x)
        hyper = -math.pi * mu if directed else log_cosh(math.pi * mu)
        logs = (math.log(v * v / (4.0 * math.pi ** 3 * k * k)) + 2.0 * np.log(omega)
                + hyper + logk)
    # the geometric factor is applied outside the logs so T = +-1 gives exactly 0
    out = (1.0 - T * T) * _exp(logs)
    return out if out.ndim else float(out)


def spectral_distribution(params: TrajectoryParams, omega, T):
    """``dI/dOmega`` at frequency ``omega`` and direction cosine ``T``.

    Even in ``T`` for both worldlines.  For betaK this is the parity average
    ``[d(T) + d(-T)] / 2`` of the single-direction result
    :func:`spectral_distribution_directed`; the two have the same integral
    over directions.
    """
    return _distribution(params, omega, T, directed=False)


def spectral_distribution_directed(params: TrajectoryParams, omega, T):
    """Single-direction ``dI/dOmega`` as produced by the trajectory integral.

    For the self-dual worldline this coincides with
    :func:`spectral_distribution`.  For betaK the hyperbolic factor is
    ``exp(-pi v0 T omega / kappa)`` rather than its even part: the charge,
    moving towards ``-x``, beams into ``T < 0``.
    """
    return _distribution(params, omega, T, directed=True)


def particle_spectrum(params: TrajectoryParams, p: float, q_max: float = math.inf,
                      rtol: float = 1e-9) -> float:
    """``N_p = int_0^q_max |beta_pq|^2 dq``."""
    if not p > 0:
        raise DomainError("p must be positive")
    if params.v_max == 0.0:
        return 0.0
    res = integrate(lambda q: beta_sq(params, p, q), 0.0, q_max, tol=1e-300, rtol=rtol,
                    points=(p,) if p < q_max else ())
    return require_converged(res, "particle spectrum").value


def _mode_integral(params, weight, rtol):
    k = params.kappa

    def inner(p, q):
        return weight(p, q) * beta_sq(params, p, q)

    res = integrate_2d(inner, (0.0, math.inf), (0.0, math.inf), tol=1e-300, rtol=rtol,
                       omega_points=(k,), T_points=())
    return res


def energy_from_modes(params: TrajectoryParams, rtol: float = 1e-6) -> float:
    """``E = int int p |beta_pq|^2 dp dq`` over the positive quadrant."""
    if params.v_max == 0.0:
        return 0.0
    res = _mode_integral(params, lambda p, q: p, rtol)
    return require_converged(res, "mode-sum energy").value


def energy_spectrum(params: TrajectoryParams, omega: float, rtol: float = 1e-9) -> float:
    """``I(omega) = 2 pi int_{-1}^{1} dT dI/dOmega``."""
    if not omega > 0:
        raise DomainError("omega must be positive")
    if params.v_max == 0.0:
        return 0.0
    res = integrate(lambda T: spectral_distribution(params, omega, T), -1.0, 1.0,
                    tol=1e-300, rtol=rtol, points=(0.0,))
    return 2.0 * math.pi * require_converged(res, "energy spectrum").value


def _angular_integral(params, weight, rtol, directed=False):
    dist = spectral_distribution_directed if directed else spectral_distribution

    def f(omega, T):
        return weight(omega) * dist(params, omega, T)

    return integrate_2d(f, (0.0, math.inf), (-1.0, 1.0), tol=1e-300, rtol=rtol,
                        azimuthal=True, omega_points=(params.kappa,), T_points=(0.0,))


def energy_from_distribution(params: TrajectoryParams, rtol: float = 1e-6) -> float:
    """``E = int d omega int dOmega dI/dOmega``."""
    if params.v_max == 0.0:
        return 0.0
    res = _angular_integral(params, lambda w: 1.0, rtol)
    return require_converged(res, "distribution energy").value


def particle_count_classical(params: TrajectoryParams, rtol: float = 1e-6) -> float:
    """``N = int d omega int dOmega (1 / omega) dI/dOmega``."""
    if params.v_max == 0.0:
        return 0.0
    res = _angular_integral(params, lambda w: 1.0 / w, rtol)
    return require_converged(res, "classical particle count").value


def particle_count_modes(params: TrajectoryParams, rtol: float = 1e-6) -> float:
    """``N = (1/2) int int |beta_pq|^2 dp dq``; one side of the mirror only."""
    if params.v_max == 0.0:
        return 0.0
    res = _mode_integral(params, lambda p, q: 0.5, rtol)
    return require_converged(res, "mode particle count").value


def particle_count(params: TrajectoryParams, rtol: float = 1e-6) -> ParticleCount:
    return ParticleCount(particle_count_classical(params, rtol), particle_count_modes(params, rtol))


def closed_energy(params: TrajectoryParams) -> float:
    return total_energy_closed(params)


@dataclass(frozen=True)
class PlanckFit:
    amplitude: float
    temperature: float
    rms_relative_deviation: float


def planck_fit(p, n_p) -> PlanckFit:
    """Least-squares fit of ``A / (exp(p / Theta) - 1)`` to a particle spectrum.

    The fit is done on the relative residual so every point carries equal
    weight; the reported deviation is the RMS of that residual at the optimum.
    """
    from scipy.optimize import least_squares

    p = np.asarray(p, dtype=float)
    n_p = np.asarray(n_p, dtype=float)
    if p.shape != n_p.shape or p.size < 3:
        raise DomainError("need at least three matching (p, N_p) samples")
    if np.any(~(p > 0)) or np.any(~(n_p > 0)):
        raise DomainError("frequencies and occupation numbers must be positive")

    def resid(theta):
        log_a, log_temp = theta
        model = np.exp(log_a) / np.expm1(p / np.exp(log_temp))
        return model / n_p - 1.0

    # start from the high-p slope, where a Planck tail is a pure exponential
    slope = -np.polyfit(p[-3:], np.log(n_p[-3:]), 1)[0]
    temp0 = 1.0 / slope if slope > 0 else float(np.mean(p))
    a0 = float(n_p[0] * np.expm1(p[0] / temp0))
    sol = least_squares(resid, [math.log(a0), math.log(temp0)], method="lm")
    rms = float(np.sqrt(np.mean(sol.fun ** 2)))
    return PlanckFit(float(np.exp(sol.x[0])), float(np.exp(sol.x[1])), rms)
