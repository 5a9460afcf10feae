"""Brute-force spectral distribution straight from the trajectory integral.

For straight-line motion along ``x`` the radiated spectrum per solid angle is

    dI/dOmega = (omega^2 / 16 pi^3) (1 - T^2) |A|^2,
    A = int dt  xdot(t) exp(i omega (t - T x(t))).

Neither ``xdot`` decays faster than ``1/t``, so the integral over the full
line is only conditionally convergent.  With ``s = kappa t`` the phase splits
into ``omega s / kappa`` plus a slowly varying part, and the parity of the
velocity folds the line onto ``[0, inf)``:

* self-dual: ``xdot`` is odd and ``exp(i a ln(1 + s^2))`` is even, leaving a
  sine transform of a complex envelope (``a = omega v T / kappa``);
* betaK: ``xdot`` is even, so only the even part of ``exp(i b asinh s)
  exp(i omega s / kappa)`` survives (``b = omega v0 T / kappa``).

Each complex transform is assembled from two real ones evaluated with
:func:`~mirror_radiance.quadrature.integrate_oscillatory`.  Nothing here uses
Bessel functions, which is the point: the module is an independent check on
:mod:`mirror_radiance.spectra`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .quadrature import Oscillator, OscillatorySpec, integrate_oscillatory
from .spectra import AngularPoint
from .trajectories import Kind, TrajectoryParams

__all__ = [
    "RadiationIntegrand",
    "amplitude",
    "amplitude_sq",
    "distribution_bruteforce",
    "energy_bruteforce",
]


@dataclass(frozen=True)
class RadiationIntegrand:
    trajectory: TrajectoryParams
    point: AngularPoint

    @classmethod
    def at(cls, trajectory: TrajectoryParams, omega: float, T: float) -> "RadiationIntegrand":
        return cls(trajectory, AngularPoint(omega, T))


def _transform(envelope, rate, kind, tol, what):
    res = integrate_oscillatory(OscillatorySpec(envelope, rate, kind), tol=tol, rtol=0.0)
    if not res.converged:
        raise ConvergenceError(
            f"{what} did not converge: estimate {res.value!r}, error {res.abs_err:.3g}", res)
    return res.value


def amplitude(spec: RadiationIntegrand, tol: float = 1e-11) -> complex:
    """The trajectory integral ``A`` at ``spec.point``, to absolute ``tol``."""
    if not tol > 0:
        raise DomainError("tol must be positive")
    traj = spec.trajectory
    k = traj.kappa
    v = traj.v_max
    omega, T = spec.point.omega, spec.point.T
    if v == 0.0:
        return 0j
    r = omega / k
    if traj.kind is Kind.SELF_DUAL:
        a = omega * v * T / k

        def env_c(s):
            return s / (s * s + 1.0) * np.cos(a * np.log1p(s * s))

        def env_s(s):
            return s / (s * s + 1.0) * np.sin(a * np.log1p(s * s))

        # the prefactor 4 v / kappa multiplies the error, so tighten accordingly
        t = tol * k / (4.0 * v)
        ic = _transform(env_c, r, Oscillator.SINE, t, "self-dual cosine-envelope transform")
        i_s = _transform(env_s, r, Oscillator.SINE, t, "self-dual sine-envelope transform")
        return (-4j * v / k) * complex(ic, i_s)

    b = omega * v * T / k

    def env_c(s):
        return np.cos(b * np.arcsinh(s)) / np.sqrt(s * s + 1.0)

    def env_s(s):
        return np.sin(b * np.arcsinh(s)) / np.sqrt(s * s + 1.0)

    t = tol * k / (2.0 * v)
    c = _transform(env_c, r, Oscillator.COSINE, t, "betaK cosine transform")
    s_ = _transform(env_s, r, Oscillator.SINE, t, "betaK sine transform")
    return complex((-2.0 * v / k) * (c - s_), 0.0)


def amplitude_sq(spec: RadiationIntegrand, tol: float = 1e-11) -> float:
    return abs(amplitude(spec, tol)) ** 2


def distribution_bruteforce(spec: RadiationIntegrand, tol: float = 1e-11) -> float:
    """``dI/dOmega`` from the trajectory integral, with no special functions."""
    omega, T = spec.point.omega, spec.point.T
    if abs(T) == 1.0:
        return 0.0
    return omega * omega / (16.0 * math.pi ** 3) * (1.0 - T * T) * amplitude_sq(spec, tol)


def energy_bruteforce(params: TrajectoryParams, n_omega: int = 48, n_T: int = 24,
                      tol: float = 1e-9) -> float:
    """Total energy ``int d omega 2 pi int dT dI/dOmega`` from the oracle.

    A fixed Gauss-Legendre product rule (``omega = kappa u / (1 - u)``,
    ``u`` in ``(0, 1)``) keeps the number of trajectory integrals known in
    advance.  At ``v = 0.5`` the default rule is good to about 1e-10; at
    speeds near 1 the spectrum reaches far higher frequencies and the rule
    needs more nodes.
    """
    if params.v_max == 0.0:
        return 0.0
    k = params.kappa
    xu, wu = np.polynomial.legendre.leggauss(n_omega)
    u = 0.5 * (xu + 1.0)
    omegas = k * u / (1.0 - u)
    w_omega = 0.5 * wu * k / (1.0 - u) ** 2
    xt, wt = np.polynomial.legendre.leggauss(n_T)
    total = 0.0
    for om, wo in zip(omegas, w_omega):
        row = sum(w * distribution_bruteforce(RadiationIntegrand.at(params, om, T), tol)
                  for T, w in zip(xt, wt))
        total += wo * row
    return 2.0 * math.pi * total
