"""Adaptive one- and two-dimensional quadrature.

All integrands are vectorised: they receive a 1-D ``numpy`` array of
abscissae and return an array of the same shape.  The basic rule is the
15-point Gauss-Kronrod pair (7-point Gauss embedded), applied with global
adaptive bisection.  Infinite endpoints are removed by rational maps.

``integrate_oscillatory`` handles conditionally convergent Fourier-type
integrals ``int_0^inf g(s) sin(r s) ds`` (or cos) by summing half-period
panels and extrapolating the alternating partial sums with repeated
averaging (the Euler / van Wijngaarden transform).
"""

from __future__ import annotations

import enum
import heapq
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureResult",
    "Oscillator",
    "OscillatorySpec",
    "integrate",
    "integrate_oscillatory",
    "integrate_2d",
    "gauss_kronrod_15",
]

# QUADPACK qk15 abscissae and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:7], [0.0], _XGK[:7][::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:7], [_WGK[7]], _WGK[:7][::-1]])
GAUSS_WEIGHTS = np.zeros(15)
# Gauss nodes are the odd-indexed Kronrod nodes: +-xgk[1], +-xgk[3], +-xgk[5], 0.
for _i, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[_i] = _w
    GAUSS_WEIGHTS[14 - _i] = _w
GAUSS_WEIGHTS[7] = _WG[3]

_EPS = np.finfo(float).eps
Integrand = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_err: float
    evals: int
    converged: bool

    def __float__(self):
        return float(self.value)


def gauss_kronrod_15(f: Integrand, a, b):
    """Apply the G7/K15 pair to each interval ``[a_i, b_i]``.

    Returns ``(kronrod, gauss, resabs)`` arrays; ``resabs`` is the Kronrod
    estimate of the integral of ``|f|`` and feeds the round-off floor of the
    error estimate.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    x = c[:, None] + h[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    kron = h * (fx @ KRONROD_WEIGHTS)
    gauss = h * (fx @ GAUSS_WEIGHTS)
    resabs = np.abs(h) * (np.abs(fx) @ KRONROD_WEIGHTS)
    return kron, gauss, resabs


def _interval_error(kron, gauss, resabs):
    err = np.abs(kron - gauss)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    return np.where(np.isfinite(kron), err, np.inf)


def _mapped(f: Integrand, a: float, b: float):
    """Return ``(g, lo, hi, to_s)`` with ``int_a^b f = int_lo^hi g``."""
    if math.isinf(a) and math.isinf(b):
        def g(s):
            d = 1.0 - s * s
            return f(s / d) * (1.0 + s * s) / (d * d)

        def to_s(x):
            return 2.0 * x / (1.0 + math.sqrt(1.0 + 4.0 * x * x))
        return g, -1.0, 1.0, to_s
    if math.isinf(b):
        def g(s):
            d = 1.0 - s
            return f(a + s / d) / (d * d)

        def to_s(x):
            return (x - a) / (1.0 + x - a)
        return g, 0.0, 1.0, to_s
    if math.isinf(a):
        def g(s):
            d = 1.0 - s
            return f(b - s / d) / (d * d)

        def to_s(x):
            return (b - x) / (1.0 + b - x)
        return g, 0.0, 1.0, to_s
    return f, a, b, lambda x: x


def integrate(
    f: Integrand,
    a: float,
    b: float,
    tol: float = 1e-10,
    rtol: float = 0.0,
    *,
    points: Sequence[float] = (),
    max_evals: int = 1_000_000,
) -> QuadratureResult:
    """Globally adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    Either endpoint may be infinite.  Convergence means the summed interval
    error estimates fall below ``max(tol, rtol * |value|)``.  Running out of
    evaluations is not an error: the best estimate is returned with
    ``converged=False``.
    """
    if tol < 0 or rtol < 0 or (tol == 0 and rtol == 0):
        raise DomainError("need a positive absolute or relative tolerance")
    a = float(a)
    b = float(b)
    if math.isnan(a) or math.isnan(b):
        raise DomainError("integration limits must not be NaN")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0, True)
    sign = 1.0
    if a > b:
        a, b, sign = b, a, -1.0

    g, lo, hi, to_s = _mapped(f, a, b)
    cuts = sorted({to_s(float(p)) for p in points if a < p < b})
    edges = np.array([lo, *cuts, hi])

    kron, gauss, resabs = gauss_kronrod_15(g, edges[:-1], edges[1:])
    err = _interval_error(kron, gauss, resabs)
    evals = 15 * len(kron)
    # heap of (-err, index) over live intervals; parallel lists hold the data
    ivals = list(zip(edges[:-1].tolist(), edges[1:].tolist(), kron.tolist(), err.tolist()))
    heap = [(-e, i) for i, (_, _, _, e) in enumerate(ivals)]
    heapq.heapify(heap)
    frozen_val = []
    frozen_err = []

    def totals():
        vals = [ivals[i][2] for _, i in heap] + frozen_val
        errs = [ivals[i][3] for _, i in heap] + frozen_err
        return math.fsum(vals), math.fsum(errs)

    total, total_err = totals()
    while True:
        target = max(tol, rtol * abs(total))
        if total_err <= target or not heap or evals >= max_evals:
            break
        n_live = len(heap) + len(frozen_val)
        thresh = target / n_live
        picked = []
        while heap and len(picked) < 128:
            negerr, i = heap[0]
            if picked and -negerr <= thresh:
                break
            heapq.heappop(heap)
            lo_i, hi_i, val_i, err_i = ivals[i]
            mid = 0.5 * (lo_i + hi_i)
            if not (lo_i < mid < hi_i) or (hi_i - lo_i) < 1e3 * _EPS * max(abs(mid), 1e-300):
                frozen_val.append(val_i)
                frozen_err.append(err_i)
                continue
            picked.append(i)
        if not picked:
            continue
        los = np.array([ivals[i][0] for i in picked])
        his = np.array([ivals[i][1] for i in picked])
        mids = 0.5 * (los + his)
        k2, g2, r2 = gauss_kronrod_15(g, np.concatenate([los, mids]), np.concatenate([mids, his]))
        e2 = _interval_error(k2, g2, r2)
        evals += 15 * len(k2)
        n = len(picked)
        for j in range(n):
            for lo_j, hi_j, idx in ((los[j], mids[j], j), (mids[j], his[j], j + n)):
                ivals.append((float(lo_j), float(hi_j), float(k2[idx]), float(e2[idx])))
                heapq.heappush(heap, (-float(e2[idx]), len(ivals) - 1))
        total, total_err = totals()

    target = max(tol, rtol * abs(total))
    converged = bool(np.isfinite(total) and total_err <= target)
    return QuadratureResult(sign * total, total_err, evals, converged)


class Oscillator(enum.Enum):
    SINE = "sin"
    COSINE = "cos"


@dataclass(frozen=True)
class OscillatorySpec:
    """``int_0^inf envelope(s) * osc(phase_rate * s) ds``."""

    envelope: Integrand
    phase_rate: float
    kind: Oscillator = Oscillator.SINE

    def __post_init__(self):
        if not self.phase_rate > 0:
            raise DomainError("phase_rate must be positive")
        object.__setattr__(self, "kind", Oscillator(self.kind))


def _euler_average(partial: np.ndarray, depth: int) -> float:
    """Repeatedly average the last ``depth`` partial sums."""
    s = np.array(partial[-depth:], dtype=float)
    while s.size > 1:
        s = 0.5 * (s[:-1] + s[1:])
    return float(s[0])


def integrate_oscillatory(
    spec: OscillatorySpec,
    tol: float = 1e-10,
    rtol: float = 0.0,
    *,
    min_panels: int = 32,
    max_panels: int = 1 << 15,
    depth: int = 24,
) -> QuadratureResult:
    """Evaluate ``int_0^inf envelope(s) osc(r s) ds`` for a slowly decaying envelope.

    The half-line is cut at the zeros of the oscillator.  Every panel gets a
    K15 rule; panels whose Gauss-Kronrod disagreement is too large are redone
    with :func:`integrate`.  The alternating sequence of partial sums is then
    accelerated by ``depth`` rounds of neighbour averaging.  The panel count
    doubles until two consecutive accelerated estimates agree.
    """
    r = float(spec.phase_rate)
    half = math.pi / r
    sine = spec.kind is Oscillator.SINE
    osc = np.sin if sine else np.cos

    def integrand(s):
        return spec.envelope(s) * osc(r * s)

    def panel_edges(k0, k1):
        # edges k0..k1 inclusive; cosine zeros sit at (j - 1/2) * half
        j = np.arange(k0, k1 + 1, dtype=float)
        if sine:
            return j * half
        return np.where(j == 0, 0.0, (j - 0.5) * half)

    panels: list[float] = []
    evals = 0
    panel_err = 0.0
    n = min_panels
    prev = None
    est = math.nan
    err = math.inf
    while True:
        z = panel_edges(len(panels), n)
        kron, gauss, resabs = gauss_kronrod_15(integrand, z[:-1], z[1:])
        evals += 15 * len(kron)
        perr = _interval_error(kron, gauss, resabs)
        # a panel target below the rounding floor of its own rule cannot be met
        floor = 100.0 * _EPS * resabs
        panel_tol = np.maximum(max(tol, 1e-300) * 1e-2, floor)
        for j in np.nonzero(perr > panel_tol)[0]:
            res = integrate(integrand, z[j], z[j + 1], tol=panel_tol[j], rtol=1e-14,
                            max_evals=50_000)
            kron[j] = res.value
            perr[j] = res.abs_err
            evals += res.evals
        panels.extend(kron.tolist())
        panel_err += float(np.sum(perr))
        partial = np.cumsum(panels)
        d = min(depth, len(partial) - 1)
        est = _euler_average(partial, d)
        est_shift = _euler_average(partial[:-1], d)
        err = abs(est - est_shift) + panel_err
        if prev is not None:
            err = max(err, abs(est - prev))
        target = max(tol, rtol * abs(est))
        if (prev is not None and err <= target) or n >= max_panels or not math.isfinite(est):
            break
        prev = est
        n *= 2
    converged = bool(math.isfinite(est) and err <= max(tol, rtol * abs(est)))
    return QuadratureResult(est, err, evals, converged)


def integrate_2d(
    f: Callable[[float, np.ndarray], np.ndarray],
    omega_range: tuple[float, float],
    T_range: tuple[float, float] = (-1.0, 1.0),
    tol: float = 0.0,
    rtol: float = 1e-8,
    *,
    azimuthal: bool = False,
    omega_points: Sequence[float] = (),
    T_points: Sequence[float] = (),
    max_evals: int = 1_000_000,
) -> QuadratureResult:
    """Nested quadrature ``int d omega int dT f(omega, T)``.

    ``f(omega, T)`` takes a scalar ``omega`` and an array of ``T``.  The outer
    upper limit may be ``inf``.  ``azimuthal=True`` multiplies by ``2 pi`` for
    integrands that do not depend on the azimuth.
    """
    inner_rtol = max(rtol * 1e-2, 1e-13)
    inner_errs = [0.0]
    inner_evals = [0]
    failed = []

    def outer(ws):
        out = np.empty_like(ws)
        for i, w in enumerate(ws):
            res = integrate(lambda T: f(float(w), T), T_range[0], T_range[1],
                            tol=max(tol, 1e-300) * 1e-2, rtol=inner_rtol,
                            points=T_points, max_evals=max_evals)
            out[i] = res.value
            inner_evals[0] += res.evals
            if not res.converged:
                failed.append(float(w))
            if res.value:
                inner_errs[0] = max(inner_errs[0], res.abs_err / abs(res.value))
        return out

    res = integrate(outer, omega_range[0], omega_range[1], tol=tol, rtol=rtol,
                    points=omega_points, max_evals=max_evals)
    scale = 2.0 * math.pi if azimuthal else 1.0
    value = scale * res.value
    abs_err = scale * res.abs_err + inner_errs[0] * abs(value)
    converged = res.converged and not failed
    out = QuadratureResult(value, abs_err, res.evals + inner_evals[0], converged)
    return out


def require_converged(res: QuadratureResult, what: str) -> QuadratureResult:
    if not res.converged:
        raise ConvergenceError(
            f"{what}: quadrature did not converge (value={res.value!r}, abs_err={res.abs_err!r})",
            res,
        )
    return res
