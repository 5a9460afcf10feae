"""Command-line driver: parameter sweeps written as CSV or JSON tables.

Every command produces one table.  CSV files start with a comment line
``# mirror-radiance v<version> cmd=<command> params=<json>`` followed by the
column header and the rows; JSON files carry the same information and
validate against ``data/output.schema.json``.

Exit status: 0 on success, 1 if a ``verify`` check fails, 2 for an invalid
configuration, 3 when a numerical routine does not converge.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .correspondence import verify_identity
from .errors import ConvergenceError, DomainError
from .pitcher import ProjectileParams, closed_form_state, hyperbola_residual, integrate_eom
from .spectra import (
    beta_sq,
    energy_from_modes,
    energy_spectrum,
    particle_count_classical,
    particle_count_modes,
    particle_spectrum,
    spectral_distribution,
)
from .trajectories import Kind, TrajectoryParams, feynman_power, larmor_power, total_energy_numeric

TOOL = "mirror-radiance"
COMMANDS = ("power", "energy", "beta", "spectrum", "distribution", "particles", "verify", "pitcher")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    trajectory: str = "both"
    v: tuple[float, ...] = (0.9,)
    kappa: float = 1.0
    t_range: tuple[float, float] = (-5.0, 5.0)
    omega_range: tuple[float, float] = (0.05, 10.0)
    p_range: tuple[float, float] = (0.05, 5.0)
    q_range: tuple[float, float] = (0.05, 5.0)
    omega: tuple[float, ...] = (1.0,)
    n: int = 201
    n_theta: int = 37
    n_phi: int = 73
    alpha_y: float = 1.0
    t_end: float | None = None
    totals: bool = False
    tol: float = 1e-9
    out: str | None = None
    format: str = "csv"
    jobs: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.trajectory != "both":
            try:
                Kind.parse(self.trajectory)
            except ValueError:
                raise ConfigError(f"unknown trajectory {self.trajectory!r}") from None
        if not self.v:
            raise ConfigError("need at least one speed")
        for v in self.v:
            if not 0.0 <= v < 1.0:
                raise ConfigError(f"speeds must lie in [0, 1), got {v}")
        if not (self.kappa > 0 and math.isfinite(self.kappa)):
            raise ConfigError("kappa must be positive and finite")
        for name in ("t_range", "omega_range", "p_range", "q_range"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ConfigError(f"{name} must be ordered, got {lo} {hi}")
        for name in ("omega_range", "p_range", "q_range"):
            if getattr(self, name)[0] <= 0:
                raise ConfigError(f"{name} must be positive")
        if any(w <= 0 for w in self.omega):
            raise ConfigError("omega must be positive")
        for name in ("n", "n_theta", "n_phi"):
            if getattr(self, name) < 2:
                raise ConfigError(f"{name} must be at least 2")
        if not 0.0 < self.tol < 1.0:
            raise ConfigError("tol must lie in (0, 1)")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if self.jobs < 1:
            raise ConfigError("jobs must be at least 1")
        if not (self.alpha_y > 0 and math.isfinite(self.alpha_y)):
            raise ConfigError("alpha_y must be positive and finite")
        if self.t_end is not None and not (self.t_end > 0 and math.isfinite(self.t_end)):
            raise ConfigError("t_end must be positive and finite")
        if self.command == "pitcher" and not all(0.0 < v < 1.0 for v in self.v):
            raise ConfigError("pitcher needs 0 < v < 1")

    def kinds(self) -> list[Kind]:
        if self.trajectory == "both":
            return [Kind.SELF_DUAL, Kind.BETA_K]
        return [Kind.parse(self.trajectory)]

    def params(self) -> dict:
        """Everything that affects the numbers, for the output header."""
        d = dataclasses.asdict(self)
        for key in ("out", "format", "jobs"):
            d.pop(key)
        return d


# per-command defaults that differ from the dataclass ones
_COMMAND_DEFAULTS = {
    "distribution": {"v": (0.95,)},
    "energy": {"v": (0.9,)},
}


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    checks: list[dict] | None = None

    @property
    def passed(self) -> bool:
        return self.checks is None or all(c["passed"] for c in self.checks)


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    # results come back in input order regardless of completion order
    if jobs == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _grid(lo, hi, n):
    return np.linspace(lo, hi, n)


def _tp(kind, v, cfg):
    return TrajectoryParams(kind, v, cfg.kappa)


def cmd_power(cfg: RunConfig) -> Table:
    t = _grid(*cfg.t_range, cfg.n)
    table = Table(["trajectory", "v", "t", "P_L", "P_F"])
    for kind in cfg.kinds():
        for v in cfg.v:
            p = _tp(kind, v, cfg)
            for row in zip(t, larmor_power(p, t), feynman_power(p, t)):
                table.rows.append([kind.value, v, *map(float, row)])
    return table


def _energy_row(args):
    kind, v, kappa, tol = args
    b = total_energy_numeric(TrajectoryParams(kind, v, kappa), rtol=min(tol, 1e-11))
    return [kind.value, v, b.e_closed, b.e_larmor, b.e_feynman]


def cmd_energy(cfg: RunConfig) -> Table:
    items = [(k, v, cfg.kappa, cfg.tol) for k in cfg.kinds() for v in cfg.v]
    return Table(["trajectory", "v", "E_closed", "E_larmor", "E_feynman"], _map(_energy_row, items, cfg.jobs))


def cmd_beta(cfg: RunConfig) -> Table:
    p = _grid(*cfg.p_range, cfg.n)
    q = _grid(*cfg.q_range, cfg.n)
    P, Q = np.meshgrid(p, q, indexing="ij")
    table = Table(["trajectory", "v", "p", "q", "beta_sq"])
    for kind in cfg.kinds():
        for v in cfg.v:
            b = np.atleast_2d(beta_sq(_tp(kind, v, cfg), P, Q))
            for pi, qi, bi in zip(P.ravel(), Q.ravel(), b.ravel()):
                table.rows.append([kind.value, v, float(pi), float(qi), float(bi)])
    return table


def _spectrum_row(args):
    kind, v, kappa, w, tol = args
    return [kind.value, v, w, energy_spectrum(TrajectoryParams(kind, v, kappa), w, rtol=tol)]


def cmd_spectrum(cfg: RunConfig) -> Table:
    w = _grid(*cfg.omega_range, cfg.n)
    items = [(k, v, cfg.kappa, float(x), cfg.tol) for k in cfg.kinds() for v in cfg.v for x in w]
    return Table(["trajectory", "v", "omega", "I"], _map(_spectrum_row, items, cfg.jobs))


def cmd_distribution(cfg: RunConfig) -> Table:
    # radiation pattern as a surface: radius dI/dOmega along each direction,
    # with the line of motion as the x axis
    theta = _grid(0.0, math.pi, cfg.n_theta)
    phi = _grid(0.0, 2.0 * math.pi, cfg.n_phi)
    TH, PH = np.meshgrid(theta, phi, indexing="ij")
    T = np.clip(np.cos(TH), -1.0, 1.0)
    table = Table(["trajectory", "v", "omega", "theta", "phi", "T", "r", "x", "y", "z"])
    for kind in cfg.kinds():
        for v in cfg.v:
            for w in cfg.omega:
                r = spectral_distribution(_tp(kind, v, cfg), np.full(T.shape, w), T)
                x = r * np.cos(TH)
                y = r * np.sin(TH) * np.cos(PH)
                z = r * np.sin(TH) * np.sin(PH)
                for cols in zip(TH.ravel(), PH.ravel(), T.ravel(), r.ravel(), x.ravel(), y.ravel(), z.ravel()):
                    table.rows.append([kind.value, v, w, *map(float, cols)])
    return table


def _np_row(args):
    kind, v, kappa, p, tol = args
    return [kind.value, v, p, particle_spectrum(TrajectoryParams(kind, v, kappa), p, rtol=tol)]


def _total_row(args):
    kind, v, kappa, tol = args
    tp = TrajectoryParams(kind, v, kappa)
    rtol = max(tol, 1e-8)
    nc = particle_count_classical(tp, rtol)
    nm = particle_count_modes(tp, rtol)
    return [kind.value, v, nc, nm]


def cmd_particles(cfg: RunConfig) -> Table:
    if cfg.totals:
        items = [(k, v, cfg.kappa, cfg.tol) for k in cfg.kinds() for v in cfg.v]
        return Table(["trajectory", "v", "N_classical", "N_modes"], _map(_total_row, items, cfg.jobs))
    p = _grid(*cfg.p_range, cfg.n)
    items = [(k, v, cfg.kappa, float(x), cfg.tol) for k in cfg.kinds() for v in cfg.v for x in p]
    return Table(["trajectory", "v", "p", "N_p"], _map(_np_row, items, cfg.jobs))


def _check(name, label, v, value, threshold):
    return {"check": name, "trajectory": label, "v": v, "value": float(value),
            "threshold": threshold, "passed": bool(value <= threshold)}


def cmd_verify(cfg: RunConfig) -> Table:
    checks = []
    W, T = np.meshgrid(np.linspace(0.1, 10.0, 20), np.linspace(-0.95, 0.95, 20))
    for kind in cfg.kinds():
        for v in cfg.v:
            tp = _tp(kind, v, cfg)
            b = total_energy_numeric(tp)
            label = kind.value
            checks.append(_check("energy_triple_spread", label, v, b.max_relative_spread(), 1e-6))
            checks.append(_check("identity_residual_max", label, v, float(np.max(verify_identity(tp, W, T))), 1e-12))
            f = spectral_distribution(tp, W, T)
            odd = float(np.max(np.abs(f - spectral_distribution(tp, W, -T)) / np.maximum(f, 1e-300)))
            checks.append(_check("distribution_parity", label, v, odd, 1e-12))
            if v > 0:
                em = energy_from_modes(tp, rtol=1e-6)
                checks.append(_check("mode_energy_rel_err", label, v, abs(em - b.e_closed) / b.e_closed, 1e-3))
    table = Table(["check", "trajectory", "v", "value", "threshold", "passed"], checks=checks)
    table.rows = [[c["check"], c["trajectory"], c["v"], c["value"], c["threshold"], int(c["passed"])] for c in checks]
    return table


def cmd_pitcher(cfg: RunConfig) -> Table:
    table = Table(["v0", "t", "x", "y", "v_x", "v_y", "gamma", "x_closed", "y_closed", "gamma_v_x"],
                  checks=[])
    for v0 in cfg.v:
        pp = ProjectileParams(v0, cfg.alpha_y)
        t_end = cfg.t_end if cfg.t_end is not None else 20.0 / pp.kappa
        t = np.linspace(0.0, t_end, cfg.n)
        num = integrate_eom(pp, t_end, step_tol=min(cfg.tol, 1e-13), t_eval=t)
        ref = closed_form_state(pp, t)
        for i in range(t.size):
            table.rows.append([v0, float(t[i]), float(num.x[i]), float(num.y[i]), float(num.v_x[i]),
                               float(num.v_y[i]), float(num.gamma[i]), float(ref.x[i]), float(ref.y[i]),
                               float(num.gamma[i] * num.v_x[i])])
        scale = 1.0 + np.abs(ref.x) + np.abs(ref.y)
        pos_err = np.max((np.abs(num.x - ref.x) + np.abs(num.y - ref.y)) / scale)
        drift = np.max(np.abs(num.gamma * num.v_x - pp.gamma0 * v0))
        table.checks += [
            _check("position_error_max", "pitcher", v0, pos_err, 1e-8),
            _check("gamma_v_x_drift", "pitcher", v0, drift, 1e-10),
            _check("hyperbola_residual_max", "pitcher", v0, np.max(np.abs(hyperbola_residual(pp, ref))), 1e-12),
        ]
    return table


HANDLERS = {
    "power": cmd_power,
    "energy": cmd_energy,
    "beta": cmd_beta,
    "spectrum": cmd_spectrum,
    "distribution": cmd_distribution,
    "particles": cmd_particles,
    "verify": cmd_verify,
    "pitcher": cmd_pitcher,
}


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _params_json(cfg: RunConfig) -> str:
    return json.dumps(cfg.params(), sort_keys=True, separators=(",", ":"))


def render(cfg: RunConfig, table: Table) -> str:
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write(f"# {TOOL} v{__version__} cmd={cfg.command} params={_params_json(cfg)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_fmt(x) for x in row])
        return buf.getvalue()
    doc = {
        "tool": TOOL,
        "version": __version__,
        "command": cfg.command,
        "params": cfg.params(),
        "columns": table.columns,
        "rows": [[float(x) if isinstance(x, (float, np.floating)) else x for x in row] for row in table.rows],
    }
    if table.checks is not None:
        doc["checks"] = table.checks
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def run(cfg: RunConfig) -> int:
    table = HANDLERS[cfg.command](cfg)
    text = render(cfg, table)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if table.checks is not None:
        for c in table.checks:
            status = "PASS" if c["passed"] else "FAIL"
            print(f"{status} {c['check']} {c['trajectory']} v={c['v']}: {c['value']:.3e} "
                  f"(threshold {c['threshold']:.0e})", file=sys.stderr)
    return EXIT_OK if table.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog=TOOL, description="Radiation from asymptotically static "
                                     "worldlines and the matching moving-mirror particle spectra.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS
    helps = {
        "power": "Larmor and Feynman power against time",
        "energy": "total radiated energy, closed form and both time integrals",
        "beta": "|beta_pq|^2 on a (p, q) grid",
        "spectrum": "energy spectrum I(omega)",
        "distribution": "dI/dOmega as a surface over (theta, phi)",
        "particles": "particle spectrum N_p, or total counts with --totals",
        "verify": "consistency checks; exit 1 if any fails",
        "pitcher": "projectile under constant vertical force, integrated and closed form",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name], argument_default=S)
        p.add_argument("--config", help="JSON file of parameters; flags given here override it")
        p.add_argument("--trajectory", choices=["self-dual", "betak", "both"])
        p.add_argument("--v", type=float, nargs="+", help="peak speed(s)")
        p.add_argument("--kappa", type=float)
        p.add_argument("--tol", type=float)
        p.add_argument("--out")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--jobs", type=int)
        p.add_argument("--n", type=int, help="grid points per axis")
        if name == "power":
            p.add_argument("--t-range", type=float, nargs=2, dest="t_range")
        if name == "spectrum":
            p.add_argument("--omega-range", type=float, nargs=2, dest="omega_range")
        if name in ("beta", "particles"):
            p.add_argument("--p-range", type=float, nargs=2, dest="p_range")
        if name == "beta":
            p.add_argument("--q-range", type=float, nargs=2, dest="q_range")
        if name == "particles":
            p.add_argument("--totals", action="store_true")
        if name == "distribution":
            p.add_argument("--omega", type=float, nargs="+")
            p.add_argument("--n-theta", type=int, dest="n_theta")
            p.add_argument("--n-phi", type=int, dest="n_phi")
        if name == "pitcher":
            p.add_argument("--alpha-y", type=float, dest="alpha_y")
            p.add_argument("--t-end", type=float, dest="t_end")
    return parser


_TUPLE_FIELDS = {"v", "t_range", "omega_range", "p_range", "q_range", "omega"}


def config_from_args(argv: Sequence[str] | None = None) -> RunConfig:
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    merged: dict = dict(_COMMAND_DEFAULTS.get(command, {}))
    path = args.pop("config", None)
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                file_cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(file_cfg, dict):
            raise ConfigError("config file must hold a JSON object")
        file_cfg = {k.replace("-", "_"): val for k, val in file_cfg.items()}
        file_cfg.pop("command", None)
        merged.update(file_cfg)
    merged.update(args)
    known = {f.name for f in dataclasses.fields(RunConfig)}
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    try:
        for key in _TUPLE_FIELDS & set(merged):
            val = merged[key]
            merged[key] = tuple(float(x) for x in (val if isinstance(val, (list, tuple)) else [val]))
        return RunConfig(command=command, **merged)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def main(argv: Sequence[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        print(f"{TOOL}: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return run(cfg)
    except ConvergenceError as exc:
        print(f"{TOOL}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"{TOOL}: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
