"""Fit a free-temperature Planck form to N_p and report the RMS relative deviation."""

import argparse

import numpy as np

from mirror_radiance.spectra import particle_spectrum, planck_fit
from mirror_radiance.trajectories import Kind, TrajectoryParams


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--v", type=float, nargs="+", default=[0.5, 0.9])
    ap.add_argument("--p-range", type=float, nargs=2, default=(0.1, 4.0))
    ap.add_argument("--n", type=int, default=16)
    ns = ap.parse_args()
    p = np.linspace(*ns.p_range, ns.n)
    print(f"{'trajectory':10s} {'v':>5s} {'Theta':>10s} {'rms_dev':>8s}")
    for kind in Kind:
        for v in ns.v:
            tp = TrajectoryParams(kind, v)
            n_p = np.array([particle_spectrum(tp, x) for x in p])
            fit = planck_fit(p, n_p)
            print(f"{kind.value:10s} {v:5.2f} {fit.temperature:10.4g} {fit.rms_relative_deviation:8.1%}")


if __name__ == "__main__":
    main()
