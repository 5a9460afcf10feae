"""Write the plotted datasets as CSV files, one per panel.

    python3 scripts/write_datasets.py --out datasets/ --jobs 4
"""

import argparse
import sys
import time
from pathlib import Path

from mirror_radiance.cli import main as cli

DATASETS = {
    "power_self_dual": ["power", "--trajectory", "self-dual", "--v", "0.9", "--t-range", "-4", "4", "--n", "801"],
    "power_betak": ["power", "--trajectory", "betak", "--v", "0.9", "--t-range", "-4", "4", "--n", "801"],
    "energy_vs_speed": ["energy", "--v", *[f"{0.01 * k:.2f}" for k in range(1, 100, 7)]],
    "particle_spectrum": ["particles", "--v", "0.9", "--p-range", "0.01", "5", "--n", "60"],
    "energy_spectrum": ["spectrum", "--v", "0.9", "--omega-range", "0.05", "10", "--n", "60"],
    "angular_distribution": ["distribution", "--v", "0.95", "--omega", "1", "--n-theta", "37", "--n-phi", "73"],
    "beta_grid": ["beta", "--v", "0.9", "--n", "41"],
    "pitcher": ["pitcher", "--v", "0.9", "--n", "201"],
}


def run(out: Path, jobs: int, only: list[str]) -> int:
    out.mkdir(parents=True, exist_ok=True)
    worst = 0
    for name, args in DATASETS.items():
        if only and name not in only:
            continue
        t0 = time.perf_counter()
        code = cli([*args, "--jobs", str(jobs), "--out", str(out / f"{name}.csv")])
        print(f"{name:24s} exit {code}  {time.perf_counter() - t0:6.1f} s")
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=Path("datasets"))
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("only", nargs="*", help="subset of datasets, default all")
    ns = ap.parse_args()
    unknown = set(ns.only) - set(DATASETS)
    if unknown:
        ap.error(f"unknown dataset(s): {', '.join(sorted(unknown))}")
    sys.exit(run(ns.out, ns.jobs, ns.only))
