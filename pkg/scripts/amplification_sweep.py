"""Final objective and feasibility versus the mutation amplification factor.

    python scripts/amplification_sweep.py --values 0.1,0.3,0.5,0.8 --seeds 5
"""

import argparse
import csv
import statistics
from pathlib import Path

from uavplan import EvoConfig, default_spec, run
from uavplan.export import fmt


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--values", default="0.1,0.3,0.5,0.8")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--generations", type=int, default=2000)
    ap.add_argument("--qth", type=float, default=40.0)
    ap.add_argument("--flat", action="store_true")
    ap.add_argument("--out", type=Path, default=Path("results/amplification.csv"))
    args = ap.parse_args()

    spec = default_spec(args.qth * 1e6)
    spec = spec.flattened() if args.flat else spec
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["amplification", "seed", "objective", "feasible", "T"])
        for lam in (float(v) for v in args.values.split(",")):
            objs = []
            for seed in range(args.seeds):
                res = run(spec, EvoConfig(generations=args.generations, amplification=lam, seed=seed))
                w.writerow([fmt(lam), seed, fmt(res.f_opt), str(res.feasible).lower(), fmt(res.x_opt[-1])])
                objs.append(res.f_opt)
            print(f"lambda={lam}: median objective {statistics.median(objs):.0f} J")


if __name__ == "__main__":
    main()
