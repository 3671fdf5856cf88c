"""Best-feasible objective and minimum violation per generation, several seeds.

    python scripts/convergence.py --seeds 10 --generations 2000 --out results/convergence.csv
"""

import argparse
import csv
from dataclasses import replace
from pathlib import Path

from uavplan import EvoConfig, default_spec, run
from uavplan.export import fmt


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seeds", type=int, default=10)
    ap.add_argument("--generations", type=int, default=2000)
    ap.add_argument("--qth", type=float, default=40.0, help="per-node requirement, Mbit")
    ap.add_argument("--mode", choices=["constrained", "penalty"], default="constrained")
    ap.add_argument("--out", type=Path, default=Path("results/convergence.csv"))
    args = ap.parse_args()

    spec = default_spec(args.qth * 1e6)
    base = EvoConfig(generations=args.generations, mode=args.mode)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["seed", "attempt", "generation", "best_feasible_objective", "min_violation", "feasible_count"])
        for seed in range(args.seeds):
            res = run(spec, replace(base, seed=seed))
            for h in res.history:
                w.writerow([seed, h.attempt, h.generation, fmt(h.best_feasible_objective),
                            fmt(h.min_violation), h.feasible_count])
            print(f"seed {seed}: feasible={res.feasible} objective={res.f_opt:.1f} J restarts={res.restarts}")


if __name__ == "__main__":
    main()
