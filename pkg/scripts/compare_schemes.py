"""MDE-CH, penalty and fly-hover-fly over a requirement sweep, in 3D and on flat ground.

    python scripts/compare_schemes.py --sweep Qth=40:200:40 --seeds 5 --out results/
"""

import argparse
from dataclasses import replace
from pathlib import Path

from uavplan.cli import COMPARE_COLUMNS, compare_rows, parse_sweep
from uavplan.export import write_table_csv
from uavplan.scenario import load_scenario, scenario_from_dict


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--scenario", type=Path)
    ap.add_argument("--sweep", default="Qth=40:120:40")
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--out", type=Path, default=Path("results"))
    args = ap.parse_args()

    sc = load_scenario(args.scenario) if args.scenario else scenario_from_dict({})
    flat = replace(sc, spec=sc.spec.flattened())
    sweep, seeds = parse_sweep(args.sweep), list(range(args.seeds))
    args.out.mkdir(parents=True, exist_ok=True)
    for tag, scen in (("3d", sc), ("2d", flat)):
        rows = compare_rows(scen, sweep, seeds)
        write_table_csv(args.out / f"comparison_{tag}.csv", COMPARE_COLUMNS, rows)
        for r in rows:
            print(tag, *r)


if __name__ == "__main__":
    main()
