"""Collected data and flight energy of one genome at increasing sample counts.

    python scripts/discretisation.py --seed 0 --samples 50,100,200,400,800
"""

import argparse

import numpy as np

from uavplan import EvoConfig, default_spec, evaluate, run


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--generations", type=int, default=2000)
    ap.add_argument("--samples", default="50,100,200,400,800,1600")
    args = ap.parse_args()

    spec = default_spec()
    g = run(spec, EvoConfig(generations=args.generations, seed=args.seed)).x_opt
    print(f"T = {g[-1]:.2f} s")
    print("n, E_fly [J], Q per node [Mbit], feasible")
    for n in (int(v) for v in args.samples.split(",")):
        ev = evaluate(g, spec, n=n)
        q = np.array2string(ev.collected / 1e6, precision=3)
        print(f"{n:5d}, {ev.flight_energy:.2f}, {q}, {ev.feasible}")


if __name__ == "__main__":
    main()
