"""Command-line entry point: ``uavplan {optimize,evaluate,compare,export-terrain,scenario}``.

Exit codes: 0 success with a feasible result, 2 input error, 3 run completed
but the result is infeasible.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import export
from .baseline import TerrainConflictError, evaluate_plan, plan_fly_hover_fly
from .evo import EvoConfig, run
from .mission import evaluate
from .scenario import Scenario, ScenarioError, default_document, load_scenario

EXIT_OK, EXIT_INPUT, EXIT_INFEASIBLE = 0, 2, 3
MODES = {"mde-ch": "constrained", "penalty": "penalty"}

log = logging.getLogger("uavplan")


def parse_sweep(text: str | None) -> list[float]:
    """``"Qth=40:200:40"`` (inclusive range) or ``"Qth=40,80"`` -> values in Mbit."""
    if text is None:
        return []
    key, _, body = text.partition("=")
    if key.strip() != "Qth":
        raise ValueError(f"unsupported sweep variable {key!r}; expected Qth")
    body = body.strip()
    if not body:
        return []
    if ":" in body:
        start, stop, step = (float(p) for p in body.split(":"))
        if step <= 0:
            raise ValueError("sweep step must be positive")
        count = int(np.floor((stop - start) / step + 1e-9)) + 1
        return [start + i * step for i in range(max(count, 0))]
    return [float(p) for p in body.split(",")]


def _load(path) -> Scenario:
    if path is None:
        from .scenario import scenario_from_dict

        return scenario_from_dict({})
    return load_scenario(path)


def _manifest(args, out: Path, artifacts: dict | None = None) -> dict:
    m = {
        "scenario": str(args.scenario) if args.scenario else None,
        "scenario_sha256": export.sha256(args.scenario) if args.scenario else None,
        "seed": args.seed,
        "mode": args.mode,
        "out": str(out),
    }
    if artifacts is not None:
        m["artifacts"] = artifacts
    return m


def optimize(scenario: Scenario, seed: int, mode: str, out: Path) -> int:
    """Run one scheme and write trajectory.csv, summary.json, history.csv."""
    spec = scenario.spec
    if mode == "fly-hover-fly":
        try:
            plan = plan_fly_hover_fly(spec, scenario.baseline_order, scenario.cruise_altitude)
        except TerrainConflictError as exc:
            export.write_json(out / "summary.json", {"mode": mode, "feasible": False, "error": str(exc)})
            return EXIT_INFEASIBLE
        ev = evaluate_plan(plan, spec)
        export.write_trajectory_csv(out / "trajectory.csv", plan.sample(spec.n), plan.mission_time, spec)
        export.write_history_csv(out / "history.csv", [])
        summary = ev.summary() | {
            "mode": mode,
            "seed": seed,
            "restarts": 0,
            "order": list(plan.order),
            "hover_times": plan.hover_times.tolist(),
        }
        export.write_json(out / "summary.json", summary)
        return EXIT_OK if ev.feasible else EXIT_INFEASIBLE

    cfg = replace(scenario.evo, seed=seed, mode=MODES[mode])
    res = run(spec, cfg)
    ev = res.evaluation
    export.write_trajectory_csv(out / "trajectory.csv", ev.path.positions, ev.T, spec)
    export.write_history_csv(out / "history.csv", res.history)
    export.write_json(out / "summary.json", ev.summary() | {"mode": mode, "seed": seed, "restarts": res.restarts})
    export.write_json(out / "genome.json", {"genome": res.x_opt.tolist()})
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def cmd_optimize(args) -> int:
    scenario = _load(args.scenario)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export.write_json(out / "manifest.json", _manifest(args, out))
    code = optimize(scenario, args.seed, args.mode, out)
    names = ("trajectory.csv", "summary.json", "history.csv", "genome.json")
    sums = {nm: export.sha256(out / nm) for nm in names if (out / nm).exists()}
    export.write_json(out / "manifest.json", _manifest(args, out, sums))
    return code


def _read_genome(path) -> np.ndarray:
    doc = json.loads(Path(path).read_text())
    if isinstance(doc, dict):
        doc = doc.get("genome")
    if not isinstance(doc, list):
        raise ValueError("genome file must hold a list or {\"genome\": [...]}")
    return np.array(doc, dtype=float)


def cmd_evaluate(args) -> int:
    scenario = _load(args.scenario)
    try:
        g = _read_genome(args.genome)
    except (OSError, ValueError) as exc:
        raise ScenarioError(f"{args.genome}: {exc}") from exc
    spec = scenario.spec
    if g.shape != (spec.D,):
        raise ScenarioError(f"{args.genome}: genome length {g.size}, expected {spec.D}")
    ev = evaluate(g, spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export.write_json(out / "summary.json", ev.summary())
    if args.trajectory:
        export.write_trajectory_csv(out / "trajectory.csv", ev.path.positions, ev.T, spec)
    return EXIT_OK if ev.feasible else EXIT_INFEASIBLE


COMPARE_COLUMNS = ["scheme", "Q_th", "seed", "objective", "feasible", "violation"]


def compare_rows(scenario: Scenario, sweep_mbit, seeds) -> list[list[str]]:
    rows = []
    for q in sweep_mbit:
        spec = scenario.spec.with_requirement(q * 1e6)
        try:
            ev = evaluate_plan(plan_fly_hover_fly(spec, scenario.baseline_order, scenario.cruise_altitude), spec)
            fhf = (export.fmt(ev.objective), str(ev.feasible).lower(), export.fmt(ev.total_violation))
        except TerrainConflictError:
            fhf = ("inf", "false", "inf")
        for seed in seeds:
            for scheme in ("mde-ch", "penalty"):
                cfg = replace(scenario.evo, seed=seed, mode=MODES[scheme])
                res = run(spec, cfg)
                # reported violation: the least violation left in the final population
                viol = res.history[-1].min_violation
                rows.append([scheme, export.fmt(q), str(seed), export.fmt(res.f_opt),
                             str(res.feasible).lower(), export.fmt(viol)])
            rows.append(["fly-hover-fly", export.fmt(q), str(seed), *fhf])
    return rows


def cmd_compare(args) -> int:
    scenario = _load(args.scenario)
    if args.flat:
        scenario = replace(scenario, spec=scenario.spec.flattened())
    try:
        sweep = parse_sweep(args.sweep)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    seeds = [args.seed + i for i in range(args.seeds)]
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    export.write_table_csv(out / "comparison.csv", COMPARE_COLUMNS, compare_rows(scenario, sweep, seeds))
    return EXIT_OK


def cmd_export_terrain(args) -> int:
    scenario = _load(args.scenario)
    if args.grid < 2:
        raise ScenarioError("--grid must be at least 2")
    t = scenario.spec.terrain
    xs = np.linspace(0.0, t.U_x, args.grid)
    ys = np.linspace(0.0, t.U_y, args.grid)
    gx, gy = np.meshgrid(xs, ys)  # row-major: y outer, x inner
    z = t.altitude_batch(gx, gy)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    rows = [[export.fmt(a), export.fmt(b), export.fmt(c)] for a, b, c in zip(gx.ravel(), gy.ravel(), z.ravel())]
    export.write_table_csv(out / "heightmap.csv", ["x", "y", "z"], rows)
    return EXIT_OK


def cmd_scenario(args) -> int:
    text = json.dumps(default_document(), indent=2) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="uavplan", description="Energy-minimal UAV data-collection trajectories.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, out_default):
        sp.add_argument("--scenario", type=Path, default=None, help="scenario JSON (defaults if omitted)")
        sp.add_argument("--out", default=out_default)

    sp = sub.add_parser("optimize", help="plan one trajectory")
    common(sp, "out")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--mode", choices=["mde-ch", "penalty", "fly-hover-fly"], default="mde-ch")
    sp.set_defaults(func=cmd_optimize)

    sp = sub.add_parser("evaluate", help="score a stored genome")
    common(sp, "out")
    sp.add_argument("--genome", type=Path, required=True)
    sp.add_argument("--trajectory", action="store_true", help="also write trajectory.csv")
    sp.set_defaults(func=cmd_evaluate)

    sp = sub.add_parser("compare", help="MDE-CH vs penalty vs fly-hover-fly over a Q_th sweep")
    common(sp, "out")
    sp.add_argument("--sweep", default="Qth=40:120:40", help='e.g. "Qth=40:200:40" (Mbit)')
    sp.add_argument("--seeds", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0, help="first seed")
    sp.add_argument("--flat", action="store_true", help="zero terrain (2D variant)")
    sp.set_defaults(func=cmd_compare)

    sp = sub.add_parser("export-terrain", help="write the heightmap on a regular grid")
    common(sp, "out")
    sp.add_argument("--grid", type=int, default=81)
    sp.set_defaults(func=cmd_export_terrain)

    sp = sub.add_parser("scenario", help="write the default scenario document")
    sp.add_argument("--out", default="-")
    sp.set_defaults(func=cmd_scenario)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
