"""CSV / JSON artifact writers."""

from __future__ import annotations

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .comms import rates_batch
from .geometry import finite_differences
from .mission import MissionSpec


def fmt(x) -> str:
    return format(float(x), ".17g")


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def trajectory_rows(positions: np.ndarray, T: float, spec: MissionSpec) -> tuple[list[str], list[list[str]]]:
    """Sampled positions with forward-difference kinematics and per-node link state.

    Velocity is undefined on the last row and acceleration on the last two;
    those cells are left empty.
    """
    n = positions.shape[0]
    vel, speed, acc = finite_differences(positions, T)
    rates = rates_batch(positions, spec.node_positions, spec.channel)
    active = rates >= spec.R_th[:, None]
    K = spec.K
    header = ["t", "x", "y", "z", "vx", "vy", "vz", "speed", "ax", "ay", "az"]
    header += [f"rate_{k + 1}" for k in range(K)] + [f"active_{k + 1}" for k in range(K)]
    rows = []
    for i in range(n):
        row = [fmt(T * i / (n - 1))] + [fmt(c) for c in positions[i]]
        row += [fmt(c) for c in vel[i]] + [fmt(speed[i])] if i < n - 1 else [""] * 4
        row += [fmt(c) for c in acc[i]] if i < n - 2 else [""] * 3
        row += [fmt(rates[k, i]) for k in range(K)] + [str(int(active[k, i])) for k in range(K)]
        rows.append(row)
    return header, rows


def write_trajectory_csv(path, positions: np.ndarray, T: float, spec: MissionSpec) -> None:
    header, rows = trajectory_rows(positions, T, spec)
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(header)
        w.writerows(rows)


HISTORY_COLUMNS = ["generation", "best_feasible_objective", "min_violation", "feasible_count"]


def write_history_csv(path, history) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(HISTORY_COLUMNS)
        for h in history:
            w.writerow([h.generation, fmt(h.best_feasible_objective), fmt(h.min_violation), h.feasible_count])


def write_table_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(header)
        w.writerows(rows)


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()
