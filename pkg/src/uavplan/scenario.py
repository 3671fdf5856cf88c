"""Scenario files: JSON with sections terrain, nodes, uav, channel, mission, evo.

Every key is optional; anything missing takes the reference-scenario value.
Unknown keys are rejected.
"""

from __future__ import annotations

import copy
import json
from dataclasses import dataclass, fields
from pathlib import Path

import jsonschema

from .comms import ChannelParams, GroundNode
from .energy import UavParams
from .evo import EvoConfig
from .mission import MissionSpec
from .terrain import GaussianBump, TerrainMap


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario document."""


_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_point = {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}


def _obj(props: dict, required=()) -> dict:
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


SCHEMA = _obj({
    "terrain": _obj({
        "bounds": _obj({"U_x": _pos, "U_y": _pos, "U_z": _pos}),
        "bumps": {"type": "array", "items": _obj(
            {"A": {"type": "number", "minimum": 0}, "mu_x": _num, "mu_y": _num, "sigma_x": _pos, "sigma_y": _pos},
            required=("A", "mu_x", "mu_y", "sigma_x", "sigma_y"))},
    }),
    "nodes": {"type": "array", "items": _obj(
        {"x": _num, "y": _num, "Q_th": {"type": "number", "minimum": 0}, "R_th": _pos}, required=("x", "y"))},
    "uav": _obj({f.name: _num for f in fields(UavParams)}),
    "channel": _obj({f.name: _num for f in fields(ChannelParams)}),
    "mission": _obj({
        "start": _point,
        "end": _point,
        "clearance": _pos,
        "T_max": _pos,
        "T_min": _pos,
        "control_points": {"type": "integer", "minimum": 3},
        "samples": {"type": "integer", "minimum": 3},
        "violation_weights": {"type": "array", "items": _pos, "minItems": 6, "maxItems": 6},
        "violation_scales": {"type": "array", "items": _pos, "minItems": 6, "maxItems": 6},
        "baseline_order": {"oneOf": [
            {"enum": ["auto", "nearest", "exhaustive"]},
            {"type": "array", "items": {"type": "integer", "minimum": 0}},
        ]},
        "cruise_altitude": {"type": ["number", "null"]},
    }),
    "evo": _obj({
        "population_size": {"type": "integer", "minimum": 4},
        "generations": {"type": "integer", "minimum": 1},
        "amplification": _pos,
        "crossover_rate": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "max_restarts": {"type": "integer", "minimum": 0},
        "penalty_coefficient": {"type": "number", "minimum": 0},
        "workers": {"type": "integer", "minimum": 1},
    }),
})

DEFAULTS = {
    "terrain": {
        "bounds": {"U_x": 800.0, "U_y": 800.0, "U_z": 122.0},
        "bumps": [
            {"A": 150.0, "mu_x": 200.0, "mu_y": 500.0, "sigma_x": 90.0, "sigma_y": 90.0},
            {"A": 150.0, "mu_x": 600.0, "mu_y": 500.0, "sigma_x": 90.0, "sigma_y": 90.0},
            {"A": 150.0, "mu_x": 400.0, "mu_y": 200.0, "sigma_x": 90.0, "sigma_y": 90.0},
        ],
    },
    "nodes": [
        {"x": 200.0, "y": 200.0, "Q_th": 40e6, "R_th": 1e6},
        {"x": 600.0, "y": 200.0, "Q_th": 40e6, "R_th": 1e6},
        {"x": 400.0, "y": 700.0, "Q_th": 40e6, "R_th": 1e6},
    ],
    "uav": {f.name: f.default for f in fields(UavParams)},
    "channel": {f.name: f.default for f in fields(ChannelParams)},
    "mission": {
        "start": [0.0, 0.0, 100.0],
        "end": [800.0, 800.0, 100.0],
        "clearance": 0.5,
        "T_max": 500.0,
        "T_min": 1.0,
        "control_points": 11,
        "samples": 100,
        "violation_weights": [1 / 6] * 6,
        "violation_scales": [1.0] * 6,
        "baseline_order": "auto",
        "cruise_altitude": None,
    },
    "evo": {
        "population_size": 20,
        "generations": 2000,
        "amplification": 0.1,
        "crossover_rate": 0.5,
        "max_restarts": 5,
        "penalty_coefficient": 1.0,
        "workers": 1,
    },
}


@dataclass(frozen=True)
class Scenario:
    spec: MissionSpec
    evo: EvoConfig
    baseline_order: str | tuple = "auto"
    cruise_altitude: float | None = None


def default_document() -> dict:
    return copy.deepcopy(DEFAULTS)


def _merged(doc: dict) -> dict:
    out = default_document()
    for section, value in doc.items():
        if isinstance(value, dict) and isinstance(out.get(section), dict):
            out[section].update(value)
        else:
            out[section] = value
    return out


def _node_defaults(node: dict) -> dict:
    return {"Q_th": 40e6, "R_th": 1e6, **node}


def scenario_from_dict(doc: dict) -> Scenario:
    """Validate ``doc`` against the schema and build the problem instance."""
    errors = sorted(jsonschema.Draft202012Validator(SCHEMA).iter_errors(doc), key=lambda e: list(e.path))
    if errors:
        lines = [f"/{'/'.join(map(str, e.path))}: {e.message}" for e in errors]
        raise ScenarioError("scenario failed validation:\n  " + "\n  ".join(lines))
    d = _merged(doc)
    try:
        b = d["terrain"]["bounds"]
        terrain = TerrainMap(tuple(GaussianBump(**bp) for bp in d["terrain"]["bumps"]), b["U_x"], b["U_y"], b["U_z"])
        nodes = []
        for i, raw in enumerate(d["nodes"]):
            nd = _node_defaults(raw)
            if not (0 <= nd["x"] <= terrain.U_x and 0 <= nd["y"] <= terrain.U_y):
                raise ScenarioError(f"/nodes/{i}: position outside world bounds")
            z = terrain.altitude(nd["x"], nd["y"])
            nodes.append(GroundNode((nd["x"], nd["y"], z), nd["Q_th"], nd["R_th"]))
        m = d["mission"]
        spec = MissionSpec(
            start=tuple(m["start"]),
            end=tuple(m["end"]),
            terrain=terrain,
            nodes=tuple(nodes),
            uav=UavParams(**d["uav"]),
            channel=ChannelParams(**d["channel"]),
            clearance=m["clearance"],
            T_max=m["T_max"],
            T_min=m["T_min"],
            M=m["control_points"],
            n=m["samples"],
            weights=tuple(m["violation_weights"]),
            scales=tuple(m["violation_scales"]),
        )
        evo = EvoConfig(**d["evo"])
    except ScenarioError:
        raise
    except (ValueError, TypeError) as exc:
        raise ScenarioError(str(exc)) from exc
    order = m["baseline_order"]
    return Scenario(spec, evo, tuple(order) if isinstance(order, list) else order, m["cruise_altitude"])


def load_scenario(path) -> Scenario:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ScenarioError(f"{path}: top level must be an object")
    return scenario_from_dict(doc)
