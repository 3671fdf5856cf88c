"""Problem assembly: genome layout, trajectory evaluation and constraint violations."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .comms import ChannelParams, GroundNode, LinkTrace, accumulate, rates_batch
from .energy import UavParams, power_from_velocity
from .geometry import Kinematics, SampledPath, bezier_grid, finite_differences
from .terrain import TerrainMap, default_terrain

CONSTRAINT_NAMES = ("C4", "C5", "C6", "C7", "C8", "C9")


@dataclass(frozen=True)
class MissionSpec:
    start: tuple[float, float, float]
    end: tuple[float, float, float]
    terrain: TerrainMap
    nodes: tuple[GroundNode, ...]
    uav: UavParams = field(default_factory=UavParams)
    channel: ChannelParams = field(default_factory=ChannelParams)
    clearance: float = 0.5
    T_max: float = 500.0
    T_min: float = 1.0
    M: int = 11
    n: int = 100
    weights: tuple[float, ...] = (1 / 6,) * 6
    scales: tuple[float, ...] = (1.0,) * 6

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(float(c) for c in self.start))
        object.__setattr__(self, "end", tuple(float(c) for c in self.end))
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(self, "scales", tuple(float(s) for s in self.scales))
        if self.M < 3:
            raise ValueError("need at least 3 control points")
        if self.n < 3:
            raise ValueError("need at least 3 samples")
        if not 0 < self.T_min < self.T_max:
            raise ValueError("need 0 < T_min < T_max")
        if len(self.weights) != 6 or any(w <= 0 for w in self.weights):
            raise ValueError("need six positive violation weights")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError("violation weights must sum to 1")
        if len(self.scales) != 6 or any(s <= 0 for s in self.scales):
            raise ValueError("need six positive violation scales")
        t = self.terrain
        for name, p in (("start", self.start), ("end", self.end)):
            x, y, z = p
            if not (0 <= x <= t.U_x and 0 <= y <= t.U_y and z <= t.U_z):
                raise ValueError(f"{name} point outside world bounds")
            if z < t.altitude(x, y) + self.clearance:
                raise ValueError(f"{name} point below terrain clearance")

    @property
    def D(self) -> int:
        return 3 * (self.M - 2) + 1

    @property
    def K(self) -> int:
        return len(self.nodes)

    @property
    def upper(self) -> np.ndarray:
        t = self.terrain
        return np.array([t.U_x, t.U_y, t.U_z] * (self.M - 2) + [self.T_max])

    @property
    def lower(self) -> np.ndarray:
        return np.array([0.0, 0.0, 0.0] * (self.M - 2) + [self.T_min])

    @property
    def node_positions(self) -> np.ndarray:
        return np.array([nd.position for nd in self.nodes], dtype=float).reshape(-1, 3)

    @property
    def Q_th(self) -> np.ndarray:
        return np.array([nd.Q_th for nd in self.nodes], dtype=float)

    @property
    def R_th(self) -> np.ndarray:
        return np.array([nd.R_th for nd in self.nodes], dtype=float)

    def with_requirement(self, Q_th: float) -> "MissionSpec":
        return replace(self, nodes=tuple(replace(nd, Q_th=float(Q_th)) for nd in self.nodes))

    def flattened(self) -> "MissionSpec":
        """Zero-terrain copy with nodes dropped to the ground plane."""
        flat = self.terrain.flattened()
        nodes = tuple(replace(nd, position=(nd.position[0], nd.position[1], 0.0)) for nd in self.nodes)
        return replace(self, terrain=flat, nodes=nodes)


def ground_nodes(terrain: TerrainMap, xy, Q_th=40e6, R_th=1e6) -> tuple[GroundNode, ...]:
    """Nodes at 2D positions ``xy`` placed on the terrain surface."""
    return tuple(GroundNode((x, y, terrain.altitude(x, y)), Q_th, R_th) for x, y in xy)


def default_spec(Q_th: float = 40e6) -> MissionSpec:
    terrain = default_terrain()
    nodes = ground_nodes(terrain, [(200.0, 200.0), (600.0, 200.0), (400.0, 700.0)], Q_th=Q_th)
    return MissionSpec((0.0, 0.0, 100.0), (800.0, 800.0, 100.0), terrain, nodes)


def decode(genome, spec: MissionSpec) -> tuple[np.ndarray, float]:
    g = np.asarray(genome, dtype=float)
    if g.shape != (spec.D,):
        raise ValueError(f"genome length {g.size} != {spec.D}")
    cp = np.vstack([spec.start, g[:-1].reshape(spec.M - 2, 3), spec.end])
    return cp, float(g[-1])


def encode(cp, T: float) -> np.ndarray:
    cp = np.asarray(cp, dtype=float)
    return np.concatenate([cp[1:-1].ravel(), [T]])


def control_points_batch(X: np.ndarray, spec: MissionSpec) -> np.ndarray:
    N = X.shape[0]
    start = np.broadcast_to(np.asarray(spec.start), (N, 1, 3))
    end = np.broadcast_to(np.asarray(spec.end), (N, 1, 3))
    return np.concatenate([start, X[:, :-1].reshape(N, spec.M - 2, 3), end], axis=1)


# -- violation functions -----------------------------------------------------


def violation_c4(positions: np.ndarray, terrain: TerrainMap, clearance: float) -> np.ndarray:
    """Summed terrain-clearance deficit over samples; positions (..., n, 3)."""
    floor = terrain.altitude_batch(positions[..., 0], positions[..., 1]) + clearance
    return np.sum(np.maximum(0.0, floor - positions[..., 2]), axis=-1)


def violation_c5(speed: np.ndarray, v_max: float) -> np.ndarray:
    return np.sum(np.maximum(0.0, speed - v_max), axis=-1)


def violation_c6_c7_c8(acceleration: np.ndarray, a_max) -> np.ndarray:
    """Per-axis summed excess |a| over the limit; returns (..., 3)."""
    excess = np.maximum(0.0, np.abs(acceleration) - np.asarray(a_max, float))
    return np.sum(excess, axis=-2)


def violation_c9(collected: np.ndarray, Q_th: np.ndarray) -> np.ndarray:
    return np.sum(np.maximum(0.0, Q_th - collected), axis=-1)


def total_violation(violations: np.ndarray, weights, scales=None) -> np.ndarray:
    w = np.asarray(weights, float)
    if scales is not None:
        w = w * np.asarray(scales, float)
    terms = violations * w
    # fixed left-to-right order so batch and single evaluations agree bitwise
    out = terms[..., 0]
    for i in range(1, terms.shape[-1]):
        out = out + terms[..., i]
    return out


# -- evaluation ---------------------------------------------------------------


@dataclass(frozen=True)
class BatchEvaluation:
    """Row-wise fitness of an N x D matrix."""

    objective: np.ndarray  # (N,)
    e_fly: np.ndarray
    e_com: np.ndarray
    collected: np.ndarray  # (N, K)
    violations: np.ndarray  # (N, 6)
    phi: np.ndarray  # (N,)

    @property
    def feasible(self) -> np.ndarray:
        return self.phi == 0.0


@dataclass(frozen=True)
class TrajectoryEvaluation:
    objective: float
    flight_energy: float
    comm_energy: float
    T: float
    collected: np.ndarray
    violations: dict
    total_violation: float
    feasible: bool
    path: SampledPath | None = None
    kinematics: Kinematics | None = None
    trace: LinkTrace | None = None

    def summary(self) -> dict:
        return {
            "objective": self.objective,
            "E_fly": self.flight_energy,
            "E_com": self.comm_energy,
            "T": self.T,
            "Q": [float(q) for q in self.collected],
            "violations": {k: float(v) for k, v in self.violations.items()},
            "total_violation": self.total_violation,
            "feasible": self.feasible,
        }


def _core(X: np.ndarray, spec: MissionSpec, *, n: int | None = None):
    n = spec.n if n is None else n
    T = X[:, -1]
    pos = bezier_grid(control_points_batch(X, spec), n)
    vel, speed, acc = finite_differences(pos, T)
    step = T * (1.0 / (n - 1))
    e_fly = step * np.sum(power_from_velocity(vel, spec.uav), axis=-1)
    rates = rates_batch(pos, spec.node_positions, spec.channel)
    active, collected = accumulate(rates, spec.R_th, T)
    e_com = step * spec.channel.P_com * np.sum(active, axis=(-2, -1))
    viol = np.empty((X.shape[0], 6))
    viol[:, 0] = violation_c4(pos, spec.terrain, spec.clearance)
    viol[:, 1] = violation_c5(speed, spec.uav.v_max)
    viol[:, 2:5] = violation_c6_c7_c8(acc, spec.uav.a_max)
    viol[:, 5] = violation_c9(collected, spec.Q_th)
    phi = total_violation(viol, spec.weights, spec.scales)
    ev = BatchEvaluation(e_fly + e_com, e_fly, e_com, collected, viol, phi)
    return ev, (pos, vel, speed, acc, rates, active)


def evaluate_batch(X, spec: MissionSpec) -> BatchEvaluation:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != spec.D:
        raise ValueError(f"genome length {X.shape[1]} != {spec.D}")
    return _core(X, spec)[0]


def evaluate(genome, spec: MissionSpec, *, n: int | None = None) -> TrajectoryEvaluation:
    """Full evaluation of one genome, including sampled path and link trace.

    ``n`` overrides the scenario's sample count (used for discretisation studies).
    """
    g = np.asarray(genome, dtype=float)
    if g.shape != (spec.D,):
        raise ValueError(f"genome length {g.size} != {spec.D}")
    ev, (pos, vel, speed, acc, rates, active) = _core(g[None, :], spec, n=n)
    T = float(g[-1])
    return TrajectoryEvaluation(
        objective=float(ev.objective[0]),
        flight_energy=float(ev.e_fly[0]),
        comm_energy=float(ev.e_com[0]),
        T=T,
        collected=ev.collected[0],
        violations=dict(zip(CONSTRAINT_NAMES, map(float, ev.violations[0]))),
        total_violation=float(ev.phi[0]),
        feasible=bool(ev.phi[0] == 0.0),
        path=SampledPath(pos[0], T),
        kinematics=Kinematics(vel[0], speed[0], acc[0]),
        trace=LinkTrace(rates[0], active[0], ev.collected[0], T),
    )


def within_bounds(genome, spec: MissionSpec) -> bool:
    g = np.asarray(genome, dtype=float)
    return bool(np.all(g >= spec.lower) and np.all(g <= spec.upper))
