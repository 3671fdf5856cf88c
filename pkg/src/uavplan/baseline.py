"""Fly-hover-fly reference planner.

The UAV flies straight legs at maximum speed between hover stations placed
above each ground node, hovering at each station until the node's data
requirement is delivered. Legs that would cut through the terrain are
replaced by climb / cruise / descend at a safe cruise altitude.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .comms import expected_rate
from .energy import propulsion_power
from .mission import CONSTRAINT_NAMES, MissionSpec, TrajectoryEvaluation, total_violation

EXHAUSTIVE_LIMIT = 8


class TerrainConflictError(RuntimeError):
    """No terrain-clear route exists under the lift rule."""


@dataclass(frozen=True)
class Leg:
    start: np.ndarray
    end: np.ndarray
    speed: float

    @property
    def length(self) -> float:
        return float(np.linalg.norm(self.end - self.start))

    @property
    def duration(self) -> float:
        return self.length / self.speed

    @property
    def velocity(self) -> np.ndarray:
        if self.length == 0.0:
            return np.zeros(3)
        return (self.end - self.start) / self.length * self.speed


@dataclass(frozen=True)
class HoverPlan:
    order: tuple[int, ...]
    stations: np.ndarray  # (K, 3) in node order
    hover_rates: np.ndarray  # (K,) bits/s at each station
    hover_times: np.ndarray  # (K,) seconds
    legs: tuple[Leg, ...]
    leg_energy: float
    hover_energy: float
    comm_energy: float
    mission_time: float
    feasible: bool

    @property
    def flight_energy(self) -> float:
        return self.leg_energy + self.hover_energy

    @property
    def objective(self) -> float:
        return self.flight_energy + self.comm_energy

    def timeline(self) -> tuple[np.ndarray, np.ndarray]:
        """Breakpoint times and positions of the piecewise-linear flight."""
        times, points = [0.0], [self.legs[0].start]
        t = 0.0
        hover_after = _hover_schedule(self)
        for i, leg in enumerate(self.legs):
            t += leg.duration
            times.append(t)
            points.append(leg.end)
            if i in hover_after:
                t += hover_after[i]
                times.append(t)
                points.append(leg.end)
        return np.array(times), np.array(points)

    def sample(self, n: int) -> np.ndarray:
        """Positions at n equally spaced instants over the mission."""
        times, points = self.timeline()
        ts = np.arange(n) / (n - 1) * self.mission_time
        return np.column_stack([np.interp(ts, times, points[:, j]) for j in range(3)])


def _hover_schedule(plan: HoverPlan) -> dict[int, float]:
    # leg index ending at each visited station -> hover duration
    out = {}
    k = 0
    for i, leg in enumerate(plan.legs):
        if k < len(plan.order) and np.array_equal(leg.end, plan.stations[plan.order[k]]):
            out[i] = float(plan.hover_times[plan.order[k]])
            k += 1
    return out


def hover_station(spec: MissionSpec, k: int, samples: int = 2001) -> tuple[np.ndarray, float]:
    """Rate-maximising admissible point directly above node ``k``."""
    node = spec.nodes[k]
    x, y, _ = node.position
    lo = spec.terrain.altitude(x, y) + spec.clearance
    hi = spec.terrain.U_z
    if lo > hi:
        raise TerrainConflictError(f"no admissible hover altitude above node {k}")
    zs = np.linspace(lo, hi, samples)
    rates = [expected_rate((x, y, z), node, spec.channel) for z in zs]
    j = int(np.argmax(rates))
    return np.array([x, y, zs[j]]), float(rates[j])


def _segment_clear(spec: MissionSpec, a: np.ndarray, b: np.ndarray, step: float = 1.0) -> bool:
    m = max(2, int(math.ceil(np.linalg.norm(b - a) / step)) + 1)
    s = np.linspace(0.0, 1.0, m)[:, None]
    pts = a + s * (b - a)
    floor = spec.terrain.altitude_batch(pts[:, 0], pts[:, 1]) + spec.clearance
    return bool(np.all(pts[:, 2] >= floor - 1e-9))


def route(spec: MissionSpec, a, b, cruise_altitude: float | None = None) -> list[Leg]:
    """Straight leg from ``a`` to ``b``, or a lifted climb/cruise/descend detour."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    v = spec.uav.v_max
    if _segment_clear(spec, a, b):
        return [Leg(a, b, v)]
    h = spec.terrain.U_z if cruise_altitude is None else cruise_altitude
    up = np.array([a[0], a[1], max(h, a[2])])
    down = np.array([b[0], b[1], max(h, b[2])])
    if not _segment_clear(spec, up, down):
        raise TerrainConflictError(f"leg {a.tolist()} -> {b.tolist()} blocked at cruise altitude {h}")
    legs = [Leg(a, up, v), Leg(up, down, v), Leg(down, b, v)]
    return [leg for leg in legs if leg.length > 0.0]


def leg_energy(leg: Leg, spec: MissionSpec) -> float:
    vel = leg.velocity
    p = propulsion_power(math.hypot(vel[0], vel[1]), vel[2], spec.uav)
    return float(p * leg.duration)


def _build(spec: MissionSpec, order, stations, rates, cruise_altitude) -> HoverPlan:
    K = spec.K
    hover_times = np.zeros(K)
    served = np.ones(K, dtype=bool)
    for k, node in enumerate(spec.nodes):
        if node.Q_th == 0:
            continue
        if rates[k] < node.R_th:
            served[k] = False
            continue
        hover_times[k] = node.Q_th / rates[k]
    waypoints = [np.asarray(spec.start)] + [stations[k] for k in order] + [np.asarray(spec.end)]
    legs: list[Leg] = []
    for a, b in zip(waypoints[:-1], waypoints[1:]):
        legs.extend(route(spec, a, b, cruise_altitude))
    e_legs = sum(leg_energy(leg, spec) for leg in legs)
    hover_power = propulsion_power(0.0, 0.0, spec.uav)
    total_hover = float(np.sum(hover_times))
    t = sum(leg.duration for leg in legs) + total_hover
    return HoverPlan(
        order=tuple(order),
        stations=stations,
        hover_rates=rates,
        hover_times=hover_times,
        legs=tuple(legs),
        leg_energy=e_legs,
        hover_energy=hover_power * total_hover,
        comm_energy=spec.channel.P_com * total_hover,
        mission_time=t,
        feasible=bool(served.all() and t <= spec.T_max),
    )


def _nearest_order(spec: MissionSpec, stations: np.ndarray) -> list[int]:
    left = list(range(spec.K))
    here = np.asarray(spec.start)
    order = []
    while left:
        k = min(left, key=lambda j: float(np.linalg.norm(stations[j] - here)))
        order.append(k)
        left.remove(k)
        here = stations[k]
    return order


def plan_fly_hover_fly(spec: MissionSpec, order: str | tuple = "auto",
                       cruise_altitude: float | None = None) -> HoverPlan:
    """Plan the fly-hover-fly reference mission.

    ``order`` is ``"nearest"``, ``"exhaustive"``, ``"auto"`` (exhaustive for
    up to eight nodes, nearest otherwise) or an explicit node sequence.
    Exhaustive search keeps the cheapest terrain-clear visiting order.
    """
    found = [hover_station(spec, k) for k in range(spec.K)]
    stations = np.array([s for s, _ in found]).reshape(-1, 3)
    rates = np.array([r for _, r in found])
    if order == "auto":
        order = "exhaustive" if spec.K <= EXHAUSTIVE_LIMIT else "nearest"
    if order == "nearest":
        return _build(spec, _nearest_order(spec, stations), stations, rates, cruise_altitude)
    if order == "exhaustive":
        best = None
        for perm in itertools.permutations(range(spec.K)):
            try:
                plan = _build(spec, perm, stations, rates, cruise_altitude)
            except TerrainConflictError:
                continue
            if best is None or plan.objective < best.objective:
                best = plan
        if best is None:
            raise TerrainConflictError("every visiting order crosses blocked terrain")
        return best
    return _build(spec, list(order), stations, rates, cruise_altitude)


def evaluate_plan(plan: HoverPlan, spec: MissionSpec) -> TrajectoryEvaluation:
    """Report a plan in the same record type as optimiser results.

    Links are taken as active only while hovering. The idealised plan has
    instantaneous speed changes at leg joints, so acceleration limits are not
    assessed (reported as zero), matching the reference scheme.
    """
    delivered = plan.hover_rates * plan.hover_times
    viol = np.zeros(6)
    viol[5] = float(np.sum(np.maximum(0.0, spec.Q_th - delivered)))
    # rounding in rate * (Q / rate) must not register as a shortfall
    if np.allclose(delivered, spec.Q_th, rtol=1e-9, atol=0.0):
        viol[5] = 0.0
    phi = float(total_violation(viol, spec.weights, spec.scales))
    return TrajectoryEvaluation(
        objective=plan.objective,
        flight_energy=plan.flight_energy,
        comm_energy=plan.comm_energy,
        T=plan.mission_time,
        collected=delivered,
        violations=dict(zip(CONSTRAINT_NAMES, map(float, viol))),
        total_violation=phi,
        feasible=bool(plan.feasible and phi == 0.0),
    )
