"""Energy-minimal UAV trajectories for IoT data collection over 3D terrain.

Trajectories are Bezier curves whose interior control points and mission
time are optimised by a matrix-based differential evolution with
feasibility-first constraint handling.
"""

from .baseline import evaluate_plan, plan_fly_hover_fly
from .evo import EvoConfig, RunResult, run
from .mission import MissionSpec, default_spec, evaluate, evaluate_batch
from .scenario import Scenario, load_scenario, scenario_from_dict

__all__ = [
    "EvoConfig",
    "MissionSpec",
    "RunResult",
    "Scenario",
    "default_spec",
    "evaluate",
    "evaluate_batch",
    "evaluate_plan",
    "load_scenario",
    "plan_fly_hover_fly",
    "run",
    "scenario_from_dict",
]
