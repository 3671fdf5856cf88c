"""Matrix-based differential evolution with feasibility-first constraint handling.

The whole population lives in one N x D matrix; mutation, bound repair,
crossover and selection are dense array operations on that matrix. Two
selection rules are available:

``constrained``
    Compare total violation first and fall back to the objective when the
    violations are equal (in particular when both rows are feasible).
``penalty``
    Compare ``objective + tau * phi**2`` only.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .mission import BatchEvaluation, MissionSpec, TrajectoryEvaluation, evaluate, evaluate_batch

log = logging.getLogger(__name__)

MODES = ("constrained", "penalty")


@dataclass(frozen=True)
class EvoConfig:
    population_size: int = 20
    generations: int = 2000
    amplification: float = 0.1
    crossover_rate: float = 0.5
    seed: int = 0
    max_restarts: int = 5
    mode: str = "constrained"
    penalty_coefficient: float = 1.0
    workers: int = 1

    def __post_init__(self):
        if self.population_size < 4:
            raise ValueError("population_size must be >= 4")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0 < self.crossover_rate < 1:
            raise ValueError("crossover_rate must lie in (0, 1)")
        if not self.amplification > 0:
            raise ValueError("amplification must be positive")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.max_restarts < 0 or self.workers < 1:
            raise ValueError("max_restarts >= 0 and workers >= 1 required")


@dataclass
class Population:
    X: np.ndarray
    objective: np.ndarray
    phi: np.ndarray
    generation: int = 1

    @property
    def feasible(self) -> np.ndarray:
        return self.phi == 0.0


@dataclass(frozen=True)
class GenerationRecord:
    generation: int
    attempt: int
    best_feasible_objective: float  # inf when no row is feasible
    min_violation: float
    feasible_count: int


@dataclass
class RunResult:
    x_opt: np.ndarray
    f_opt: float
    phi_opt: float
    feasible: bool
    restarts: int
    mode: str
    history: list[GenerationRecord] = field(default_factory=list)
    population: Population | None = None
    evaluation: TrajectoryEvaluation | None = None


def generation_rng(seed: int, attempt: int, generation: int) -> np.random.Generator:
    """Independent stream for one (attempt, generation) pair of a run."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(attempt, generation)))


def evaluate_population(X: np.ndarray, spec: MissionSpec, workers: int = 1) -> BatchEvaluation:
    """Row-wise evaluation, optionally split across threads.

    Rows are independent and every reduction runs along a per-row axis, so the
    result does not depend on ``workers``.
    """
    if workers <= 1 or X.shape[0] < 2:
        return evaluate_batch(X, spec)
    chunks = np.array_split(X, min(workers, X.shape[0]))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(lambda c: evaluate_batch(c, spec), chunks))
    return BatchEvaluation(*(np.concatenate([getattr(p, f) for p in parts]) for f in
                             ("objective", "e_fly", "e_com", "collected", "violations", "phi")))


def init_population(lower, upper, N: int, rng: np.random.Generator) -> np.ndarray:
    lower = np.asarray(lower, float)
    upper = np.asarray(upper, float)
    R = rng.random((N, lower.size))
    return (upper - lower) * R + lower


def mutate(X: np.ndarray, lower, upper, amplification: float, rng: np.random.Generator) -> np.ndarray:
    """DE/rand/1 donor matrix with clamp repair.

    The three partner orders are independent permutations of the rows; a row
    may be paired with itself.
    """
    N = X.shape[0]
    r1, r2, r3 = rng.permutation(N), rng.permutation(N), rng.permutation(N)
    Y = X[r1] + amplification * (X[r2] - X[r3])
    U = np.broadcast_to(upper, Y.shape)
    L = np.broadcast_to(lower, Y.shape)
    Y = np.where(Y < U, Y, U)
    Y = np.where(Y < L, L, Y)
    return Y


def crossover(X: np.ndarray, Y: np.ndarray, crossover_rate: float, rng: np.random.Generator,
              return_mask: bool = False):
    """Binomial crossover with one guaranteed donor gene per row."""
    N, D = X.shape
    theta = rng.random((N, D)) < crossover_rate
    theta[np.arange(N), rng.integers(0, D, size=N)] = True
    W = np.where(theta, Y, X)
    return (W, theta) if return_mask else W


def selection_keys(phi_x, f_x, phi_w, f_w) -> tuple[np.ndarray, np.ndarray]:
    """Replace violation by objective wherever the two violations are equal."""
    same = phi_x == phi_w
    return np.where(same, f_x, phi_x), np.where(same, f_w, phi_w)


def constrained_select(pop: Population, W: np.ndarray, ev: BatchEvaluation) -> tuple[Population, np.ndarray]:
    """Feasibility-first survivor choice; returns next population and the replacement mask."""
    key_x, key_w = selection_keys(pop.phi, pop.objective, ev.phi, ev.objective)
    take = key_w < key_x
    return _merge(pop, W, ev, take), take


def penalty_objective(objective, phi, tau: float):
    return objective + tau * np.square(phi)


def penalty_select(pop: Population, W: np.ndarray, ev: BatchEvaluation, tau: float) -> tuple[Population, np.ndarray]:
    take = penalty_objective(ev.objective, ev.phi, tau) < penalty_objective(pop.objective, pop.phi, tau)
    return _merge(pop, W, ev, take), take


def _merge(pop: Population, W, ev, take) -> Population:
    return Population(
        X=np.where(take[:, None], W, pop.X),
        objective=np.where(take, ev.objective, pop.objective),
        phi=np.where(take, ev.phi, pop.phi),
        generation=pop.generation + 1,
    )


def _record(pop: Population, generation: int, attempt: int) -> GenerationRecord:
    feas = pop.feasible
    best = float(np.min(pop.objective[feas])) if feas.any() else math.inf
    return GenerationRecord(generation, attempt, best, float(np.min(pop.phi)), int(feas.sum()))


def evolve(spec: MissionSpec, config: EvoConfig, attempt: int = 0, on_generation=None):
    """One initialisation plus ``generations - 1`` evolution steps.

    ``on_generation(pop)`` is called after initialisation and after every
    selection. Returns the final population and its history records.
    """
    lower, upper = spec.lower, spec.upper
    rng = generation_rng(config.seed, attempt, 0)
    X = init_population(lower, upper, config.population_size, rng)
    ev = evaluate_population(X, spec, config.workers)
    pop = Population(X, ev.objective, ev.phi, 1)
    offset = attempt * config.generations
    history = [_record(pop, offset + 1, attempt)]
    if on_generation:
        on_generation(pop)
    for g in range(1, config.generations):
        rng = generation_rng(config.seed, attempt, g)
        Y = mutate(pop.X, lower, upper, config.amplification, rng)
        W = crossover(pop.X, Y, config.crossover_rate, rng)
        ev = evaluate_population(W, spec, config.workers)
        if config.mode == "penalty":
            pop, _ = penalty_select(pop, W, ev, config.penalty_coefficient)
        else:
            pop, _ = constrained_select(pop, W, ev)
        history.append(_record(pop, offset + pop.generation, attempt))
        if on_generation:
            on_generation(pop)
    return pop, history


def run(spec: MissionSpec, config: EvoConfig, on_generation=None) -> RunResult:
    """Optimise ``spec``; in constrained mode, restart while no row ends feasible."""
    history: list[GenerationRecord] = []
    attempts = config.max_restarts + 1 if config.mode == "constrained" else 1
    for attempt in range(attempts):
        pop, hist = evolve(spec, config, attempt, on_generation)
        history.extend(hist)
        if pop.feasible.any():
            break
        log.info("attempt %d ended without a feasible row", attempt)

    if config.mode == "penalty":
        i = int(np.argmin(penalty_objective(pop.objective, pop.phi, config.penalty_coefficient)))
    elif pop.feasible.any():
        idx = np.flatnonzero(pop.feasible)
        i = int(idx[np.argmin(pop.objective[idx])])
    else:
        # least violation, objective as tie-break
        i = int(np.lexsort((pop.objective, pop.phi))[0])
    x_opt = pop.X[i].copy()
    return RunResult(
        x_opt=x_opt,
        f_opt=float(pop.objective[i]),
        phi_opt=float(pop.phi[i]),
        feasible=bool(pop.phi[i] == 0.0),
        restarts=attempt,
        mode=config.mode,
        history=history,
        population=pop,
        evaluation=evaluate(x_opt, spec),
    )
