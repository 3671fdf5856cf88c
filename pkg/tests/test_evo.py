import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uavplan.evo import (EvoConfig, Population, constrained_select, crossover, evolve, generation_rng,
                         init_population, mutate, penalty_objective, run)
from uavplan.mission import BatchEvaluation, MissionSpec, default_spec
from uavplan.comms import GroundNode
from uavplan.terrain import TerrainMap

SMALL = EvoConfig(population_size=10, generations=30)


def _ev(objective, phi):
    n = len(objective)
    z = np.zeros(n)
    return BatchEvaluation(np.array(objective, float), z, z, np.zeros((n, 1)), np.zeros((n, 6)), np.array(phi, float))


def test_init_deterministic_and_degenerate_bounds():
    lo, hi = np.array([0.0, 5.0, 1.0]), np.array([10.0, 5.0, 2.0])
    a = init_population(lo, hi, 8, generation_rng(3, 0, 0))
    b = init_population(lo, hi, 8, generation_rng(3, 0, 0))
    assert np.array_equal(a, b) and np.all(a[:, 1] == 5.0)
    assert np.all(a >= lo) and np.all(a <= hi)


def test_zero_amplification_permutes_rows():
    X = np.arange(24, dtype=float).reshape(6, 4)
    Y = mutate(X, np.full(4, -1e9), np.full(4, 1e9), 0.0, np.random.default_rng(1))
    assert sorted(map(tuple, Y)) == sorted(map(tuple, X))


def test_identical_rows_are_fixed_points():
    X = np.tile([1.0, 2.0, 3.0], (5, 1))
    assert np.array_equal(mutate(X, np.zeros(3), np.full(3, 9.0), 0.7, np.random.default_rng(0)), X)


def test_crossover_limits():
    rng = np.random.default_rng(0)
    X, Y = np.zeros((7, 9)), np.ones((7, 9))
    assert np.array_equal(crossover(X, Y, 1 - 1e-12, rng), Y)
    W = crossover(X, Y, 1e-12, rng)
    assert np.all(W.sum(axis=1) == 1)


@pytest.mark.parametrize("phi_x,f_x,phi_w,f_w,wins", [
    (0.5, 10.0, 0.2, 1e9, True),
    (0.0, 1000.0, 0.0, 900.0, True),
    (0.3, 5.0, 0.3, 5.0, False),
    (0.0, 1.0, 1e-9, 0.0, False),
])
def test_selection_examples(phi_x, f_x, phi_w, f_w, wins):
    pop = Population(np.zeros((1, 2)), np.array([f_x]), np.array([phi_x]))
    new, take = constrained_select(pop, np.ones((1, 2)), _ev([f_w], [phi_w]))
    assert bool(take[0]) is wins
    assert new.X[0, 0] == (1.0 if wins else 0.0)


def test_penalty_examples():
    assert penalty_objective(123.0, 0.0, 5.0) == 123.0
    assert penalty_objective(100.0, 10.0, 1.0) == 200.0
    assert penalty_objective(100.0, 10.0, 0.0) == 100.0


def test_config_validation():
    for bad in (dict(population_size=2), dict(crossover_rate=1.0), dict(mode="x"), dict(amplification=0)):
        with pytest.raises(ValueError):
            EvoConfig(**bad)


def test_trivial_problem_feasible_immediately():
    spec = MissionSpec((0, 0, 50), (800, 800, 50), TerrainMap(U_z=122),
                       (GroundNode((400, 400, 0), Q_th=0.0),), T_max=500, T_min=60)
    pop, hist = evolve(spec, EvoConfig(population_size=10, generations=1))
    assert hist[0].feasible_count > 0


def test_run_is_deterministic(spec):
    a, b = run(spec, SMALL), run(spec, SMALL)
    assert np.array_equal(a.x_opt, b.x_opt) and a.f_opt == b.f_opt
    assert [h.min_violation for h in a.history] == [h.min_violation for h in b.history]


def test_workers_do_not_change_results(spec):
    a = run(spec, SMALL)
    b = run(spec, EvoConfig(population_size=10, generations=30, workers=3))
    assert np.array_equal(a.x_opt, b.x_opt)


def test_exhausted_restarts_flag_infeasible():
    spec = default_spec(Q_th=1e12)
    res = run(spec, EvoConfig(population_size=6, generations=5, max_restarts=2))
    assert not res.feasible and res.restarts == 2 and res.phi_opt > 0
    assert [h.generation for h in res.history] == list(range(1, 16))


def test_penalty_mode_single_attempt():
    res = run(default_spec(Q_th=1e12), EvoConfig(population_size=6, generations=5, mode="penalty"))
    assert res.restarts == 0 and len(res.history) == 5


@settings(max_examples=8)
@given(st.integers(0, 2**31))
def test_elitism_and_bounds_closure(seed):
    spec = default_spec()
    cfg = EvoConfig(population_size=8, generations=25, seed=seed, max_restarts=0)
    prev = []

    def check(pop):
        assert np.all(pop.X >= spec.lower) and np.all(pop.X <= spec.upper)
        if prev:
            p = prev[-1]
            assert np.all(pop.phi <= p.phi)
            same = pop.phi == p.phi
            assert np.all(pop.objective[same] <= p.objective[same])
            assert not np.any(p.feasible & ~pop.feasible)
        prev.append(pop)

    evolve(spec, cfg, on_generation=check)


@given(st.integers(0, 50), st.integers(0, 50))
def test_generation_streams_are_distinct(a, g):
    x = generation_rng(7, a, g).random(4)
    y = generation_rng(7, a, g + 1).random(4)
    assert not np.array_equal(x, y)
