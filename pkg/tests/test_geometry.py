import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from uavplan.geometry import (bernstein_basis, bezier_curve, bezier_grid, bezier_point, finite_differences,
                              kinematics, sample_path, time_grid)

FIG_POINTS = np.array([[0, 0, 0], [1, 1, 1], [2, 4, 2], [3, 2, 3], [4, 1, 2], [5, 4, 3]], float)

finite = st.floats(-1e3, 1e3, allow_nan=False)


@st.composite
def control_points(draw, lo=3, hi=15):
    M = draw(st.integers(lo, hi))
    return draw(arrays(float, (M, 3), elements=finite))


def test_collinear_midpoint():
    cp = np.array([[0, 0, 0], [1, 1, 1], [2, 2, 2]], float)
    assert np.allclose(bezier_point(cp, 0.5), [1, 1, 1], atol=0, rtol=0)


def test_six_point_example_endpoints():
    assert np.array_equal(bezier_point(FIG_POINTS, 1.0), [5, 4, 3])
    assert np.array_equal(bezier_point(FIG_POINTS, 0.0), [0, 0, 0])


@pytest.mark.parametrize("u", [-1e-9, 1.0000001, np.nan])
def test_parameter_out_of_range(u):
    with pytest.raises(ValueError):
        bezier_point(FIG_POINTS, u)


def test_too_few_points():
    with pytest.raises(ValueError):
        bezier_point(FIG_POINTS[:2], 0.5)


def test_basis_matches_binomial_form():
    from math import comb

    u = np.linspace(0, 1, 17)
    for M in (3, 6, 11, 15):
        ref = np.array([[comb(M - 1, i) * t**i * (1 - t) ** (M - 1 - i) for i in range(M)] for t in u])
        assert np.allclose(bernstein_basis(M, u), ref, rtol=1e-12, atol=1e-15)


@pytest.mark.parametrize("n,T", [(2, 1.0), (100, 0.0), (100, -3.0)])
def test_sample_path_preconditions(n, T):
    with pytest.raises(ValueError):
        sample_path(FIG_POINTS, n, T)


def test_sample_path_basic():
    line = np.array([[0, 0, 0], [5, 0, 0], [10, 0, 0]], float)
    p = sample_path(line, 3, 1.0)
    assert np.allclose(p.positions[1], [5, 0, 0])
    assert sample_path(FIG_POINTS, 100, 1.0).n == 100
    const = sample_path(np.tile([3.0, 4.0, 5.0], (7, 1)), 50, 2.0).positions
    assert np.all(const == [3.0, 4.0, 5.0])


def test_line_kinematics():
    L, T = 300.0, 20.0
    line = np.linspace([0, 0, 50], [L, 0, 50], 6)  # evenly spaced control points: uniform speed
    for n in (3, 10, 100):
        k = kinematics(sample_path(line, n, T))
        assert k.velocity.shape == (n - 1, 3) and k.acceleration.shape == (n - 2, 3)
        assert np.allclose(k.speed, L / T, rtol=1e-12)
        assert np.allclose(k.acceleration, 0.0, atol=1e-9)


def test_constant_path_is_still():
    k = kinematics(sample_path(np.ones((5, 3)), 20, 4.0))
    assert np.all(k.velocity == 0) and np.all(k.acceleration == 0)


@given(control_points())
def test_endpoints_exact(cp):
    assert np.array_equal(bezier_point(cp, 0.0), cp[0])
    assert np.array_equal(bezier_point(cp, 1.0), cp[-1])
    g = bezier_grid(cp, 50)
    assert np.array_equal(g[0], cp[0]) and np.array_equal(g[-1], cp[-1])


@given(control_points(), st.floats(0, 1))
def test_inside_bounding_box(cp, u):
    p = bezier_point(cp, u)
    slack = 1e-9 * (1 + np.abs(cp).max())
    assert np.all(p >= cp.min(0) - slack) and np.all(p <= cp.max(0) + slack)


@given(control_points(), arrays(float, (3, 3), elements=st.floats(-3, 3)), arrays(float, 3, elements=finite))
def test_affine_invariance(cp, A, b):
    u = time_grid(25)
    lhs = bezier_curve(cp @ A.T + b, u)
    rhs = bezier_curve(cp, u) @ A.T + b
    assert np.allclose(lhs, rhs, rtol=1e-9, atol=1e-7)


@given(st.lists(control_points(4, 4), min_size=1, max_size=5))
def test_batched_curves_match_single(cps):
    batch = bezier_grid(np.stack(cps), 40)
    for i, cp in enumerate(cps):
        assert np.array_equal(batch[i], bezier_grid(cp, 40))


@given(control_points(), st.floats(1, 500), st.floats(0.5, 4))
def test_time_scaling_of_derivatives(cp, T, c):
    pos = bezier_grid(cp, 30)
    v1, s1, a1 = finite_differences(pos, T)
    v2, s2, a2 = finite_differences(pos, c * T)
    assert np.allclose(v2 * c, v1, rtol=1e-9, atol=1e-9)
    assert np.allclose(a2 * c * c, a1, rtol=1e-9, atol=1e-9)


@given(st.integers(3, 400))
def test_grid_endpoints(n):
    g = time_grid(n)
    assert g[0] == 0.0 and g[-1] == 1.0 and g.size == n
