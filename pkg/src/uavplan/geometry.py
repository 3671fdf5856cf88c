"""Bezier trajectories and forward-difference kinematics on a normalised time grid."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


def bernstein_basis(M: int, u) -> np.ndarray:
    """Degree-(M-1) Bernstein weights at parameters ``u``, shape (n, M).

    Built by running de Casteljau's recurrence on the identity control
    polygon, which avoids large binomial coefficients.
    """
    u = np.asarray(u, dtype=float).reshape(-1)
    w = u[:, None, None]
    beta = np.broadcast_to(np.eye(M), (u.size, M, M))
    for _ in range(M - 1):
        beta = (1.0 - w) * beta[:, :-1, :] + w * beta[:, 1:, :]
    return beta[:, 0, :].copy()


@lru_cache(maxsize=32)
def _grid_basis(M: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    u = time_grid(n)
    basis = bernstein_basis(M, u)
    late = u > 0.5
    basis.setflags(write=False)
    late.setflags(write=False)
    return basis, late


def combine(basis: np.ndarray, points: np.ndarray, late: np.ndarray) -> np.ndarray:
    """Weighted sum of control points (..., M, d) with weights (n, M) -> (..., n, d).

    Rows are expressed relative to an anchor control point (the first, or the
    last where ``late``), so constant curves and both endpoints come out exact
    even though the weights only sum to one up to rounding.
    """
    M = basis.shape[1]
    anchor = np.where(late[:, None], points[..., None, M - 1, :], points[..., None, 0, :])
    out = anchor
    # fixed accumulation order: identical results for batched and single curves
    for j in range(M):
        out = out + basis[:, j, None] * (points[..., None, j, :] - anchor)
    return out


def bezier_curve(points, u) -> np.ndarray:
    """Evaluate Bezier curves with control points (..., M, d) at parameters ``u``."""
    points = np.asarray(points, dtype=float)
    u = np.asarray(u, dtype=float).reshape(-1)
    return combine(bernstein_basis(points.shape[-2], u), points, u > 0.5)


def bezier_grid(points, n: int) -> np.ndarray:
    """Curves (..., M, d) sampled at the n-point uniform grid on [0, 1]."""
    points = np.asarray(points, dtype=float)
    basis, late = _grid_basis(points.shape[-2], n)
    return combine(basis, points, late)


def bezier_point(cp, u: float) -> np.ndarray:
    """Point on the degree-(M-1) Bezier curve of ``cp`` at parameter ``u``."""
    cp = np.asarray(cp, dtype=float)
    if cp.ndim != 2 or cp.shape[0] < 3:
        raise ValueError("need at least 3 control points of shape (M, 3)")
    if not 0.0 <= u <= 1.0:
        raise ValueError(f"u={u} outside [0, 1]")
    return bezier_curve(cp, np.array([u]))[0]


def time_grid(n: int) -> np.ndarray:
    return np.arange(n) / (n - 1)


@dataclass(frozen=True)
class SampledPath:
    positions: np.ndarray  # (n, 3)
    T: float

    @property
    def n(self) -> int:
        return self.positions.shape[0]

    @property
    def dt_bar(self) -> float:
        return 1.0 / (self.n - 1)


@dataclass(frozen=True)
class Kinematics:
    velocity: np.ndarray  # (n-1, 3)
    speed: np.ndarray  # (n-1,)
    acceleration: np.ndarray  # (n-2, 3)


def sample_path(cp, n: int, T: float) -> SampledPath:
    cp = np.asarray(cp, dtype=float)
    if n < 3:
        raise ValueError("need n >= 3 samples")
    if not T > 0:
        raise ValueError("mission time must be positive")
    if cp.ndim != 2 or cp.shape[0] < 3:
        raise ValueError("need at least 3 control points of shape (M, 3)")
    return SampledPath(bezier_grid(cp, n), float(T))


def finite_differences(positions: np.ndarray, T) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batched forward differences.

    ``positions`` has shape (..., n, 3) and ``T`` broadcasts against the
    leading axes. Returns velocity (..., n-1, 3), speed (..., n-1) and
    acceleration (..., n-2, 3).
    """
    n = positions.shape[-2]
    step = np.asarray(T, dtype=float)[..., None, None] * (1.0 / (n - 1))
    vel = (positions[..., 1:, :] - positions[..., :-1, :]) / step
    acc = (vel[..., 1:, :] - vel[..., :-1, :]) / step
    speed = np.sqrt(np.sum(vel * vel, axis=-1))
    return vel, speed, acc


def kinematics(path: SampledPath) -> Kinematics:
    vel, speed, acc = finite_differences(path.positions, path.T)
    return Kinematics(vel, speed, acc)
