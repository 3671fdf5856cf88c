"""Sum-of-Gaussians terrain heightmap."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class GaussianBump:
    A: float
    mu_x: float
    mu_y: float
    sigma_x: float
    sigma_y: float

    def __post_init__(self):
        if not (self.sigma_x > 0 and self.sigma_y > 0):
            raise ValueError("bump spreads must be positive")
        if self.A < 0:
            raise ValueError("bump amplitude must be non-negative")


@dataclass(frozen=True)
class TerrainMap:
    """Ground altitude as a sum of axis-aligned Gaussian bumps.

    The altitude function is total over the plane; keeping trajectories inside
    ``[0, U_x] x [0, U_y]`` is the caller's responsibility.
    """

    bumps: tuple[GaussianBump, ...] = field(default_factory=tuple)
    U_x: float = 800.0
    U_y: float = 800.0
    U_z: float = 122.0

    def __post_init__(self):
        object.__setattr__(self, "bumps", tuple(self.bumps))
        if not (self.U_x > 0 and self.U_y > 0 and self.U_z > 0):
            raise ValueError("terrain bounds must be positive")

    def altitude(self, x: float, y: float) -> float:
        return float(self.altitude_batch(np.array([x], dtype=float), np.array([y], dtype=float))[0])

    def altitude_batch(self, xs, ys) -> np.ndarray:
        """Vectorised altitude; ``xs`` and ``ys`` may have any matching shape."""
        xs = np.asarray(xs, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if xs.shape != ys.shape:
            raise ValueError(f"shape mismatch: xs {xs.shape} vs ys {ys.shape}")
        out = np.zeros(xs.shape)
        # bump-by-bump accumulation keeps every element's summation order fixed
        for b in self.bumps:
            ex = (xs - b.mu_x) ** 2 / (2.0 * b.sigma_x**2)
            ey = (ys - b.mu_y) ** 2 / (2.0 * b.sigma_y**2)
            out = out + b.A * np.exp(-(ex + ey))
        return out

    def flattened(self) -> "TerrainMap":
        """Same bounds, zero ground everywhere (the 2D variant)."""
        return TerrainMap((), self.U_x, self.U_y, self.U_z)


def altitude(terrain: TerrainMap, x: float, y: float) -> float:
    return terrain.altitude(x, y)


def altitude_batch(terrain: TerrainMap, xs, ys) -> np.ndarray:
    return terrain.altitude_batch(xs, ys)


def default_terrain() -> TerrainMap:
    """Three 150 m hills on an 800 m x 800 m area with a 122 m ceiling."""
    bumps = (
        GaussianBump(150.0, 200.0, 500.0, 90.0, 90.0),
        GaussianBump(150.0, 600.0, 500.0, 90.0, 90.0),
        GaussianBump(150.0, 400.0, 200.0, 90.0, 90.0),
    )
    return TerrainMap(bumps, 800.0, 800.0, 122.0)
