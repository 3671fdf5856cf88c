"""Rotary-wing propulsion power and discretised flight energy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class UavParams:
    W: float = 20.0  # N
    rho: float = 1.225  # kg/m^3
    zeta: float = 0.4  # rotor radius, m
    A: float = 0.503  # disc area, m^2
    Omega: float = 300.0  # rad/s
    U_tip: float = 120.0  # m/s
    s: float = 0.05
    d0: float = 0.6
    l: float = 0.1
    v0: float = 4.03  # m/s
    delta: float = 0.012
    P2: float = 11.46  # W per m/s of vertical speed
    v_max: float = 30.0
    a_x_max: float = 2.0
    a_y_max: float = 2.0
    a_z_max: float = 2.0

    def __post_init__(self):
        for name in ("W", "rho", "zeta", "A", "Omega", "U_tip", "s", "d0", "v0", "delta", "P2", "v_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.l < 0:
            raise ValueError("l must be non-negative")
        for name in ("a_x_max", "a_y_max", "a_z_max"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")

    @property
    def P0(self) -> float:
        return self.delta / 8.0 * self.rho * self.s * self.A * self.Omega**3 * self.zeta**3

    @property
    def P1(self) -> float:
        return (1.0 + self.l) * self.W**1.5 / np.sqrt(2.0 * self.rho * self.A)

    @property
    def a_max(self) -> np.ndarray:
        return np.array([self.a_x_max, self.a_y_max, self.a_z_max])


def derive_hover_powers(params: UavParams) -> tuple[float, float]:
    return params.P0, params.P1


def propulsion_power(v_xy, v_z, params: UavParams):
    """Power draw in watts for horizontal speed ``v_xy`` and vertical speed ``v_z``.

    Works elementwise on arrays.
    """
    v_xy = np.asarray(v_xy, dtype=float)
    v_z = np.asarray(v_z, dtype=float)
    p = params
    parasite = 0.5 * p.d0 * p.rho * p.s * p.A * v_xy**3
    profile = p.P0 * (1.0 + 3.0 * v_xy**2 / p.U_tip**2)
    # sqrt(1 + y^2) - y == 1 / (sqrt(1 + y^2) + y); the right side avoids cancellation
    y = v_xy**2 / (2.0 * p.v0**2)
    induced = p.P1 * np.sqrt(1.0 / (np.sqrt(1.0 + y * y) + y))
    vertical = p.P2 * np.abs(v_z)
    out = parasite + profile + induced + vertical
    return out if out.ndim else float(out)


def power_from_velocity(vel: np.ndarray, params: UavParams) -> np.ndarray:
    """Power for velocity vectors (..., 3)."""
    v_xy = np.sqrt(vel[..., 0] ** 2 + vel[..., 1] ** 2)
    return propulsion_power(v_xy, vel[..., 2], params)


def flight_energy(kin, T: float, params: UavParams) -> float:
    """Rectangle-rule energy over the n-1 forward-difference velocity samples."""
    n = kin.velocity.shape[0] + 1
    return float(T * (1.0 / (n - 1)) * np.sum(power_from_velocity(kin.velocity, params)))
