"""Air-to-ground expected-rate channel model and data/energy accounting."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EPS_DIST = 1e-6  # metres


class DegenerateGeometryError(ValueError):
    """UAV sample coincides with a ground node."""


@dataclass(frozen=True)
class GroundNode:
    position: tuple[float, float, float]
    Q_th: float = 40e6  # bits
    R_th: float = 1e6  # bits/s

    def __post_init__(self):
        object.__setattr__(self, "position", tuple(float(c) for c in self.position))
        if self.Q_th < 0:
            raise ValueError("data requirement must be non-negative")
        if not self.R_th > 0:
            raise ValueError("rate threshold must be positive")


@dataclass(frozen=True)
class ChannelParams:
    B: float = 1e6
    a: float = 10.0
    b: float = 0.6
    kappa: float = 0.2
    alpha: float = 2.3
    reference_snr_db: float = 52.5
    P_com: float = 5.0

    def __post_init__(self):
        if not self.B > 0:
            raise ValueError("bandwidth must be positive")
        if not 0 < self.kappa < 1:
            raise ValueError("kappa must lie in (0, 1)")
        if self.alpha < 2:
            raise ValueError("path-loss exponent must be >= 2")
        if self.P_com < 0:
            raise ValueError("P_com must be non-negative")

    @property
    def gamma0(self) -> float:
        return 10.0 ** (self.reference_snr_db / 10.0)


def _distance(q, u) -> np.ndarray:
    d = np.sqrt(np.sum((np.asarray(q, float) - np.asarray(u, float)) ** 2, axis=-1))
    if np.any(d < EPS_DIST):
        raise DegenerateGeometryError("UAV position coincides with a ground node")
    return d


def _elevation(dz, d):
    return np.degrees(np.arcsin(np.clip(dz / d, -1.0, 1.0)))


def elevation_angle(q, u) -> float:
    """Elevation of ``q`` seen from ``u``, in degrees."""
    q = np.asarray(q, float)
    u = np.asarray(u, float)
    return float(_elevation(q[2] - u[2], _distance(q, u)))


def los_probability(theta, params: ChannelParams):
    return 1.0 / (1.0 + params.a * np.exp(-params.b * (theta - params.a)))


def regularized_los(theta, params: ChannelParams):
    return params.kappa + (1.0 - params.kappa) * los_probability(theta, params)


def rate_from_geometry(dz, d, params: ChannelParams):
    """Expected-rate bound given vertical offset ``dz`` and distance ``d`` (arrays)."""
    p_hat = regularized_los(_elevation(dz, d), params)
    return params.B * np.log2(1.0 + params.gamma0 * p_hat / d**params.alpha)


def expected_rate(q, node: GroundNode, params: ChannelParams) -> float:
    q = np.asarray(q, float)
    u = np.asarray(node.position)
    return float(rate_from_geometry(q[2] - u[2], _distance(q, u), params))


def rates_batch(positions: np.ndarray, node_positions: np.ndarray, params: ChannelParams) -> np.ndarray:
    """Expected rate for positions (..., n, 3) against K nodes; returns (..., K, n)."""
    diff = positions[..., None, :, :] - node_positions[:, None, :]
    d = np.sqrt(np.sum(diff * diff, axis=-1))
    if np.any(d < EPS_DIST):
        raise DegenerateGeometryError("UAV position coincides with a ground node")
    return rate_from_geometry(diff[..., 2], d, params)


@dataclass(frozen=True)
class LinkTrace:
    rates: np.ndarray  # (K, n) bits/s
    active: np.ndarray  # (K, n) bool
    collected: np.ndarray  # (K,) bits
    T: float

    @property
    def dt_bar(self) -> float:
        return 1.0 / (self.rates.shape[1] - 1)


def accumulate(rates: np.ndarray, thresholds: np.ndarray, T) -> tuple[np.ndarray, np.ndarray]:
    """Rectangle-rule data totals over all n samples.

    ``rates`` is (..., K, n); returns active mask and collected bits (..., K).
    """
    n = rates.shape[-1]
    active = rates >= thresholds[:, None]
    weight = np.asarray(T, float)[..., None] * (1.0 / (n - 1))
    collected = weight * np.sum(np.where(active, rates, 0.0), axis=-1)
    return active, collected


def link_trace(path, nodes: list[GroundNode], params: ChannelParams) -> LinkTrace:
    node_pos = np.array([nd.position for nd in nodes], dtype=float).reshape(-1, 3)
    thresholds = np.array([nd.R_th for nd in nodes], dtype=float)
    rates = rates_batch(path.positions, node_pos, params)
    active, collected = accumulate(rates, thresholds, path.T)
    return LinkTrace(rates, active, collected, path.T)


def comm_energy(trace: LinkTrace, T: float, params: ChannelParams) -> float:
    n = trace.active.shape[-1]
    return float(T * (1.0 / (n - 1)) * params.P_com * np.sum(trace.active))
