"""Hopf coordinates on the unit 3-sphere, the round cometric and Clifford tori.

A point is ``(rho, theta1, theta2)`` with ``z = sqrt(rho) e^{i theta1}`` and
``w = sqrt(1 - rho) e^{i theta2}``.  In these coordinates the round metric is

    d rho^2 / (4 rho (1 - rho)) + rho d theta1^2 + (1 - rho) d theta2^2,

so the normalised volume is ``d rho d theta1 d theta2 / (4 pi^2)`` and each
torus ``|z|^2 = rho`` carries the probability measure
``d theta1 d theta2 / (4 pi^2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

TWO_PI = 2.0 * math.pi


class SingularCoordinateError(ValueError):
    """Angular covector evaluated where its circle has collapsed (rho = 0 or 1)."""


def _check_rho(rho: float) -> None:
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")


@dataclass(frozen=True)
class HopfPoint:
    rho: float
    theta1: float = 0.0
    theta2: float = 0.0

    def __post_init__(self):
        _check_rho(self.rho)
        object.__setattr__(self, "theta1", float(self.theta1) % TWO_PI)
        object.__setattr__(self, "theta2", float(self.theta2) % TWO_PI)

    @property
    def phi(self) -> float:
        """Relative phase ``theta1 - theta2``."""
        return self.theta1 - self.theta2


@dataclass(frozen=True)
class CotangentVector:
    eta: float
    xi1: float
    xi2: float

    def __post_init__(self):
        if not all(math.isfinite(c) for c in (self.eta, self.xi1, self.xi2)):
            raise ValueError("cotangent components must be finite")


@dataclass(frozen=True)
class CliffordTorus:
    rho: float

    def __post_init__(self):
        _check_rho(self.rho)

    def point(self, theta1: float, theta2: float) -> HopfPoint:
        return HopfPoint(self.rho, theta1, theta2)


def embed(p: HopfPoint) -> np.ndarray:
    """Point of S^3 in R^4 as ``(x1, y1, x2, y2)``."""
    r1 = math.sqrt(p.rho)
    r2 = math.sqrt(1.0 - p.rho)
    return np.array(
        [r1 * math.cos(p.theta1), r1 * math.sin(p.theta1), r2 * math.cos(p.theta2), r2 * math.sin(p.theta2)]
    )


def embed_array(rho, theta1, theta2) -> np.ndarray:
    """Vectorised :func:`embed`; last axis holds ``(x1, y1, x2, y2)``."""
    rho, theta1, theta2 = np.broadcast_arrays(rho, theta1, theta2)
    r1 = np.sqrt(rho)
    r2 = np.sqrt(1.0 - rho)
    return np.stack([r1 * np.cos(theta1), r1 * np.sin(theta1), r2 * np.cos(theta2), r2 * np.sin(theta2)], axis=-1)


def to_hopf(x) -> HopfPoint:
    """Inverse of :func:`embed` for a unit vector of R^4."""
    x1, y1, x2, y2 = (float(c) for c in x)
    rho = min(1.0, max(0.0, x1 * x1 + y1 * y1))
    return HopfPoint(rho, math.atan2(y1, x1), math.atan2(y2, x2))


def cometric_norm_sq(p: HopfPoint, v: CotangentVector) -> float:
    """Squared round-metric length ``4 rho (1-rho) eta^2 + xi1^2/rho + xi2^2/(1-rho)``."""
    rho = p.rho
    out = 4.0 * rho * (1.0 - rho) * v.eta * v.eta
    if v.xi1 != 0.0:
        if rho == 0.0:
            raise SingularCoordinateError("xi1 component at rho = 0")
        out += v.xi1 * v.xi1 / rho
    if v.xi2 != 0.0:
        if rho == 1.0:
            raise SingularCoordinateError("xi2 component at rho = 1")
        out += v.xi2 * v.xi2 / (1.0 - rho)
    return out


def xi_rho(rho: float) -> CotangentVector:
    """The unit covector ``(0, rho, 1 - rho)`` tangent to the torus at ``rho``."""
    _check_rho(rho)
    return CotangentVector(0.0, rho, 1.0 - rho)


@dataclass(frozen=True)
class GridSpec:
    """Tensor-product rule: Gauss-Legendre in psi (rho = sin^2 psi), trapezoid in angles."""

    n_psi: int = 64
    n_theta: int = 64

    def __post_init__(self):
        if self.n_psi < 1 or self.n_theta < 1:
            raise ValueError(f"degenerate grid {self}")

    def psi_nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """``(rho, weight)`` with ``sum(weight * h(rho)) ~ int_0^1 h(rho) d rho``."""
        x, w = np.polynomial.legendre.leggauss(self.n_psi)
        psi = (x + 1.0) * (math.pi / 4.0)
        w = w * (math.pi / 4.0) * np.sin(2.0 * psi)
        return np.sin(psi) ** 2, w

    def theta_nodes(self) -> np.ndarray:
        return np.arange(self.n_theta) * (TWO_PI / self.n_theta)


def volume_integral(g: Callable, grid: GridSpec = GridSpec()) -> complex:
    """``int_{S^3} g dVol`` with ``Vol(S^3) = 1``.

    ``g(rho, theta1, theta2)`` must accept broadcastable arrays.
    """
    rho, w = grid.psi_nodes()
    th = grid.theta_nodes()
    vals = np.broadcast_to(
        g(rho[:, None, None], th[None, :, None], th[None, None, :]), (rho.size, th.size, th.size)
    )
    per_rho = vals.mean(axis=(1, 2))
    return complex(np.dot(w, per_rho))


def torus_average(g: Callable, rho: float, n_theta: int = 64) -> complex:
    """Mean of ``g(theta1, theta2)`` over the torus ``T_rho`` (probability measure)."""
    _check_rho(rho)
    if n_theta < 1:
        raise ValueError("n_theta must be >= 1")
    th = np.arange(n_theta) * (TWO_PI / n_theta)
    vals = np.broadcast_to(g(th[:, None], th[None, :]), (n_theta, n_theta))
    return complex(vals.mean())
