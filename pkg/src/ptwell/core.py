"""Domain types and the complex step potential.

Units are hbar = 2m = 1, so the Schrodinger operator is -d^2/dx^2 + V(x).
The well occupies (-L, L) with Dirichlet walls; the imaginary barrier is
-i g on (-l, 0) and +i g on (0, l).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class DomainError(ValueError):
    """Argument outside the region where an operation is defined."""


class Region(enum.Enum):
    L2 = "L2"
    L1 = "L1"
    R1 = "R1"
    R2 = "R2"

    def interval(self, cfg: "WellConfig") -> tuple[float, float]:
        L, l = cfg.L, cfg.l
        return {
            Region.L2: (-L, -l),
            Region.L1: (-l, 0.0),
            Region.R1: (0.0, l),
            Region.R2: (l, L),
        }[self]


@dataclass(frozen=True)
class WellConfig:
    """Half-width ``L`` of the box, half-width ``l`` of the barrier, strength ``g``."""

    L: float = 1.0
    l: float = 0.5
    g: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0):
            raise DomainError(f"L must be positive, got {self.L}")
        if not (0 < self.l < self.L):
            raise DomainError(f"need 0 < l < L, got l={self.l}, L={self.L}")
        if not (math.isfinite(self.g) and self.g >= 0):
            raise DomainError(f"g must be non-negative, got {self.g}")

    def with_g(self, g: float) -> "WellConfig":
        return WellConfig(self.L, self.l, g)

    @property
    def matching_points(self) -> tuple[float, float, float]:
        return (-self.l, 0.0, self.l)


@dataclass(frozen=True)
class SpectralRoot:
    """One real bound state on the hyperbola ``2 s t = g``.

    ``kappa = s + i t`` is the complex wavenumber inside the barrier and
    ``k`` the real one outside it; ``E = k**2 = t**2 - s**2``.
    """

    s: float
    t: float
    k: float
    E: float
    index: int = 0

    @property
    def kappa(self) -> complex:
        return complex(self.s, self.t)

    @property
    def g(self) -> float:
        return 2.0 * self.s * self.t


def classify_region(cfg: WellConfig, x: float) -> Region:
    L, l = cfg.L, cfg.l
    if not -L < x < L:
        raise DomainError(f"x={x} outside (-{L}, {L})")
    if x in (-l, 0.0, l):
        raise DomainError(f"x={x} is a matching point")
    if x < -l:
        return Region.L2
    if x < 0:
        return Region.L1
    if x < l:
        return Region.R1
    return Region.R2


def potential_value(cfg: WellConfig, x: float) -> complex:
    """V(x) inside the box; at a jump the mean of the one-sided limits."""
    if not -cfg.L < x < cfg.L:
        raise DomainError(f"x={x} outside (-{cfg.L}, {cfg.L})")
    return complex(potential_array(cfg, np.array([x]))[0])


def potential_array(cfg: WellConfig, x, jump_atol: float = 0.0) -> np.ndarray:
    """Vectorized ``potential_value`` without the domain check.

    Points within ``jump_atol`` of a matching point get the jump-mean value;
    grid builders pass a small tolerance so nodes that should sit on a jump
    are not pushed to one side by rounding.
    """
    x = np.asarray(x, dtype=float)
    l, g = cfg.l, cfg.g
    v = np.zeros(x.shape, dtype=complex)
    v[(x > 0) & (x < l)] = 1j * g
    v[(x < 0) & (x > -l)] = -1j * g
    v[np.abs(x - l) <= jump_atol] = 0.5j * g
    v[np.abs(x + l) <= jump_atol] = -0.5j * g
    v[np.abs(x) <= jump_atol] = 0.0
    return v
