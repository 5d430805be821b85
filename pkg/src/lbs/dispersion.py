"""Two-particle dispersion on the momentum torus and the essential-spectrum band.

The relative-motion kernel of two bosons hopping on Z^3 with total
quasi-momentum K acts by multiplication with

    E_K(p) = 4 * sum_i (1 - cos(K_i/2) * cos(p_i)),

so the essential spectrum of the interacting fiber operator is the range
[E_min(K), E_max(K)] of this function.  Energies are dimensionless lattice
units throughout; no unit system is introduced.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


def normalize_angle(x: float) -> float:
    """Map an angle to the canonical torus interval [-pi, pi)."""
    y = math.fmod(x + math.pi, TWO_PI)
    if y < 0.0:
        y += TWO_PI
    return y - math.pi


@dataclass(frozen=True)
class Quasimomentum:
    """Total quasi-momentum K; components are normalized to [-pi, pi)."""

    k1: float
    k2: float
    k3: float

    def __post_init__(self):
        object.__setattr__(self, "k1", normalize_angle(self.k1))
        object.__setattr__(self, "k2", normalize_angle(self.k2))
        object.__setattr__(self, "k3", normalize_angle(self.k3))

    def components(self) -> tuple[float, float, float]:
        return (self.k1, self.k2, self.k3)

    def half_cosines(self) -> tuple[float, float, float]:
        # cos(k/2) >= 0 on [-pi, pi), which keeps the band-edge formulas branch-free
        return tuple(math.cos(0.5 * k) for k in self.components())


@dataclass(frozen=True)
class MomentumPoint:
    """Relative momentum p; same normalization as :class:`Quasimomentum`."""

    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        object.__setattr__(self, "p1", normalize_angle(self.p1))
        object.__setattr__(self, "p2", normalize_angle(self.p2))
        object.__setattr__(self, "p3", normalize_angle(self.p3))

    def components(self) -> tuple[float, float, float]:
        return (self.p1, self.p2, self.p3)


@dataclass(frozen=True)
class Band:
    """Essential-spectrum interval [e_min, e_max] of a fiber operator."""

    e_min: float
    e_max: float

    def __post_init__(self):
        if not self.e_min <= self.e_max:
            raise ValueError(f"band edges out of order: {self.e_min} > {self.e_max}")

    @property
    def width(self) -> float:
        return self.e_max - self.e_min

    def contains(self, z: float) -> bool:
        return self.e_min <= z <= self.e_max


GAMMA = Quasimomentum(0.0, 0.0, 0.0)

#: Band of the K = 0 fiber operator, [0, 24].
ZERO_K_BAND = Band(0.0, 24.0)


def dispersion(K: Quasimomentum, p: MomentumPoint) -> float:
    """Evaluate E_K(p) = 4 * sum_i (1 - cos(K_i/2) cos p_i); always in [0, 24]."""
    ck = K.half_cosines()
    pc = p.components()
    return 4.0 * sum(1.0 - ck[i] * math.cos(pc[i]) for i in range(3))


def dispersion_values(K: Quasimomentum, p1, p2, p3) -> np.ndarray:
    """Vectorized dispersion over coordinate arrays (broadcasting)."""
    c1, c2, c3 = K.half_cosines()
    return 4.0 * (
        (1.0 - c1 * np.cos(p1)) + (1.0 - c2 * np.cos(p2)) + (1.0 - c3 * np.cos(p3))
    )


def band_edges(K: Quasimomentum) -> Band:
    """Essential-spectrum band of the fiber at quasi-momentum K.

    The extrema of E_K are attained at p = 0 and p = (pi, pi, pi) because
    cos(K_i/2) >= 0 for normalized components.
    """
    ck = K.half_cosines()
    e_min = 4.0 * sum(1.0 - c for c in ck)
    e_max = 4.0 * sum(1.0 + c for c in ck)
    return Band(e_min, e_max)


def reflect_momentum(p: MomentumPoint) -> MomentumPoint:
    """Shift every component by pi (an involution on the torus).

    Conjugating with this shift maps E_0 to 24 - E_0, the source of the
    spectral mirror symmetry used throughout the package.
    """
    return MomentumPoint(p.p1 + math.pi, p.p2 + math.pi, p.p3 + math.pi)
