"""Bound-state determinants of the sector operators and threshold polynomials.

An energy z outside the band [0, 24] is an eigenvalue of the symmetric
sector exactly when

    delta_s(z) = (1 + mu1 a11(z)) (1 + mu2 a22(z)) - mu1 mu2 a12(z)^2 = 0,

and of the antisymmetric (and the unitarily equivalent mixed) sector when

    delta_a12(z) = 1 + mu2 a_a12(z) = 0.

The band-edge limits of delta_s are quadratic polynomials in the couplings,

    A_minus(mu1, mu2) = lim_{z -> 0-} delta_s(z),
    A_plus(mu1, mu2)  = lim_{z -> 24+} delta_s(z),

which factor over the hyperbolas that organize the coupling-plane phase
diagram; their structural constants mu0 and mu2_crit = 1 / a_a12(0) are
derived from the band-edge moments, computed once per process via the
Laplace--Bessel path and cached.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .quadrature import QuadratureGrid, a_batch, _laplace_a_batch


@dataclass(frozen=True)
class CouplingPair:
    """On-site strength mu1 and nearest-neighbour strength mu2."""

    mu1: float
    mu2: float

    def __post_init__(self):
        if not (math.isfinite(self.mu1) and math.isfinite(self.mu2)):
            raise ValueError(f"couplings must be finite, got ({self.mu1}, {self.mu2})")

    def negated(self) -> "CouplingPair":
        return CouplingPair(-self.mu1, -self.mu2)

    def strength(self) -> float:
        """Operator norm of the interaction: max(|mu1|, |mu2|)."""
        return max(abs(self.mu1), abs(self.mu2))


@dataclass(frozen=True)
class ThresholdPolynomials:
    """Band-edge determinant limits and the structural constants.

    a_minus / a_plus are the z -> 0- and z -> 24+ limits of the symmetric
    determinant at the given couplings; mu0 is the hyperbola offset
    24 a11(0) / (12 a11(0) - 1) and mu2_crit = 1 / a_a12(0) is the critical
    nearest-neighbour coupling of the antisymmetric channel.
    """

    a_minus: float
    a_plus: float
    mu0: float
    mu2_crit: float


@lru_cache(maxsize=1)
def band_edge_constants() -> dict:
    """Moments at the lower band edge z = 0, via the Bessel path (cached).

    a12(0) and a22(0) are derived from a11(0) through the exact algebraic
    relations a12 = sqrt(6) a11 - 1/(2 sqrt(6)) and a22 = 6 a11 - 1/2, so
    the factored and expanded threshold polynomials stay consistent to
    rounding; their directly integrated values agree to ~1e-9 and serve as
    a cross-check in the test suite.
    """
    vals = _laplace_a_batch(np.array([0.0]))
    a11 = float(vals[0][0])
    aa = float(vals[3][0])
    a12 = math.sqrt(6.0) * a11 - 1.0 / (2.0 * math.sqrt(6.0))
    a22 = 6.0 * a11 - 0.5
    return {"a11_0": a11, "a12_0": a12, "a22_0": a22, "a_a12_0": aa}


@lru_cache(maxsize=1)
def structural_constants() -> dict:
    """Band-edge moments plus mu0 and mu2_crit (cached, read-only)."""
    consts = dict(band_edge_constants())
    a11_0 = consts["a11_0"]
    consts["mu0"] = 24.0 * a11_0 / (12.0 * a11_0 - 1.0)
    consts["mu2_crit"] = 1.0 / consts["a_a12_0"]
    return consts


def delta_s(c: CouplingPair, z, grid: QuadratureGrid | None = None):
    """Symmetric-sector determinant at z (scalar or array), z outside [0, 24]."""
    a11, a12, a22, _ = a_batch(z, grid)
    val = (1.0 + c.mu1 * a11) * (1.0 + c.mu2 * a22) - c.mu1 * c.mu2 * a12**2
    return float(val[0]) if np.isscalar(z) or np.ndim(z) == 0 else val


def delta_a12(mu2: float, z, grid: QuadratureGrid | None = None):
    """Antisymmetric-sector determinant 1 + mu2 a_a12(z) (scalar or array)."""
    _, _, _, aa = a_batch(z, grid)
    val = 1.0 + mu2 * aa
    return float(val[0]) if np.isscalar(z) or np.ndim(z) == 0 else val


def threshold_polys(c: CouplingPair) -> ThresholdPolynomials:
    """Band-edge limits of delta_s in factored form, plus mu0 and mu2_crit.

    A_minus = (12 a11(0) - 1)/24 * ((mu2 + mu0)(mu1 + 12) - 24)
    A_plus  = (12 a11(0) - 1)/24 * ((mu2 - mu0)(mu1 - 12) - 24)
    """
    consts = structural_constants()
    lead = (12.0 * consts["a11_0"] - 1.0) / 24.0
    mu0 = consts["mu0"]
    a_minus = lead * ((c.mu2 + mu0) * (c.mu1 + 12.0) - 24.0)
    a_plus = lead * ((c.mu2 - mu0) * (c.mu1 - 12.0) - 24.0)
    return ThresholdPolynomials(
        a_minus=a_minus, a_plus=a_plus, mu0=mu0, mu2_crit=consts["mu2_crit"]
    )


def threshold_polys_expanded(c: CouplingPair) -> tuple[float, float]:
    """The same limits from the expanded quadratic form,

        A_-/+ = 1 +/- (a11(0) mu1 + a22(0) mu2)
                + (a11(0) a22(0) - a12(0)^2) mu1 mu2,

    kept separate from the factored form so the two can be cross-checked.
    """
    k = band_edge_constants()
    quad = k["a11_0"] * k["a22_0"] - k["a12_0"] ** 2
    lin = k["a11_0"] * c.mu1 + k["a22_0"] * c.mu2
    return 1.0 + lin + quad * c.mu1 * c.mu2, 1.0 - lin + quad * c.mu1 * c.mu2
