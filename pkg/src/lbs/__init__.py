"""Discrete spectrum of the two-boson lattice Schrodinger operator on Z^3.

The package locates the bound states (eigenvalues outside the essential
band) of the K-fiber operators of two identical bosons with on-site and
nearest-neighbour couplings (mu1, mu2), classifies coupling pairs into the
constant-eigenvalue-count regions of the coupling plane, and verifies every
count against an independent dense grid diagonalization.
"""

__version__ = "0.1.0"

from .dispersion import (
    Band,
    MomentumPoint,
    Quasimomentum,
    band_edges,
    dispersion,
    reflect_momentum,
)
from .determinant import CouplingPair, ThresholdPolynomials, delta_a12, delta_s, threshold_polys
from .quadrature import AFunctions, QuadratureGrid, a_a12, a_bessel, a_s, afunctions, integrate_torus
from .regions import RegionReport, classify, critical_curve, inclusion_checks, phase_scan
from .spectrum import (
    SectorSpectrum,
    eigenfunction_a12,
    eigenfunction_s,
    find_determinant_zeros,
    full_spectrum_zero_K,
    search_interval,
    sector_spectrum,
)
from .oracle import GridHamiltonian, assemble, eigenvalues_dense, minmax_profile, oracle_counts

__all__ = [
    "AFunctions",
    "Band",
    "CouplingPair",
    "GridHamiltonian",
    "MomentumPoint",
    "Quasimomentum",
    "QuadratureGrid",
    "RegionReport",
    "SectorSpectrum",
    "ThresholdPolynomials",
    "a_a12",
    "a_bessel",
    "a_s",
    "afunctions",
    "assemble",
    "band_edges",
    "classify",
    "critical_curve",
    "delta_a12",
    "delta_s",
    "dispersion",
    "eigenfunction_a12",
    "eigenfunction_s",
    "eigenvalues_dense",
    "find_determinant_zeros",
    "full_spectrum_zero_K",
    "inclusion_checks",
    "integrate_torus",
    "minmax_profile",
    "oracle_counts",
    "phase_scan",
    "reflect_momentum",
    "search_interval",
    "sector_spectrum",
    "threshold_polys",
]
