"""Bound-state location for the K = 0 sector operators.

The discrete eigenvalues on either side of the band [0, 24] are the zeros
of the sector determinants (module :mod:`lbs.determinant`).  This module
brackets those zeros on rigorously sufficient search intervals, refines
them by bisection, assembles the full operator spectrum with multiplicity
(the antisymmetric and mixed sectors are unitarily equivalent, so every
antisymmetric root is doubled), and constructs the resolvent-form
eigenfunctions.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import quadrature as quad
from .determinant import CouplingPair, delta_a12, delta_s
from .errors import (
    DegenerateEigenvectorError,
    InconsistencyError,
    NumericError,
    PreconditionError,
)
from .quadrature import QuadratureGrid, afunctions, basis_function, default_grid

SECTORS = ("S", "A12", "MIX")
SIDES = ("below", "above")

#: Number of scan points used to bracket determinant zeros.
SCAN_POINTS = 4000
#: Innermost scan distance from the band edge.
SCAN_EDGE_DISTANCE = 1e-11
#: Roots closer than this to a band edge are reported as threshold-marginal.
MARGINAL_DISTANCE = 1e-9
#: Refined roots must bring the determinant below this magnitude.
ROOT_RESIDUAL_TOL = 1e-10
#: Bisection interval target width.
BISECTION_WIDTH = 1e-12

_EIGENFUNCTION_ROOT_TOL = 1e-8
_DEGENERATE_COMPONENT_TOL = 1e-12


@dataclass(frozen=True)
class SectorSpectrum:
    """Discrete eigenvalues of one sector operator, split by band side.

    Rank bounds cap the list lengths (two per side for the symmetric
    sector, one per side for the rank-one sectors).  Roots within
    MARGINAL_DISTANCE of a band edge appear in ``marginal`` instead of the
    eigenvalue lists, since quadrature accuracy cannot separate them from
    the edge.
    """

    sector: str
    below: tuple
    above: tuple
    marginal: tuple = ()


@dataclass(frozen=True)
class FullSpectrum:
    """K = 0 spectrum of the full operator with multiplicity.

    Antisymmetric roots enter twice (the mixed sector carries a unitary
    copy).  ``coincidences`` lists (side, z_s, z_a12) pairs where a
    symmetric root agrees with an antisymmetric one to within 1e-9; they
    are kept as separate entries.
    """

    below: tuple
    above: tuple
    s: SectorSpectrum
    a12: SectorSpectrum
    coincidences: tuple = ()


def search_interval(c: CouplingPair, side: str) -> tuple[float, float]:
    """Interval guaranteed to contain every eigenvalue on the given side.

    The interaction is a sum of orthogonal rank-one terms with weights mu1,
    mu2, mu2, mu2, so its operator norm is max(|mu1|, |mu2|) and no
    eigenvalue can lie further than that from the band.
    """
    if side not in SIDES:
        raise ValueError(f"side must be 'below' or 'above', got {side!r}")
    r = c.strength() + 1.0
    return (-r, 0.0) if side == "below" else (24.0, 24.0 + r)


def _det_values(det, z: np.ndarray) -> np.ndarray:
    try:
        with warnings.catch_warnings():
            # scalar-only callables may emit conversion warnings before the
            # shape check rejects them; the fallback loop handles those
            warnings.simplefilter("ignore", DeprecationWarning)
            v = np.asarray(det(z), dtype=float)
        if v.shape != z.shape:
            raise TypeError
    except TypeError:
        v = np.array([float(det(t)) for t in z])
    if not np.isfinite(v).all():
        i = int(np.argmin(np.isfinite(v)))
        raise NumericError(f"determinant not finite at z = {z[i]:.12g}")
    return v


def find_determinant_zeros(det, interval: tuple[float, float], max_zeros: int,
                           n_scan: int = SCAN_POINTS) -> list[float]:
    """All zeros of det on the interval, at most max_zeros of them.

    The interval must lie entirely on one side of the band [0, 24]; the
    endpoint adjacent to the band is treated as the edge.  The scan places
    n_scan points at geometrically decreasing distances from the edge
    (spacing proportional to the distance, where the determinant varies
    fastest), brackets sign changes and refines each bracket by bisection
    to width <= 1e-12, polishing further until |det| < 1e-10 where the
    local slope allows.  More sign changes than max_zeros raise
    InconsistencyError, since the rank structure forbids extra zeros.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi:
        raise PreconditionError(f"empty interval ({lo}, {hi})")
    if hi <= 0.0:
        edge, far, orient = hi, lo, -1.0
    elif lo >= 24.0:
        edge, far, orient = lo, hi, 1.0
    else:
        raise PreconditionError(f"interval ({lo}, {hi}) overlaps the band [0, 24]")

    d_max = abs(far - edge)
    if d_max <= SCAN_EDGE_DISTANCE:
        return []
    ratio = (SCAN_EDGE_DISTANCE / d_max) ** (1.0 / (n_scan - 1))
    dists = d_max * ratio ** np.arange(n_scan)
    z = edge + orient * dists
    vals = _det_values(det, z)

    roots = [float(z[i]) for i in np.nonzero(vals == 0.0)[0]]
    change = np.nonzero(vals[:-1] * vals[1:] < 0.0)[0]
    if len(roots) + change.size > max_zeros:
        raise InconsistencyError(
            f"found {len(roots) + change.size} determinant zeros on "
            f"({lo:.6g}, {hi:.6g}) but the rank bound allows {max_zeros}"
        )
    if change.size:
        a = z[change].copy()
        b = z[change + 1].copy()
        fa = vals[change].copy()
        for _ in range(200):
            width = np.abs(b - a)
            mid = 0.5 * (a + b)
            fm = _det_values(det, mid)
            need_more = (width > BISECTION_WIDTH) | (
                (np.abs(fm) > ROOT_RESIDUAL_TOL)
                & (width > 4.0 * np.finfo(float).eps * np.maximum(np.abs(mid), 1.0))
            )
            if not need_more.any():
                break
            left = fa * fm <= 0.0
            b = np.where(need_more & left, mid, b)
            keep_a = ~(need_more & ~left)
            a = np.where(keep_a, a, mid)
            fa = np.where(keep_a, fa, fm)
        roots.extend(float(v) for v in 0.5 * (a + b))
    return sorted(roots)


def _sector_det(sector: str, c: CouplingPair, grid):
    if sector == "S":
        return (lambda z: delta_s(c, z, grid)), 2
    return (lambda z: delta_a12(c.mu2, z, grid)), 1


def sector_spectrum(sector: str, c: CouplingPair,
                    grid: QuadratureGrid | None = None,
                    n_scan: int = SCAN_POINTS) -> SectorSpectrum:
    """Eigenvalues of one sector operator on both sides of the band.

    The MIX sector delegates to A12 (unitary equivalence) and only the
    reported tag differs.
    """
    if sector not in SECTORS:
        raise ValueError(f"sector must be one of {SECTORS}, got {sector!r}")
    det, max_zeros = _sector_det(sector, c, grid)
    below: list[float] = []
    above: list[float] = []
    marginal: list[tuple[str, float]] = []
    for side in SIDES:
        interval = search_interval(c, side)
        roots = find_determinant_zeros(det, interval, max_zeros, n_scan=n_scan)
        edge = 0.0 if side == "below" else 24.0
        for r in roots:
            if abs(r - edge) < MARGINAL_DISTANCE:
                marginal.append((side, r))
            elif side == "below":
                below.append(r)
            else:
                above.append(r)
    return SectorSpectrum(
        sector=sector, below=tuple(below), above=tuple(above), marginal=tuple(marginal)
    )


def full_spectrum_zero_K(c: CouplingPair,
                         grid: QuadratureGrid | None = None,
                         n_scan: int = SCAN_POINTS) -> FullSpectrum:
    """Full K = 0 spectrum: symmetric roots once, antisymmetric roots twice."""
    s = sector_spectrum("S", c, grid, n_scan)
    a12 = sector_spectrum("A12", c, grid, n_scan)
    coincidences = []
    for side in SIDES:
        s_side = getattr(s, side)
        a_side = getattr(a12, side)
        for zs in s_side:
            for za in a_side:
                if abs(zs - za) < MARGINAL_DISTANCE:
                    coincidences.append((side, zs, za))
    below = tuple(sorted(list(s.below) + 2 * list(a12.below)))
    above = tuple(sorted(list(s.above) + 2 * list(a12.above)))
    return FullSpectrum(below=below, above=above, s=s, a12=a12,
                        coincidences=tuple(coincidences))


# ---------------------------------------------------------------------------
# Eigenfunctions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EigenfunctionS:
    """Symmetric-sector eigenfunction in resolvent form.

    f(p) = -(mu1 c1 alpha_S1(p) + mu2 c2 alpha_S2(p)) / (E_0(p) - z), with
    (c1, c2) proportional to (-mu2 a12(z), 1 + mu1 a11(z)) and the overall
    constant fixed by unit quadrature norm on the construction grid.  When
    one coupling channel is switched off, that formula collapses to the
    zero vector; the surviving basis solution is returned instead and
    ``degenerate`` is set.
    """

    coupling: CouplingPair
    z: float
    c1: float
    c2: float
    normalization: float
    degenerate: bool
    grid_n: int

    def __call__(self, p1, p2, p3):
        a1 = basis_function("S1")(p1, p2, p3)
        a2 = basis_function("S2")(p1, p2, p3)
        e = 12.0 - 4.0 * (np.cos(p1) + np.cos(p2) + np.cos(p3))
        return -(self.coupling.mu1 * self.c1 * a1
                 + self.coupling.mu2 * self.c2 * a2) / (e - self.z)

    def system_residual(self) -> float:
        """Euclidean residual of the 2x2 closure system at (c1, c2).

        For the degenerate one-channel case the closure reduces to the
        surviving channel's fixed-point equation and the dead channel's row
        is excluded (its overlap coefficient never enters the function).
        """
        a = afunctions(self.z, default_grid(self.grid_n))
        mu1, mu2 = self.coupling.mu1, self.coupling.mu2
        row1 = (1.0 + mu1 * a.a11) * self.c1 + mu2 * a.a12 * self.c2
        row2 = mu1 * a.a12 * self.c1 + (1.0 + mu2 * a.a22) * self.c2
        scale = math.hypot(self.c1, self.c2)
        if self.degenerate:
            active = row1 if abs(self.c1) >= abs(self.c2) else row2
            return abs(active) / scale
        return math.hypot(row1, row2) / scale


@dataclass(frozen=True)
class EigenfunctionA12:
    """Rank-one-sector eigenfunction -mu2 c alpha3(p) / (E_0(p) - z).

    ``sector`` selects which antisymmetric channel function alpha3 is used
    (A12 or its unitary image MIX); the normalization constant gives the
    function unit quadrature norm.
    """

    mu2: float
    z: float
    sector: str
    normalization: float
    grid_n: int

    def __call__(self, p1, p2, p3):
        a3 = basis_function(self.sector)(p1, p2, p3)
        e = 12.0 - 4.0 * (np.cos(p1) + np.cos(p2) + np.cos(p3))
        return -self.mu2 * self.normalization * a3 / (e - self.z)

    def channel_overlap(self) -> float:
        """Quadrature inner product of f with its own channel function."""
        which = "a12" if self.sector == "A12" else "mix"
        s = quad._resolvent_power_sum(which, self.z, power=1, grid=default_grid(self.grid_n))
        return -self.mu2 * self.normalization * s


def eigenfunction_s(c: CouplingPair, z: float,
                    grid: QuadratureGrid | None = None) -> EigenfunctionS:
    """Normalized symmetric-sector eigenfunction at a located root z."""
    grid = grid if grid is not None else default_grid()
    det_val = delta_s(c, z, grid)
    if abs(det_val) >= _EIGENFUNCTION_ROOT_TOL:
        raise PreconditionError(
            f"z = {z:.12g} is not a determinant root (|delta_s| = {abs(det_val):.3g})"
        )
    a = afunctions(z, grid)
    c1 = -c.mu2 * a.a12
    c2 = 1.0 + c.mu1 * a.a11
    degenerate = max(abs(c1), abs(c2)) < _DEGENERATE_COMPONENT_TOL
    if degenerate:
        # candidate basis vectors must excite at least one live channel
        candidates = []
        if c.mu1 != 0.0:
            candidates.append(((1.0, 0.0), abs(1.0 + c.mu1 * a.a11)))
        if c.mu2 != 0.0:
            candidates.append(((0.0, 1.0), abs(1.0 + c.mu2 * a.a22)))
        candidates = [cand for cand in candidates if cand[1] < _EIGENFUNCTION_ROOT_TOL]
        if not candidates:
            raise DegenerateEigenvectorError(
                f"no usable eigenvector direction at z = {z:.12g} "
                f"for couplings ({c.mu1:.6g}, {c.mu2:.6g})"
            )
        (c1, c2), _ = min(candidates, key=lambda cand: cand[1])
    # quadrature norm of the unnormalized function
    s11 = quad._resolvent_power_sum("11", z, power=2, grid=grid)
    s12 = quad._resolvent_power_sum("12", z, power=2, grid=grid)
    s22 = quad._resolvent_power_sum("22", z, power=2, grid=grid)
    w1 = c.mu1 * c1
    w2 = c.mu2 * c2
    norm2 = w1 * w1 * s11 + 2.0 * w1 * w2 * s12 + w2 * w2 * s22
    if norm2 <= 0.0:
        raise DegenerateEigenvectorError(f"eigenfunction has zero norm at z = {z:.12g}")
    scale = 1.0 / math.sqrt(norm2)
    return EigenfunctionS(coupling=c, z=float(z), c1=scale * c1, c2=scale * c2,
                          normalization=scale, degenerate=degenerate,
                          grid_n=grid.n_per_axis)


def eigenfunction_a12(mu2: float, z: float, sector: str = "A12",
                      grid: QuadratureGrid | None = None) -> EigenfunctionA12:
    """Normalized antisymmetric- or mixed-sector eigenfunction at a root z."""
    if sector not in ("A12", "MIX"):
        raise ValueError(f"sector must be 'A12' or 'MIX', got {sector!r}")
    grid = grid if grid is not None else default_grid()
    det_val = delta_a12(mu2, z, grid)
    if abs(det_val) >= _EIGENFUNCTION_ROOT_TOL:
        raise PreconditionError(
            f"z = {z:.12g} is not a determinant root (|delta_a12| = {abs(det_val):.3g})"
        )
    which = "a12" if sector == "A12" else "mix"
    s2 = quad._resolvent_power_sum(which, z, power=2, grid=grid)
    norm2 = mu2 * mu2 * s2
    if norm2 <= 0.0:
        raise DegenerateEigenvectorError(f"eigenfunction has zero norm at z = {z:.12g}")
    return EigenfunctionA12(mu2=float(mu2), z=float(z), sector=sector,
                            normalization=1.0 / math.sqrt(norm2),
                            grid_n=grid.n_per_axis)
