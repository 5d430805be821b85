"""Coupling-plane phase diagram: critical curves and eigenvalue-count regions.

Two hyperbola branches per band side partition the (mu1, mu2) plane into
regions where the symmetric sector carries 0, 1 or 2 bound states:

    mu2_minus(mu1) = 24 / (mu1 + 12) - mu0     (below the band)
    mu2_plus(mu1)  = 24 / (mu1 - 12) + mu0     (above the band)

while the critical points -mu2_crit and +mu2_crit split the mu2 axis into
intervals with 0 or 1 antisymmetric-sector bound state per side.  Derived
"d" labels (per-side totals 0..3) and "g" labels (simultaneous below/above
pairs) follow the tabulated labeling convention, whose 3-count class is
confined to the mu1 = 0 axis; because that convention conflicts with
per-sector arithmetic off the axis, classification also reports
``sector_sum``, the per-side totals computed directly from the region
memberships (symmetric count + twice the antisymmetric count).  Ground
truth for counts is always the determinant computation; the d/g labels
are reported as metadata of the labeling convention.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .determinant import CouplingPair, structural_constants
from .errors import PoleError

#: Couplings closer than this (in mu2 distance) to a curve or critical
#: point get boundary flags and undefined counts.
BOUNDARY_TOL = 1e-9

_FLAGS = ("OnTauMinus", "OnTauPlus", "OnBMinus", "OnBPlus")


@dataclass(frozen=True)
class RegionReport:
    """Region memberships of one coupling pair.

    Count fields are None when the point sits on the corresponding
    boundary (the flag in ``boundary`` says which).  ``sector_sum`` is the
    (below, above) eigenvalue total predicted from the memberships, with
    None entries when a contributing membership is undefined.
    """

    coupling: CouplingPair
    a_minus: int | None
    a_plus: int | None
    b_minus: int | None
    b_plus: int | None
    d_minus: int | None
    d_plus: int | None
    g_label: tuple | None
    boundary: frozenset
    sector_sum: tuple


def critical_curve(side: str, mu1: float) -> float:
    """Critical hyperbola value mu2 at the given mu1; poles at mu1 = -/+12."""
    if side not in ("minus", "plus"):
        raise ValueError(f"side must be 'minus' or 'plus', got {side!r}")
    mu0 = structural_constants()["mu0"]
    if side == "minus":
        if mu1 == -12.0:
            raise PoleError("mu2_minus has a pole at mu1 = -12")
        return 24.0 / (mu1 + 12.0) - mu0
    if mu1 == 12.0:
        raise PoleError("mu2_plus has a pole at mu1 = 12")
    return 24.0 / (mu1 - 12.0) + mu0


def _a_membership(side: str, mu1: float, mu2: float) -> tuple[int | None, bool]:
    """Zone index (0, 1, 2) for one band side, or None on the curve."""
    pole = -12.0 if side == "minus" else 12.0
    if mu1 == pole:
        return 1, False
    curve = critical_curve(side, mu1)
    if abs(mu2 - curve) < BOUNDARY_TOL:
        return None, True
    if side == "minus":
        if mu1 > pole:
            return (0 if mu2 > curve else 1), False
        return (1 if mu2 > curve else 2), False
    if mu1 < pole:
        return (0 if mu2 < curve else 1), False
    return (1 if mu2 < curve else 2), False


def _b_membership(side: str, mu2: float) -> tuple[int | None, bool]:
    crit = structural_constants()["mu2_crit"]
    point = -crit if side == "minus" else crit
    if abs(mu2 - point) < BOUNDARY_TOL:
        return None, True
    if side == "minus":
        return (0 if mu2 > point else 1), False
    return (0 if mu2 < point else 1), False


def _d_label(a_zone: int | None, b_zone: int | None, mu1: float) -> int | None:
    """Tabulated per-side label: d0 = a0, d2 = a2, d3 = a1 on the mu1 = 0
    axis with the antisymmetric channel active, d1 = the rest of a1."""
    if a_zone is None or b_zone is None:
        return None
    if a_zone in (0, 2):
        return a_zone
    return 3 if (mu1 == 0.0 and b_zone == 1) else 1


def classify(c: CouplingPair) -> RegionReport:
    """Full region classification of one coupling pair."""
    flags = set()
    a_minus, on_tm = _a_membership("minus", c.mu1, c.mu2)
    a_plus, on_tp = _a_membership("plus", c.mu1, c.mu2)
    b_minus, on_bm = _b_membership("minus", c.mu2)
    b_plus, on_bp = _b_membership("plus", c.mu2)
    if on_tm:
        flags.add("OnTauMinus")
    if on_tp:
        flags.add("OnTauPlus")
    if on_bm:
        flags.add("OnBMinus")
    if on_bp:
        flags.add("OnBPlus")

    d_minus = _d_label(a_minus, b_minus, c.mu1)
    d_plus = _d_label(a_plus, b_plus, c.mu1)
    g_label = None if (d_minus is None or d_plus is None) else (d_minus, d_plus)

    sum_below = None if (a_minus is None or b_minus is None) else a_minus + 2 * b_minus
    sum_above = None if (a_plus is None or b_plus is None) else a_plus + 2 * b_plus

    return RegionReport(
        coupling=c,
        a_minus=a_minus,
        a_plus=a_plus,
        b_minus=b_minus,
        b_plus=b_plus,
        d_minus=d_minus,
        d_plus=d_plus,
        g_label=g_label,
        boundary=frozenset(flags),
        sector_sum=(sum_below, sum_above),
    )


@dataclass(frozen=True)
class InclusionReport:
    """Grid verification of the structural region inclusions."""

    grid_points: int
    counterexamples: tuple

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def inclusion_checks(n_per_axis: int = 200, extent: float = 60.0) -> InclusionReport:
    """Verify A2+ in A0-, A2- in A0+, B1+ in B0-, B1- in B0+ on a grid.

    Returns the (expected empty) list of counterexamples as tuples
    (inclusion_name, mu1, mu2).
    """
    mu = np.linspace(-extent, extent, n_per_axis)
    bad = []
    for m1 in mu:
        for m2 in mu:
            rep = classify(CouplingPair(float(m1), float(m2)))
            if rep.a_minus is None or rep.a_plus is None:
                continue
            if rep.a_plus == 2 and rep.a_minus != 0:
                bad.append(("A2+ in A0-", float(m1), float(m2)))
            if rep.a_minus == 2 and rep.a_plus != 0:
                bad.append(("A2- in A0+", float(m1), float(m2)))
            if rep.b_plus == 1 and rep.b_minus != 0:
                bad.append(("B1+ in B0-", float(m1), float(m2)))
            if rep.b_minus == 1 and rep.b_plus != 0:
                bad.append(("B1- in B0+", float(m1), float(m2)))
    return InclusionReport(grid_points=n_per_axis * n_per_axis,
                           counterexamples=tuple(bad))


@dataclass(frozen=True)
class ScanRow:
    """One phase-diagram grid point, in CSV column order."""

    mu1: float
    mu2: float
    a_minus: int | None
    a_plus: int | None
    b_minus: int | None
    b_plus: int | None
    sum_below: int | None
    sum_above: int | None
    det_below: int | None
    det_above: int | None
    flags: tuple


SCAN_HEADER = ("mu1,mu2,a_minus,a_plus,b_minus,b_plus,"
               "sum_below,sum_above,det_below,det_above,flags")


def _parse_range(rng) -> np.ndarray:
    lo, hi, n = rng
    n = int(n)
    if n < 2:
        raise ValueError(f"scan range needs n >= 2 points, got {n}")
    return np.linspace(float(lo), float(hi), n)


def phase_scan(mu1_range, mu2_range, verify: bool = False,
               grid=None, max_workers: int = 0) -> list[ScanRow]:
    """Classify every point of a rectangular coupling grid, row-major.

    Ranges are (lo, hi, n) triples.  With verify=True each point's
    sector_sum is checked against the determinant root counts (slow), and
    the det_* columns are filled.  ``max_workers`` > 1 distributes the
    verified rows over threads; assembly order stays row-major regardless.
    """
    mu1s = _parse_range(mu1_range)
    mu2s = _parse_range(mu2_range)
    points = [(float(m1), float(m2)) for m1 in mu1s for m2 in mu2s]

    def build_row(pt) -> ScanRow:
        m1, m2 = pt
        c = CouplingPair(m1, m2)
        rep = classify(c)
        det_below = det_above = None
        if verify:
            from .spectrum import full_spectrum_zero_K

            spec = full_spectrum_zero_K(c, grid)
            det_below = len(spec.below)
            det_above = len(spec.above)
        return ScanRow(
            mu1=m1, mu2=m2,
            a_minus=rep.a_minus, a_plus=rep.a_plus,
            b_minus=rep.b_minus, b_plus=rep.b_plus,
            sum_below=rep.sector_sum[0], sum_above=rep.sector_sum[1],
            det_below=det_below, det_above=det_above,
            flags=tuple(sorted(rep.boundary)),
        )

    if verify and max_workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(build_row, points))
    return [build_row(pt) for pt in points]
