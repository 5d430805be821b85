"""Torus integrals of the interaction channels against the free resolvent.

The four orthonormal channel functions

    alpha_S1  = 1 / sqrt(8 pi^3)
    alpha_S2  = (cos p1 + cos p2 + cos p3) / sqrt(12 pi^3)
    alpha_A12 = (cos p1 - cos p2) / sqrt(8 pi^3)
    alpha_MIX = (cos p1 + cos p2 - 2 cos p3) / sqrt(24 pi^3)

enter the bound-state determinants through the resolvent moments

    a11(z) = int alpha_S1^2 / (E_0(p) - z) dp        (and a12, a22, a_a12
                                                      analogously),

with E_0(p) = 12 - 4(cos p1 + cos p2 + cos p3) and z outside the band
[0, 24].  Two independent evaluation paths are provided:

* midpoint-rule torus quadrature (spectrally accurate away from the band
  edges), and
* a Laplace--Bessel representation based on

      1 / (c - sum_i cos p_i) = int_0^inf exp(-c t) exp(t sum_i cos p_i) dt,
      int exp(t cos p) cos(m p) dp = 2 pi I_m(t),

  which reduces every moment to one-dimensional integrals of products of
  modified Bessel functions and stays exact up to the band edge z = 0.

Values for z > 24 follow from the half-band reflection p -> p + (pi,pi,pi),
under which E_0 -> 24 - E_0:

    a11(z) = -a11(24-z),  a12(z) = a12(24-z),
    a22(z) = -a22(24-z),  a_a12(z) = -a_a12(24-z).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bessel import ive
from .errors import DomainError, PreconditionError

TWO_PI = 2.0 * math.pi
PI3 = math.pi**3

#: Half-width of the band-edge layer in which the Laplace--Bessel path
#: replaces raw quadrature (raw quadrature loses accuracy there).
EDGE_DELTA = 0.01

_active_edge_delta = EDGE_DELTA


def set_edge_delta(value: float) -> None:
    """Override the band-edge dispatch layer for this process (CLI flag)."""
    global _active_edge_delta
    if not 0.0 < value < 0.5:
        raise ValueError(f"edge_delta must be in (0, 0.5), got {value}")
    _active_edge_delta = float(value)


def active_edge_delta() -> float:
    return _active_edge_delta

#: Default number of quadrature nodes per axis.
DEFAULT_NODES = 64

_INV_SQRT_8PI3 = 1.0 / math.sqrt(8.0 * PI3)
_INV_SQRT_12PI3 = 1.0 / math.sqrt(12.0 * PI3)
_INV_SQRT_24PI3 = 1.0 / math.sqrt(24.0 * PI3)

A_KINDS = ("a11", "a12", "a22", "a_a12")


class BasisFunction:
    """One orthonormal interaction channel, evaluated pointwise on the torus."""

    TAGS = ("S1", "S2", "A12", "MIX")

    def __init__(self, tag: str):
        if tag not in self.TAGS:
            raise ValueError(f"unknown basis tag {tag!r}")
        self.tag = tag

    def __call__(self, p1, p2, p3):
        c1, c2, c3 = np.cos(p1), np.cos(p2), np.cos(p3)
        if self.tag == "S1":
            shape = np.broadcast(c1, c2, c3).shape
            return np.full(shape, _INV_SQRT_8PI3) if shape else _INV_SQRT_8PI3
        if self.tag == "S2":
            return (c1 + c2 + c3) * _INV_SQRT_12PI3
        if self.tag == "A12":
            return (c1 - c2) * _INV_SQRT_8PI3
        return (c1 + c2 - 2.0 * c3) * _INV_SQRT_24PI3

    def __repr__(self):
        return f"BasisFunction({self.tag!r})"


def basis_function(tag: str) -> BasisFunction:
    return BasisFunction(tag)


class QuadratureGrid:
    """Midpoint-shifted uniform tensor grid on [-pi, pi)^3.

    Nodes sit at -pi + (k + 1/2) * 2pi/n, so p = 0 is never a node and
    band-edge integrands stay finite.  n must be even: odd n would place a
    node at the origin, and evenness also keeps the node set invariant
    under p -> -p and p -> p + pi (used for the octant reduction and the
    spectral mirror tests).
    """

    def __init__(self, n_per_axis: int = DEFAULT_NODES):
        if n_per_axis < 2 or n_per_axis % 2 != 0:
            raise ValueError(f"n_per_axis must be even and >= 2, got {n_per_axis}")
        self.n_per_axis = int(n_per_axis)
        h = TWO_PI / self.n_per_axis
        nodes = -math.pi + (np.arange(self.n_per_axis) + 0.5) * h
        nodes.flags.writeable = False
        self.nodes = nodes
        self.weight = h**3
        self._collapsed = None

    def __eq__(self, other):
        return isinstance(other, QuadratureGrid) and other.n_per_axis == self.n_per_axis

    def __hash__(self):
        return hash(("QuadratureGrid", self.n_per_axis))

    def __repr__(self):
        return f"QuadratureGrid(n_per_axis={self.n_per_axis})"

    def collapsed(self) -> "_CollapsedWeights":
        if self._collapsed is None:
            self._collapsed = _CollapsedWeights(self)
        return self._collapsed


@lru_cache(maxsize=8)
def _cached_grid(n: int) -> QuadratureGrid:
    return QuadratureGrid(n)


def default_grid(n_per_axis: int = DEFAULT_NODES) -> QuadratureGrid:
    """Shared grid instance (collapsed weight arrays are reused)."""
    return _cached_grid(n_per_axis)


class _CollapsedWeights:
    """Flattened octant representation of the moment integrands.

    All four integrands are even in each momentum component, so the sum
    over the full N^3 midpoint grid equals 8 times the sum over the
    positive octant.  Each moment then becomes a weighted sum over the
    octant energies, sum_j w_j / (E_j - z), which batches over many z as a
    single matrix--vector product.
    """

    def __init__(self, grid: QuadratureGrid):
        half = grid.nodes[grid.nodes > 0.0]
        c = np.cos(half)
        c1, c2, c3 = np.meshgrid(c, c, c, indexing="ij")
        c1 = c1.ravel()
        c2 = c2.ravel()
        c3 = c3.ravel()
        s = c1 + c2 + c3
        self.energies = 12.0 - 4.0 * s
        pref = 8.0 * grid.weight
        self.w11 = np.full(s.size, pref / (8.0 * PI3))
        self.w12 = pref * s / (math.sqrt(96.0) * PI3)
        self.w22 = pref * s * s / (12.0 * PI3)
        self.w_a12 = pref * (c1 - c2) ** 2 / (8.0 * PI3)
        self.w_mix = pref * (c1 + c2 - 2.0 * c3) ** 2 / (24.0 * PI3)


def integrate_torus(f, grid: QuadratureGrid | None = None) -> float:
    """Midpoint-rule approximation of the integral of f over [-pi, pi)^3.

    f is called with three broadcasting coordinate arrays.  Raises
    PreconditionError naming the first offending node if any value is not
    finite.
    """
    grid = grid if grid is not None else default_grid()
    p1, p2, p3 = np.meshgrid(grid.nodes, grid.nodes, grid.nodes, indexing="ij")
    vals = np.broadcast_to(np.asarray(f(p1, p2, p3), dtype=float), p1.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j, k = np.argwhere(bad)[0]
        raise PreconditionError(
            "integrand not finite at node "
            f"p = ({grid.nodes[i]:.12g}, {grid.nodes[j]:.12g}, {grid.nodes[k]:.12g})"
        )
    return grid.weight * float(vals.sum())


# ---------------------------------------------------------------------------
# Raw torus-quadrature path
# ---------------------------------------------------------------------------

_CHUNK_ELEMENTS = 8_000_000


def _quadrature_a_batch(z: np.ndarray, grid: QuadratureGrid, mix: bool = False):
    """Moment values by direct midpoint summation, batched over z.

    Valid for any z outside [0, 24]; accuracy degrades within ~EDGE_DELTA
    of the band edges (the dispatcher routes those z to the Bessel path).
    """
    col = grid.collapsed()
    e = col.energies
    nz = z.size
    a11 = np.empty(nz)
    a12 = np.empty(nz)
    a22 = np.empty(nz)
    aa = np.empty(nz)
    w_anti = col.w_mix if mix else col.w_a12
    chunk = max(1, _CHUNK_ELEMENTS // e.size)
    for i0 in range(0, nz, chunk):
        i1 = min(nz, i0 + chunk)
        r = 1.0 / (e[None, :] - z[i0:i1, None])
        a11[i0:i1] = r @ col.w11
        a12[i0:i1] = r @ col.w12
        a22[i0:i1] = r @ col.w22
        aa[i0:i1] = r @ w_anti
    return a11, a12, a22, aa


# ---------------------------------------------------------------------------
# Laplace--Bessel path
# ---------------------------------------------------------------------------

# Bessel-product integrands entering the moments, as orders (m1, m2, m3),
# and the 1/t coefficient of their scaled large-t expansion
# e^{-3t} I_{m1} I_{m2} I_{m3} ~ (2 pi t)^{-3/2} (1 + kappa1 / t + ...).
_PRODUCTS = {
    "P000": ((0, 0, 0), 3.0 / 8.0),
    "P100": ((1, 0, 0), -1.0 / 8.0),
    "P200": ((2, 0, 0), -13.0 / 8.0),
    "P110": ((1, 1, 0), -5.0 / 8.0),
}

_TAIL_CUT = 1e-12
_PANEL_TOL = 1e-13
_SQRT6_OVER_4 = math.sqrt(6.0) / 4.0
_TWO_PI_POW_M32 = (2.0 * math.pi) ** -1.5


@lru_cache(maxsize=2)
def _gauss_nodes(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _tail_time(s: float) -> float:
    """Smallest power-of-two T with exp(-s T) * T^(-3/2) below the cut."""
    t = 1.0
    while math.exp(-min(s * t, 745.0)) * t**-1.5 >= _TAIL_CUT:
        t *= 2.0
    return t


def _scaled_product(key: str, t: np.ndarray) -> np.ndarray:
    (m1, m2, m3), _ = _PRODUCTS[key]
    return ive(m1, t) * ive(m2, t) * ive(m3, t)


def _panel_estimate(key: str, s: float, a: float, b: float, order: int) -> float:
    x, w = _gauss_nodes(order)
    t = 0.5 * (b - a) * x + 0.5 * (a + b)
    g = np.exp(-s * t) * _scaled_product(key, t)
    return 0.5 * (b - a) * float(w @ g)


def _panel_key(s_min: float, c_max: float) -> tuple[float, float]:
    """Quantized (t_min, T) pair so nearby batches share cached panels."""
    t_min = min(1.0, 1.0 / (50.0 * c_max))
    return 2.0 ** math.floor(math.log2(t_min)), _tail_time(s_min)


@lru_cache(maxsize=64)
def _panel_quadrature(t_min: float, t_top: float) -> tuple:
    """Gauss nodes, and per-product weighted integrand values, on a
    geometric panel partition of [0, T].

    Panels double from t_min up to T and are bisected where 16- vs
    32-point estimates of the slowest-decaying product disagree; t_min is
    tied to the decay scale of exp(-(c - 3) t) so the first panels always
    resolve it.
    """
    edges = [0.0, t_min]
    while edges[-1] < t_top:
        edges.append(min(2.0 * edges[-1], t_top))
    panels = []
    stack = [(edges[i], edges[i + 1], 0) for i in range(len(edges) - 1)]
    while stack:
        a, b, depth = stack.pop()
        coarse = _panel_estimate("P000", 0.0, a, b, 16)
        fine = _panel_estimate("P000", 0.0, a, b, 32)
        if depth < 48 and abs(fine - coarse) > _PANEL_TOL * (1.0 + abs(fine)):
            mid = 0.5 * (a + b)
            stack.append((a, mid, depth + 1))
            stack.append((mid, b, depth + 1))
        else:
            panels.append((a, b))
    panels.sort()
    x32, w32 = _gauss_nodes(32)
    t_nodes = np.concatenate([0.5 * (b - a) * x32 + 0.5 * (a + b) for a, b in panels])
    t_weights = np.concatenate([0.5 * (b - a) * w32 for a, b in panels])
    integrands = tuple(t_weights * _scaled_product(key, t_nodes) for key in _PRODUCTS)
    t_nodes.flags.writeable = False
    for arr in integrands:
        arr.flags.writeable = False
    return t_nodes, integrands


def _tail_moments(s: float, t_top: float) -> tuple[float, float]:
    """J_nu(s) = int_T^inf exp(-s t) t^(-nu) dt for nu = 3/2 and 5/2."""
    if s <= 0.0:
        return 2.0 / math.sqrt(t_top), (2.0 / 3.0) * t_top**-1.5
    x = s * t_top
    if x > 700.0:
        return 0.0, 0.0
    g_half = 2.0 * math.exp(-x) / math.sqrt(x) - 2.0 * math.sqrt(math.pi) * math.erfc(math.sqrt(x))
    j32 = math.sqrt(s) * g_half
    j52 = s**1.5 * (2.0 / 3.0) * (math.exp(-x) * x**-1.5 - g_half)
    return j32, j52


def _laplace_a_batch(z: np.ndarray):
    """Moment values via the Laplace--Bessel representation, z <= 0 batched.

    a11   = L[P000] / 4
    a12   = sqrt(6)/4 * L[P100]
    a22   = L[P000]/4 + L[P200]/4 + L[P110]
    a_a12 = (L[P000] + L[P200] - 2 L[P110]) / 4

    where L[P](z) = int_0^inf e^{-(3 - z/4) t} P(t) dt and P runs over the
    scaled Bessel products.  The integral is split into adaptive Gauss
    panels on [0, T] plus the analytic algebraic tail beyond T.
    """
    s = -z / 4.0
    t_min, t_top = _panel_key(float(s.min()), 3.0 + float(s.max()))
    t_nodes, integrands = _panel_quadrature(t_min, t_top)

    decay = np.exp(-np.outer(s, t_nodes))
    totals = {}
    for (key, (_, kappa1)), integrand in zip(_PRODUCTS.items(), integrands):
        val = decay @ integrand
        for i, si in enumerate(s):
            j32, j52 = _tail_moments(float(si), t_top)
            val[i] += _TWO_PI_POW_M32 * (j32 + kappa1 * j52)
        totals[key] = val

    a11 = 0.25 * totals["P000"]
    a12 = _SQRT6_OVER_4 * totals["P100"]
    a22 = 0.25 * totals["P000"] + 0.25 * totals["P200"] + totals["P110"]
    aa = 0.25 * (totals["P000"] + totals["P200"] - 2.0 * totals["P110"])
    return a11, a12, a22, aa


# ---------------------------------------------------------------------------
# Dispatching evaluator
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AFunctions:
    """The four moment values at one spectral parameter."""

    z: float
    a11: float
    a12: float
    a22: float
    a_a12: float

    def as_dict(self) -> dict:
        return {"a11": self.a11, "a12": self.a12, "a22": self.a22, "a_a12": self.a_a12}


def _check_outside_band(z: np.ndarray):
    inside = (z > 0.0) & (z < 24.0)
    if inside.any():
        bad = float(z[inside][0])
        raise DomainError(f"spectral parameter z = {bad:.12g} lies inside the band [0, 24]")
    if not np.isfinite(z).all():
        raise DomainError("spectral parameter must be finite")


def a_batch(z, grid: QuadratureGrid | None = None, edge_delta: float | None = None):
    """Evaluate (a11, a12, a22, a_a12) for an array of z outside (0, 24).

    Dispatch: raw quadrature for z <= -edge_delta, Laplace--Bessel for
    -edge_delta < z <= 0, and the half-band reflection identities for
    z >= 24.  Band-edge values z = 0 and z = 24 are the (finite) edge
    limits of the moments.
    """
    grid = grid if grid is not None else default_grid()
    if edge_delta is None:
        edge_delta = _active_edge_delta
    z = np.atleast_1d(np.asarray(z, dtype=float))
    _check_outside_band(z)

    refl = z >= 24.0
    zb = np.where(refl, 24.0 - z, z)

    a11 = np.empty_like(zb)
    a12 = np.empty_like(zb)
    a22 = np.empty_like(zb)
    aa = np.empty_like(zb)

    near = zb > -edge_delta
    if near.any():
        vals = _laplace_a_batch(zb[near])
        a11[near], a12[near], a22[near], aa[near] = vals
    far = ~near
    if far.any():
        vals = _quadrature_a_batch(zb[far], grid)
        a11[far], a12[far], a22[far], aa[far] = vals

    a11[refl] = -a11[refl]
    a22[refl] = -a22[refl]
    aa[refl] = -aa[refl]
    return a11, a12, a22, aa


def afunctions(z: float, grid: QuadratureGrid | None = None,
               edge_delta: float | None = None) -> AFunctions:
    """All four moments at a single z, with automatic path dispatch."""
    a11, a12, a22, aa = a_batch(np.array([float(z)]), grid, edge_delta)
    return AFunctions(z=float(z), a11=float(a11[0]), a12=float(a12[0]),
                      a22=float(a22[0]), a_a12=float(aa[0]))


def a_s(i: int, j: int, z: float, grid: QuadratureGrid | None = None) -> float:
    """Symmetric-sector moment a_ij(z) for i, j in {1, 2}."""
    if i not in (1, 2) or j not in (1, 2):
        raise ValueError(f"indices must be in {{1, 2}}, got ({i}, {j})")
    f = afunctions(z, grid)
    if i == j:
        return f.a11 if i == 1 else f.a22
    return f.a12


def a_a12(z: float, grid: QuadratureGrid | None = None, basis: str = "A12") -> float:
    """Antisymmetric-channel moment; basis="MIX" integrates the mixed channel
    instead (the two agree identically, which the test suite exercises)."""
    if basis == "A12":
        return afunctions(z, grid).a_a12
    if basis != "MIX":
        raise ValueError(f"basis must be 'A12' or 'MIX', got {basis!r}")
    grid = grid if grid is not None else default_grid()
    z_arr = np.array([float(z)])
    _check_outside_band(z_arr)
    refl = z_arr >= 24.0
    zb = np.where(refl, 24.0 - z_arr, z_arr)
    _, _, _, aa = _quadrature_a_batch(zb, grid, mix=True)
    return float(-aa[0] if refl[0] else aa[0])


def _resolvent_power_sum(which: str, z: float, power: int = 1,
                         grid: QuadratureGrid | None = None) -> float:
    """Quadrature sum of (channel weight) / (E_0 - z)^power over the torus.

    which selects the collapsed weight vector: "11", "12", "22", "a12" or
    "mix".  power=2 gives the squared-resolvent moments used to normalize
    eigenfunctions on the grid.
    """
    grid = grid if grid is not None else default_grid()
    col = grid.collapsed()
    w = {"11": col.w11, "12": col.w12, "22": col.w22,
         "a12": col.w_a12, "mix": col.w_mix}[which]
    return float(np.sum(w / (col.energies - z) ** power))


def a_bessel(kind: str, z: float) -> float:
    """Single moment via the Laplace--Bessel path; requires z <= 0."""
    if kind not in A_KINDS:
        raise ValueError(f"kind must be one of {A_KINDS}, got {kind!r}")
    if not np.isfinite(z) or z > 0.0:
        raise DomainError(f"Bessel path needs z <= 0, got z = {z:.12g}")
    vals = _laplace_a_batch(np.array([float(z)]))
    return float(vals[A_KINDS.index(kind)][0])
