"""Geometry on the unit sphere: an iso-latitude equal-area partition, a product
cubature rule, band-limited zonal test functions and needlet coefficients.

Points are float64 arrays of shape ``(3,)`` or ``(n, 3)``. Spherical harmonics
are never formed: every degree-``l`` projection goes through the addition
theorem ``sum_m Y_lm(x) conj(Y_lm(y)) = (2l+1)/(4pi) P_l(<x, y>)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from .errors import DomainError, PreconditionError, ResourceLimitError
from .kernel import (
    DEFAULT_TAIL_TOL,
    FilterParams,
    Summation,
    degree_weight,
    legendre_series,
    needlet_profile,
    series_coefficients,
    truncation_degree,
)
from .special import legendre_eval

TWO_PI = 2.0 * math.pi
MAX_CELLS = 10_000_000
MAX_CUBATURE_DEGREE = 10_000
BAND_LIMIT_TOL = 1e-15
_PAIR_CHUNK = 2_000_000


def unit_vector(theta, phi) -> np.ndarray:
    """Cartesian point(s) from colatitude ``theta`` and azimuth ``phi``."""
    theta = np.asarray(theta, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta) * np.ones_like(phi)], axis=-1)


def to_angles(v) -> tuple[np.ndarray, np.ndarray]:
    """Colatitude in ``[0, pi]`` and azimuth in ``[0, 2pi)``."""
    v = np.asarray(v, dtype=np.float64)
    theta = np.arctan2(np.hypot(v[..., 0], v[..., 1]), v[..., 2])
    phi = np.mod(np.arctan2(v[..., 1], v[..., 0]), TWO_PI)
    phi = np.where(phi >= TWO_PI, phi - TWO_PI, phi)
    return theta, phi


def geodesic_distance(a, b):
    """Great-circle distance in radians, in ``[0, pi]``.

    Uses ``atan2(|a x b|, a . b)``, which equals the clamped arccos of the dot
    product but keeps full relative accuracy near 0 and pi.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    cross = np.linalg.norm(np.cross(a, b), axis=-1)
    dot = np.sum(a * b, axis=-1)
    out = np.arctan2(cross, dot)
    return float(out) if out.ndim == 0 else out


def random_points(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points on the sphere."""
    v = rng.normal(size=(n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


# -- partition ---------------------------------------------------------------


def ring_layout(B: float, j: int, refine: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """Colatitude edges and cells-per-ring of the level-``j`` partition.

    ``ceil(refine * pi * B^j / 2)`` bands of equal colatitude width; each band
    is cut into ``round(2 pi sin(mid) / width)`` equal azimuthal cells (at
    least one), which keeps cells close to square.
    """
    if not B > 1.0:
        raise DomainError(f"scale factor B must exceed 1, got {B}")
    if j < 0 or int(j) != j:
        raise DomainError(f"partition levels start at j = 0, got {j}")
    if not refine >= 1.0:
        raise DomainError("refine must be >= 1")
    n_ring = math.ceil(refine * math.pi * float(B) ** j / 2.0)
    width = math.pi / n_ring
    edges = np.arange(n_ring + 1) * width
    edges[-1] = math.pi
    mids = 0.5 * (edges[:-1] + edges[1:])
    counts = np.maximum(1, np.rint(TWO_PI * np.sin(mids) / width)).astype(np.int64)
    return edges, counts


@dataclass
class Pixelization:
    """Disjoint cells ``E_jk`` covering the sphere.

    ``centers[k]`` is the representative point, ``areas[k]`` the exact area in
    steradians, ``diameters[k]`` a proven upper bound on the cell diameter.
    """

    B: float
    j: int
    refine: float
    ring_edges: np.ndarray
    ring_counts: np.ndarray
    centers: np.ndarray
    areas: np.ndarray
    diameters: np.ndarray
    ring_offsets: np.ndarray = field(repr=False)

    def __len__(self) -> int:
        return int(self.areas.shape[0])

    @property
    def diameter_constant(self) -> float:
        """``c_B`` with ``diam(E_jk) <= c_B B^{-j}`` for every cell."""
        return float(np.max(self.diameters) * float(self.B) ** self.j)

    @property
    def area_constant(self) -> float:
        """``c'_B`` with ``area(E_jk) >= c'_B B^{-2j}`` for every cell."""
        return float(np.min(self.areas) * float(self.B) ** (2 * self.j))

    def cell_bounds(self):
        """Per-cell ``(colat_lo, colat_hi, az_lo, az_hi)``; cells are half-open
        except the last ring, which is closed at the south pole."""
        ring = np.repeat(np.arange(len(self.ring_counts)), self.ring_counts)
        n = self.ring_counts[ring]
        k = np.arange(len(self)) - self.ring_offsets[ring]
        return (
            self.ring_edges[ring],
            self.ring_edges[ring + 1],
            TWO_PI * k / n,
            TWO_PI * (k + 1) / n,
        )

    def locate(self, points) -> np.ndarray:
        """Index of the cell containing each point."""
        theta, phi = to_angles(np.atleast_2d(points))
        n_ring = len(self.ring_counts)
        ring = np.clip(np.searchsorted(self.ring_edges, theta, side="right") - 1, 0, n_ring - 1)
        n = self.ring_counts[ring]
        k = np.minimum(np.floor(phi * n / TWO_PI).astype(np.int64), n - 1)
        k = np.where(phi < TWO_PI * k / n, k - 1, k)
        k = np.where(phi >= TWO_PI * (k + 1) / n, k + 1, k)
        return self.ring_offsets[ring] + np.clip(k, 0, n - 1)

    def containment_counts(self, points, chunk: int = 2000) -> np.ndarray:
        """Brute-force number of cells containing each point (should all be 1)."""
        theta, phi = to_angles(np.atleast_2d(points))
        lo, hi, az_lo, az_hi = self.cell_bounds()
        last = hi >= math.pi
        out = np.empty(theta.shape[0], dtype=np.int64)
        for start in range(0, theta.shape[0], chunk):
            t = theta[start : start + chunk, None]
            p = phi[start : start + chunk, None]
            in_band = (t >= lo) & ((t < hi) | (last & (t <= hi)))
            inside = in_band & (p >= az_lo) & (p < az_hi)
            out[start : start + chunk] = inside.sum(axis=1)
        return out


def _diameter_bound(lo, hi, n):
    widest = np.where((lo <= math.pi / 2) & (hi >= math.pi / 2), 1.0, np.maximum(np.sin(lo), np.sin(hi)))
    return np.minimum(math.pi, (hi - lo) + np.minimum(TWO_PI / n, math.pi) * widest)


def build_partition(B: float, j: int, refine: float = 1.0, max_cells: int = MAX_CELLS) -> Pixelization:
    """Iso-latitude equal-area partition at level ``j >= 0``.

    ``refine > 1`` shrinks every cell by that factor in each direction
    (a smaller ``c_B``).
    """
    edges, counts = ring_layout(B, j, refine)
    total = int(counts.sum())
    if total > max_cells:
        raise ResourceLimitError(f"partition at B={B}, j={j} needs {total} cells (cap {max_cells})")
    offsets = np.concatenate([[0], np.cumsum(counts)[:-1]])
    ring = np.repeat(np.arange(len(counts)), counts)
    k = np.arange(total) - offsets[ring]
    lo, hi, n = edges[ring], edges[ring + 1], counts[ring]
    centers = unit_vector(0.5 * (lo + hi), TWO_PI * (k + 0.5) / n)
    # zone area 2pi (cos lo - cos hi), split evenly in azimuth
    areas = 4.0 * math.pi * np.sin(0.5 * (lo + hi)) * np.sin(0.5 * (hi - lo)) / n
    return Pixelization(
        B=float(B),
        j=int(j),
        refine=float(refine),
        ring_edges=edges,
        ring_counts=counts,
        centers=centers,
        areas=areas,
        diameters=_diameter_bound(lo, hi, n),
        ring_offsets=offsets,
    )


# -- cubature -------------------------------------------------------------------


@dataclass
class CubatureGrid:
    degree_exactness: int
    points: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return int(self.weights.shape[0])

    def integrate(self, values) -> float:
        return float(np.dot(self.weights, values))


def build_cubature(L: int) -> CubatureGrid:
    """Gauss-Legendre in ``cos(colatitude)`` times ``2L+2`` uniform azimuths.

    Integrates every spherical polynomial of degree ``<= L`` exactly (the rule
    is in fact exact to degree ``2L+1``; ``L`` is the advertised guarantee).
    """
    if L < 0 or int(L) != L:
        raise DomainError(f"cubature degree must be a nonnegative integer, got {L}")
    if L > MAX_CUBATURE_DEGREE:
        raise ResourceLimitError(f"cubature degree {L} exceeds cap {MAX_CUBATURE_DEGREE}")
    x, w = roots_legendre(L + 1)
    n_az = 2 * L + 2
    phi = TWO_PI * np.arange(n_az) / n_az
    st = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    pts = np.stack(
        [
            np.outer(st, np.cos(phi)).ravel(),
            np.outer(st, np.sin(phi)).ravel(),
            np.repeat(x, n_az),
        ],
        axis=1,
    )
    weights = np.repeat(w, n_az) * (TWO_PI / n_az)
    return CubatureGrid(int(L), pts, weights)


# -- zonal mixtures ---------------------------------------------------------------


@dataclass(frozen=True)
class ZonalTerm:
    degree: int
    center: np.ndarray
    coeff: float

    def __post_init__(self):
        c = np.asarray(self.center, dtype=np.float64)
        norm = np.linalg.norm(c)
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"zonal center must be a unit vector (|z| = {norm})")
        if self.degree < 0 or int(self.degree) != self.degree:
            raise DomainError("zonal degree must be a nonnegative integer")
        object.__setattr__(self, "center", c)


@dataclass
class ZonalMixture:
    """``F(x) = sum_i c_i (2 l_i + 1)/(4 pi) P_{l_i}(<x, z_i>)``."""

    terms: list[ZonalTerm] = field(default_factory=list)

    @classmethod
    def from_tuples(cls, items) -> "ZonalMixture":
        return cls([ZonalTerm(int(l), np.asarray(z, dtype=np.float64), float(c)) for l, z, c in items])

    @property
    def max_degree(self) -> int:
        return max((t.degree for t in self.terms), default=0)

    @property
    def degrees(self) -> list[int]:
        return sorted({t.degree for t in self.terms})

    def evaluate(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        out = np.zeros(pts.shape[0])
        for t in self.terms:
            out += t.coeff * (2 * t.degree + 1) / (4.0 * math.pi) * legendre_eval(t.degree, pts @ t.center)
        return out

    def filtered(self, weights) -> "ZonalMixture":
        """Mixture with each coefficient scaled by ``weights(degree)``."""
        return ZonalMixture([ZonalTerm(t.degree, t.center, t.coeff * float(weights(t.degree))) for t in self.terms])

    def rotated(self, R) -> "ZonalMixture":
        R = np.asarray(R, dtype=np.float64)
        return ZonalMixture([ZonalTerm(t.degree, R @ t.center, t.coeff) for t in self.terms])

    def degree_norms2(self) -> dict[int, float]:
        """``||F_l||^2`` for each degree present."""
        out: dict[int, float] = {}
        for a in self.terms:
            for b in self.terms:
                if a.degree == b.degree:
                    l = a.degree
                    val = a.coeff * b.coeff * (2 * l + 1) / (4.0 * math.pi) * legendre_eval(l, float(a.center @ b.center))
                    out[l] = out.get(l, 0.0) + val
        return out

    def norm2(self) -> float:
        return zonal_inner_product(self, self)


def zonal_inner_product(F: ZonalMixture, G: ZonalMixture) -> float:
    """Exact ``<F, G>`` over the sphere from the reproducing property of ``P_l``."""
    vals = [
        a.coeff * b.coeff * (2 * a.degree + 1) / (4.0 * math.pi) * legendre_eval(a.degree, float(a.center @ b.center))
        for a in F.terms
        for b in G.terms
        if a.degree == b.degree
    ]
    return math.fsum(vals)


# -- needlets and coefficients ---------------------------------------------------------


@dataclass
class NeedletCoefficients:
    params: FilterParams
    values: np.ndarray

    @property
    def j(self) -> int:
        return self.params.j

    @property
    def energy(self) -> float:
        return math.fsum((self.values**2).tolist())


def _check_level(params: FilterParams, pix: Pixelization):
    if params.j != pix.j or float(params.B) != pix.B:
        raise DomainError(f"filter (B={params.B}, j={params.j}) does not match partition (B={pix.B}, j={pix.j})")


def evaluate_needlet(
    params: FilterParams,
    pix: Pixelization,
    k: int,
    x,
    *,
    summation: Summation = Summation.COMPENSATED,
):
    """``psi_jk(x) = sqrt(lambda_jk) Psi(d(x, xi_jk))``."""
    _check_level(params, pix)
    if not 0 <= k < len(pix):
        raise IndexError(f"cell index {k} out of range for {len(pix)} cells")
    theta = geodesic_distance(x, pix.centers[k])
    return math.sqrt(pix.areas[k]) * needlet_profile(params, theta, summation=summation)


def needlet_on_points(
    params: FilterParams,
    center,
    points,
    *,
    summation: Summation = Summation.PLAIN,
    l_max: int | None = None,
    tail_tol: float = DEFAULT_TAIL_TOL,
) -> np.ndarray:
    """Unscaled profile ``Psi(d(x, center))`` on many points, via ``<x, center>``."""
    if l_max is None:
        l_max = truncation_degree(params, tail_tol)
    coef = series_coefficients(params, l_max)
    t = np.clip(np.atleast_2d(points) @ np.asarray(center, dtype=np.float64), -1.0, 1.0)
    return legendre_series(coef, t, summation)


def required_cubature_degree(F: ZonalMixture, params: FilterParams) -> int:
    return F.max_degree + truncation_degree(params, BAND_LIMIT_TOL)


def analyze(
    F: ZonalMixture,
    params: FilterParams,
    pix: Pixelization,
    grid: CubatureGrid,
    *,
    summation: Summation = Summation.PLAIN,
) -> NeedletCoefficients:
    """``beta_jk = <F, psi_jk>`` by cubature on ``grid``."""
    _check_level(params, pix)
    need = required_cubature_degree(F, params)
    if grid.degree_exactness < need:
        raise PreconditionError(f"cubature degree {grid.degree_exactness} < required {need}")
    l_max = truncation_degree(params)
    coef = series_coefficients(params, l_max)
    fw = F.evaluate(grid.points) * grid.weights
    out = np.empty(len(pix))
    chunk = max(1, _PAIR_CHUNK // max(1, len(grid)))
    for start in range(0, len(pix), chunk):
        t = np.clip(pix.centers[start : start + chunk] @ grid.points.T, -1.0, 1.0)
        psi = legendre_series(coef, t, summation)
        out[start : start + chunk] = psi @ fw
    return NeedletCoefficients(params, np.sqrt(pix.areas) * out)


def analyze_exact(F: ZonalMixture, params: FilterParams, pix: Pixelization) -> NeedletCoefficients:
    """``beta_jk`` from the harmonic side: ``sqrt(lambda) sum_i c_i w(l_i) (2l_i+1)/4pi P_{l_i}(<xi, z_i>)``."""
    _check_level(params, pix)
    G = F.filtered(lambda l: degree_weight(params, l))
    return NeedletCoefficients(params, np.sqrt(pix.areas) * G.evaluate(pix.centers))


def level_energy(F: ZonalMixture, params: FilterParams, refine: float = 1.0) -> float:
    """Pixelised energy ``sum_k |beta_jk|^2`` at ``params.j``, without building cells.

    ``beta_jk = sqrt(lambda_jk) G(xi_jk)`` with ``G`` of degree ``D = max l_i``.
    On a ring, ``G^2`` is a trigonometric polynomial of degree ``2D`` in azimuth,
    so for rings with more than ``2D`` cells the sum over the ring's equispaced
    centres equals ``n`` times the mean over any ``2D + 1`` equispaced samples.
    Smaller rings are summed cell by cell.
    """
    edges, counts = ring_layout(params.B, params.j, refine)
    G = F.filtered(lambda l: degree_weight(params, l))
    m = 2 * G.max_degree + 1
    samples = np.minimum(counts, m)
    ring = np.repeat(np.arange(len(counts)), samples)
    offsets = np.concatenate([[0], np.cumsum(samples)[:-1]])
    k = np.arange(int(samples.sum())) - offsets[ring]
    lo, hi = edges[ring], edges[ring + 1]
    n_s = samples[ring]
    pts = unit_vector(0.5 * (lo + hi), TWO_PI * (k + 0.5) / n_s)
    area = 4.0 * math.pi * np.sin(0.5 * (lo + hi)) * np.sin(0.5 * (hi - lo)) / counts[ring]
    weight = area * counts[ring] / n_s
    vals = G.evaluate(pts)
    return math.fsum((weight * vals * vals).tolist())
