"""Real spherical harmonics, angular regions, quadrature, and node placement.

Directions are azimuth/elevation pairs in radians.  Harmonic evaluation uses
the colatitude pi/2 - elevation internally.  All harmonics are real and
orthonormal over the unit sphere:

    integral Y_pq * Y_p'q' dOmega = delta_pp' * delta_qq'

with the sine convention for negative orders, the cosine convention for
positive orders, and no Condon-Shortley phase.  Rows of harmonics follow a
frozen degree-major ordering: (0,0), (1,-1), (1,0), (1,1), (2,-2), ...
so harmonic (p, q) lives at flat index p*p + p + q.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

TWO_PI = 2.0 * math.pi

__all__ = [
    "Direction",
    "AngularRegion",
    "QuadratureRule",
    "real_sph_harm",
    "sph_harm_row",
    "sph_harm_rows",
    "harmonic_index",
    "region_area",
    "region_quadrature",
    "fibonacci_nodes",
]


@dataclass(frozen=True)
class Direction:
    """A point on the unit sphere: azimuth in (-pi, pi], elevation in [-pi/2, pi/2]."""

    azimuth: float
    elevation: float

    def __post_init__(self):
        az, el = float(self.azimuth), float(self.elevation)
        if az == -math.pi:  # canonical representative of the seam
            az = math.pi
        if not (-math.pi < az <= math.pi):
            raise ValueError(f"azimuth {az} outside (-pi, pi]")
        if not (-math.pi / 2 <= el <= math.pi / 2):
            raise ValueError(f"elevation {el} outside [-pi/2, pi/2]")
        object.__setattr__(self, "azimuth", az)
        object.__setattr__(self, "elevation", el)

    @property
    def colatitude(self) -> float:
        return math.pi / 2 - self.elevation


@dataclass(frozen=True)
class AngularRegion:
    """Rectangular field of view in azimuth x elevation (radians)."""

    az_min: float
    az_max: float
    el_min: float
    el_max: float

    def __post_init__(self):
        if not (self.az_min < self.az_max):
            raise ValueError("require az_min < az_max")
        if not (self.el_min < self.el_max):
            raise ValueError("require el_min < el_max")
        if self.az_max - self.az_min > TWO_PI + 1e-12:
            raise ValueError("azimuth span exceeds 2*pi")
        if self.el_min < -math.pi / 2 or self.el_max > math.pi / 2:
            raise ValueError("elevation bounds outside [-pi/2, pi/2]")

    @classmethod
    def from_degrees(cls, az_min, az_max, el_min, el_max) -> "AngularRegion":
        return cls(
            math.radians(az_min),
            math.radians(az_max),
            math.radians(el_min),
            math.radians(el_max),
        )

    @property
    def bounds_degrees(self) -> tuple[float, float, float, float]:
        return tuple(math.degrees(v) for v in (self.az_min, self.az_max, self.el_min, self.el_max))

    @property
    def area(self) -> float:
        """Solid angle in steradians."""
        return (self.az_max - self.az_min) * (math.sin(self.el_max) - math.sin(self.el_min))

    @property
    def is_full_circle(self) -> bool:
        return abs((self.az_max - self.az_min) - TWO_PI) < 1e-12

    def contains(self, azimuth, elevation, tol: float = 1e-12) -> np.ndarray:
        """Vectorized membership test (closed bounds, with tolerance)."""
        az = np.asarray(azimuth)
        el = np.asarray(elevation)
        return (
            (az >= self.az_min - tol)
            & (az <= self.az_max + tol)
            & (el >= self.el_min - tol)
            & (el <= self.el_max + tol)
        )


@dataclass(frozen=True)
class QuadratureRule:
    """Tensor-product quadrature over an AngularRegion.

    Weights include the cos(elevation) area element, so that
    sum_n w_n f(node_n) approximates the solid-angle integral of f over
    the region.  The weight sum equals the region area.
    """

    region: AngularRegion
    azimuths: np.ndarray
    elevations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if not (self.azimuths.shape == self.elevations.shape == self.weights.shape):
            raise ValueError("node and weight arrays must share a shape")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        if not np.all(self.region.contains(self.azimuths, self.elevations)):
            raise ValueError("quadrature nodes fall outside the region")
        total = float(np.sum(self.weights))
        if abs(total - self.region.area) > 1e-10 * self.region.area:
            raise ValueError(
                f"weight sum {total} does not match region area {self.region.area}"
            )

    @property
    def num_nodes(self) -> int:
        return self.weights.size

    @property
    def nodes(self) -> list[Direction]:
        return [Direction(a, e) for a, e in zip(self.azimuths, self.elevations)]


def harmonic_index(p: int, q: int) -> int:
    """Flat index of harmonic (p, q) in the frozen degree-major ordering."""
    if p < 0 or abs(q) > p:
        raise ValueError(f"invalid degree/order ({p}, {q})")
    return p * p + p + q


def _normalized_legendre_columns(max_degree: int, x: np.ndarray):
    """Yield (order q, table of N_pq(x) for p = q..max_degree).

    N_pq is the orthonormal-harmonic normalization of the associated
    Legendre function without the Condon-Shortley phase:

        N_pq(x) = sqrt((2p+1)/(4 pi) * (p-q)!/(p+q)!) * P_pq(x)

    computed column-by-column with the standard three-term recurrence in
    degree, which is numerically stable far beyond degree 60.
    """
    x = np.asarray(x, dtype=float)
    s = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    sectoral = np.full_like(x, 1.0 / math.sqrt(4.0 * math.pi))
    for q in range(0, max_degree + 1):
        if q > 0:
            sectoral = sectoral * s * math.sqrt((2 * q + 1) / (2 * q))
        col = np.empty((max_degree - q + 1,) + x.shape)
        col[0] = sectoral
        if q < max_degree:
            col[1] = x * math.sqrt(2 * q + 3) * sectoral
        for p in range(q + 2, max_degree + 1):
            a = math.sqrt((2 * p - 1) * (2 * p + 1) / ((p - q) * (p + q)))
            b = math.sqrt(
                (2 * p + 1) * (p + q - 1) * (p - q - 1) / ((p - q) * (p + q) * (2 * p - 3))
            )
            col[p - q] = a * x * col[p - q - 1] - b * col[p - q - 2]
        yield q, col


def sph_harm_rows(max_degree: int, azimuths, elevations) -> np.ndarray:
    """Evaluate all harmonics up to ``max_degree`` at many directions.

    Returns an array of shape (n_points, (max_degree+1)**2) whose columns
    follow the frozen degree-major ordering of :func:`harmonic_index`.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    az = np.atleast_1d(np.asarray(azimuths, dtype=float))
    el = np.atleast_1d(np.asarray(elevations, dtype=float))
    if az.shape != el.shape:
        raise ValueError("azimuth/elevation arrays must share a shape")
    x = np.sin(el)  # cos(colatitude)
    out = np.empty((az.size, (max_degree + 1) ** 2))
    sqrt2 = math.sqrt(2.0)
    for q, col in _normalized_legendre_columns(max_degree, x):
        if q == 0:
            for p in range(0, max_degree + 1):
                out[:, harmonic_index(p, 0)] = col[p]
        else:
            cos_q = sqrt2 * np.cos(q * az)
            sin_q = sqrt2 * np.sin(q * az)
            for p in range(q, max_degree + 1):
                out[:, harmonic_index(p, q)] = col[p - q] * cos_q
                out[:, harmonic_index(p, -q)] = col[p - q] * sin_q
    return out


def sph_harm_row(max_degree: int, direction: Direction) -> np.ndarray:
    """All harmonics up to ``max_degree`` at one direction, degree-major order."""
    return sph_harm_rows(
        max_degree, np.array([direction.azimuth]), np.array([direction.elevation])
    )[0]


def real_sph_harm(p: int, q: int, direction: Direction) -> float:
    """Real orthonormal spherical harmonic of degree p, order q."""
    idx = harmonic_index(p, q)  # validates (p, q)
    return float(sph_harm_row(p, direction)[idx])


def region_area(region: AngularRegion) -> float:
    """Solid angle of the region in steradians."""
    return region.area


def region_quadrature(region: AngularRegion, n_az: int, n_el: int) -> QuadratureRule:
    """Tensor-product quadrature rule over the region.

    Elevation uses Gauss-Legendre in sin(elevation), which absorbs the
    cos(elevation) area element and is exact for polynomials in
    sin(elevation) up to degree 2*n_el - 1.  Azimuth uses Gauss-Legendre on
    a proper sub-interval (exact for azimuth polynomials up to degree
    2*n_az - 1, and accurate to machine precision for band-limited
    trigonometric integrands at the default node counts), or the uniform
    midpoint rule when the region spans the full circle (exact for
    trigonometric polynomials of order < n_az).
    """
    if n_az < 1 or n_el < 1:
        raise ValueError("node counts must be >= 1")
    if region.area <= 0:
        raise ValueError("degenerate region")

    u_min, u_max = math.sin(region.el_min), math.sin(region.el_max)
    xu, wu = leggauss(n_el)
    u = 0.5 * (u_max - u_min) * xu + 0.5 * (u_max + u_min)
    wu = 0.5 * (u_max - u_min) * wu
    el = np.arcsin(u)

    if region.is_full_circle:
        span = region.az_max - region.az_min
        az = region.az_min + (np.arange(n_az) + 0.5) * span / n_az
        wa = np.full(n_az, span / n_az)
    else:
        xa, wa = leggauss(n_az)
        az = 0.5 * (region.az_max - region.az_min) * xa + 0.5 * (region.az_max + region.az_min)
        wa = 0.5 * (region.az_max - region.az_min) * wa

    az_grid, el_grid = np.meshgrid(az, el, indexing="ij")
    w_grid = np.outer(wa, wu)
    return QuadratureRule(
        region=region,
        azimuths=az_grid.ravel(),
        elevations=el_grid.ravel(),
        weights=w_grid.ravel(),
    )


_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


def fibonacci_nodes(region: AngularRegion, count: int) -> list[Direction]:
    """Quasi-uniform node set over the region.

    Elevations stratify the region into ``count`` equal-area bands via the
    sin(elevation) map; azimuths advance by the golden-ratio fraction of the
    azimuth span.  Deterministic: the same (region, count) always yields the
    same nodes.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    i = np.arange(count)
    u_min, u_max = math.sin(region.el_min), math.sin(region.el_max)
    u = u_min + (u_max - u_min) * (i + 0.5) / count
    el = np.arcsin(u)
    az = region.az_min + (region.az_max - region.az_min) * ((i / _GOLDEN) % 1.0)
    return [Direction(a, e) for a, e in zip(az, el)]
