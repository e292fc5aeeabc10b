"""Region-concentrated Slepian basis built from real spherical harmonics.

The localization matrix D accumulates harmonic products over a quadrature of
the target region.  Its eigenvectors, sorted by decreasing eigenvalue, give
band-limited functions maximally energy-concentrated in the region; the
eigenvalue of each function is its in-region energy fraction.  The number of
functions kept is the rounded Shannon number (P+1)^2 * A / (4 pi).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .sphere import (
    AngularRegion,
    Direction,
    QuadratureRule,
    region_quadrature,
    sph_harm_row,
    sph_harm_rows,
)

__all__ = [
    "SlepianBasis",
    "build_localization_matrix",
    "shannon_number",
    "build_slepian_basis",
    "eval_basis",
    "eval_basis_rows",
    "basis_fingerprint",
    "save_basis",
    "load_basis",
]

BASIS_FORMAT = "slepian-basis"
BASIS_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SlepianBasis:
    """Retained eigenpairs of the localization matrix.

    ``eigvecs`` has shape ((max_degree+1)**2, n_functions): column a holds the
    harmonic coefficients of the rank-a basis function.  ``eigvals`` are the
    matching concentration eigenvalues, sorted descending.
    """

    max_degree: int
    region: AngularRegion
    eigvecs: np.ndarray
    eigvals: np.ndarray
    shannon: float

    def __post_init__(self):
        n_harm = (self.max_degree + 1) ** 2
        if self.eigvecs.shape[0] != n_harm:
            raise ValueError("eigvecs row count must be (max_degree+1)**2")
        if self.eigvecs.shape[1] != self.eigvals.size:
            raise ValueError("eigvals length must match eigvec columns")

    @property
    def n_functions(self) -> int:
        return self.eigvecs.shape[1]

    @property
    def cutoff_rank(self) -> int:
        return self.n_functions - 1

    @property
    def fingerprint(self) -> str:
        return basis_fingerprint(self)


def shannon_number(max_degree: int, region: AngularRegion) -> float:
    """(max_degree+1)^2 * area / (4 pi): expected count of concentrated functions."""
    return (max_degree + 1) ** 2 * region.area / (4.0 * math.pi)


def build_localization_matrix(
    max_degree: int, region: AngularRegion, rule: QuadratureRule
) -> np.ndarray:
    """Gram matrix of all harmonics up to ``max_degree`` over the region.

    Entry (i, j) = sum_n w_n Y_i(node_n) Y_j(node_n).
    """
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    if not np.all(region.contains(rule.azimuths, rule.elevations)):
        raise ValueError("quadrature nodes fall outside the target region")
    harm = sph_harm_rows(max_degree, rule.azimuths, rule.elevations)
    loc = (harm * rule.weights[:, None]).T @ harm
    defect = float(np.max(np.abs(loc - loc.T)))
    if defect > 1e-10:
        raise ArithmeticError(
            f"localization matrix symmetry defect {defect:.3e}; quadrature under-resolves"
            f" degree-{2 * max_degree} harmonic products"
        )
    return loc


def build_slepian_basis(
    max_degree: int, region: AngularRegion, rule: QuadratureRule | None = None
) -> SlepianBasis:
    """Eigendecompose the localization matrix and keep the concentrated ranks.

    The default quadrature uses 2*(max_degree+1) nodes per axis, which
    over-resolves the degree-2*max_degree products in the Gram matrix.
    Determinism: eigenvalue ties are broken by pre-sort column index and each
    eigenvector is flipped so its largest-magnitude coefficient is positive.
    """
    shannon = shannon_number(max_degree, region)
    keep = int(math.floor(shannon + 0.5))
    if keep < 1:
        raise ValueError(
            f"region too small for band limit: Shannon number {shannon:.3f} < 1"
        )
    if rule is None:
        n_nodes = 2 * (max_degree + 1)
        rule = region_quadrature(region, n_nodes, n_nodes)
    loc = build_localization_matrix(max_degree, region, rule)
    eigvals, eigvecs = np.linalg.eigh(loc)
    if not np.all(np.isfinite(eigvals)):
        raise ArithmeticError("eigendecomposition of the localization matrix failed")
    order = np.argsort(-eigvals, kind="stable")
    eigvals = eigvals[order][:keep]
    eigvecs = eigvecs[:, order][:, :keep]
    for a in range(keep):
        col = eigvecs[:, a]
        if col[np.argmax(np.abs(col))] < 0:
            eigvecs[:, a] = -col
    return SlepianBasis(
        max_degree=max_degree,
        region=region,
        eigvecs=eigvecs,
        eigvals=eigvals,
        shannon=shannon,
    )


def eval_basis_rows(basis: SlepianBasis, azimuths, elevations) -> np.ndarray:
    """Evaluate all retained basis functions at many directions.

    Returns shape (n_points, n_functions); entry (i, a) is the rank-a function
    at direction i.
    """
    return sph_harm_rows(basis.max_degree, azimuths, elevations) @ basis.eigvecs


def eval_basis(basis: SlepianBasis, direction: Direction) -> np.ndarray:
    """Vector of all retained basis functions at one direction."""
    return sph_harm_row(basis.max_degree, direction) @ basis.eigvecs


def basis_fingerprint(basis: SlepianBasis) -> str:
    """Stable content hash used to match calibrations against ground truths."""
    h = hashlib.sha256()
    h.update(f"{BASIS_FORMAT}:{basis.max_degree}:".encode())
    h.update(repr(basis.region.bounds_degrees).encode())
    h.update(np.ascontiguousarray(basis.eigvals).tobytes())
    h.update(np.ascontiguousarray(basis.eigvecs).tobytes())
    return h.hexdigest()


def save_basis(basis: SlepianBasis, path) -> None:
    """Write the basis as versioned JSON; floats round-trip exactly."""
    doc = {
        "format": BASIS_FORMAT,
        "version": BASIS_FORMAT_VERSION,
        "max_degree": basis.max_degree,
        "region_deg": list(basis.region.bounds_degrees),
        "shannon": basis.shannon,
        "cutoff_rank": basis.cutoff_rank,
        "eigenvalues": basis.eigvals.tolist(),
        "eigvec_columns_row_major": basis.eigvecs.ravel().tolist(),
    }
    Path(path).write_text(json.dumps(doc))


def load_basis(path) -> SlepianBasis:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != BASIS_FORMAT:
        raise ValueError(f"{path}: not a {BASIS_FORMAT} file")
    if doc.get("version") != BASIS_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported version {doc.get('version')}")
    max_degree = int(doc["max_degree"])
    region = AngularRegion.from_degrees(*doc["region_deg"])
    eigvals = np.asarray(doc["eigenvalues"], dtype=float)
    n_harm = (max_degree + 1) ** 2
    eigvecs = np.asarray(doc["eigvec_columns_row_major"], dtype=float).reshape(
        n_harm, eigvals.size
    )
    if doc["cutoff_rank"] != eigvals.size - 1:
        raise ValueError(f"{path}: cutoff_rank inconsistent with eigenvalue count")
    return SlepianBasis(
        max_degree=max_degree,
        region=region,
        eigvecs=eigvecs,
        eigvals=eigvals,
        shannon=float(doc["shannon"]),
    )
