"""Classical (Torgerson) multidimensional scaling.

Given a squared-distance matrix, double-center it, eigendecompose, and
scale the top eigenvectors by the square roots of their eigenvalues.  The
full nontrivial spectrum (n-1 values; the zero eigenvalue belonging to the
all-ones eigenvector is removed) is retained so the goodness-of-fit ratios
use the complete denominators.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRankError, ParamError
from .linalg import (
    EIGENVALUE_ZERO_TOL,
    EXACT_SIZE_GUARD,
    double_center,
    euclidean_distance_matrix,
    symmetric_eigen,
    validate_squared_distances,
)


@dataclass(frozen=True)
class MdsConfiguration:
    """An n x r embedding plus the quality figures of the run that made it.

    ``eigenvalue_estimates`` are on the variance scale (eigenvalue divided
    by the number of rows that entered the decomposition), so each entry
    estimates the variance of the matching column of ``points``.
    """

    points: np.ndarray
    eigenvalue_estimates: np.ndarray
    gof_g1: float
    gof_g2: float

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    @property
    def n_rows(self) -> int:
        return self.points.shape[0]


@dataclass(frozen=True)
class GofBreakdown:
    """The three sums behind the goodness-of-fit ratios."""

    retained_sum: float
    positive_sum: float
    absolute_sum: float


def gof_breakdown(eigenvalues, r: int) -> GofBreakdown:
    """Retained / positive / absolute spectral mass for the first r values."""
    ev = np.asarray(eigenvalues, dtype=np.float64)
    if ev.ndim != 1 or ev.size == 0:
        raise ParamError("eigenvalues must be a non-empty 1-D sequence")
    if np.any(np.diff(ev) > 0):
        raise ParamError("eigenvalues must be sorted in descending order")
    if not 1 <= r <= ev.size:
        raise ParamError(f"r must satisfy 1 <= r <= {ev.size}, got {r}")
    return GofBreakdown(
        retained_sum=float(ev[:r].sum()),
        positive_sum=float(np.maximum(ev, 0.0).sum()),
        absolute_sum=float(np.abs(ev).sum()),
    )


def goodness_of_fit(eigenvalues, r: int) -> tuple[float, float]:
    """G1 and G2 fit ratios of the first ``r`` eigenvalues.

    G1 divides by the total absolute spectral mass, G2 by the positive
    mass only.  When no eigenvalue is negative the two denominators are
    the same floating-point number, so G1 == G2 exactly.
    """
    parts = gof_breakdown(eigenvalues, r)
    if parts.absolute_sum == 0.0:
        raise DegenerateRankError("all eigenvalues are zero; fit ratios undefined")
    return parts.retained_sum / parts.absolute_sum, parts.retained_sum / parts.positive_sum


def _nontrivial_spectrum(q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenpairs of a doubly centered matrix without the all-ones mode.

    The eigenvector with the largest overlap with the ones vector carries
    the structural zero eigenvalue; it is dropped, leaving n-1 pairs.
    Eigenvalues within the relative zero tolerance of zero are snapped to
    exactly 0.0, so spectra of Euclidean inputs are nonnegative bitwise
    and rank deficiencies are detected regardless of round-off sign.
    """
    system = symmetric_eigen(q)
    n = q.shape[0]
    overlap = np.abs(system.eigenvectors.T @ np.ones(n))
    trivial = int(np.argmax(overlap))
    keep = np.arange(n) != trivial
    values = system.eigenvalues[keep].copy()
    vectors = system.eigenvectors[:, keep]
    tol = EIGENVALUE_ZERO_TOL * float(np.abs(values).max(initial=0.0))
    values[np.abs(values) <= tol] = 0.0
    return values, vectors


def classical_mds(delta, r: int, *, exact_guard: int = EXACT_SIZE_GUARD) -> MdsConfiguration:
    """Classical MDS of a squared-distance matrix into ``r`` dimensions.

    Parameters
    ----------
    delta : (n, n) array
        Symmetric matrix of squared pairwise distances, zero diagonal.
    r : int
        Target dimension, 1 <= r <= n-1.

    Raises
    ------
    ParamError
        If ``r`` is out of range or ``n`` exceeds the exact-size guard.
    DegenerateRankError
        If any of the leading ``r`` eigenvalues is not strictly positive.
    """
    arr = np.asarray(delta, dtype=np.float64)
    n = arr.shape[0] if arr.ndim == 2 else 0
    if not 1 <= r <= n - 1:
        raise ParamError(f"r must satisfy 1 <= r <= n-1, got r={r}, n={n}")
    if n > exact_guard:
        raise ParamError(
            f"n={n} exceeds the exact-size guard ({exact_guard}); "
            "use one of the partition-based algorithms instead"
        )
    arr = validate_squared_distances(arr)
    values, vectors = _nontrivial_spectrum(double_center(arr))
    bad = np.nonzero(values[:r] <= 0.0)[0]
    if bad.size:
        raise DegenerateRankError(
            f"eigenvalue {bad[0] + 1} of {r} is not positive "
            f"({values[bad[0]]:.3e}); reduce r"
        )
    points = vectors[:, :r] * np.sqrt(values[:r])
    g1, g2 = goodness_of_fit(values, r)
    return MdsConfiguration(
        points=points,
        eigenvalue_estimates=values[:r] / n,
        gof_g1=g1,
        gof_g2=g2,
    )


def classical_mds_from_data(data, r: int, *, exact_guard: int = EXACT_SIZE_GUARD) -> MdsConfiguration:
    """Classical MDS of raw observations using Euclidean row distances."""
    arr = np.asarray(data, dtype=np.float64)
    n = arr.shape[0] if arr.ndim == 2 else 0
    if not 1 <= r <= n - 1:
        raise ParamError(f"r must satisfy 1 <= r <= n-1, got r={r}, n={n}")
    delta = euclidean_distance_matrix(arr, exact_guard=exact_guard)
    return classical_mds(delta, r, exact_guard=exact_guard)
