"""Dense matrix primitives: squared-distance matrices, double centering,
symmetric eigendecomposition and thin SVD.

All functions are pure and operate on plain float64 ndarrays.  Results are
reproducible bitwise for identical inputs regardless of how many worker
threads the caller uses, because every function is a fixed sequence of
NumPy/LAPACK calls with no shared state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalError, ParamError, ShapeError

# Largest row count for which exact (dense n x n) operations are allowed.
# Beyond this, memory use becomes the binding constraint and callers should
# switch to the partition-based algorithms.
EXACT_SIZE_GUARD = 20_000

# Relative threshold below which a negative eigenvalue of a doubly centered
# matrix is treated as numerically zero.
EIGENVALUE_ZERO_TOL = 1e-8


def validate_data_matrix(data, *, name: str = "data") -> np.ndarray:
    """Coerce to a float64 2-D array with n >= 1 rows and k >= 1 columns."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    n, k = arr.shape
    if n < 1 or k < 1:
        raise InvalidInputError(f"{name} must be non-empty, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name} contains non-finite values")
    return arr


def validate_squared_distances(delta, *, name: str = "delta") -> np.ndarray:
    """Check that ``delta`` is a valid symmetric squared-distance matrix."""
    arr = np.asarray(delta, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"{name} must be square, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise InvalidInputError(f"{name} must be non-empty")
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name} contains non-finite values")
    scale = float(np.abs(arr).max()) if arr.size else 0.0
    tol = 1e-9 * max(scale, 1.0)
    if float(np.abs(arr - arr.T).max()) > tol:
        raise InvalidInputError(f"{name} is not symmetric")
    if float(np.abs(np.diagonal(arr)).max(initial=0.0)) > tol:
        raise InvalidInputError(f"{name} has a nonzero diagonal")
    if float(arr.min()) < -tol:
        raise InvalidInputError(f"{name} has negative entries")
    return arr


def euclidean_distance_matrix(data, *, exact_guard: int = EXACT_SIZE_GUARD) -> np.ndarray:
    """Squared Euclidean distances between all row pairs of ``data``.

    Returns the symmetric n x n matrix with entry (i, j) equal to
    sum_s (x_is - x_js)^2.  Distances are stored squared throughout the
    package; no caller ever needs the square roots.
    """
    arr = validate_data_matrix(data)
    n = arr.shape[0]
    if n > exact_guard:
        raise ParamError(
            f"n={n} exceeds the exact-size guard ({exact_guard}); "
            "use one of the partition-based algorithms instead"
        )
    sq = np.einsum("ij,ij->i", arr, arr)
    gram = arr @ arr.T
    dist = sq[:, None] + sq[None, :] - 2.0 * gram
    # gemm round-off can leave tiny negatives and asymmetry
    dist = 0.5 * (dist + dist.T)
    np.maximum(dist, 0.0, out=dist)
    np.fill_diagonal(dist, 0.0)
    return dist


def cross_squared_distances(a, b) -> np.ndarray:
    """Squared Euclidean distances between rows of ``a`` and rows of ``b``.

    Entry (i, j) is the squared distance between row i of ``a`` and row j
    of ``b``; the result has shape (len(a), len(b)).
    """
    a_arr = validate_data_matrix(a, name="a")
    b_arr = validate_data_matrix(b, name="b")
    if a_arr.shape[1] != b_arr.shape[1]:
        raise ShapeError(
            f"column mismatch: a has {a_arr.shape[1]} columns, b has {b_arr.shape[1]}"
        )
    sq_a = np.einsum("ij,ij->i", a_arr, a_arr)
    sq_b = np.einsum("ij,ij->i", b_arr, b_arr)
    dist = a_arr @ b_arr.T
    dist *= -2.0
    dist += sq_a[:, None]
    dist += sq_b[None, :]
    np.maximum(dist, 0.0, out=dist)
    return dist


def double_center(delta) -> np.ndarray:
    """Inner-product matrix of a squared-distance matrix.

    Uses the scalar identity q_ij = -(d2_ij - d2_i. - d2_.j + d2_..)/2,
    which costs O(n^2) time and O(n) extra memory.  The same row-mean
    vector is used for both the row and column corrections, so the output
    is exactly symmetric whenever the input is.
    """
    arr = validate_squared_distances(delta)
    row_means = arr.mean(axis=1)
    grand_mean = row_means.mean()
    q = -0.5 * (arr - row_means[:, None] - row_means[None, :] + grand_mean)
    # the subtraction order differs across the diagonal by one rounding;
    # averaging restores exact symmetry
    return 0.5 * (q + q.T)


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.

    Eigenvectors are the columns of ``eigenvectors``, each unit norm, with
    a deterministic sign: the component of largest absolute value is made
    positive (lowest index wins ties).  ``rank_used`` counts eigenvalues
    above the relative zero threshold.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    rank_used: int


def canonical_column_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so its largest-magnitude entry is positive."""
    if vectors.shape[1] == 0:
        return vectors
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def symmetric_eigen(q) -> EigenSystem:
    """Full eigendecomposition of a symmetric matrix, descending order.

    Ties are kept in the order the solver produced them (stable sort), so
    repeated eigenvalues always come out in the same arrangement.
    """
    arr = np.asarray(q, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise InvalidInputError(f"matrix must be square, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidInputError("matrix contains non-finite values")
    try:
        evals, evecs = np.linalg.eigh(arr)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition failed: {exc}") from exc
    order = np.argsort(-evals, kind="stable")
    evals = evals[order]
    evecs = canonical_column_signs(evecs[:, order])
    scale = float(np.abs(evals).max(initial=0.0))
    rank = int(np.count_nonzero(evals > EIGENVALUE_ZERO_TOL * scale)) if scale > 0 else 0
    return EigenSystem(eigenvalues=evals, eigenvectors=evecs, rank_used=rank)


def symmetric_eigen_topk(q, r: int) -> EigenSystem:
    """Top ``r`` eigenpairs of a symmetric matrix by algebraic value."""
    arr = np.asarray(q, dtype=np.float64)
    n = arr.shape[0] if arr.ndim == 2 else 0
    if not 1 <= r <= n - 1:
        raise ParamError(f"r must satisfy 1 <= r <= n-1, got r={r}, n={n}")
    full = symmetric_eigen(arr)
    return EigenSystem(
        eigenvalues=full.eigenvalues[:r],
        eigenvectors=full.eigenvectors[:, :r],
        rank_used=min(full.rank_used, r),
    )


def thin_svd(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Thin singular value decomposition ``m = left @ diag(values) @ right.T``.

    Left/right factors have orthonormal columns and carry the same
    deterministic sign convention as eigenvectors (applied in pairs, so
    the reconstruction is unchanged).
    """
    arr = np.asarray(m, dtype=np.float64)
    if arr.ndim != 2:
        raise InvalidInputError(f"matrix must be 2-dimensional, got ndim={arr.ndim}")
    if not np.isfinite(arr).all():
        raise InvalidInputError("matrix contains non-finite values")
    try:
        left, values, right_t = np.linalg.svd(arr, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed to converge: {exc}") from exc
    lead = np.argmax(np.abs(left), axis=0)
    signs = np.sign(left[lead, np.arange(left.shape[1])])
    signs[signs == 0] = 1.0
    return left * signs, values, (right_t.T * signs)
