"""Orthogonal Procrustes alignment with optional translation.

Finds the orthogonal matrix T (and translation t) minimising the squared
Frobenius norm of ``target - source @ T - 1 t'``.  The solution comes from
the SVD of the cross-product of the (centered) configurations; reflections
are allowed since only orthogonality is constrained.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError
from .linalg import thin_svd

# Singular values of the cross-product below this fraction of the largest
# make the rotation non-unique; the fit is flagged instead of rejected.
DEGENERATE_SV_RATIO = 1e-12


@dataclass(frozen=True)
class ProcrustesTransform:
    """An orthogonal map plus translation, with the residual of its fit.

    ``loss`` is the squared Frobenius norm of the alignment residual.
    ``degenerate`` is set when the cross-product matrix was rank deficient,
    in which case the rotation is one of many equally good choices (the
    SVD-canonical one, so repeated runs agree).
    """

    rotation: np.ndarray
    translation: np.ndarray
    loss: float
    degenerate: bool = False


def _as_config(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got ndim={arr.ndim}")
    return arr


def _rotation_from_cross(cross: np.ndarray) -> tuple[np.ndarray, bool]:
    left, values, right = thin_svd(cross)
    top = values[0] if values.size else 0.0
    degenerate = bool(values.size == 0 or values[-1] <= DEGENERATE_SV_RATIO * top)
    return right @ left.T, degenerate


def fit_procrustes(target, source) -> ProcrustesTransform:
    """Best orthogonal-plus-translation map sending ``source`` onto ``target``.

    Both inputs are n x r configurations with matching shapes and n >= 2.
    The rotation comes from the SVD of the cross-product of the centered
    configurations; the translation then matches the column means.
    """
    t_arr = _as_config(target, "target")
    s_arr = _as_config(source, "source")
    if t_arr.shape != s_arr.shape:
        raise ShapeError(f"shape mismatch: target {t_arr.shape} vs source {s_arr.shape}")
    n, r = t_arr.shape
    if n < 2 or r < 1:
        raise ShapeError(f"need at least 2 rows and 1 column, got {t_arr.shape}")
    # centering via mean subtraction; P is idempotent so X1' P X2 equals
    # the cross-product of the two centered configurations
    cross = (t_arr - t_arr.mean(axis=0)).T @ (s_arr - s_arr.mean(axis=0))
    rotation, degenerate = _rotation_from_cross(cross)
    translation = (t_arr - s_arr @ rotation).mean(axis=0)
    residual = t_arr - s_arr @ rotation - translation
    return ProcrustesTransform(
        rotation=rotation,
        translation=translation,
        loss=float(np.sum(residual * residual)),
        degenerate=degenerate,
    )


def fit_procrustes_no_translation(target, source) -> ProcrustesTransform:
    """Best pure orthogonal map ``source @ T ~ target`` (translation fixed at 0)."""
    t_arr = _as_config(target, "target")
    s_arr = _as_config(source, "source")
    if t_arr.shape != s_arr.shape:
        raise ShapeError(f"shape mismatch: target {t_arr.shape} vs source {s_arr.shape}")
    if t_arr.shape[0] < 2 or t_arr.shape[1] < 1:
        raise ShapeError(f"need at least 2 rows and 1 column, got {t_arr.shape}")
    rotation, degenerate = _rotation_from_cross(t_arr.T @ s_arr)
    residual = t_arr - s_arr @ rotation
    return ProcrustesTransform(
        rotation=rotation,
        translation=np.zeros(t_arr.shape[1]),
        loss=float(np.sum(residual * residual)),
        degenerate=degenerate,
    )


def apply_procrustes(points, transform: ProcrustesTransform) -> np.ndarray:
    """Apply a fitted transform: ``points @ rotation + translation``."""
    arr = _as_config(points, "points")
    r = transform.rotation.shape[0]
    if arr.shape[1] != r:
        raise ShapeError(f"points have {arr.shape[1]} columns, transform expects {r}")
    return arr @ transform.rotation + transform.translation
