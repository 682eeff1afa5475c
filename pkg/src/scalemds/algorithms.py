"""Partition-based MDS algorithms for data sets too large for the exact
method: divide-and-conquer, interpolation, and recursive fast MDS.

All three share one scheme: run classical MDS on pieces no larger than
``l`` rows, then knit the partial configurations into one coordinate
system.  Divide-and-conquer shares ``c`` connecting rows between every
piece and aligns with Procrustes; interpolation embeds one sample exactly
and projects everything else onto it in closed form; fast MDS splits
recursively and aligns each branch through a configuration built from
``s`` sampled rows per branch.

Subset-level work items are pure functions of their input rows, so they
may run on any number of worker threads; results are always combined in
plan order and the output is bitwise identical for any thread count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .classical import MdsConfiguration, classical_mds_from_data
from .errors import DegenerateRankError, NumericalError, ParamError, ShapeError
from .linalg import (
    EXACT_SIZE_GUARD,
    cross_squared_distances,
    double_center,
    euclidean_distance_matrix,
    validate_data_matrix,
)
from .partition import FastNode, plan_divide_conquer, plan_fast, plan_interpolation
from .procrustes import apply_procrustes, fit_procrustes

# Partition sizes that worked well across a wide range of inputs.
DEFAULT_L_DIVIDE = 400
DEFAULT_L = 1000

# Condition-number limit for the sample covariance inverted by the
# interpolation formula; beyond this the requested dimension exceeds the
# usable rank of the base configuration.
COVARIANCE_CONDITION_LIMIT = 1e12

ALGORITHM_NAMES = ("classical", "divide", "interpolate", "fast")


@dataclass(frozen=True)
class AlgorithmParams:
    """Tuning knobs shared by the partition-based algorithms.

    ``l`` is the largest piece handed to classical MDS, ``c`` the number
    of connecting rows (divide-and-conquer), ``s`` the sampling rows per
    subset (fast).  Fields left as None fall back to per-algorithm
    defaults when resolved: l=400 for divide, l=1000 otherwise, and
    c = s = 2r.
    """

    r: int
    l: int | None = None
    c: int | None = None
    s: int | None = None
    seed: int = 0

    def resolved(self, algorithm: str) -> "AlgorithmParams":
        """Fill defaults and validate for one algorithm; raises ParamError."""
        if self.r < 1:
            raise ParamError(f"r must be >= 1, got {self.r}")
        if algorithm == "classical":
            return self
        l = self.l if self.l is not None else (
            DEFAULT_L_DIVIDE if algorithm == "divide" else DEFAULT_L
        )
        if l > EXACT_SIZE_GUARD:
            raise ParamError(
                f"l={l} exceeds the exact-size guard ({EXACT_SIZE_GUARD})"
            )
        c = self.c
        s = self.s
        if algorithm == "divide":
            c = c if c is not None else 2 * self.r
            if c < self.r:
                raise ParamError(f"c must be >= r, got c={c}, r={self.r}")
            if l <= c:
                raise ParamError(f"l must exceed c, got l={l}, c={c}")
        elif algorithm == "interpolate":
            if l < 2:
                raise ParamError(f"l must be >= 2, got l={l}")
        elif algorithm == "fast":
            s = s if s is not None else 2 * self.r
            if s < self.r:
                raise ParamError(f"s must be >= r, got s={s}, r={self.r}")
            if s < 2:
                raise ParamError("s must be >= 2: alignment needs two sampling rows")
            if l < 2 * s:
                raise ParamError(f"l must be >= 2*s, got l={l}, s={s}")
        else:
            raise ParamError(f"unknown algorithm {algorithm!r}")
        return replace(self, l=l, c=c, s=s)


def _map_in_order(fn, items, threads: int | None):
    """Apply ``fn`` to items, possibly on a thread pool, preserving order."""
    items = list(items)
    if threads is None:
        threads = min(len(items), os.cpu_count() or 1)
    if threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _piece_mds(rows: np.ndarray, r: int, label: str) -> MdsConfiguration:
    try:
        return classical_mds_from_data(rows, r)
    except DegenerateRankError as exc:
        raise DegenerateRankError(f"{label}: {exc}") from exc


def _recentered(points: np.ndarray) -> np.ndarray:
    # stitched blocks are centered only up to Procrustes translations;
    # one subtraction restores exactly zero column means
    return points - points.mean(axis=0)


def divide_and_conquer_mds(
    data, params: AlgorithmParams, *, threads: int | None = None
) -> MdsConfiguration:
    """MDS by splitting into overlapping subsets and stitching with Procrustes.

    Each subset shares ``c`` connecting rows with every other.  Subset 1
    fixes the coordinate system; the others are rotated and shifted onto
    it by a Procrustes fit over the shared rows.  Fit ratios are the
    size-weighted means of the per-subset ratios, and each eigenvalue
    estimate is the plain mean of the per-subset variance-scale values.
    """
    arr = validate_data_matrix(data)
    prm = params.resolved("divide")
    n = arr.shape[0]
    if n <= prm.l:
        return classical_mds_from_data(arr, prm.r)
    plan = plan_divide_conquer(n, prm.l, prm.c, prm.seed)
    configs = _map_in_order(
        lambda j: _piece_mds(arr[plan.subsets[j]], prm.r, f"subset {j + 1}"),
        range(plan.p),
        threads,
    )
    c = prm.c
    points = np.empty((n, prm.r))
    points[plan.subsets[0]] = configs[0].points
    anchor = configs[0].points[:c]
    for j in range(1, plan.p):
        transform = fit_procrustes(anchor, configs[j].points[:c])
        points[plan.subsets[j][c:]] = apply_procrustes(configs[j].points[c:], transform)

    sizes = np.array([len(sub) for sub in plan.subsets], dtype=np.float64)
    weights = sizes.copy()
    weights[1:] -= c
    g1 = float(np.dot(weights, [cfg.gof_g1 for cfg in configs]) / n)
    g2 = float(np.dot(weights, [cfg.gof_g2 for cfg in configs]) / n)
    per_subset = np.stack(
        [cfg.eigenvalue_estimates * (size / weight)
         for cfg, size, weight in zip(configs, sizes, weights)]
    )
    return MdsConfiguration(
        points=_recentered(points),
        eigenvalue_estimates=per_subset.mean(axis=0),
        gof_g1=g1,
        gof_g2=g2,
    )


@dataclass(frozen=True)
class GowerContext:
    """Everything needed to project new rows into an existing configuration.

    ``covariance`` is the column covariance of ``base_config`` with 1/l
    normalisation, matching the variance scale of the MDS eigenvalues.
    """

    base_config: np.ndarray
    q_diag: np.ndarray
    covariance: np.ndarray
    base_rows: np.ndarray

    @property
    def l(self) -> int:
        return self.base_rows.shape[0]


def gower_context(base_rows, base_config) -> GowerContext:
    """Precompute the interpolation context for a base configuration."""
    rows = validate_data_matrix(base_rows, name="base_rows")
    config = np.asarray(base_config, dtype=np.float64)
    if config.ndim != 2 or config.shape[0] != rows.shape[0]:
        raise ShapeError(
            f"base_config must have one row per base row, got {config.shape} "
            f"for {rows.shape[0]} rows"
        )
    q = double_center(euclidean_distance_matrix(rows))
    q_diag = np.ascontiguousarray(np.diagonal(q))
    scale = float(np.abs(q_diag).max(initial=0.0))
    if float(q_diag.min()) < -1e-9 * max(scale, 1.0):
        raise NumericalError("inner-product diagonal has significantly negative entries")
    centered = config - config.mean(axis=0)
    covariance = centered.T @ centered / rows.shape[0]
    eigs = np.linalg.eigvalsh(covariance)
    smallest, largest = float(eigs[0]), float(eigs[-1])
    condition = np.inf if smallest <= 0.0 else largest / smallest
    if condition > COVARIANCE_CONDITION_LIMIT:
        raise NumericalError(
            f"base covariance is ill-conditioned (condition estimate {condition:.3e}); "
            "the requested dimension exceeds the usable rank"
        )
    return GowerContext(base_config=config, q_diag=q_diag, covariance=covariance, base_rows=rows)


def gower_interpolate(ctx: GowerContext, new_rows) -> np.ndarray:
    """Closed-form coordinates for new rows in the base coordinate system.

    Implements x = (1 q' - A2) X1 S1^{-1} / (2 l), where A2 holds squared
    distances from the new rows to the base rows.  No alignment step is
    needed afterwards: the result already lives in the base frame.
    """
    rows = validate_data_matrix(new_rows, name="new_rows")
    if rows.shape[1] != ctx.base_rows.shape[1]:
        raise ShapeError(
            f"column mismatch: new rows have {rows.shape[1]} columns, "
            f"base has {ctx.base_rows.shape[1]}"
        )
    a2 = cross_squared_distances(rows, ctx.base_rows)
    np.subtract(ctx.q_diag[None, :], a2, out=a2)
    projected = a2 @ ctx.base_config / (2.0 * ctx.l)
    try:
        factor = cho_factor(ctx.covariance, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"base covariance is not positive definite: {exc}") from exc
    return np.ascontiguousarray(
        cho_solve(factor, projected.T, check_finite=False).T
    )


def interpolation_mds(
    data, params: AlgorithmParams, *, threads: int | None = None
) -> MdsConfiguration:
    """MDS of one random sample, extended to all rows by interpolation.

    Classical MDS embeds a sample of ``l`` rows; every remaining chunk of
    at most ``l`` rows is projected into that frame in closed form.  Fit
    ratios and eigenvalue estimates come from the sample alone.
    """
    arr = validate_data_matrix(data)
    prm = params.resolved("interpolate")
    n = arr.shape[0]
    if n <= prm.l:
        return classical_mds_from_data(arr, prm.r)
    plan = plan_interpolation(n, prm.l, prm.seed)
    base_indices = plan.subsets[0]
    base = _piece_mds(arr[base_indices], prm.r, "sample subset")
    ctx = gower_context(arr[base_indices], base.points)
    chunks = plan.subsets[1:]
    results = _map_in_order(lambda chunk: gower_interpolate(ctx, arr[chunk]), chunks, threads)
    points = np.empty((n, prm.r))
    points[base_indices] = base.points
    for chunk, block in zip(chunks, results):
        points[chunk] = block
    return MdsConfiguration(
        points=_recentered(points),
        eigenvalue_estimates=base.eigenvalue_estimates,
        gof_g1=base.gof_g1,
        gof_g2=base.gof_g2,
    )


@dataclass(frozen=True)
class _BranchFit:
    g1: float
    g2: float
    estimates: np.ndarray
    size: int


def _solve_fast_node(
    node: FastNode, arr: np.ndarray, r: int, threads: int | None, label: str
) -> tuple[np.ndarray, _BranchFit]:
    """Configuration (rows in node.indices order) plus fit summary."""
    if node.is_leaf:
        cfg = _piece_mds(arr[node.indices], r, label or "leaf 1")
        return cfg.points, _BranchFit(
            g1=cfg.gof_g1, g2=cfg.gof_g2,
            estimates=cfg.eigenvalue_estimates, size=node.size,
        )

    def solve_child(item):
        i, child = item
        return _solve_fast_node(child, arr, r, 1, f"{label}.{i + 1}" if label else f"branch {i + 1}")

    solved = _map_in_order(solve_child, enumerate(node.children), threads)

    sampling = np.concatenate([child.sampling_indices() for child in node.children])
    align = _piece_mds(arr[sampling], r, f"{label or 'root'} alignment set")
    blocks = []
    offset = 0
    for child, (child_points, _) in zip(node.children, solved):
        count = len(child.sampling_positions)
        target = align.points[offset:offset + count]
        offset += count
        transform = fit_procrustes(target, child_points[child.sampling_positions])
        blocks.append(apply_procrustes(child_points, transform))
    points = np.vstack(blocks)

    fits = [fit for _, fit in solved]
    sizes = np.array([fit.size for fit in fits], dtype=np.float64)
    total = sizes.sum()
    g1 = float(np.dot(sizes, [fit.g1 for fit in fits]) / total)
    g2 = float(np.dot(sizes, [fit.g2 for fit in fits]) / total)
    estimates = np.stack([fit.estimates for fit in fits]).mean(axis=0)
    return points, _BranchFit(g1=g1, g2=g2, estimates=estimates, size=int(total))


def fast_mds(
    data, params: AlgorithmParams, *, threads: int | None = None
) -> MdsConfiguration:
    """Recursive MDS: split, solve each part, align through sampled rows.

    Parts larger than ``l`` are solved by recursion.  At every level the
    union of ``s`` sampled rows per part is embedded by classical MDS and
    each part is Procrustes-aligned onto that configuration over its own
    samples.  Fit ratios aggregate like divide-and-conquer: size-weighted
    means over parts, plain means for the eigenvalue estimates.
    """
    arr = validate_data_matrix(data)
    prm = params.resolved("fast")
    n = arr.shape[0]
    if n <= prm.l:
        return classical_mds_from_data(arr, prm.r)
    plan = plan_fast(n, prm.l, prm.s, prm.seed)
    block, fit = _solve_fast_node(plan.root, arr, prm.r, threads, "")
    points = np.empty((n, prm.r))
    points[plan.root.indices] = block
    return MdsConfiguration(
        points=_recentered(points),
        eigenvalue_estimates=fit.estimates,
        gof_g1=fit.g1,
        gof_g2=fit.g2,
    )


def run_algorithm(
    name: str, data, params: AlgorithmParams, *, threads: int | None = None
) -> MdsConfiguration:
    """Dispatch by algorithm name: classical, divide, interpolate or fast."""
    if name == "classical":
        return classical_mds_from_data(data, params.r)
    if name == "divide":
        return divide_and_conquer_mds(data, params, threads=threads)
    if name == "interpolate":
        return interpolation_mds(data, params, threads=threads)
    if name == "fast":
        return fast_mds(data, params, threads=threads)
    raise ParamError(f"unknown algorithm {name!r}; expected one of {ALGORITHM_NAMES}")
