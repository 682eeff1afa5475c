"""Scenario generation and metric computation for comparing the
partition-based algorithms against known ground truth.

Data sets are Gaussian with independent columns: the first ``h`` columns
carry variance 15, the rest variance 1, so the generated matrix is itself
a valid embedding and its leading columns can be compared (after a
Procrustes alignment) with whatever an algorithm recovers.
"""

from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .algorithms import AlgorithmParams, run_algorithm
from .classical import MdsConfiguration
from .errors import MdsError, MetricError, ParamError, ShapeError
from .linalg import validate_data_matrix
from .procrustes import apply_procrustes, fit_procrustes
from .rng import normal_matrix, spawned_generator, sub_seed

DEFAULT_DOMINANT_SD = math.sqrt(15.0)

STUDY_COLUMNS = (
    "algorithm", "n", "k", "h", "replication", "dim",
    "correlation", "eigen_estimate", "bias_contrib", "elapsed_s", "error",
)


@dataclass(frozen=True)
class ScenarioSpec:
    """One cell of the simulation design."""

    n: int
    k: int
    h: int
    dominant_sd: float = DEFAULT_DOMINANT_SD
    noise_sd: float = 1.0
    replications: int = 1
    seed: int = 0

    def validate(self) -> "ScenarioSpec":
        if not 1 <= self.h <= self.k:
            raise ParamError(f"need 1 <= h <= k, got h={self.h}, k={self.k}")
        if self.n < 10:
            raise ParamError(f"n must be >= 10, got {self.n}")
        if self.replications < 1:
            raise ParamError(f"replications must be >= 1, got {self.replications}")
        return self


@dataclass(frozen=True)
class ScenarioMetrics:
    """Per-replication metrics for one (algorithm, scenario) cell."""

    algorithm: str
    correlations: np.ndarray
    eigenvalue_estimates: np.ndarray
    elapsed_s: np.ndarray


def generate_scenario(spec: ScenarioSpec, replication_index: int) -> np.ndarray:
    """Draw the data matrix for one replication of a scenario.

    The draw is pinned by (spec.seed, replication_index); normals come
    from the Box-Muller transform of the PCG64 uniform stream.
    """
    spec.validate()
    gen = spawned_generator(spec.seed, replication_index)
    data = normal_matrix(gen, spec.n, spec.k)
    data[:, :spec.h] *= spec.dominant_sd
    if spec.noise_sd != 1.0:
        data[:, spec.h:] *= spec.noise_sd
    return data


def aligned_correlations(config: MdsConfiguration, dominant) -> np.ndarray:
    """Per-column Pearson correlation after Procrustes alignment.

    The configuration is rotated/shifted onto the ``dominant`` columns
    first, so the result is invariant to any rigid motion or reflection
    of the embedding.
    """
    dom = validate_data_matrix(dominant, name="dominant")
    if config.dimension != dom.shape[1]:
        raise ShapeError(
            f"configuration has {config.dimension} dimensions, "
            f"dominant matrix has {dom.shape[1]} columns"
        )
    if config.n_rows != dom.shape[0]:
        raise ShapeError(
            f"row mismatch: configuration {config.n_rows}, dominant {dom.shape[0]}"
        )
    transform = fit_procrustes(dom, config.points)
    aligned = apply_procrustes(config.points, transform)
    a = aligned - aligned.mean(axis=0)
    d = dom - dom.mean(axis=0)
    norm_a = np.sqrt(np.einsum("ij,ij->j", a, a))
    norm_d = np.sqrt(np.einsum("ij,ij->j", d, d))
    if np.any(norm_a == 0.0) or np.any(norm_d == 0.0):
        raise MetricError("a column has zero variance; correlation undefined")
    return np.einsum("ij,ij->j", a, d) / (norm_a * norm_d)


def eigenvalue_error_stats(estimates, true_value: float = 15.0) -> tuple[np.ndarray, np.ndarray]:
    """Bias and mean squared error per dimension over replications."""
    est = np.asarray(estimates, dtype=np.float64)
    if est.ndim == 1:
        est = est[None, :]
    if est.ndim != 2 or est.shape[0] < 1:
        raise ParamError("estimates must be a (replications, dims) array")
    deviation = est - true_value
    return deviation.mean(axis=0), (deviation ** 2).mean(axis=0)


def run_cell(
    spec: ScenarioSpec,
    algorithm: str,
    *,
    algorithm_index: int = 0,
    params: AlgorithmParams | None = None,
    threads: int | None = None,
) -> tuple[ScenarioMetrics, list[dict]]:
    """All replications of one (scenario, algorithm) cell.

    Returns the collected metrics (successful replications only) plus the
    CSV rows, one per replication and dimension; a failed replication
    contributes a single row with the error column set.  Elapsed time
    covers the algorithm call only, not data generation.
    """
    rows: list[dict] = []
    correlations: list[np.ndarray] = []
    estimates: list[np.ndarray] = []
    elapsed_all: list[float] = []
    true_var = spec.dominant_sd ** 2
    base = params if params is not None else AlgorithmParams(r=spec.h)
    for rep in range(spec.replications):
        data = generate_scenario(spec, rep)
        run_params = replace(base, r=spec.h, seed=sub_seed(spec.seed, algorithm_index, rep))
        common = {
            "algorithm": algorithm, "n": spec.n, "k": spec.k, "h": spec.h,
            "replication": rep,
        }
        started = time.perf_counter()
        try:
            config = run_algorithm(algorithm, data, run_params, threads=threads)
            elapsed = round(time.perf_counter() - started, 3)
            corr = aligned_correlations(config, data[:, :spec.h])
        except MdsError as exc:
            rows.append({
                **common, "dim": "", "correlation": "", "eigen_estimate": "",
                "bias_contrib": "", "elapsed_s": "", "error": str(exc),
            })
            continue
        correlations.append(corr)
        estimates.append(np.asarray(config.eigenvalue_estimates, dtype=np.float64))
        elapsed_all.append(elapsed)
        for dim in range(spec.h):
            estimate = float(config.eigenvalue_estimates[dim])
            rows.append({
                **common,
                "dim": dim + 1,
                "correlation": format(float(corr[dim]), ".17g"),
                "eigen_estimate": format(estimate, ".17g"),
                "bias_contrib": format(estimate - true_var, ".17g"),
                "elapsed_s": format(elapsed, ".3f"),
                "error": "",
            })
    metrics = ScenarioMetrics(
        algorithm=algorithm,
        correlations=np.array(correlations).reshape(-1, spec.h),
        eigenvalue_estimates=np.array(estimates).reshape(-1, spec.h),
        elapsed_s=np.array(elapsed_all),
    )
    return metrics, rows


def _write_rows(path: Path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=STUDY_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)


def _read_rows(path: Path) -> list[dict]:
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


def run_study(
    scenarios: Sequence[ScenarioSpec],
    algorithms: Sequence[str],
    out_dir,
    *,
    params: Mapping[str, AlgorithmParams] | None = None,
    threads: int | None = None,
) -> Path:
    """Run every (scenario, algorithm) cell and assemble one CSV table.

    Each cell is written to its own file under ``out_dir/cells`` as soon
    as it finishes, and cells whose file already exists are loaded rather
    than recomputed, so an interrupted study resumes where it stopped.
    Failures inside a cell become rows with the ``error`` column set; the
    study carries on.  Returns the path of the assembled CSV.
    """
    out_path = Path(out_dir)
    cells_dir = out_path / "cells"
    cells_dir.mkdir(parents=True, exist_ok=True)
    all_rows: list[dict] = []
    for s_idx, spec in enumerate(scenarios):
        spec.validate()
        for a_idx, algorithm in enumerate(algorithms):
            cell_path = cells_dir / f"cell{s_idx:03d}_{algorithm}.csv"
            if cell_path.exists():
                rows = _read_rows(cell_path)
            else:
                base = params.get(algorithm) if params else None
                _, rows = run_cell(spec, algorithm, algorithm_index=a_idx,
                                   params=base, threads=threads)
                _write_rows(cell_path, rows)
            all_rows.extend(rows)
    study_path = out_path / "study.csv"
    _write_rows(study_path, all_rows)
    return study_path


def gof_sweep(
    data,
    algorithm: str,
    params: AlgorithmParams,
    g_target: float,
    *,
    threads: int | None = None,
) -> int:
    """Smallest dimension whose aggregated G1 reaches ``g_target``.

    Candidate dimensions are tried in ascending order, rerunning the
    algorithm with r=h each time.  For the algorithms that align through
    shared rows, c (or s) defaults to 100 during the sweep so that every
    candidate dimension uses the same partitions.
    """
    if not 0.0 < g_target <= 1.0:
        raise ParamError(f"g_target must be in (0, 1], got {g_target}")
    arr = validate_data_matrix(data)
    n, k = arr.shape
    h_cap = min(k, n - 1)
    if algorithm == "divide":
        sweep_params = replace(params, c=params.c if params.c is not None else 100)
        h_cap = min(h_cap, sweep_params.c)
    elif algorithm == "fast":
        sweep_params = replace(params, s=params.s if params.s is not None else 100)
        h_cap = min(h_cap, sweep_params.s)
    else:
        sweep_params = params
    for h in range(1, h_cap + 1):
        config = run_algorithm(algorithm, arr, replace(sweep_params, r=h), threads=threads)
        if config.gof_g1 >= g_target:
            return h
    raise ParamError(
        f"goodness-of-fit target {g_target} unreachable within h <= {h_cap}"
    )
