"""Seedable random streams with a fixed sub-stream splitting rule.

All randomness in the package flows through PCG64 generators keyed by a
master seed plus an integer path (``spawn_key``).  Two call sites that use
different paths can never share generator state, so work items may be
executed in any order, or in parallel, without changing any draw.
"""

from __future__ import annotations

import numpy as np


def spawned_generator(seed: int, *path: int) -> np.random.Generator:
    """PCG64 generator for sub-stream ``path`` of the given master seed."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.PCG64(ss))


def sub_seed(seed: int, *path: int) -> int:
    """Derive a child integer seed. Same rule as spawned_generator."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return int(ss.generate_state(1, np.uint64)[0])


def normal_matrix(gen: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    """Standard normal draws via the Box-Muller transform of uniforms.

    Only ``gen.random()`` (uniform doubles) is consumed, so the output
    stream is pinned by the PCG64 bit stream alone and does not depend on
    any library-specific normal sampler.
    """
    count = rows * cols
    half = (count + 1) // 2
    u1 = gen.random(half)
    u2 = gen.random(half)
    # u1 in [0,1) so 1-u1 in (0,1]; log1p keeps the radius exact at u1=0
    radius = np.sqrt(-2.0 * np.log1p(-u1))
    angle = (2.0 * np.pi) * u2
    z = np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])
    return z[:count].reshape(rows, cols)
