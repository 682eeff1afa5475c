"""Deterministic construction of the row partitions behind the three
partition-based MDS algorithms.

All plans are driven by PCG64 streams derived from a single integer seed
(see :mod:`scalemds.rng`), so the same parameters always produce the same
plan, on any platform, regardless of how the work is later parallelised.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ParamError
from .rng import spawned_generator


@dataclass(frozen=True)
class DcPlan:
    """Partition for divide-and-conquer MDS.

    Every subset array stores the ``c`` shared connecting indices first
    (ascending), followed by the subset's own indices (ascending).  With a
    single subset (n <= l) no connecting points are drawn and the subset
    is simply 0..n-1.
    """

    connecting_indices: np.ndarray
    subsets: list[np.ndarray]
    n: int
    l: int
    c: int
    seed: int

    @property
    def p(self) -> int:
        return len(self.subsets)

    def own_indices(self, j: int) -> np.ndarray:
        """Indices contributed by subset ``j`` alone (connecting stripped)."""
        if self.p == 1:
            return self.subsets[0]
        return self.subsets[j][len(self.connecting_indices):]

    def to_dict(self) -> dict:
        return {
            "algorithm": "divide",
            "n": self.n,
            "l": self.l,
            "c": self.c,
            "seed": self.seed,
            "connecting_indices": self.connecting_indices.tolist(),
            "subsets": [s.tolist() for s in self.subsets],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class InterpPlan:
    """Partition for interpolation MDS: the sample subset plus the rest
    chunked into groups of at most ``l`` in shuffled order."""

    subsets: list[np.ndarray]
    n: int
    l: int
    seed: int

    @property
    def p(self) -> int:
        return len(self.subsets)

    def to_dict(self) -> dict:
        return {
            "algorithm": "interpolate",
            "n": self.n,
            "l": self.l,
            "seed": self.seed,
            "subsets": [s.tolist() for s in self.subsets],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass
class FastNode:
    """One node of the fast-MDS recursion tree.

    ``indices`` lists the node's data rows in the order its configuration
    rows will be produced (leaves: ascending; internal nodes: children
    concatenated).  ``sampling_positions`` indexes into ``indices`` and is
    assigned by the parent; the root has none.
    """

    indices: np.ndarray
    children: list["FastNode"] = field(default_factory=list)
    sampling_positions: np.ndarray | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def size(self) -> int:
        return len(self.indices)

    def sampling_indices(self) -> np.ndarray:
        return self.indices[self.sampling_positions]


@dataclass(frozen=True)
class FastStats:
    """Summary of a fast-MDS recursion: how many leaves, how big, how deep."""

    leaf_count: int
    mean_leaf_size: float
    depth: int


@dataclass(frozen=True)
class FastPlan:
    """Recursion tree for fast MDS."""

    root: FastNode
    n: int
    l: int
    s: int
    seed: int

    def leaves(self) -> list[FastNode]:
        out: list[FastNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out

    def stats(self) -> FastStats:
        leaf_sizes: list[int] = []
        depth = 0
        stack = [(self.root, 0)]
        while stack:
            node, level = stack.pop()
            if node.is_leaf:
                leaf_sizes.append(node.size)
                depth = max(depth, level)
            else:
                stack.extend((child, level + 1) for child in node.children)
        return FastStats(
            leaf_count=len(leaf_sizes),
            mean_leaf_size=self.n / len(leaf_sizes),
            depth=depth,
        )

    def _node_dict(self, node: FastNode) -> dict:
        out: dict = {"indices": node.indices.tolist()}
        if node.sampling_positions is not None:
            out["sampling_positions"] = node.sampling_positions.tolist()
        if node.children:
            out["children"] = [self._node_dict(child) for child in node.children]
        return out

    def to_dict(self) -> dict:
        return {
            "algorithm": "fast",
            "n": self.n,
            "l": self.l,
            "s": self.s,
            "seed": self.seed,
            "tree": self._node_dict(self.root),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def plan_divide_conquer(n: int, l: int, c: int, seed: int) -> DcPlan:
    """Draw the connecting points and deal the rest into subsets of size l.

    With ``n <= l`` the plan is a single subset holding 0..n-1.  Otherwise
    the final subset is merged into its predecessor whenever it would hold
    fewer than c+1 of its own points, since aligning on that few rows is
    ill-posed.
    """
    if n < 1:
        raise ParamError(f"n must be >= 1, got {n}")
    if c < 1:
        raise ParamError(f"c must be >= 1, got {c}")
    if l <= c:
        raise ParamError(f"l must exceed c, got l={l}, c={c}")
    if n <= l:
        return DcPlan(
            connecting_indices=np.empty(0, dtype=np.int64),
            subsets=[np.arange(n, dtype=np.int64)],
            n=n, l=l, c=c, seed=seed,
        )
    gen = spawned_generator(seed)
    connecting = np.sort(gen.choice(n, size=c, replace=False)).astype(np.int64)
    rest = np.setdiff1d(np.arange(n, dtype=np.int64), connecting)
    shuffled = gen.permutation(rest)
    step = l - c
    chunks = [shuffled[i:i + step] for i in range(0, len(shuffled), step)]
    if len(chunks) > 1 and len(chunks[-1]) < c + 1:
        chunks[-2] = np.concatenate([chunks[-2], chunks[-1]])
        chunks.pop()
    subsets = [np.concatenate([connecting, np.sort(chunk)]) for chunk in chunks]
    return DcPlan(connecting_indices=connecting, subsets=subsets, n=n, l=l, c=c, seed=seed)


def plan_interpolation(n: int, l: int, seed: int) -> InterpPlan:
    """Pick a uniform sample of size min(l, n), then chunk the remainder."""
    if n < 1:
        raise ParamError(f"n must be >= 1, got {n}")
    if l < 2:
        raise ParamError(f"l must be >= 2, got {l}")
    if n <= l:
        return InterpPlan(subsets=[np.arange(n, dtype=np.int64)], n=n, l=l, seed=seed)
    gen = spawned_generator(seed)
    sample = np.sort(gen.choice(n, size=l, replace=False)).astype(np.int64)
    rest = np.setdiff1d(np.arange(n, dtype=np.int64), sample)
    shuffled = gen.permutation(rest)
    subsets = [sample]
    for i in range(0, len(shuffled), l):
        subsets.append(np.sort(shuffled[i:i + l]))
    return InterpPlan(subsets=subsets, n=n, l=l, seed=seed)


def _validate_fast_params(n: int, l: int, s: int) -> None:
    if n < 1:
        raise ParamError(f"n must be >= 1, got {n}")
    if s < 1:
        raise ParamError(f"s must be >= 1, got {s}")
    if l < 2 * s:
        raise ParamError(f"l must be >= 2*s so that at least two subsets form, got l={l}, s={s}")


def plan_fast(n: int, l: int, s: int, seed: int) -> FastPlan:
    """Build the fast-MDS recursion tree.

    Nodes larger than ``l`` are shuffled and split as evenly as possible
    into ``l // s`` children (sizes differ by at most one); each child gets
    min(s, size) sampling positions drawn by its parent.  Nodes of size at
    most ``l`` are leaves.
    """
    _validate_fast_params(n, l, s)
    p = l // s

    def build(indices: np.ndarray, path: tuple[int, ...]) -> FastNode:
        if len(indices) <= l:
            return FastNode(indices=np.sort(indices))
        gen = spawned_generator(seed, *path)
        shuffled = gen.permutation(indices)
        chunks = np.array_split(shuffled, p)
        positions = [
            np.sort(gen.choice(len(chunk), size=min(s, len(chunk)), replace=False))
            for chunk in chunks
        ]
        children = []
        for i, chunk in enumerate(chunks):
            child = build(chunk, path + (i,))
            child.sampling_positions = positions[i]
            children.append(child)
        merged = np.concatenate([child.indices for child in children])
        return FastNode(indices=merged, children=children)

    root = build(np.arange(n, dtype=np.int64), ())
    return FastPlan(root=root, n=n, l=l, s=s, seed=seed)


def fast_stats(n: int, l: int, s: int) -> FastStats:
    """Leaf count, mean leaf size and depth of the fast-MDS recursion.

    Pure arithmetic on the split rule; no randomness is involved because
    the tree shape depends only on sizes.
    """
    _validate_fast_params(n, l, s)
    p = l // s
    memo: dict[int, tuple[int, int]] = {}

    def count(size: int) -> tuple[int, int]:
        if size <= l:
            return 1, 0
        if size in memo:
            return memo[size]
        q, rem = divmod(size, p)
        leaves = 0
        depth = 0
        if rem:
            sub_leaves, sub_depth = count(q + 1)
            leaves += rem * sub_leaves
            depth = max(depth, sub_depth)
        sub_leaves, sub_depth = count(q)
        leaves += (p - rem) * sub_leaves
        depth = max(depth, sub_depth)
        memo[size] = (leaves, depth + 1)
        return memo[size]

    leaf_count, depth = count(n)
    return FastStats(leaf_count=leaf_count, mean_leaf_size=n / leaf_count, depth=depth)
