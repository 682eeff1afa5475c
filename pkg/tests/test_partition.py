import json

import numpy as np
import pytest

from scalemds import (
    ParamError,
    fast_stats,
    plan_divide_conquer,
    plan_fast,
    plan_interpolation,
)


def assert_exact_cover(index_arrays, n):
    """Multiset of all indices equals 0..n-1 exactly once."""
    merged = np.concatenate([np.asarray(a) for a in index_arrays])
    assert len(merged) == n
    assert np.array_equal(np.sort(merged), np.arange(n))


class TestDividePlan:
    def test_p_formula(self):
        plan = plan_divide_conquer(1000, 400, 20, seed=0)
        assert plan.p == 3

    def test_small_n_passthrough(self):
        plan = plan_divide_conquer(300, 400, 20, seed=0)
        assert plan.p == 1
        assert np.array_equal(plan.subsets[0], np.arange(300))
        assert len(plan.connecting_indices) == 0

    def test_exhaustive_index_audit(self):
        n, l, c = 1_000_000, 400, 20
        plan = plan_divide_conquer(n, l, c, seed=123)
        connecting = plan.connecting_indices
        assert len(connecting) == c
        for subset in plan.subsets:
            assert np.array_equal(subset[:c], connecting)
        assert_exact_cover([connecting] + [s[c:] for s in plan.subsets], n)

    def test_subset_sizes(self):
        plan = plan_divide_conquer(1000, 400, 20, seed=5)
        sizes = [len(s) for s in plan.subsets]
        assert sizes[0] == 400
        assert sizes[1] == 400
        assert sizes[2] == 240  # 20 connecting + 220 remainder

    def test_short_remainder_merged(self):
        # 275 own points deal into 90-chunks: 90, 90, 90, 5 -> last merged
        plan = plan_divide_conquer(285, 100, 10, seed=1)
        sizes = [len(s) for s in plan.subsets]
        assert sizes == [100, 100, 105]
        assert_exact_cover([plan.connecting_indices] + [s[10:] for s in plan.subsets], 285)

    def test_l_not_larger_than_c(self):
        with pytest.raises(ParamError):
            plan_divide_conquer(100, 10, 10, seed=0)

    def test_deterministic(self):
        a = plan_divide_conquer(5000, 400, 20, seed=9)
        b = plan_divide_conquer(5000, 400, 20, seed=9)
        assert all(np.array_equal(x, y) for x, y in zip(a.subsets, b.subsets))
        other = plan_divide_conquer(5000, 400, 20, seed=10)
        assert not np.array_equal(a.connecting_indices, other.connecting_indices)

    def test_json_round_trip(self):
        plan = plan_divide_conquer(50, 20, 4, seed=2)
        loaded = json.loads(plan.to_json())
        assert loaded["n"] == 50 and loaded["l"] == 20 and loaded["c"] == 4
        assert loaded["subsets"] == [s.tolist() for s in plan.subsets]


class TestInterpolationPlan:
    def test_sizes(self):
        plan = plan_interpolation(10, 4, seed=0)
        assert plan.p == 3
        assert [len(s) for s in plan.subsets] == [4, 4, 2]

    def test_small_n_passthrough(self):
        plan = plan_interpolation(4, 10, seed=0)
        assert plan.p == 1
        assert np.array_equal(plan.subsets[0], np.arange(4))

    def test_exhaustive_index_audit(self):
        n = 100_000
        plan = plan_interpolation(n, 1000, seed=11)
        assert plan.p == 100
        assert len(plan.subsets[0]) == 1000
        assert_exact_cover(plan.subsets, n)

    def test_p_is_ceiling(self):
        for n, l in [(10, 4), (1001, 100), (999, 100), (1000, 100)]:
            assert plan_interpolation(n, l, seed=0).p == -(-n // l)

    def test_invalid_l(self):
        with pytest.raises(ParamError):
            plan_interpolation(10, 1, seed=0)


class TestFastPlan:
    def test_single_leaf(self):
        plan = plan_fast(500, 1000, 20, seed=0)
        assert plan.root.is_leaf
        assert np.array_equal(plan.root.indices, np.arange(500))
        stats = plan.stats()
        assert stats.leaf_count == 1 and stats.depth == 0

    def test_tree_structure_and_cover(self):
        n, l, s = 20_000, 700, 20
        plan = plan_fast(n, l, s, seed=3)
        p = l // s
        assert_exact_cover([leaf.indices for leaf in plan.leaves()], n)

        def walk(node):
            if node.is_leaf:
                assert node.size <= l
                return
            assert len(node.children) == p
            merged = np.concatenate([child.indices for child in node.children])
            assert np.array_equal(np.sort(merged), np.sort(node.indices))
            for child in node.children:
                positions = child.sampling_positions
                assert len(positions) == min(s, child.size)
                assert len(np.unique(positions)) == len(positions)
                assert positions.min() >= 0 and positions.max() < child.size
                walk(child)

        walk(plan.root)

    def test_matches_fast_stats(self):
        for n, l, s in [(20_000, 700, 20), (5_000, 300, 10), (999, 100, 7)]:
            plan = plan_fast(n, l, s, seed=4)
            built = plan.stats()
            pure = fast_stats(n, l, s)
            assert built.leaf_count == pure.leaf_count
            assert built.depth == pure.depth
            assert built.mean_leaf_size == pytest.approx(pure.mean_leaf_size)

    def test_large_dry_run_matches_stats(self):
        plan = plan_fast(1_000_000, 700, 20, seed=0)
        assert plan.stats().leaf_count == fast_stats(1_000_000, 700, 20).leaf_count

    def test_param_validation(self):
        with pytest.raises(ParamError):
            plan_fast(100, 30, 20, seed=0)  # l < 2s
        with pytest.raises(ParamError):
            plan_fast(100, 30, 0, seed=0)

    def test_deterministic(self):
        a = plan_fast(5000, 300, 10, seed=7)
        b = plan_fast(5000, 300, 10, seed=7)
        assert np.array_equal(a.root.indices, b.root.indices)
        assert all(np.array_equal(x.indices, y.indices)
                   for x, y in zip(a.leaves(), b.leaves()))

    def test_json_round_trip(self):
        plan = plan_fast(50, 20, 5, seed=2)
        loaded = json.loads(plan.to_json())
        assert loaded["l"] == 20 and loaded["s"] == 5
        assert len(loaded["tree"]["children"]) == 4


class TestFastStats:
    def test_deep_recursion_point(self):
        stats = fast_stats(1_000_000, 700, 20)
        assert stats.leaf_count == 42_875
        assert stats.mean_leaf_size == pytest.approx(23.32, abs=0.01)
        assert stats.depth == 3

    def test_shallow_recursion_point(self):
        stats = fast_stats(1_000_000, 800, 20)
        assert stats.leaf_count == 1_600
        assert stats.mean_leaf_size == 625.0
        assert stats.depth == 2

    def test_single_leaf(self):
        stats = fast_stats(500, 1000, 20)
        assert stats.leaf_count == 1
        assert stats.mean_leaf_size == 500.0
        assert stats.depth == 0
