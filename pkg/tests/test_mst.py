import math

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import point_sets
from projclust.models import PointSet, SpanningTree
from projclust.utils import InvalidInputError, SizeGuardError
from projclust.utils.instances import gen_axis_grid, gen_comb, gen_star_identity
from projclust.utils.mst import (brute_force_mst, cycle_property_holds, edge_lengths, mst_exact, pullback_ratio,
                                 tree_cost_in)
from projclust.utils.projection import project


class TestMSTExact:
    def test_single_point(self):
        tree = mst_exact(PointSet([[1.0, 1.0]]))
        assert tree.edges == ()
        assert tree_cost_in(tree, PointSet([[1.0, 1.0]])) == 0.0

    def test_path_on_a_line(self):
        ps = PointSet([[0.0], [3.0], [1.0]])
        tree = mst_exact(ps)
        assert tree.edges == ((0, 2), (1, 2))
        assert tree_cost_in(tree, ps) == 3.0

    def test_ties_pick_the_smallest_edges(self):
        # unit square: four edges of length 1, the tree avoids the largest pair (2, 3)
        ps = PointSet([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
        tree = mst_exact(ps)
        assert tree.edges == ((0, 1), (0, 2), (1, 3))

    def test_coincident_points(self):
        ps = PointSet(np.zeros((5, 3)))
        assert tree_cost_in(mst_exact(ps), ps) == 0.0

    def test_matches_labeled_tree_oracle(self):
        for seed in range(200):
            rng = np.random.default_rng(seed)
            n = int(rng.integers(1, 7))
            ps = PointSet(rng.uniform(-1.0, 1.0, size=(n, int(rng.integers(1, 4)))))
            _, optimum = brute_force_mst(ps)
            assert tree_cost_in(mst_exact(ps), ps) == pytest.approx(optimum, rel=1e-12, abs=1e-12)

    def test_cycle_property_certifies_prim(self):
        for seed in range(50):
            rng = np.random.default_rng(300 + seed)
            ps = PointSet(rng.normal(size=(int(rng.integers(2, 51)), 3)))
            assert cycle_property_holds(mst_exact(ps), ps)

    def test_cycle_property_rejects_a_bad_tree(self):
        ps = PointSet([[0.0], [1.0], [2.0]])
        assert not cycle_property_holds(SpanningTree(3, ((0, 2), (1, 2))), ps)

    @pytest.mark.parametrize('factor', [0.3, 2.0, 17.5])
    def test_scaling_keeps_the_tree_and_scales_the_cost(self, factor):
        for seed in range(30):
            rng = np.random.default_rng(700 + seed)
            ps = PointSet(rng.uniform(-1.0, 1.0, size=(int(rng.integers(2, 25)), 3)))
            tree = mst_exact(ps)
            scaled = ps.scaled(factor)
            assert mst_exact(scaled) == tree
            assert tree_cost_in(tree, scaled) == pytest.approx(factor * tree_cost_in(tree, ps), rel=1e-12)

    @given(point_sets(min_n=2, max_n=6, max_m=3))
    @settings(max_examples=40, deadline=None)
    def test_never_beaten_by_the_oracle(self, ps):
        _, optimum = brute_force_mst(ps)
        assert tree_cost_in(mst_exact(ps), ps) <= optimum + 1e-9


class TestClosedFormInstances:
    @pytest.mark.parametrize('m', [1, 2, 5, 17, 50])
    def test_star_costs_m(self, m):
        ps = gen_star_identity(m)
        tree = mst_exact(ps)
        assert tree_cost_in(tree, ps) == pytest.approx(m, abs=1e-9)
        assert all(a == 0 for a, _ in tree.edges)

    def test_star_matches_oracle_tie_break(self):
        ps = gen_star_identity(4)
        tree, cost = brute_force_mst(ps)
        assert tree.edges == ((0, 1), (0, 2), (0, 3), (0, 4))
        assert cost == pytest.approx(4.0)

    def test_grid_costs_m(self):
        ps = gen_axis_grid(10, 5)
        assert tree_cost_in(mst_exact(ps), ps) == pytest.approx(10.0, abs=1e-9)

    def test_comb_cost(self):
        ps = gen_comb(5)
        assert tree_cost_in(mst_exact(ps), ps) == pytest.approx(3 * 5 - 1 - 1 / 5, abs=1e-9)


class TestBruteForceMST:
    def test_size_guard(self):
        with pytest.raises(SizeGuardError):
            brute_force_mst(PointSet(np.arange(8, dtype=float)))

    def test_tiny_sets(self):
        assert brute_force_mst(PointSet([[0.0]])) == (SpanningTree(1), 0.0)
        tree, cost = brute_force_mst(PointSet([[0.0], [2.0]]))
        assert tree.edges == ((0, 1),) and cost == 2.0


class TestPullback:
    def test_edge_lengths_need_matching_sizes(self):
        tree = SpanningTree(2, ((0, 1),))
        with pytest.raises(InvalidInputError):
            edge_lengths(tree, PointSet([[0.0], [1.0], [2.0]]))

    def test_identity_like_projection(self, random_points):
        ps = random_points(30, 3)
        assert pullback_ratio(ps, ps) == (1.0, 1.0)

    def test_pullback_is_never_below_one(self, random_points):
        ps = random_points(40, 10)
        for seed in range(10):
            ratios = pullback_ratio(ps, project(ps, 3, seed))
            assert ratios.ratio_pullback >= 1.0 - 1e-12
            assert ratios.ratio_cost > 0.0

    def test_coincident_points(self):
        ps = PointSet(np.zeros((3, 2)))
        assert pullback_ratio(ps, PointSet(np.zeros((3, 1)))) == (1.0, 1.0)

    def test_sizes_must_match(self):
        with pytest.raises(InvalidInputError):
            pullback_ratio(PointSet([[0.0], [1.0]]), PointSet([[0.0]]))

    def test_tree_cost_is_measured_in_the_given_space(self):
        tree = SpanningTree(3, ((0, 1), (1, 2)))
        a = PointSet([[0.0], [1.0], [2.0]])
        b = PointSet([[0.0], [2.0], [4.0]])
        assert tree_cost_in(tree, a) == 2.0
        assert tree_cost_in(tree, b) == 4.0
        assert math.isclose(tree_cost_in(tree, b) / tree_cost_in(tree, a), 2.0)
