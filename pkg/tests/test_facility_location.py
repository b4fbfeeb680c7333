import numpy as np
import pytest
from hypothesis import given, settings

from conftest import point_sets
from projclust.models import FLConfig, PointSet, Variant
from projclust.utils import InvalidInputError, SizeGuardError
from projclust.utils.facility_location import (bisect_radius, brute_force_optimum, compute_radii, evaluate_cost,
                                               improve_if_violated, improve_until_locally_optimal,
                                               is_locally_optimal, mp_solve, radii_cost_estimate,
                                               radius_residual, solve)
from projclust.utils.geometry import row_distances

LINEAR = FLConfig(Variant.LINEAR, 1.0)
SQUARED = FLConfig(Variant.SQUARED, 1.0)


def random_instance(seed, max_n, max_m):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_n + 1))
    m = int(rng.integers(1, max_m + 1))
    scale = float(rng.choice([0.1, 1.0, 5.0]))
    return rng, PointSet(rng.uniform(0.0, scale, size=(n, m)))


class TestRadii:
    def test_single_point_radius_is_opening_cost(self):
        ps = PointSet([[3.0, 4.0]])
        assert compute_radii(ps, FLConfig(opening_cost=2.5)).radii[0] == pytest.approx(2.5)
        assert compute_radii(ps, FLConfig(Variant.SQUARED, 4.0)).radii[0] == pytest.approx(2.0)

    def test_far_apart_points(self):
        ps = PointSet([[0.0], [10.0]])
        np.testing.assert_allclose(compute_radii(ps, LINEAR).radii, [1.0, 1.0])

    def test_coincident_points_share_the_cost(self):
        ps = PointSet(np.zeros((4, 2)))
        np.testing.assert_allclose(compute_radii(ps, LINEAR).radii, [0.25] * 4)
        np.testing.assert_allclose(compute_radii(ps, SQUARED).radii, [0.5] * 4)

    def test_two_close_points(self):
        # 2r - 0.5 = 1 once the neighbour at 0.5 is inside the ball
        ps = PointSet([[0.0], [0.5]])
        np.testing.assert_allclose(compute_radii(ps, LINEAR).radii, [0.75, 0.75])

    def test_profile_remembers_its_source(self):
        ps = PointSet([[0.0], [1.0]])
        profile = compute_radii(ps, LINEAR)
        assert profile.source_digest == ps.digest
        assert profile.variant is Variant.LINEAR

    def test_per_point_costs(self):
        ps = PointSet([[0.0], [100.0]])
        profile = compute_radii(ps, FLConfig(opening_costs=[1.0, 3.0]))
        np.testing.assert_allclose(profile.radii, [1.0, 3.0])

    def test_matches_bisection_oracle(self):
        for seed in range(200):
            rng, ps = random_instance(seed, max_n=100, max_m=10)
            variant = Variant.SQUARED if seed % 2 else Variant.LINEAR
            costs = rng.uniform(0.2, 3.0, size=ps.n) if seed % 3 == 0 else None
            config = FLConfig(variant, 1.0, costs)
            profile = compute_radii(ps, config)
            for p in range(0, ps.n, max(1, ps.n // 5)):
                assert abs(profile.radii[p] - bisect_radius(ps, p, config)) <= 1e-9
            assert radius_residual(ps, profile).max() <= 1e-9

    def test_bisection_brackets_an_isolated_squared_point(self):
        # sqrt(0.2) ** 2 rounds below 0.2
        ps = PointSet([[0.0], [100.0]])
        config = FLConfig(Variant.SQUARED, 0.2)
        assert bisect_radius(ps, 0, config) == pytest.approx(np.sqrt(0.2), abs=1e-12)
        assert compute_radii(ps, config).radii[0] == pytest.approx(bisect_radius(ps, 0, config), abs=1e-12)

    @given(point_sets(max_n=10))
    @settings(max_examples=60, deadline=None)
    def test_radii_lie_between_one_over_n_and_the_cost(self, ps):
        for config in (LINEAR, SQUARED):
            radii = compute_radii(ps, config).radii
            assert np.all(radii >= 1.0 / ps.n - 1e-12)
            assert np.all(radii <= 1.0 + 1e-12)
        squared = compute_radii(ps, SQUARED).radii
        assert np.all(squared * squared >= 1.0 / ps.n - 1e-12)

    @given(point_sets(min_n=2, max_n=10))
    @settings(max_examples=60, deadline=None)
    def test_adding_a_point_never_grows_a_radius(self, ps):
        smaller = ps.subset(range(ps.n - 1))
        for config in (LINEAR, SQUARED):
            before = compute_radii(smaller, config).radii
            after = compute_radii(ps, config).radii[:-1]
            assert np.all(after <= before + 1e-12)

    @given(point_sets(max_n=10))
    @settings(max_examples=60, deadline=None)
    def test_ball_holds_at_least_one_over_r_points(self, ps):
        for config, power in ((LINEAR, 1), (SQUARED, 2)):
            radii = compute_radii(ps, config).radii
            for p in range(ps.n):
                inside = np.count_nonzero(row_distances(ps, p) <= radii[p] * (1 + 1e-9) + 1e-12)
                assert inside >= 1.0 / radii[p] ** power - 1e-9


class TestEvaluateCost:
    def test_cost_breakdown(self):
        ps = PointSet([[0.0], [1.0], [3.0]])
        solution = evaluate_cost(ps, [0], LINEAR)
        assert solution.opening_cost_total == 1.0
        assert solution.connection_cost_total == 4.0
        assert solution.total == 5.0
        np.testing.assert_array_equal(solution.assignment, [0, 0, 0])

    def test_squared_connection(self):
        ps = PointSet([[0.0], [1.0], [3.0]])
        assert evaluate_cost(ps, [0], SQUARED).total == 1.0 + 1.0 + 9.0

    def test_ties_assign_the_smaller_index(self):
        ps = PointSet([[0.0], [1.0], [2.0]])
        solution = evaluate_cost(ps, [2, 0], LINEAR)
        assert solution.facilities == (0, 2)
        assert solution.assignment[1] == 0

    @pytest.mark.parametrize('facilities', [[], [3], [-1]])
    def test_invalid_facilities(self, facilities):
        ps = PointSet([[0.0], [1.0], [2.0]])
        with pytest.raises(InvalidInputError):
            evaluate_cost(ps, facilities, LINEAR)


class TestMPSolve:
    def test_single_point(self):
        solution = solve(PointSet([[1.0, 2.0]]), LINEAR)
        assert solution.facilities == (0,)
        assert solution.total == 1.0

    def test_far_apart_points_all_open(self):
        ps = PointSet([[0.0], [10.0], [20.0]])
        assert solve(ps, LINEAR).facilities == (0, 1, 2)

    def test_cluster_opens_one_facility(self):
        ps = PointSet([[0.0], [0.01], [0.02], [0.03]])
        assert len(solve(ps, LINEAR).facilities) == 1

    def test_profile_from_another_set_is_rejected(self):
        profile = compute_radii(PointSet([[0.0], [1.0]]), LINEAR)
        with pytest.raises(InvalidInputError):
            mp_solve(PointSet([[0.0], [2.0]]), profile)

    def test_deterministic(self, random_points):
        ps = random_points(40, 3)
        assert solve(ps, LINEAR).facilities == solve(ps, LINEAR).facilities


class TestBruteForce:
    def test_size_guard(self):
        ps = PointSet(np.arange(16, dtype=float))
        with pytest.raises(SizeGuardError) as exc:
            brute_force_optimum(ps, LINEAR)
        assert exc.value.n == 16 and exc.value.max_n == 15

    def test_ties_go_to_the_smallest_subset(self):
        # opening either point costs 1 + 1 = 2, opening both costs 2
        ps = PointSet([[0.0], [1.0]])
        assert brute_force_optimum(ps, LINEAR).facilities == (0,)

    def test_scaled_identity_opens_everything(self):
        ps = PointSet(np.eye(6) * 10.0)
        solution = brute_force_optimum(ps, LINEAR)
        assert solution.facilities == tuple(range(6))
        assert solution.total == 6.0

    def test_optimum_is_locally_optimal(self):
        for seed in range(60):
            _, ps = random_instance(9000 + seed, max_n=10, max_m=3)
            for config in (LINEAR, SQUARED):
                optimum = brute_force_optimum(ps, config)
                assert is_locally_optimal(ps, compute_radii(ps, config), optimum.facilities) == (True, None)


class TestApproximationGuarantees:
    def test_radii_sandwich_the_optimum(self):
        for seed in range(100):
            _, ps = random_instance(1000 + seed, max_n=12, max_m=4)
            for config, low, high in ((LINEAR, 0.25, 6.0), (SQUARED, 0.125, 24.0)):
                optimum = brute_force_optimum(ps, config).total
                estimate = radii_cost_estimate(compute_radii(ps, config))
                assert low * optimum <= estimate + 1e-9
                assert estimate <= high * optimum + 1e-9

    def test_mp_is_a_constant_factor_approximation(self):
        for seed in range(100):
            _, ps = random_instance(1000 + seed, max_n=12, max_m=4)
            for config, factor in ((LINEAR, 3.0), (SQUARED, 6.0)):
                optimum = brute_force_optimum(ps, config).total
                profile = compute_radii(ps, config)
                solution = mp_solve(ps, profile)
                assert solution.total <= factor * optimum + 1e-9
                assert is_locally_optimal(ps, profile, solution.facilities) == (True, None)

    def test_opening_a_violating_point_lowers_the_cost(self):
        checked = 0
        seed = 0
        while checked < 100:
            rng, ps = random_instance(5000 + seed, max_n=30, max_m=4)
            seed += 1
            config = SQUARED if seed % 2 else LINEAR
            profile = compute_radii(ps, config)
            size = int(rng.integers(1, ps.n + 1))
            facilities = sorted(rng.choice(ps.n, size=size, replace=False).tolist())
            ok, witness = is_locally_optimal(ps, profile, facilities)
            if ok:
                continue
            improved = improve_if_violated(ps, profile, facilities)
            assert witness in improved
            assert evaluate_cost(ps, improved, config).total < evaluate_cost(ps, facilities, config).total
            checked += 1

    def test_repeated_improvement_reaches_local_optimality(self, random_points):
        ps = random_points(40, 2, scale=5.0)
        profile = compute_radii(ps, LINEAR)
        final, steps = improve_until_locally_optimal(ps, profile, [0])
        assert steps >= 1
        assert is_locally_optimal(ps, profile, final)[0]
        assert evaluate_cost(ps, final, LINEAR).total < evaluate_cost(ps, [0], LINEAR).total
