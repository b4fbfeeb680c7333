"""
Facility Location for projclust
Mettu-Plaxton radii, the greedy MP selection (linear and squared costs),
cost evaluation, local optimality and an exhaustive optimum oracle
"""

import math
import logging
from typing import Iterable, Optional, Tuple

import numpy as np
from scipy.optimize import bisect

from projclust.extensions import pool
from projclust.models import FacilitySolution, FLConfig, PointSet, RadiusProfile, Variant
from projclust.utils import InvalidInputError, SizeGuardError
from projclust.utils.geometry import cross_sq_distances, row_sq_distances

logger = logging.getLogger(__name__)

# Radii are solved in row blocks; each block holds at most this many distances
RADII_BLOCK_ELEMENTS = 2 ** 21

# Local optimality: every point needs an open facility within this multiple of r_p
LOCAL_OPTIMALITY_FACTOR = 3.0

# MP opens p_i only if no facility lies within this multiple of r_i
MP_BALL_FACTOR = 2.0


def _solve_sorted_rows(sorted_rows: np.ndarray, costs: np.ndarray) -> np.ndarray:
    """
    Solve sum_{v_i <= s} (s - v_i) = c per row of ascending values v

    The solution on segment j is s_j = (c + v_0 + ... + v_j) / (j + 1); the
    first j with s_j < v_{j+1} is the one where s_j really lies in
    [v_j, v_{j+1}), because f is increasing and continuous.
    """
    k, n = sorted_rows.shape
    candidates = (costs[:, None] + np.cumsum(sorted_rows, axis=1)) / np.arange(1, n + 1)
    upper = np.empty_like(sorted_rows)
    upper[:, :-1] = sorted_rows[:, 1:]
    upper[:, -1] = np.inf
    segment = np.argmax(candidates < upper, axis=1)
    return candidates[np.arange(k), segment]


def radius_equation(values: np.ndarray, r: float, variant: Variant) -> float:
    """Left-hand side f(r) of the radius equation for one point's distances"""
    values = np.asarray(values, dtype=np.float64)
    if Variant(variant) is Variant.SQUARED:
        s = r * r
        sq = values * values
        return math.fsum(s - sq[sq <= s])
    return math.fsum(r - values[values <= r])


def compute_radii(ps: PointSet, config: FLConfig) -> RadiusProfile:
    """
    Compute r_p for every point by the exact piecewise-linear solve

    Linear: sum_{q in B(p, r)} (r - |p - q|) = c_p.
    Squared: sum_{q in B(p, r)} (r^2 - |p - q|^2) = c_p, solved in s = r^2.
    """
    costs = config.costs_for(ps.n)
    squared = config.variant is Variant.SQUARED
    step = max(1, RADII_BLOCK_ELEMENTS // ps.n)
    blocks = [np.arange(start, min(ps.n, start + step)) for start in range(0, ps.n, step)]

    def solve_block(rows):
        sq = cross_sq_distances(ps, rows)
        values = np.sort(sq if squared else np.sqrt(sq), axis=1)
        solved = _solve_sorted_rows(values, costs[rows])
        return np.sqrt(solved) if squared else solved

    radii = np.concatenate(pool.map_ordered(solve_block, blocks))
    logger.debug(f"Computed {config.variant.value} radii for {ps.n} points, sum={radii.sum():.6g}")
    return RadiusProfile(radii=radii, variant=config.variant, config=config, source_digest=ps.digest)


def bisect_radius(ps: PointSet, p: int, config: FLConfig, xtol: float = 1e-14) -> float:
    """Independent oracle: solve f(r) = c_p for one point by bisection"""
    values = np.sqrt(row_sq_distances(ps, p))
    c = float(config.costs_for(ps.n)[p])
    hi = c if config.variant is Variant.LINEAR else math.sqrt(c)
    # sqrt(c)**2 can round below c; step up until f(hi) >= c brackets the root
    while radius_equation(values, hi, config.variant) < c:
        hi = float(np.nextafter(hi, np.inf))
    if radius_equation(values, hi, config.variant) == c:
        return hi
    return bisect(lambda r: radius_equation(values, r, config.variant) - c, 0.0, hi,
                  xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=400)


def radius_residual(ps: PointSet, profile: RadiusProfile) -> np.ndarray:
    """|f(r_p) - c_p| for every point"""
    costs = profile.config.costs_for(ps.n)
    return np.array([
        abs(radius_equation(np.sqrt(row_sq_distances(ps, p)), float(profile.radii[p]), profile.variant) - costs[p])
        for p in range(ps.n)
    ])


def radii_cost_estimate(profile: RadiusProfile) -> float:
    """Sum of r_p (linear) or of r_p^2 (squared): a constant-factor estimate of the optimum"""
    if profile.variant is Variant.SQUARED:
        return math.fsum(profile.radii * profile.radii)
    return math.fsum(profile.radii)


def _normalise_facilities(ps: PointSet, facilities: Iterable[int]) -> Tuple[int, ...]:
    chosen = sorted({int(f) for f in facilities})
    if not chosen:
        raise InvalidInputError("Facility set must be nonempty")
    if chosen[0] < 0 or chosen[-1] >= ps.n:
        raise InvalidInputError(f"Facility indices must lie in [0, {ps.n}), got {chosen}")
    return tuple(chosen)


def _nearest(ps: PointSet, facilities: Tuple[int, ...]):
    """Squared distance to, and index of, the nearest facility (ties to the smaller index)"""
    step = max(1, RADII_BLOCK_ELEMENTS // len(facilities))
    nearest_sq = np.empty(ps.n)
    assignment = np.empty(ps.n, dtype=np.intp)
    cols = np.asarray(facilities, dtype=np.intp)
    for start in range(0, ps.n, step):
        rows = np.arange(start, min(ps.n, start + step))
        sq = cross_sq_distances(ps, rows, cols)
        k = np.argmin(sq, axis=1)
        nearest_sq[rows] = sq[np.arange(rows.size), k]
        assignment[rows] = cols[k]
    return nearest_sq, assignment


def evaluate_cost(ps: PointSet, facilities: Iterable[int], config: FLConfig) -> FacilitySolution:
    """
    Cost of a given facility set in a given space

    This is the pullback evaluator: a set found on GX is evaluated on X.
    """
    chosen = _normalise_facilities(ps, facilities)
    nearest_sq, assignment = _nearest(ps, chosen)
    connection = nearest_sq if config.variant is Variant.SQUARED else np.sqrt(nearest_sq)
    opening = math.fsum(config.costs_for(ps.n)[list(chosen)])
    connection_total = math.fsum(connection)
    return FacilitySolution(
        facilities=chosen,
        assignment=assignment,
        opening_cost_total=opening,
        connection_cost_total=connection_total,
        total=opening + connection_total,
        variant=config.variant,
    )


def _check_profile(ps: PointSet, profile: RadiusProfile):
    if profile.n != ps.n or profile.source_digest != ps.digest:
        raise InvalidInputError("Radius profile was not computed on this point set")


def mp_solve(ps: PointSet, profile: RadiusProfile) -> FacilitySolution:
    """
    Mettu-Plaxton selection

    Visit points by ascending radius (ties to the smaller index) and open p_i
    unless an open facility already lies in the closed ball B(p_i, 2 r_i).
    """
    _check_profile(ps, profile)
    order = np.lexsort((np.arange(ps.n), profile.radii))
    opened = []
    opened_coords = np.empty((ps.n, ps.m))
    for i in order:
        reach = MP_BALL_FACTOR * profile.radii[i]
        if opened:
            sq = np.square(opened_coords[:len(opened)] - ps.coords[i]).sum(axis=1)
            if np.any(sq <= reach * reach):
                continue
        opened_coords[len(opened)] = ps.coords[i]
        opened.append(int(i))
    logger.debug(f"MP opened {len(opened)} of {ps.n} facilities")
    return evaluate_cost(ps, opened, profile.config)


def solve(ps: PointSet, config: FLConfig) -> FacilitySolution:
    """Radii followed by MP selection"""
    return mp_solve(ps, compute_radii(ps, config))


def is_locally_optimal(ps: PointSet, profile: RadiusProfile, facilities: Iterable[int]) -> Tuple[bool, Optional[int]]:
    """
    Check that every point has an open facility within 3 r_p

    Returns (True, None), or (False, smallest violating index).
    """
    _check_profile(ps, profile)
    chosen = _normalise_facilities(ps, facilities)
    nearest_sq, _ = _nearest(ps, chosen)
    reach = LOCAL_OPTIMALITY_FACTOR * profile.radii
    violating = np.flatnonzero(nearest_sq > reach * reach)
    if violating.size:
        return False, int(violating[0])
    return True, None


def improve_if_violated(ps: PointSet, profile: RadiusProfile, facilities: Iterable[int]) -> Tuple[int, ...]:
    """Open the smallest violating point if there is one; each such step strictly lowers the cost"""
    chosen = _normalise_facilities(ps, facilities)
    ok, witness = is_locally_optimal(ps, profile, chosen)
    if ok:
        return chosen
    return tuple(sorted(chosen + (witness,)))


def improve_until_locally_optimal(ps: PointSet, profile: RadiusProfile, facilities: Iterable[int]) -> Tuple[Tuple[int, ...], int]:
    """Repeat improvement steps; returns the final set and the number of steps taken"""
    current = _normalise_facilities(ps, facilities)
    steps = 0
    while True:
        improved = improve_if_violated(ps, profile, current)
        if improved == current:
            return current, steps
        current = improved
        steps += 1


def brute_force_optimum(ps: PointSet, config: FLConfig, max_n: int = 15) -> FacilitySolution:
    """
    Exhaustive minimum over all nonempty facility subsets

    Ties go to the lexicographically smallest sorted subset.
    """
    if ps.n > max_n:
        raise SizeGuardError('brute_force_optimum', ps.n, max_n)
    n = ps.n
    sq = cross_sq_distances(ps, np.arange(n))
    conn = sq if config.variant is Variant.SQUARED else np.sqrt(sq)
    costs = config.costs_for(n)

    masks = ((np.arange(1, 2 ** n)[:, None] >> np.arange(n)) & 1).astype(bool)
    totals = np.empty(masks.shape[0])
    step = max(1, RADII_BLOCK_ELEMENTS // (n * n))
    for start in range(0, masks.shape[0], step):
        block = masks[start:start + step]
        masked = np.where(block[:, None, :], conn[None, :, :], np.inf)
        totals[start:start + step] = (block * costs).sum(axis=1) + masked.min(axis=2).sum(axis=1)

    best = totals.min()
    tied = np.flatnonzero(totals <= best + 1e-12 * max(1.0, abs(best)))
    subset = min(tuple(np.flatnonzero(masks[t]).tolist()) for t in tied)
    return evaluate_cost(ps, subset, config)

