"""
Point-set geometry for projclust
Distance queries over a PointSet and a greedy estimator of its doubling constant
"""

import math
import logging
import weakref
from typing import Optional, Sequence, Tuple

import numpy as np

from projclust.extensions import pool, runtime
from projclust.models import DoublingEstimate, PointSet
from projclust.utils import InvalidInputError

logger = logging.getLogger(__name__)

# Full squared-distance matrices of point sets built with cache_distances=True
_matrix_cache = weakref.WeakKeyDictionary()


def _check_index(ps: PointSet, i) -> int:
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)):
        raise InvalidInputError(f"Point index must be an integer, got {i!r}")
    if not 0 <= i < ps.n:
        raise InvalidInputError(f"Point index {i} out of range for n={ps.n}")
    return int(i)


def _block_rows(n_cols: int, m: int) -> int:
    return max(1, runtime.distance_block // max(1, n_cols * m))


def _sq_between(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    diff = a[:, None, :] - b[None, :, :]
    return np.square(diff).sum(axis=2)


def cross_sq_distances(ps: PointSet, rows: Sequence[int], cols: Optional[Sequence[int]] = None) -> np.ndarray:
    """
    Squared distances between the rows and cols subsets of a point set

    Computed in row blocks so that no more than the configured number of
    float64 elements is materialised at once.
    """
    rows = np.asarray(rows, dtype=np.intp)
    a = ps.coords[rows]
    b = ps.coords if cols is None else ps.coords[np.asarray(cols, dtype=np.intp)]
    out = np.empty((a.shape[0], b.shape[0]))
    step = _block_rows(b.shape[0], ps.m)
    for start in range(0, a.shape[0], step):
        out[start:start + step] = _sq_between(a[start:start + step], b)
    return out


def _sq_matrix(ps: PointSet) -> Optional[np.ndarray]:
    if not ps.cache_distances:
        return None
    matrix = _matrix_cache.get(ps)
    if matrix is None:
        logger.debug(f"Caching {ps.n}x{ps.n} distance matrix")
        matrix = cross_sq_distances(ps, np.arange(ps.n))
        matrix.setflags(write=False)
        _matrix_cache[ps] = matrix
    return matrix


def row_sq_distances(ps: PointSet, i: int) -> np.ndarray:
    """Squared distances from point i to every point"""
    i = _check_index(ps, i)
    matrix = _sq_matrix(ps)
    if matrix is not None:
        return matrix[i]
    return np.square(ps.coords - ps.coords[i]).sum(axis=1)


def row_distances(ps: PointSet, i: int) -> np.ndarray:
    """Euclidean distances from point i to every point"""
    return np.sqrt(row_sq_distances(ps, i))


def paired_distances(ps: PointSet, left: Sequence[int], right: Sequence[int]) -> np.ndarray:
    """Distances between left[k] and right[k] for every k"""
    left = np.asarray(left, dtype=np.intp)
    right = np.asarray(right, dtype=np.intp)
    if left.size == 0:
        return np.zeros(0)
    return np.sqrt(np.square(ps.coords[left] - ps.coords[right]).sum(axis=1))


def distance(ps: PointSet, i: int, j: int) -> float:
    """Euclidean distance between points i and j"""
    i = _check_index(ps, i)
    j = _check_index(ps, j)
    return float(paired_distances(ps, [i], [j])[0])


def closest_pair(ps: PointSet) -> Tuple[int, int, float]:
    """
    Pair of distinct indices at minimum distance

    Ties go to the lexicographically smallest (i, j) with i < j.
    """
    if ps.n < 2:
        raise InvalidInputError(f"closest_pair needs at least 2 points, got {ps.n}")
    best = (0, 1, math.inf)
    for i in range(ps.n - 1):
        tail = np.sqrt(row_sq_distances(ps, i)[i + 1:])
        k = int(np.argmin(tail))
        if tail[k] < best[2]:
            best = (i, i + 1 + k, float(tail[k]))
    return best


def diameter(ps: PointSet) -> float:
    """Maximum pairwise distance; 0 for a single point"""
    best = 0.0
    for i in range(ps.n - 1):
        best = max(best, float(np.max(row_sq_distances(ps, i)[i + 1:])))
    return math.sqrt(best)


def min_positive_distance(ps: PointSet) -> Optional[float]:
    """Smallest nonzero pairwise distance, or None when all points coincide"""
    best = math.inf
    for i in range(ps.n - 1):
        tail = row_sq_distances(ps, i)[i + 1:]
        positive = tail[tail > 0]
        if positive.size:
            best = min(best, float(np.min(positive)))
    return math.sqrt(best) if math.isfinite(best) else None


def _greedy_cover(ps: PointSet, ball: np.ndarray, start_dist: np.ndarray, radius: float,
                  matrix: Optional[np.ndarray] = None) -> int:
    """Farthest-first cover of the ball's points by radius balls centered at ball points"""
    sub = ps.coords[ball] if matrix is None else None
    dist = start_dist.copy()
    count = 1
    while True:
        k = int(np.argmax(dist))
        if dist[k] <= radius:
            return count
        count += 1
        if matrix is not None:
            step = matrix[ball[k], ball]
        else:
            step = np.sqrt(np.square(sub - sub[k]).sum(axis=1))
        dist = np.minimum(dist, step)


def doubling_constant_estimate(ps: PointSet, centers_sampled: int, seed: int) -> DoublingEstimate:
    """
    Estimate the doubling constant by greedy covers over a dyadic scale ladder

    Scales run diam, diam/2, ... down to the smallest positive distance. For
    every sampled center x and scale r, B(x, r) is covered by r/2-balls
    centered at data points, always opening the point farthest from the
    centers chosen so far. The estimate is the largest cover seen.
    """
    if centers_sampled < 1:
        raise InvalidInputError(f"centers_sampled must be >= 1, got {centers_sampled}")

    min_pos = min_positive_distance(ps)
    if min_pos is None:
        return DoublingEstimate(lambda_hat=1, ddim_hat=0.0, scales_probed=(), centers_probed=min(ps.n, centers_sampled))

    diam = diameter(ps)
    scales = []
    level = 0
    while diam / 2.0 ** level >= min_pos:
        scales.append(diam / 2.0 ** level)
        level += 1

    if centers_sampled >= ps.n:
        centers = np.arange(ps.n)
    else:
        rng = np.random.Generator(np.random.Philox(seed))
        centers = np.sort(rng.choice(ps.n, size=centers_sampled, replace=False))

    # small sets keep the whole distance matrix for the cover loops
    matrix = None
    if ps.n * ps.n <= runtime.distance_block:
        matrix = np.sqrt(cross_sq_distances(ps, np.arange(ps.n)))

    def cover_at_center(x):
        dist_x = matrix[int(x)] if matrix is not None else row_distances(ps, int(x))
        worst = 1
        for r in scales:
            ball = np.flatnonzero(dist_x <= r)
            worst = max(worst, _greedy_cover(ps, ball, dist_x[ball], r / 2.0, matrix))
        return worst

    lambda_hat = max(pool.map_ordered(cover_at_center, centers))
    logger.debug(f"Doubling estimate over {len(centers)} centers and {len(scales)} scales: {lambda_hat}")
    return DoublingEstimate(
        lambda_hat=int(lambda_hat),
        ddim_hat=math.log2(lambda_hat),
        scales_probed=tuple(scales),
        centers_probed=len(centers),
    )
