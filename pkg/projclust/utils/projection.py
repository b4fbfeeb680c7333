"""
Gaussian Random Projections for projclust
Samples the linear map G with i.i.d. N(0, 1/d) entries and applies it to point sets
"""

import math
import logging

import numpy as np
from scipy.special import gammaln

from projclust.models import GaussianProjection, PointSet
from projclust.utils import InvalidInputError
from projclust.version import get_generator_version

logger = logging.getLogger(__name__)

MAX_SEED = 2 ** 64 - 1


def _rng(seed: int) -> np.random.Generator:
    """The pinned PRNG pipeline: Philox counter-based bits, ziggurat normals"""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= MAX_SEED:
        raise InvalidInputError(f"Seed must be an integer in [0, 2**64), got {seed!r}")
    return np.random.Generator(np.random.Philox(int(seed)))


def sample_projection(m: int, d: int, seed: int) -> GaussianProjection:
    """
    Sample a d x m projection with entries drawn i.i.d. from N(0, 1/d)

    Args:
        m: source dimension
        d: target dimension (may exceed m)
        seed: 64-bit seed; (m, d, seed) reproduces the entries bit-exactly

    Returns:
        GaussianProjection
    """
    if m < 1 or d < 1:
        raise InvalidInputError(f"Projection dimensions must be >= 1, got m={m}, d={d}")
    entries = _rng(seed).standard_normal((d, m)) / math.sqrt(d)
    return GaussianProjection(m=int(m), d=int(d), seed=int(seed), entries=entries,
                              generator=get_generator_version())


def apply(g: GaussianProjection, ps: PointSet) -> PointSet:
    """Map every point x of ps to Gx"""
    if ps.m != g.m:
        raise InvalidInputError(f"Projection expects {g.m}-dimensional points, got {ps.m}")
    return PointSet(ps.coords @ g.entries.T, cache_distances=ps.cache_distances)


def project(ps: PointSet, d: int, seed: int) -> PointSet:
    """Sample a projection for ps and apply it"""
    return apply(sample_projection(ps.m, d, seed), ps)


def chi_mean(d: int) -> float:
    """E||Gx|| for a unit vector x: sqrt(2/d) * Gamma((d+1)/2) / Gamma(d/2)"""
    if d < 1:
        raise InvalidInputError(f"d must be >= 1, got {d}")
    return math.sqrt(2.0 / d) * math.exp(gammaln((d + 1) / 2.0) - gammaln(d / 2.0))


def chi_variance(d: int) -> float:
    """Var||Gx|| for a unit vector x; E||Gx||^2 = 1"""
    return 1.0 - chi_mean(d) ** 2


def norm_tail_bound(d: int, t: float) -> float:
    """Concentration bound exp(-d t^2 / 8) on P(| ||Gx|| - 1 | >= t) for unit x"""
    return math.exp(-d * t * t / 8.0)
