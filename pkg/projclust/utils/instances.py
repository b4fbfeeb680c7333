"""
Instance generators for projclust
Synthetic constructions (Gaussian prefix/axis sets, scaled identities, stars,
grids, walks, combs, pair gadgets) and CSV point-file ingestion
"""

import csv
import math
import logging
from pathlib import Path
from typing import Optional

import numpy as np

from projclust.extensions import runtime
from projclust.models import InstanceSpec, PointSet
from projclust.utils import InvalidInputError, ParseError

logger = logging.getLogger(__name__)

# Projection dimension plugged into the default construction scales
DEFAULT_SCALE_D = 5

# Smallest default grid resolution; the asymptotic formula is below 1 at desk scale
MIN_GRID_RESOLUTION = 5

CSV_FLOAT_FORMAT = '.17g'


def _require(condition, message):
    if not condition:
        raise InvalidInputError(message)


def _gauss_draws(n, seed):
    return np.random.Generator(np.random.Philox(int(seed))).standard_normal(n)


def gen_prefix_gauss(n: int, seed: int) -> PointSet:
    """Point i is g_1 e_1 + ... + g_i e_i in R^n (low doubling dimension)"""
    _require(n >= 1, f"n must be >= 1, got {n}")
    g = _gauss_draws(n, seed)
    return PointSet(np.tril(np.tile(g, (n, 1))))


def gen_axis_gauss(n: int, seed: int) -> PointSet:
    """Point i is g_i e_i in R^n, sharing the g draws of gen_prefix_gauss"""
    _require(n >= 1, f"n must be >= 1, got {n}")
    return PointSet(np.diag(_gauss_draws(n, seed)))


def default_identity_scale(n: int, d: int = DEFAULT_SCALE_D) -> float:
    """R = sqrt(C) with C = sqrt(ln n / (10 d)), never below 1"""
    c = math.sqrt(math.log(max(n, 2)) / (10.0 * d))
    return max(1.0, math.sqrt(c))


def gen_scaled_identity(m: int, scale_R: float) -> PointSet:
    """R e_1, ..., R e_m; with R >= 1 the FL optimum opens everything at cost m"""
    _require(m >= 2, f"m must be >= 2, got {m}")
    _require(scale_R > 0 and math.isfinite(scale_R), f"scale_R must be positive, got {scale_R}")
    return PointSet(np.eye(m) * float(scale_R))


def gen_star_identity(m: int) -> PointSet:
    """Origin first, then e_1, ..., e_m; the MST is the star at the origin with cost m"""
    _require(m >= 1, f"m must be >= 1, got {m}")
    return PointSet(np.vstack([np.zeros((1, m)), np.eye(m)]))


def default_grid_resolution(m: int, d: int = DEFAULT_SCALE_D) -> int:
    c = math.sqrt(math.log(max(m, 2)) / (10.0 * d))
    return max(MIN_GRID_RESOLUTION, math.ceil(c))


def gen_axis_grid(m: int, C: int) -> PointSet:
    """
    Origin, then e_i * k / C for every axis i and 1 <= k <= C

    Points are ordered axis by axis, so point 1 + i*C + (k-1) is e_{i+1} k/C.
    """
    _require(m >= 1 and C >= 1, f"m and C must be >= 1, got m={m}, C={C}")
    steps = np.arange(1, C + 1) / float(C)
    coords = np.zeros((m * C + 1, m))
    for i in range(m):
        coords[1 + i * C:1 + (i + 1) * C, i] = steps
    return PointSet(coords)


def default_walk_scale(m: int, d: int = DEFAULT_SCALE_D) -> float:
    """m^(1 + 1/(2d))"""
    return float(m) ** (1.0 + 1.0 / (2.0 * d))


def gen_walk(m: int, scale: float) -> PointSet:
    """scale * (e_1, e_1 + e_2, ..., e_1 + ... + e_m)"""
    _require(m >= 2, f"m must be >= 2, got {m}")
    _require(scale > 0 and math.isfinite(scale), f"scale must be positive, got {scale}")
    return PointSet(float(scale) * np.tril(np.ones((m, m))))


def gen_comb(k: int) -> PointSet:
    """
    A spine of k^2 points spaced 1/k on the first axis, then k teeth

    Tooth i holds the k points (i + j/k, e_i) for 0 <= j < k, each at
    distance 1 above the matching spine point. Dimension k + 1, n = 2k^2.
    """
    _require(k >= 2, f"k must be >= 2, got {k}")
    coords = np.zeros((2 * k * k, k + 1))
    coords[:k * k, 0] = np.arange(k * k) / float(k)
    for i in range(k):
        rows = slice(k * k + i * k, k * k + (i + 1) * k)
        coords[rows, 0] = (i * k + np.arange(k)) / float(k)
        coords[rows, 1 + i] = 1.0
    return PointSet(coords)


def pair_gadget_scale(t: int, d: int) -> float:
    """R = sqrt(t^(1/d) / 10)"""
    _require(t >= 1 and d >= 1, f"t and d must be >= 1, got t={t}, d={d}")
    return math.sqrt(float(t) ** (1.0 / d) / 10.0)


def gen_pair_gadget(t: int, d_for_R: int) -> PointSet:
    """
    t pairs a_i = (2i, 0, ...), b_i = a_i + e_{i+1}, except b_t = a_t + e_{t+1}/R

    Points are interleaved: index 2(i-1) is a_i and 2(i-1)+1 is b_i.
    """
    _require(t >= 2, f"t must be >= 2, got {t}")
    _require(d_for_R >= 1, f"d_for_R must be >= 1, got {d_for_R}")
    scale_R = pair_gadget_scale(t, d_for_R)
    coords = np.zeros((2 * t, t + 1))
    for i in range(1, t + 1):
        coords[2 * (i - 1), 0] = 2.0 * i
        coords[2 * (i - 1) + 1, 0] = 2.0 * i
        coords[2 * (i - 1) + 1, i] = 1.0
    coords[2 * t - 1, t] = 1.0 / scale_R
    return PointSet(coords)


# Generators keyed by the kind names used on the command line
KINDS = ('prefix-gauss', 'axis-gauss', 'scaled-identity', 'star-identity',
         'axis-grid', 'walk', 'comb', 'pair-gadget')


def _param(spec, name, default):
    value = spec.params.get(name)
    return default if value is None else value


def build_instance(spec: InstanceSpec) -> PointSet:
    """
    Build the point set an InstanceSpec describes

    spec.n is the construction's size parameter: n for the Gaussian sets,
    m for identity/star/grid/walk, k for the comb and t for the pair gadget.
    Missing scale parameters fall back to the default formulas with
    params['d'] (default 5) plugged in.
    """
    kind, size = spec.kind, int(spec.n)
    d = int(_param(spec, 'd', DEFAULT_SCALE_D))
    if kind == 'prefix-gauss':
        ps = gen_prefix_gauss(size, spec.seed)
    elif kind == 'axis-gauss':
        ps = gen_axis_gauss(size, spec.seed)
    elif kind == 'scaled-identity':
        ps = gen_scaled_identity(size, float(_param(spec, 'R', default_identity_scale(size, d))))
    elif kind == 'star-identity':
        ps = gen_star_identity(size)
    elif kind == 'axis-grid':
        ps = gen_axis_grid(size, int(_param(spec, 'C', default_grid_resolution(size, d))))
    elif kind == 'walk':
        ps = gen_walk(size, float(_param(spec, 'scale', default_walk_scale(size, d))))
    elif kind == 'comb':
        ps = gen_comb(size)
    elif kind == 'pair-gadget':
        ps = gen_pair_gadget(size, d)
    else:
        raise InvalidInputError(f"Unknown instance kind {kind!r}; expected one of {', '.join(KINDS)}")
    if runtime.cache_distances:
        ps = PointSet(ps.coords, cache_distances=True)
    logger.info(f"Built {kind} instance: n={ps.n}, m={ps.m}")
    return ps


def reference_cost(spec: InstanceSpec) -> Optional[float]:
    """
    Closed-form cost stated by a construction, or None when it has none

    MST cost for star (m), grid (m) and comb (3k - 1 - 1/k); FL optimum
    with unit opening cost for scaled identity and walk (m); closest-pair
    distance min(1, 1/R) for the pair gadget.
    """
    kind, size = spec.kind, int(spec.n)
    if kind in ('star-identity', 'axis-grid', 'scaled-identity', 'walk'):
        return float(size)
    if kind == 'comb':
        return 3.0 * size - 1.0 - 1.0 / size
    if kind == 'pair-gadget':
        d = int(_param(spec, 'd', DEFAULT_SCALE_D))
        return min(1.0, 1.0 / pair_gadget_scale(size, d))
    return None


def _write_rows(ps, f):
    f.write(f"# projclust points n={ps.n} m={ps.m}\n")
    writer = csv.writer(f, lineterminator='\n')
    for row in ps.coords:
        writer.writerow([format(float(x), CSV_FLOAT_FORMAT) for x in row])


def save_csv(ps: PointSet, path) -> None:
    """Write one comma-separated row per point, 17 significant digits; path may be an open text stream"""
    if hasattr(path, 'write'):
        _write_rows(ps, path)
        return
    path = Path(path)
    with path.open('w', newline='') as f:
        _write_rows(ps, f)
    logger.debug(f"Saved {ps.n}x{ps.m} points to {path}")


def load_csv(path) -> PointSet:
    """
    Read a point file; lines starting with '#' and blank lines are skipped

    Raises:
        ParseError: ragged rows, non-numeric or non-finite fields, or no rows
    """
    path = Path(path)
    try:
        f = path.open('r', newline='')
    except OSError as e:
        raise ParseError(f"Cannot open point file: {e.strerror}", path=str(path)) from e

    rows = []
    arity = None
    with f:
        for line_no, line in enumerate(f, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            fields = next(csv.reader([stripped]))
            if arity is None:
                arity = len(fields)
            elif len(fields) != arity:
                raise ParseError(f"Expected {arity} fields, got {len(fields)}", line=line_no, path=str(path))
            try:
                values = [float(v) for v in fields]
            except ValueError as e:
                raise ParseError(f"Non-numeric field: {e}", line=line_no, path=str(path)) from e
            if not all(math.isfinite(v) for v in values):
                raise ParseError("Non-finite coordinate", line=line_no, path=str(path))
            rows.append(values)

    if not rows:
        raise ParseError("File contains no points", line=1, path=str(path))
    logger.debug(f"Loaded {len(rows)}x{arity} points from {path}")
    return PointSet(np.array(rows, dtype=np.float64), cache_distances=runtime.cache_distances)
