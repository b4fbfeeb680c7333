# projclust/models.py

import hashlib
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, Optional, Tuple

import numpy as np

from projclust.utils import InvalidInputError


def _readonly(array):
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PointSet:
    """Immutable n x m array of finite coordinates (the dataset X, or GX)

    A 1-D input is read as n points on a line.
    """
    coords: np.ndarray
    cache_distances: bool = False

    def __post_init__(self):
        try:
            arr = np.array(self.coords, dtype=np.float64, copy=True)
        except (TypeError, ValueError) as e:
            raise InvalidInputError(f"Coordinates are not numeric: {e}") from e
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        if arr.ndim != 2:
            raise InvalidInputError(f"Coordinates must be an n x m array, got {arr.ndim} dimensions")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidInputError(f"Point sets need n >= 1 and m >= 1, got {arr.shape[0]} x {arr.shape[1]}")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("Every coordinate must be finite")
        object.__setattr__(self, 'coords', _readonly(np.ascontiguousarray(arr)))

    @property
    def n(self):
        return self.coords.shape[0]

    @property
    def m(self):
        return self.coords.shape[1]

    def __len__(self):
        return self.n

    @cached_property
    def digest(self):
        """SHA-256 over shape and raw coordinates"""
        h = hashlib.sha256()
        h.update(f"{self.n}x{self.m}".encode())
        h.update(self.coords.tobytes())
        return h.hexdigest()

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return self.coords.shape == other.coords.shape and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.digest)

    def __repr__(self):
        return f'<PointSet n={self.n} m={self.m}>'

    def scaled(self, factor):
        return PointSet(self.coords * factor, cache_distances=self.cache_distances)

    def subset(self, indices):
        return PointSet(self.coords[np.asarray(indices, dtype=np.intp)], cache_distances=self.cache_distances)


@dataclass(frozen=True)
class DoublingEstimate:
    """Greedy-cover estimate of the doubling constant"""
    lambda_hat: int
    ddim_hat: float
    scales_probed: Tuple[float, ...]
    centers_probed: int = 0

    def to_dict(self):
        return {
            'lambda_hat': self.lambda_hat,
            'ddim_hat': self.ddim_hat,
            'scales_probed': list(self.scales_probed),
            'centers_probed': self.centers_probed,
        }


@dataclass(frozen=True, eq=False)
class GaussianProjection:
    """The linear map G: a d x m matrix of i.i.d. N(0, 1/d) draws and the seed that produced it"""
    m: int
    d: int
    seed: int
    entries: np.ndarray
    generator: str

    def __post_init__(self):
        if self.entries.shape != (self.d, self.m):
            raise InvalidInputError(f"Projection entries must be {self.d} x {self.m}, got {self.entries.shape}")
        _readonly(self.entries)

    def __repr__(self):
        return f'<GaussianProjection {self.m}->{self.d} seed={self.seed}>'


class Variant(str, Enum):
    """Connection cost variant of facility location"""
    LINEAR = 'linear'
    SQUARED = 'squared'


@dataclass(frozen=True, eq=False)
class FLConfig:
    """Facility location cost model: uniform opening cost or one cost per point"""
    variant: Variant = Variant.LINEAR
    opening_cost: float = 1.0
    opening_costs: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, 'variant', Variant(self.variant))
        if not (np.isfinite(self.opening_cost) and self.opening_cost > 0):
            raise InvalidInputError(f"Opening cost must be positive and finite, got {self.opening_cost}")
        if self.opening_costs is not None:
            costs = np.array(self.opening_costs, dtype=np.float64, copy=True).reshape(-1)
            if costs.size == 0 or not np.all(np.isfinite(costs)) or np.any(costs <= 0):
                raise InvalidInputError("Per-point opening costs must be positive and finite")
            object.__setattr__(self, 'opening_costs', _readonly(costs))

    @property
    def is_uniform(self):
        return self.opening_costs is None

    def costs_for(self, n):
        """Opening cost of every point of an n-point set"""
        if self.opening_costs is None:
            return np.full(n, float(self.opening_cost))
        if self.opening_costs.shape[0] != n:
            raise InvalidInputError(f"{self.opening_costs.shape[0]} opening costs given for {n} points")
        return self.opening_costs

    def scaled(self, multiplier):
        """Same model with every opening cost multiplied"""
        if self.opening_costs is None:
            return FLConfig(self.variant, self.opening_cost * multiplier)
        return FLConfig(self.variant, self.opening_cost, self.opening_costs * multiplier)

    def to_dict(self):
        data = {'variant': self.variant.value, 'opening_cost': self.opening_cost}
        if self.opening_costs is not None:
            data['opening_costs'] = self.opening_costs.tolist()
        return data


@dataclass(frozen=True, eq=False)
class RadiusProfile:
    """Per-point radii r_p of a point set under an FLConfig"""
    radii: np.ndarray
    variant: Variant
    config: FLConfig
    source_digest: str

    def __post_init__(self):
        _readonly(self.radii)

    @property
    def n(self):
        return self.radii.shape[0]

    def to_dict(self):
        return {
            'variant': self.variant.value,
            'radii': self.radii.tolist(),
            'config': self.config.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class FacilitySolution:
    """Opened facilities, nearest-facility assignment and cost breakdown"""
    facilities: Tuple[int, ...]
    assignment: np.ndarray
    opening_cost_total: float
    connection_cost_total: float
    total: float
    variant: Variant = Variant.LINEAR

    def __post_init__(self):
        _readonly(self.assignment)

    def to_dict(self):
        return {
            'facilities': list(self.facilities),
            'assignment': self.assignment.tolist(),
            'opening_cost_total': self.opening_cost_total,
            'connection_cost_total': self.connection_cost_total,
            'total': self.total,
            'variant': self.variant.value,
        }


@dataclass(frozen=True)
class SpanningTree:
    """n - 1 undirected edges on [n], stored (smaller, larger) and sorted"""
    n: int
    edges: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"A spanning tree needs n >= 1, got {self.n}")
        edges = tuple(sorted((min(int(a), int(b)), max(int(a), int(b))) for a, b in self.edges))
        if len(edges) != self.n - 1:
            raise InvalidInputError(f"A spanning tree on {self.n} points has {self.n - 1} edges, got {len(edges)}")
        parent = list(range(self.n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for a, b in edges:
            if a == b or not (0 <= a < self.n and 0 <= b < self.n):
                raise InvalidInputError(f"Invalid edge ({a}, {b}) for n={self.n}")
            ra, rb = find(a), find(b)
            if ra == rb:
                raise InvalidInputError(f"Edge ({a}, {b}) closes a cycle")
            parent[ra] = rb
        object.__setattr__(self, 'edges', edges)

    def to_dict(self):
        return {'n': self.n, 'edges': [list(e) for e in self.edges]}


@dataclass(frozen=True)
class InstanceSpec:
    """Which construction to build and with which parameters"""
    kind: str
    n: int
    m: Optional[int] = None
    seed: int = 0
    params: Dict[str, float] = field(default_factory=dict)

    def to_dict(self):
        return {'kind': self.kind, 'n': self.n, 'm': self.m, 'seed': self.seed, 'params': dict(self.params)}
