"""
Experiment reports for projclust
Per-trial records, per-d aggregates, the deterministic digest and JSON/CSV emitters
"""

import io
import csv
import json
import math
import hashlib
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np

from projclust.version import REPORT_SCHEMA, get_version_info

logger = logging.getLogger(__name__)

# Wall-clock fields vary run to run and stay out of the digest
TIMING_KEYS = frozenset({'wall_time_ms', 'time_mean_ms', 'elapsed_ms', 'speedup'})

CSV_COLUMNS = ['dataset', 'd', 'trial', 'seed', 'ratio', 'projected_cost',
               'original_cost', 'wall_time_ms', 'error']


def to_jsonable(value):
    """numpy scalars and arrays to Python values; NaN and infinities to None"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    return value


def _strip_timing(value):
    if isinstance(value, dict):
        return {k: _strip_timing(v) for k, v in value.items() if k not in TIMING_KEYS and k != 'deterministic_digest'}
    if isinstance(value, list):
        return [_strip_timing(v) for v in value]
    return value


def canonical_json(payload) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, separators=(',', ':'))


def deterministic_digest(payload) -> str:
    """SHA-256 of the canonical JSON of payload without any timing field"""
    return hashlib.sha256(canonical_json(_strip_timing(to_jsonable(payload))).encode()).hexdigest()


def with_digest(payload: Dict[str, Any]) -> Dict[str, Any]:
    """Attach deterministic_digest to a command payload"""
    data = to_jsonable(payload)
    data['deterministic_digest'] = deterministic_digest(data)
    return data


def dumps(payload) -> str:
    return json.dumps(to_jsonable(payload), indent=2, sort_keys=True)


@dataclass
class TrialRecord:
    """One (d, trial) outcome; metrics are None when the trial failed"""
    d: int
    trial: int
    seed: int
    ratio: Optional[float] = None
    projected_cost: Optional[float] = None
    original_cost: Optional[float] = None
    wall_time_ms: float = 0.0
    dataset: Optional[str] = None
    error: Optional[str] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self):
        return self.error is None

    def to_dict(self):
        data = {
            'd': self.d,
            'trial': self.trial,
            'seed': self.seed,
            'ratio': self.ratio,
            'projected_cost': self.projected_cost,
            'original_cost': self.original_cost,
            'wall_time_ms': self.wall_time_ms,
            'diagnostics': self.diagnostics,
        }
        if self.dataset is not None:
            data['dataset'] = self.dataset
        if self.error is not None:
            data['error'] = self.error
        return data


def aggregate(records: List[TrialRecord]) -> List[Dict[str, Any]]:
    """
    Mean and sample standard deviation of the ratio per (dataset, d)

    Groups keep the order in which they first appear. Failed records are
    left out; a group with no successful record reports ratio_mean None.
    """
    groups = {}
    for record in records:
        groups.setdefault((record.dataset, record.d), []).append(record)

    aggregates = []
    for (dataset, d), group in groups.items():
        ratios = np.array([r.ratio for r in group if r.ok and r.ratio is not None], dtype=np.float64)
        times = np.array([r.wall_time_ms for r in group], dtype=np.float64)
        entry = {
            'd': d,
            'trials': len(group),
            'failed': sum(1 for r in group if not r.ok),
            'ratio_mean': float(ratios.mean()) if ratios.size else None,
            'ratio_median': float(np.median(ratios)) if ratios.size else None,
            'ratio_std': float(ratios.std(ddof=1)) if ratios.size > 1 else 0.0,
            'time_mean_ms': float(times.mean()) if times.size else 0.0,
        }
        if dataset is not None:
            entry['dataset'] = dataset
        aggregates.append(entry)
    return aggregates


@dataclass
class ExperimentReport:
    """Records of one run plus everything needed to reproduce it"""
    kind: str
    config: Dict[str, Any]
    records: List[TrialRecord] = field(default_factory=list)
    seeds: List[int] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def aggregates(self):
        return aggregate(self.records)

    def to_dict(self):
        payload = {
            'schema': REPORT_SCHEMA,
            'kind': self.kind,
            'config': self.config,
            'metadata': {**get_version_info(), 'seeds': list(self.seeds)},
            'records': [r.to_dict() for r in self.records],
            'aggregates': self.aggregates,
            'summary': self.summary,
        }
        return with_digest(payload)

    @property
    def digest(self):
        return self.to_dict()['deterministic_digest']

    def to_json(self):
        return dumps(self.to_dict())

    def to_csv(self):
        """One row per record; diagnostics are flattened into diag_* columns"""
        diag_keys = sorted({k for r in self.records for k in r.diagnostics})
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(CSV_COLUMNS + [f'diag_{k}' for k in diag_keys])
        for r in self.records:
            row = to_jsonable([r.dataset, r.d, r.trial, r.seed, r.ratio, r.projected_cost,
                               r.original_cost, r.wall_time_ms, r.error])
            row += [to_jsonable(r.diagnostics.get(k)) for k in diag_keys]
            writer.writerow(['' if v is None else v for v in row])
        return buffer.getvalue()
