"""
Experiment harness for projclust
Ratio sweeps over projection dimensions, the doubling-dimension comparison,
counterexample demonstrations and facility-budget matching
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from projclust.extensions import pool
from projclust.models import FacilitySolution, FLConfig, InstanceSpec, PointSet, Variant
from projclust.utils import ConfigError, ProjClustError, timed
from projclust.utils import facility_location as fl
from projclust.utils import mst
from projclust.utils.geometry import closest_pair, doubling_constant_estimate, paired_distances, row_distances
from projclust.utils.instances import build_instance, load_csv, reference_cost
from projclust.utils.projection import project
from projclust.utils.reports import ExperimentReport, TrialRecord, aggregate

logger = logging.getLogger(__name__)

TASKS = ('fl', 'fl-squared', 'mst')

COUNTEREXAMPLE_KINDS = {
    'fl-identity': 'scaled-identity',
    'mst-star': 'star-identity',
    'mst-grid': 'axis-grid',
    'walk': 'walk',
    'kmeans-pairs': 'pair-gadget',
    'mst-comb': 'comb',
}

# Facility-budget matching accepts |F| within this fraction of the target
BUDGET_TOLERANCE = 0.10
BUDGET_MAX_STEPS = 80


@dataclass
class ExperimentConfig:
    """
    One ratio sweep

    Exactly one of input_path and instance names the data. epsilon_target
    is the relative-error threshold used to pick a minimal d.
    """
    task: str = 'mst'
    d_values: Tuple[int, ...] = (5, 10, 15, 20)
    trials: int = 20
    base_seed: int = 0
    input_path: Optional[str] = None
    instance: Optional[InstanceSpec] = None
    epsilon_target: float = 0.10
    facility_budget: Optional[int] = None
    opening_cost: float = 1.0

    def __post_init__(self):
        self.d_values = tuple(int(d) for d in self.d_values)

    @property
    def variant(self):
        return Variant.SQUARED if self.task == 'fl-squared' else Variant.LINEAR

    def validate(self):
        """Raise ConfigError on the first broken constraint"""
        if self.task not in TASKS:
            raise ConfigError(f"Unknown task {self.task!r}; expected one of {', '.join(TASKS)}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.d_values:
            raise ConfigError("d_values must be nonempty")
        if any(d < 1 for d in self.d_values):
            raise ConfigError(f"Every d must be >= 1, got {list(self.d_values)}")
        if any(b <= a for a, b in zip(self.d_values, self.d_values[1:])):
            raise ConfigError(f"d_values must be strictly ascending, got {list(self.d_values)}")
        if not 0.0 < self.epsilon_target <= 1.0:
            raise ConfigError(f"epsilon_target must lie in (0, 1], got {self.epsilon_target}")
        if self.base_seed < 0:
            raise ConfigError(f"base_seed must be >= 0, got {self.base_seed}")
        if (self.input_path is None) == (self.instance is None):
            raise ConfigError("Exactly one of input_path and instance must be given")
        if self.facility_budget is not None:
            if self.task == 'mst':
                raise ConfigError("facility_budget only applies to facility location tasks")
            if self.facility_budget < 1:
                raise ConfigError(f"facility_budget must be >= 1, got {self.facility_budget}")
        return self

    def to_dict(self):
        return {
            'task': self.task,
            'd_values': list(self.d_values),
            'trials': self.trials,
            'base_seed': self.base_seed,
            'input': self.input_path if self.input_path is not None else self.instance.to_dict(),
            'epsilon_target': self.epsilon_target,
            'facility_budget': self.facility_budget,
            'opening_cost': self.opening_cost,
        }


def trial_seed(base_seed: int, trial: int, d_index: int, d_count: int) -> int:
    """Seed of trial t at the d_index-th dimension; distinct for every (t, d)"""
    return base_seed + trial * d_count + d_index


def resolve_points(config: ExperimentConfig) -> PointSet:
    if config.input_path is not None:
        return load_csv(config.input_path)
    return build_instance(config.instance)


def match_facility_budget(ps: PointSet, config: FLConfig, target: int,
                          tolerance: float = BUDGET_TOLERANCE) -> Tuple[FLConfig, FacilitySolution]:
    """
    Scale every opening cost by one multiplier until MP opens about target facilities

    Bisection runs on log(multiplier): larger costs open fewer facilities.

    Raises:
        ConfigError: no multiplier brings |F| within tolerance of target
    """
    if not 1 <= target <= ps.n:
        raise ConfigError(f"facility_budget must lie in [1, {ps.n}], got {target}")

    def attempt(log_multiplier):
        scaled = config.scaled(math.exp(log_multiplier))
        return scaled, fl.solve(ps, scaled)

    def close_enough(solution):
        return abs(len(solution.facilities) - target) <= tolerance * target

    lo, hi = -1.0, 1.0
    scaled, solution = attempt(0.0)
    if close_enough(solution):
        return scaled, solution
    # widen until the bracket straddles the target
    for _ in range(BUDGET_MAX_STEPS):
        _, low_solution = attempt(lo)
        if len(low_solution.facilities) >= target:
            break
        lo *= 2.0
    for _ in range(BUDGET_MAX_STEPS):
        _, high_solution = attempt(hi)
        if len(high_solution.facilities) <= target:
            break
        hi *= 2.0

    for _ in range(BUDGET_MAX_STEPS):
        mid = 0.5 * (lo + hi)
        scaled, solution = attempt(mid)
        opened = len(solution.facilities)
        if close_enough(solution):
            logger.info(f"Budget matched: {opened} facilities (target {target}), multiplier {math.exp(mid):.6g}")
            return scaled, solution
        if opened > target:
            lo = mid
        else:
            hi = mid
    raise ConfigError(f"No opening-cost multiplier opens {target} +/- {tolerance:.0%} facilities")


@timed
def _projected_fl(ps, fl_config, d, seed):
    projected = project(ps, d, seed)
    return projected, fl.solve(projected, fl_config)


@timed
def _projected_mst(ps, d, seed):
    projected = project(ps, d, seed)
    return projected, mst.mst_exact(projected)


def _fl_trial(ps, fl_config, baseline, d, seed):
    (projected, solution), elapsed = _projected_fl(ps, fl_config, d, seed)
    pulled = fl.evaluate_cost(ps, solution.facilities, fl_config)
    ratio = pulled.total / baseline.total
    diagnostics = {
        'projected_facilities': len(solution.facilities),
        'original_facilities': len(baseline.facilities),
        'pullback_cost': pulled.total,
    }
    return ratio, solution.total, baseline.total, elapsed, diagnostics


def _mst_trial(ps, optimal_cost, d, seed):
    (projected, tree), elapsed = _projected_mst(ps, d, seed)
    pulled = mst.tree_cost_in(tree, ps)
    projected_cost = mst.tree_cost_in(tree, projected)
    if optimal_cost == 0.0:
        ratio, cost_ratio = 1.0, 1.0
    else:
        ratio, cost_ratio = pulled / optimal_cost, projected_cost / optimal_cost
    diagnostics = {'cost_ratio': cost_ratio, 'pullback_cost': pulled}
    return ratio, projected_cost, optimal_cost, elapsed, diagnostics


def _run_trials(work, trial_fn, dataset=None):
    """Run (d, trial, seed) work items in the pool; records come back ordered by (d, trial)"""
    def run(item):
        d, trial, seed = item
        try:
            ratio, projected_cost, original_cost, elapsed, diagnostics = trial_fn(d, seed)
            return TrialRecord(d=d, trial=trial, seed=seed, ratio=ratio, projected_cost=projected_cost,
                               original_cost=original_cost, wall_time_ms=elapsed,
                               dataset=dataset, diagnostics=diagnostics)
        except ProjClustError as e:
            logger.warning(f"Trial d={d} t={trial} seed={seed} failed: {e}")
            return TrialRecord(d=d, trial=trial, seed=seed, dataset=dataset, error=str(e))

    records = pool.map_ordered(run, work)
    return sorted(records, key=lambda r: (r.d, r.trial))


def _sweep_work(config):
    count = len(config.d_values)
    return [(d, t, trial_seed(config.base_seed, t, i, count))
            for t in range(config.trials) for i, d in enumerate(config.d_values)]


def _sweep_records(ps: PointSet, config: ExperimentConfig, dataset=None):
    """Records plus the baseline summary for one point set"""
    work = _sweep_work(config)
    summary = {'n': ps.n, 'm': ps.m}

    if config.task == 'mst':
        tree, elapsed = timed(mst.mst_exact)(ps)
        optimal_cost = mst.tree_cost_in(tree, ps)
        summary.update({'original_cost': optimal_cost, 'baseline': {'elapsed_ms': elapsed}})
        records = _run_trials(work, lambda d, seed: _mst_trial(ps, optimal_cost, d, seed), dataset)
    else:
        fl_config = FLConfig(config.variant, config.opening_cost)
        try:
            if config.facility_budget is not None:
                fl_config, _ = match_facility_budget(ps, fl_config, config.facility_budget)
            baseline, elapsed = timed(fl.solve)(ps, fl_config)
        except ProjClustError as e:
            logger.warning(f"Baseline solve failed, every record carries the error: {e}")
            summary['error'] = str(e)
            records = [TrialRecord(d=d, trial=t, seed=s, dataset=dataset, error=str(e)) for d, t, s in work]
            return sorted(records, key=lambda r: (r.d, r.trial)), summary
        summary.update({
            'original_cost': baseline.total,
            'original_facilities': len(baseline.facilities),
            'fl_config': fl_config.to_dict(),
            'baseline': {'elapsed_ms': elapsed},
        })
        records = _run_trials(work, lambda d, seed: _fl_trial(ps, fl_config, baseline, d, seed), dataset)

    times = [r.wall_time_ms for r in records if r.ok]
    if times and summary['baseline']['elapsed_ms'] > 0:
        summary['baseline']['speedup'] = summary['baseline']['elapsed_ms'] / float(np.mean(times))
    return records, summary


def minimal_d(aggregates, epsilon_target: float, dataset: Optional[str] = None) -> Optional[int]:
    """Smallest d whose mean relative error (ratio - 1) is at most epsilon_target"""
    for entry in aggregates:
        if entry.get('dataset') != dataset or entry['ratio_mean'] is None:
            continue
        if entry['ratio_mean'] - 1.0 <= epsilon_target:
            return entry['d']
    return None


def run_ratio_sweep(config: ExperimentConfig, points: Optional[PointSet] = None) -> ExperimentReport:
    """
    Project, solve in the projection and evaluate the pullback for every (d, trial)

    The original-space solution is computed once and shared as the ratio's
    denominator: MP for the facility location tasks, the exact MST otherwise.
    """
    config.validate()
    ps = points if points is not None else resolve_points(config)
    logger.info(f"Ratio sweep: task={config.task} n={ps.n} m={ps.m} d={list(config.d_values)} trials={config.trials}")

    records, summary = _sweep_records(ps, config)
    aggregates = aggregate(records)
    summary['minimal_d'] = minimal_d(aggregates, config.epsilon_target)
    logger.info(f"Ratio sweep finished: {sum(r.ok for r in records)}/{len(records)} records ok")
    return ExperimentReport(kind='ratio-sweep', config=config.to_dict(), records=records,
                            seeds=[r.seed for r in records], summary=summary)


def run_doubling_comparison(n: int, d_values: Sequence[int], trials: int, base_seed: int,
                            epsilon_target: float, centers: int = 64) -> ExperimentReport:
    """
    MST sweeps on the prefix and axis Gaussian sets built from the same draws

    Both datasets use the same projection seeds. The summary names, per
    dataset, the minimal d reaching epsilon_target and the estimated
    doubling constant.
    """
    if n < 10:
        raise ConfigError(f"The doubling comparison needs n >= 10, got {n}")

    records, summary = [], {'datasets': {}}
    config = None
    for kind in ('prefix-gauss', 'axis-gauss'):
        spec = InstanceSpec(kind=kind, n=n, seed=base_seed)
        config = ExperimentConfig(task='mst', d_values=tuple(d_values), trials=trials, base_seed=base_seed,
                                  instance=spec, epsilon_target=epsilon_target).validate()
        ps = build_instance(spec)
        dataset_records, dataset_summary = _sweep_records(ps, config, dataset=kind)
        estimate = doubling_constant_estimate(ps, centers, base_seed)
        dataset_summary['doubling'] = estimate.to_dict()
        summary['datasets'][kind] = dataset_summary
        records.extend(dataset_records)

    aggregates = aggregate(records)
    for kind, dataset_summary in summary['datasets'].items():
        dataset_summary['minimal_d'] = minimal_d(aggregates, epsilon_target, dataset=kind)
    logger.info("Doubling comparison minimal d: " + ", ".join(
        f"{kind}={s['minimal_d']}" for kind, s in summary['datasets'].items()))

    echo = {'n': n, 'd_values': list(config.d_values), 'trials': trials, 'base_seed': base_seed,
            'epsilon_target': epsilon_target, 'centers': centers}
    seeds = sorted({r.seed for r in records})
    return ExperimentReport(kind='doubling-compare', config=echo, records=records, seeds=seeds, summary=summary)


def _fl_identity(ps, projected, spec, reference):
    profile = fl.compute_radii(projected, FLConfig())
    estimate = fl.radii_cost_estimate(profile)
    solution = fl.mp_solve(projected, profile)
    scale_R = ps.coords[0, 0]
    # every pair of the scaled identity is R sqrt(2) apart
    opened = len(solution.facilities)
    pulled = opened + (ps.n - opened) * scale_R * math.sqrt(2.0)
    diagnostics = {
        'pullback_ratio': pulled / reference,
        'projected_facilities': len(solution.facilities),
        'small_radius_fraction': float(np.mean(profile.radii <= 2.0 / scale_R)),
    }
    return estimate / reference, estimate, diagnostics


def _mst_cost(ps, projected, spec, reference):
    tree = mst.mst_exact(projected)
    projected_cost = mst.tree_cost_in(tree, projected)
    diagnostics = {'pullback_ratio': mst.tree_cost_in(tree, ps) / reference}
    return projected_cost / reference, projected_cost, diagnostics


def _mst_pullback(ps, projected, spec, reference):
    tree = mst.mst_exact(projected)
    projected_cost = mst.tree_cost_in(tree, projected)
    pulled = mst.tree_cost_in(tree, ps)
    return pulled / reference, projected_cost, {'cost_ratio': projected_cost / reference}


def _walk(ps, projected, spec, reference):
    m = ps.n
    gaps = paired_distances(projected, np.arange(m - 1), np.arange(1, m))
    dropped = int(np.argmin(gaps))
    kept = [i for i in range(m) if i != dropped]
    config = FLConfig()
    projected_cost = fl.evaluate_cost(projected, kept, config).total
    # opening every facility is optimal in the projection while all gaps stay >= 1
    projected_optimum = fl.evaluate_cost(projected, range(m), config).total
    pulled = fl.evaluate_cost(ps, kept, config).total
    diagnostics = {
        'dropped': dropped,
        'min_projected_gap': float(gaps[dropped]),
        'pullback_ratio': pulled / reference,
    }
    return projected_cost / projected_optimum, projected_cost, diagnostics


def _pair_gadget(ps, projected, spec, reference):
    t = ps.n // 2
    i, j, projected_distance = closest_pair(projected)
    ratio = projected_distance / reference
    last_pair = {2 * t - 2, 2 * t - 1}
    unit_pair = (i % 2 == 0 and j == i + 1 and i not in last_pair)
    # dropping an endpoint outside the last pair is an optimal k = n - 1 choice in the projection
    dropped = i if i not in last_pair else j
    others = np.delete(row_distances(ps, dropped), dropped)
    pullback = float(others.min()) / reference
    diagnostics = {
        'pair': [i, j],
        'unit_pair': unit_pair,
        'ratio_squared': ratio * ratio,
        'medians_pullback_ratio': pullback,
        'means_pullback_ratio': pullback * pullback,
    }
    return ratio, projected_distance, diagnostics


_DIAGNOSTICS = {
    'fl-identity': _fl_identity,
    'mst-star': _mst_cost,
    'mst-comb': _mst_cost,
    'mst-grid': _mst_pullback,
    'walk': _walk,
    'kmeans-pairs': _pair_gadget,
}


def run_counterexample_demo(kind: str, size: int, d: int, trials: int, base_seed: int,
                            params: Optional[dict] = None) -> ExperimentReport:
    """
    Build a lower-bound construction, project it and report its diagnostic ratio

    fl-identity: sum of projected radii over m. mst-star, mst-comb: projected
    MST cost over M. mst-grid: pullback cost over M. walk: projected cost of
    the drop-one solution over the all-open cost. kmeans-pairs: projected
    over original closest-pair distance.
    """
    if kind not in COUNTEREXAMPLE_KINDS:
        raise ConfigError(f"Unknown counterexample {kind!r}; expected one of {', '.join(COUNTEREXAMPLE_KINDS)}")
    if trials < 1 or d < 1:
        raise ConfigError(f"trials and d must be >= 1, got trials={trials}, d={d}")

    spec = InstanceSpec(kind=COUNTEREXAMPLE_KINDS[kind], n=size, seed=base_seed,
                        params={'d': d, **(params or {})})
    ps = build_instance(spec)
    reference = reference_cost(spec)
    diagnose = _DIAGNOSTICS[kind]

    def trial_fn(d_, seed):
        projected, elapsed = timed(project)(ps, d_, seed)
        ratio, projected_cost, diagnostics = diagnose(ps, projected, spec, reference)
        return ratio, projected_cost, reference, elapsed, diagnostics

    work = [(d, t, trial_seed(base_seed, t, 0, 1)) for t in range(trials)]
    records = _run_trials(work, trial_fn)

    ok = [r for r in records if r.ok]
    summary = {
        'instance': spec.to_dict(),
        'n': ps.n,
        'm': ps.m,
        'reference_cost': reference,
        'ratio_median': float(np.median([r.ratio for r in ok])) if ok else None,
    }
    for key in ('pullback_ratio', 'medians_pullback_ratio'):
        values = [r.diagnostics[key] for r in ok if key in r.diagnostics]
        if values:
            summary[f'{key}_median'] = float(np.median(values))
    if kind == 'kmeans-pairs' and ok:
        summary['unit_pair_fraction'] = sum(r.diagnostics['unit_pair'] for r in ok) / len(ok)
    logger.info(f"Counterexample {kind} size={size} d={d}: median ratio {summary['ratio_median']}")

    echo = {'kind': kind, 'size': size, 'd': d, 'trials': trials, 'base_seed': base_seed,
            'params': dict(params or {})}
    return ExperimentReport(kind='counterexample', config=echo, records=records,
                            seeds=[r.seed for r in records], summary=summary)
