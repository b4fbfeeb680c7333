"""
projclust experiment commands
ratio-sweep, doubling-compare and counterexample, each writing an ExperimentReport
"""

import logging

import click

from projclust.commands import check, emit, format_option, input_option, output_option, seed_option, squared_option
from projclust.forms import (parse_d_values, parse_params, validate_budget, validate_counterexample,
                             validate_d_values, validate_epsilon, validate_seed, validate_task, validate_trials)
from projclust.models import InstanceSpec
from projclust.utils import ConfigError
from projclust.utils.harness import (COUNTEREXAMPLE_KINDS, TASKS, ExperimentConfig, run_counterexample_demo,
                                     run_doubling_comparison, run_ratio_sweep)
from projclust.utils.instances import KINDS

logger = logging.getLogger(__name__)


def _d_values(text, default):
    if text is None:
        return tuple(default)
    try:
        values = parse_d_values(text)
    except ValueError:
        raise ConfigError(f"--d-values must be a comma list or a range like 2..40, got {text!r}")
    check(validate_d_values(values))
    return values


def _trials(trials, config_class):
    trials = config_class.DEFAULT_TRIALS if trials is None else trials
    check(validate_trials(trials))
    return trials


def _epsilon(epsilon, config_class):
    epsilon = config_class.DEFAULT_EPSILON if epsilon is None else epsilon
    check(validate_epsilon(epsilon))
    return epsilon


@click.group('experiment')
def experiment_group():
    """Reproducible experiments"""
    pass


@experiment_group.command('ratio-sweep')
@input_option
@click.option('--kind', type=click.Choice(KINDS), default=None, help='Generate the input instead of loading it')
@click.option('--size', type=int, default=None, help='Size parameter for --kind')
@click.option('--task', type=click.Choice(TASKS), default='mst', show_default=True)
@squared_option
@click.option('--d-values', 'd_values', default=None, help="Target dimensions, '5,10,20' or '2..40'")
@click.option('--trials', type=int, default=None)
@seed_option
@click.option('--epsilon', type=float, default=None, help='Relative-error target for the minimal d')
@click.option('--budget', type=int, default=None, help='Target number of open facilities')
@output_option
@format_option
@click.pass_obj
def ratio_sweep_cmd(config_class, input_path, kind, size, task, squared, d_values, trials, seed,
                    epsilon, budget, output_path, fmt):
    """Pullback ratio per projection dimension"""
    if squared:
        if task == 'mst':
            raise ConfigError("--squared needs a facility location task")
        task = 'fl-squared'
    check(validate_task(task))
    check(validate_seed(seed))
    check(validate_budget(budget))

    instance = None
    if kind is not None:
        if size is None:
            raise click.UsageError("--kind needs --size")
        instance = InstanceSpec(kind=kind, n=size, seed=seed)
    elif not input_path:
        raise click.UsageError("Give --input or --kind/--size")

    config = ExperimentConfig(
        task=task,
        d_values=_d_values(d_values, config_class.DEFAULT_D_VALUES),
        trials=_trials(trials, config_class),
        base_seed=seed,
        input_path=input_path if instance is None else None,
        instance=instance,
        epsilon_target=_epsilon(epsilon, config_class),
        facility_budget=budget,
    )
    emit(run_ratio_sweep(config), output_path, fmt)


@experiment_group.command('doubling-compare')
@click.option('--size', type=int, default=300, show_default=True, help='Points per dataset')
@click.option('--d-values', 'd_values', default=None, help="Target dimensions, '5,10,20' or '2..40'")
@click.option('--trials', type=int, default=None)
@seed_option
@click.option('--epsilon', type=float, default=None, help='Relative-error target for the minimal d')
@click.option('--centers', type=int, default=None, help='Centers sampled by the doubling estimator')
@output_option
@format_option
@click.pass_obj
def doubling_compare_cmd(config_class, size, d_values, trials, seed, epsilon, centers, output_path, fmt):
    """Minimal d for low versus high doubling dimension Gaussian sets"""
    check(validate_seed(seed))
    report = run_doubling_comparison(
        n=size,
        d_values=_d_values(d_values, config_class.DEFAULT_D_VALUES),
        trials=_trials(trials, config_class),
        base_seed=seed,
        epsilon_target=_epsilon(epsilon, config_class),
        centers=config_class.DOUBLING_CENTERS if centers is None else centers,
    )
    emit(report, output_path, fmt)


@experiment_group.command('counterexample')
@click.option('--kind', required=True, type=click.Choice(list(COUNTEREXAMPLE_KINDS)))
@click.option('--size', required=True, type=int, help='m, or k for mst-comb, or t for kmeans-pairs')
@click.option('--project', 'project_d', type=int, default=5, show_default=True, help='Target dimension')
@click.option('--trials', type=int, default=None)
@seed_option
@click.option('--param', 'params', multiple=True, help='Construction override key=value (R, C, scale)')
@output_option
@format_option
@click.pass_obj
def counterexample_cmd(config_class, kind, size, project_d, trials, seed, params, output_path, fmt):
    """Lower-bound constructions and their diagnostic ratios"""
    check(validate_counterexample(kind))
    check(validate_seed(seed))
    ok, parsed = parse_params(params)
    if not ok:
        raise ConfigError(parsed)
    report = run_counterexample_demo(kind, size, project_d, _trials(trials, config_class), seed, parsed)
    emit(report, output_path, fmt)
