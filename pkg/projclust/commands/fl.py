"""
projclust fl command
Facility location by radii and MP selection, optionally solved in a projection
and evaluated back in the original space
"""

import logging

import click

from projclust.commands import (check, csv_lines, emit, fl_config, format_option, input_option, maybe_project,
                                output_option, project_option, require_input, seed_option, squared_option)
from projclust.forms import validate_budget
from projclust.utils.facility_location import compute_radii, evaluate_cost, is_locally_optimal, mp_solve
from projclust.utils.harness import match_facility_budget

logger = logging.getLogger(__name__)


@click.command('fl')
@input_option
@squared_option
@click.option('--opening-cost', type=float, default=1.0, show_default=True, help='Uniform opening cost')
@click.option('--budget', type=int, default=None, help='Scale opening costs so about this many facilities open')
@project_option
@seed_option
@output_option
@format_option
def fl_cmd(input_path, squared, opening_cost, budget, project_d, seed, output_path, fmt):
    """Solve facility location"""
    original = require_input(input_path)
    config = fl_config(squared, opening_cost)
    check(validate_budget(budget, original.n))
    if budget is not None:
        config, _ = match_facility_budget(original, config, budget)

    ps, projection = maybe_project(original, project_d, seed)
    profile = compute_radii(ps, config)
    solution = mp_solve(ps, profile)
    locally_optimal, witness = is_locally_optimal(ps, profile, solution.facilities)
    payload = {
        'n': original.n,
        'config': config.to_dict(),
        'projection': projection,
        'solution': solution.to_dict(),
        'locally_optimal': locally_optimal,
        'violating_point': witness,
    }
    if projection is not None:
        pulled = evaluate_cost(original, solution.facilities, config)
        baseline = mp_solve(original, compute_radii(original, config))
        payload['pullback'] = pulled.to_dict()
        payload['original_solution_cost'] = baseline.total
        payload['ratio'] = pulled.total / baseline.total
        logger.info(f"Pullback ratio at d={project_d}: {payload['ratio']:.6f}")

    rows = [(f,) for f in solution.facilities]
    emit(payload, output_path, fmt, csv_lines(['facility'], rows))
