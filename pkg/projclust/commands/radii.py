"""
projclust radii command
"""

import click

from projclust.commands import (csv_lines, emit, fl_config, format_option, input_option, maybe_project,
                                output_option, project_option, require_input, seed_option, squared_option)
from projclust.utils.facility_location import compute_radii, radii_cost_estimate


@click.command('radii')
@input_option
@squared_option
@click.option('--opening-cost', type=float, default=1.0, show_default=True, help='Uniform opening cost')
@project_option
@seed_option
@output_option
@format_option
def radii_cmd(input_path, squared, opening_cost, project_d, seed, output_path, fmt):
    """Compute the per-point radii r_p"""
    ps, projection = maybe_project(require_input(input_path), project_d, seed)
    profile = compute_radii(ps, fl_config(squared, opening_cost))
    payload = {
        'n': ps.n,
        'projection': projection,
        'profile': profile.to_dict(),
        'cost_estimate': radii_cost_estimate(profile),
    }
    rows = [(p, repr(float(r))) for p, r in enumerate(profile.radii)]
    emit(payload, output_path, fmt, csv_lines(['point', 'radius'], rows))
