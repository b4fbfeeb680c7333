"""
projclust optimum command
Exhaustive oracles, refused above the configured size guards
"""

import click

from projclust.commands import (csv_lines, emit, fl_config, format_option, input_option, output_option,
                                require_input, squared_option)
from projclust.utils.facility_location import brute_force_optimum
from projclust.utils.mst import brute_force_mst


@click.command('optimum')
@input_option
@squared_option
@click.option('--opening-cost', type=float, default=1.0, show_default=True, help='Uniform opening cost')
@click.option('--tree', is_flag=True, help='Minimum spanning tree over all labeled trees instead')
@output_option
@format_option
@click.pass_obj
def optimum_cmd(config_class, input_path, squared, opening_cost, tree, output_path, fmt):
    """Exact optimum by exhaustive search"""
    ps = require_input(input_path)
    if tree:
        best, cost = brute_force_mst(ps, max_n=config_class.MST_BRUTE_FORCE_MAX_N)
        emit({'n': ps.n, 'tree': best.to_dict(), 'cost': cost}, output_path, fmt,
             csv_lines(['u', 'v'], best.edges))
        return
    config = fl_config(squared, opening_cost)
    solution = brute_force_optimum(ps, config, max_n=config_class.BRUTE_FORCE_MAX_N)
    emit({'n': ps.n, 'config': config.to_dict(), 'solution': solution.to_dict()}, output_path, fmt,
         csv_lines(['facility'], [(f,) for f in solution.facilities]))
