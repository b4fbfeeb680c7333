"""
projclust mst command
"""

import click

from projclust.commands import (csv_lines, emit, format_option, input_option, maybe_project, output_option,
                                project_option, require_input, seed_option)
from projclust.utils.mst import edge_lengths, mst_exact, tree_cost_in


@click.command('mst')
@input_option
@project_option
@seed_option
@output_option
@format_option
def mst_cmd(input_path, project_d, seed, output_path, fmt):
    """Exact minimum spanning tree, optionally found in a projection"""
    original = require_input(input_path)
    ps, projection = maybe_project(original, project_d, seed)
    tree = mst_exact(ps)
    payload = {
        'n': original.n,
        'projection': projection,
        'tree': tree.to_dict(),
        'cost': tree_cost_in(tree, ps),
    }
    if projection is not None:
        optimal = tree_cost_in(mst_exact(original), original)
        pulled = tree_cost_in(tree, original)
        payload['pullback_cost'] = pulled
        payload['original_cost'] = optimal
        payload['ratio'] = pulled / optimal if optimal > 0 else 1.0

    lengths = edge_lengths(tree, original)
    rows = [(a, b, repr(float(length))) for (a, b), length in zip(tree.edges, lengths)]
    emit(payload, output_path, fmt, csv_lines(['u', 'v', 'length'], rows))
