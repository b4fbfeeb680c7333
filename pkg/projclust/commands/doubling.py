"""
projclust doubling command
"""

import click

from projclust.commands import csv_lines, emit, format_option, input_option, output_option, require_input, seed_option
from projclust.utils import ConfigError
from projclust.utils.geometry import doubling_constant_estimate


@click.command('doubling')
@input_option
@click.option('--centers', type=int, default=None, help='Centers sampled (default from config)')
@seed_option
@output_option
@format_option
@click.pass_obj
def doubling_cmd(config_class, input_path, centers, seed, output_path, fmt):
    """Estimate the doubling constant and dimension"""
    ps = require_input(input_path)
    centers = centers if centers is not None else config_class.DOUBLING_CENTERS
    if centers < 1:
        raise ConfigError(f"--centers must be >= 1, got {centers}")
    estimate = doubling_constant_estimate(ps, centers, seed)
    row = (estimate.lambda_hat, repr(float(estimate.ddim_hat)), estimate.centers_probed, len(estimate.scales_probed))
    emit({'n': ps.n, 'm': ps.m, 'seed': seed, 'estimate': estimate.to_dict()}, output_path, fmt,
         csv_lines(['lambda_hat', 'ddim_hat', 'centers_probed', 'scales_probed'], [row]))
