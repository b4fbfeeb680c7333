"""
projclust gen command
Build a synthetic instance and write it as a CSV point file
"""

import io
import logging

import click

from projclust.commands import check, emit, output_option, format_option, seed_option
from projclust.forms import parse_params, validate_kind
from projclust.models import InstanceSpec
from projclust.utils import ConfigError
from projclust.utils.instances import KINDS, build_instance, reference_cost, save_csv

logger = logging.getLogger(__name__)


@click.command('gen')
@click.option('--kind', required=True, type=click.Choice(KINDS), help='Construction to build')
@click.option('--size', required=True, type=int,
              help='n for Gaussian sets, m for identity/star/grid/walk, k for comb, t for pair gadget')
@click.option('--param', 'params', multiple=True, help='Construction override key=value (R, C, scale, d)')
@seed_option
@output_option
@format_option
def gen_cmd(kind, size, params, seed, output_path, fmt):
    """Generate a synthetic point set"""
    check(validate_kind(kind))
    ok, parsed = parse_params(params)
    if not ok:
        raise ConfigError(parsed)
    spec = InstanceSpec(kind=kind, n=size, seed=seed, params=parsed)
    ps = build_instance(spec)

    if output_path:
        save_csv(ps, output_path)
        return
    if fmt == 'csv':
        buffer = io.StringIO()
        save_csv(ps, buffer)
        click.echo(buffer.getvalue(), nl=False)
        return
    emit({
        'instance': spec.to_dict(),
        'n': ps.n,
        'm': ps.m,
        'reference_cost': reference_cost(spec),
        'points': ps.coords,
    })
