"""
projclust command package
Each module holds one command (or command group), registered by create_cli.
Shared option decorators and output helpers live here.
"""

import logging
from pathlib import Path

import click

from projclust.models import FLConfig, Variant
from projclust.utils import ConfigError
from projclust.utils.instances import load_csv
from projclust.utils.projection import project
from projclust.utils.reports import ExperimentReport, dumps, with_digest

logger = logging.getLogger(__name__)

input_option = click.option('--input', 'input_path', type=click.Path(dir_okay=False),
                            help='CSV point file')
output_option = click.option('--output', 'output_path', type=click.Path(dir_okay=False),
                             help='Write the result here instead of stdout')
format_option = click.option('--format', 'fmt', type=click.Choice(['json', 'csv']), default='json',
                             show_default=True, help='Output format')
project_option = click.option('--project', 'project_d', type=int, default=None,
                              help='Project to this many dimensions before solving')
seed_option = click.option('--seed', type=int, default=0, show_default=True, help='Base seed')
squared_option = click.option('--squared', is_flag=True, help='Squared connection costs')


def check(result):
    """Turn a forms (ok, message) pair into a ConfigError"""
    ok, message = result
    if not ok:
        raise ConfigError(message)
    return message


def require_input(input_path):
    if not input_path:
        raise click.UsageError("Missing option '--input'")
    return load_csv(input_path)


def maybe_project(ps, project_d, seed):
    """(points the solver runs on, projection echo or None)"""
    if project_d is None:
        return ps, None
    if project_d < 1:
        raise ConfigError(f"--project must be >= 1, got {project_d}")
    return project(ps, project_d, seed), {'d': project_d, 'seed': seed}


def fl_config(squared, opening_cost):
    return FLConfig(Variant.SQUARED if squared else Variant.LINEAR, opening_cost)


def _write(text, output_path):
    if output_path:
        Path(output_path).write_text(text)
        logger.info(f"Wrote {output_path}")
    else:
        click.echo(text, nl=not text.endswith('\n'))


def emit(result, output_path=None, fmt='json', csv_text=None):
    """
    Write a report or a command payload as JSON (with its digest) or CSV

    Plain payloads fall back to JSON when no CSV rendering is supplied.
    """
    if isinstance(result, ExperimentReport):
        text = result.to_csv() if fmt == 'csv' else result.to_json()
    elif fmt == 'csv' and csv_text is not None:
        text = csv_text
    else:
        text = dumps(with_digest(result))
    _write(text, output_path)


def csv_lines(header, rows):
    lines = [','.join(header)]
    lines += [','.join('' if v is None else str(v) for v in row) for row in rows]
    return '\n'.join(lines) + '\n'
