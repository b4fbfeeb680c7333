# projclust/__init__.py

import click

from projclust.version import get_full_version, get_version

def create_cli(config_class=None):
    """CLI factory"""
    from projclust.config import config

    # Configuration
    if config_class is None:
        from config import get_config
        config_class = get_config()

    if isinstance(config_class, str):
        config_class = config.get(config_class, config['default'])

    # Logging and process-wide singletons
    config_class.init_app()

    @click.group(name='projclust')
    @click.version_option(get_version(), prog_name='projclust', message=get_full_version())
    @click.pass_context
    def cli(ctx):
        """Random projections for facility location and minimum spanning trees"""
        ctx.obj = config_class

    # Register commands
    from projclust.commands.gen import gen_cmd
    from projclust.commands.radii import radii_cmd
    from projclust.commands.fl import fl_cmd
    from projclust.commands.mst import mst_cmd
    from projclust.commands.doubling import doubling_cmd
    from projclust.commands.optimum import optimum_cmd
    from projclust.commands.experiment import experiment_group

    cli.add_command(gen_cmd)
    cli.add_command(radii_cmd)
    cli.add_command(fl_cmd)
    cli.add_command(mst_cmd)
    cli.add_command(doubling_cmd)
    cli.add_command(optimum_cmd)
    cli.add_command(experiment_group)

    return cli

def cli_main(argv=None, config_class=None):
    """
    Run the CLI and return its exit code

    0 on success, 1 on parse, configuration or usage errors, 2 when an
    exhaustive oracle refuses an instance above its size guard.
    """
    from projclust.utils import ProjClustError, SizeGuardError

    cli = create_cli(config_class)
    try:
        result = cli.main(args=list(argv) if argv is not None else None,
                          prog_name='projclust', standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except SizeGuardError as e:
        click.echo(f"Error: {e}", err=True)
        return 2
    except ProjClustError as e:
        click.echo(f"Error: {e}", err=True)
        return 1
    return result if isinstance(result, int) else 0
