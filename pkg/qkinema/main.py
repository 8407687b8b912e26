"""Command-line entry point: every command prints a JSON report to stdout."""

import logging
import sys
from typing import Dict, Optional, Tuple

import click

from config.settings import Config

from .core.errors import ValidationError
from .services.config_manager import ConfigManager
from .services.experiment_runner import ExperimentRunner
from .utils.core_utils import EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, ErrorHandler, JSONManager

logger = logging.getLogger(__name__)


class ReportGroup(click.Group):
    """click group whose usage errors exit with 1 instead of click's default 2"""

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            rv = super().main(*args, **kwargs)
        except click.exceptions.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


def configure_logging(verbose: bool):
    level = logging.INFO if verbose else getattr(logging, Config.LOG_LEVEL, logging.WARNING)
    if Config.DEBUG:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=Config.LOG_FORMAT, stream=sys.stderr, force=True)


def emit(ctx: click.Context, report: Dict) -> int:
    """Print ``report``, optionally save it, and return the exit code for its verdict"""
    click.echo(JSONManager.dumps(report))
    output = ctx.find_root().obj.get("output")
    if output and not JSONManager.save_json(report, output):
        logger.warning(f"⚠️ Could not save report to {output}")
    return EXIT_OK if report.get("ok") else EXIT_VIOLATION


def parse_dims(ctx, param, value: str) -> Tuple[int, int]:
    try:
        d_a, d_b = (int(part) for part in value.split(","))
    except ValueError:
        raise click.BadParameter("expected two integers like 2,2") from None
    if d_a < 1 or d_b < 1:
        raise click.BadParameter("dimensions must be positive")
    return d_a, d_b


seed_option = click.option(
    "--seed", type=int, envvar="QKINEMA_SEED", default=None,
    help="Base random seed (falls back to QKINEMA_SEED, then the configured default).",
)


@click.group(cls=ReportGroup)
@click.option("--verbose", is_flag=True, help="Log progress to stderr.")
@click.option("--output", type=click.Path(dir_okay=False), default=None,
              help="Also write the JSON report to this file.")
@click.version_option(Config.VERSION, prog_name="qkinema")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, output: Optional[str]):
    """Kinematics of quantum mechanics: affinity and no-signaling checks."""
    configure_logging(verbose)
    try:
        runner = ExperimentRunner(ConfigManager())
    except ValidationError as e:
        raise click.ClickException(str(e)) from e
    ctx.obj = {"output": output, "runner": runner}


@cli.group()
def demo():
    """Worked demonstrations."""


@demo.command("example2")
@click.pass_context
@ErrorHandler.cli_error_handler("demo example2")
def demo_example2(ctx: click.Context):
    """Singlet with a local Z measurement on B."""
    ctx.exit(emit(ctx, ctx.obj["runner"].run_example2()))


@demo.command("classical")
@click.option("--size", type=click.IntRange(min=1), default=5, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=200, show_default=True)
@seed_option
@click.pass_context
@ErrorHandler.cli_error_handler("demo classical")
def demo_classical(ctx: click.Context, size: int, trials: int, seed: Optional[int]):
    """Push-forward of ω ↦ ω² mod N on a finite phase space."""
    ctx.exit(emit(ctx, ctx.obj["runner"].run_classical_demo(size, seed, trials)))


@cli.group()
def verify():
    """Randomized verification of identities."""


@verify.command("nosignaling")
@click.option("--dims", callback=parse_dims, default="2,2", show_default=True, help="dA,dB")
@click.option("--trials", type=click.IntRange(min=1), default=None)
@seed_option
@click.option("--tol", type=float, default=None)
@click.option("--measurements", type=click.IntRange(min=1), default=None,
              help="Random local bases per state.")
@click.pass_context
@ErrorHandler.cli_error_handler("verify nosignaling")
def verify_nosignaling(ctx, dims, trials, seed, tol, measurements):
    """Tr_B ρ is unchanged by every local projective measurement on B."""
    report = ctx.obj["runner"].run_no_signaling_sweep(dims, trials, seed, tol, measurements)
    ctx.exit(emit(ctx, report))


@cli.group()
def certify():
    """Certification of state maps."""


@certify.command("affine")
@click.option("--map", "map_spec", required=True,
              help="identity | bitflip[:p] | depolarizing:q | amplitude-damping:g | purify")
@click.option("--dim", type=click.IntRange(min=1), default=2, show_default=True)
@click.option("--trials", type=click.IntRange(min=1), default=None)
@seed_option
@click.option("--threshold", type=float, default=None)
@click.pass_context
@ErrorHandler.cli_error_handler("certify affine")
def certify_affine_command(ctx, map_spec, dim, trials, seed, threshold):
    """Search for two preparations of one state that the map separates."""
    report = ctx.obj["runner"].run_affinity_certification(map_spec, dim, trials, seed, threshold)
    ctx.exit(emit(ctx, report))


@cli.group()
def simulate():
    """Protocol simulations."""


@simulate.command("eqm-signaling")
@click.option("--shots", type=click.IntRange(min=1), default=None)
@seed_option
@click.pass_context
@ErrorHandler.cli_error_handler("simulate eqm-signaling")
def simulate_eqm_signaling_command(ctx, shots, seed):
    """Alice steers a singlet half; Bob reads her basis with a nonlinear functional."""
    ctx.exit(emit(ctx, ctx.obj["runner"].run_eqm_signaling(shots, seed)))


def main():
    cli(prog_name="qkinema")


if __name__ == "__main__":
    main()
