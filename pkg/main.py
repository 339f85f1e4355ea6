"""The main entry point of the homdip command line.

Assumptions:
 - Settings not given on the command line come from the scenario file, then HOMDIP_* environment variables (a .env file is honored)
 - Results are written at the end of a run, never incrementally
"""
import functools
import json
import logging
import os
import sys
import traceback

import click
from dotenv import load_dotenv

from src.controllers.controller import Controller
from src.models.errors import HomDipError, InvalidRangeError, NumericalContractError, ScenarioError

logger = logging.getLogger(__name__)

EXIT_FAILURE = 1
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

def exit_code(error: HomDipError) -> int:
    if isinstance(error, (ScenarioError, InvalidRangeError)):
        return EXIT_INVALID
    if isinstance(error, NumericalContractError):
        return EXIT_NUMERICAL
    return EXIT_FAILURE

def handle_errors(command):
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except HomDipError as e:
            logger.debug(traceback.format_exc())
            click.echo(f'Error: {e}', err=True)
            sys.exit(exit_code(e))
    return wrapper

@click.group(name='homdip')
@click.option('--verbose', '-v', is_flag=True, help='Log progress and timings.')
def cli(verbose: bool) -> None:
    """Hong-Ou-Mandel coincidence simulations."""
    load_dotenv()
    level = 'INFO' if verbose else os.getenv('HOMDIP_LOG_LEVEL', 'WARNING')
    logging.basicConfig(level=level.upper(), format='%(asctime)s %(levelname)s %(name)s: %(message)s')

@cli.command()
@click.argument('scenario_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--out', 'output_dir', default='.', show_default=True, type=click.Path(file_okay=False), help='Output directory.')
@click.option('--n-points', type=int, default=None, help='Frequency grid size override.')
@click.option('--n-tau', type=int, default=None, help='Number of delays in the sweep.')
@click.option('--no-plot', is_flag=True, help='Skip writing dip.svg.')
@handle_errors
def run(scenario_file: str, output_dir: str, n_points: int | None, n_tau: int | None, no_plot: bool) -> None:
    """Run SCENARIO_FILE and write dip.csv, summary.json and dip.svg."""
    summary = Controller.run_file(scenario_file, output_dir, plot=not no_plot, n_points=n_points, n_tau=n_tau)
    click.echo(json.dumps({**summary.to_json(), 'wall_time': summary.wall_time}, indent=2))

@cli.command()
@click.option('--eta', type=float, default=0.5, show_default=True, help='Beam splitter reflectivity.')
@click.option('--tags', default='H,H', show_default=True, help='Distinguishing tags of the two photons, comma separated.')
@handle_errors
def fock(eta: float, tags: str) -> None:
    """Discrete-mode two-photon interference on a beam splitter."""
    parts = [tag.strip() for tag in tags.split(',')]
    if len(parts) != 2 or not all(parts):
        raise ScenarioError('Expected two comma-separated tags', field='tags')
    result = Controller.fock(eta, tuple(parts))
    click.echo(f'output: {result["state"]}')
    for (n_a, n_b), probability in result['distribution'].items():
        click.echo(f'P({n_a},{n_b}) = {probability:.12g}')
    click.echo(f'p = {result["probability"]:.12g}')

@cli.command()
@click.argument('scenario_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--n-points', type=int, default=None, help='JSA grid size per axis.')
@handle_errors
def schmidt(scenario_file: str, n_points: int | None) -> None:
    """Print the Schmidt coefficients and purity of a pulsed source."""
    result = Controller.schmidt(scenario_file, n_points=n_points)
    for k, u in enumerate(result['coefficients']):
        click.echo(f'u_{k} = {u:.12g}')
    click.echo(f'purity = {result["purity"]:.12g}')
    click.echo(f'schmidt_number = {result["schmidt_number"]:.12g}')

if __name__ == '__main__':
    cli()
