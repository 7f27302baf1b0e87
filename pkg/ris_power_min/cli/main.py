"""
Command line interface.

    ris-power-min run experiment.ini [--output-dir DIR] [--seed S] [--trials T] [--methods DM,MRT] [--workers W]
    ris-power-min summary results.csv
    ris-power-min scaling 8 32 128 [--variance RHO] [--power P0] [--trials T] [--seed S]
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from ris_power_min.analysis.scaling import fit_scaling_exponent, scaling_law_report
from ris_power_min.cli.config import parse_methods, read_experiment_config
from ris_power_min.cli.runner import run_experiment
from ris_power_min.cli.summary import compare_summary
from ris_power_min.cross_section.exceptions import ConfigurationError, SummaryError
from ris_power_min.util.units import parse_quantity

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NUMERICAL_FAILURE = 1
EXIT_USAGE = 2


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='ris-power-min',
                                     description='Sum transmit power minimization with a reconfigurable '
                                                 'intelligent surface')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='-v for info, -vv for debug output')
    commands = parser.add_subparsers(dest='command', required=True)

    run = commands.add_parser('run', help='run an experiment configuration')
    run.add_argument('config', type=Path, help='experiment configuration file')
    run.add_argument('--output-dir', type=Path, help='directory of results.csv and summary.txt')
    run.add_argument('--seed', type=int, help='override of the base seed')
    run.add_argument('--trials', type=int, help='override of the trials per sweep point')
    run.add_argument('--methods', help='comma-separated subset of DM, SDR, MRT, ZF')
    run.add_argument('--workers', type=int, help='number of worker processes')

    summary = commands.add_parser('summary', help='summarize an existing results.csv')
    summary.add_argument('results', type=Path, help='result file')

    scaling = commands.add_parser('scaling', help='received power versus number of RIS elements')
    scaling.add_argument('units', type=int, nargs='+', help='numbers of RIS elements N')
    scaling.add_argument('--variance', default='1', help='channel variance rho')
    scaling.add_argument('--power', default='1W', help='transmit power P0')
    scaling.add_argument('--trials', type=int, default=100_000, help='Monte Carlo trials per N')
    scaling.add_argument('--seed', type=int, default=0)
    return parser


def configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity == 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(argv: Optional[Sequence[str]] = None) -> int:
    arguments = create_parser().parse_args(argv)
    configure_logging(arguments.verbose)
    try:
        if arguments.command == 'run':
            return _run(arguments)
        if arguments.command == 'summary':
            sys.stdout.write(compare_summary(arguments.results))
            return EXIT_OK
        return _scaling(arguments)
    except (ConfigurationError, SummaryError) as error:
        sys.stderr.write(f'{error}\n')
        return EXIT_USAGE


def _run(arguments: argparse.Namespace) -> int:
    experiment = read_experiment_config(arguments.config)
    overrides = {}
    if arguments.output_dir is not None:
        overrides['output_dir'] = arguments.output_dir
    if arguments.seed is not None:
        overrides['seed'] = arguments.seed
    if arguments.trials is not None:
        overrides['trials'] = arguments.trials
    if arguments.methods is not None:
        try:
            overrides['methods'] = parse_methods(arguments.methods)
        except ValueError as error:
            raise ConfigurationError('--methods', 0, str(error)) from error
    if overrides:
        try:
            experiment = type(experiment).model_validate({**experiment.model_dump(), **overrides})
        except ValueError as error:
            raise ConfigurationError('<command line>', 0, str(error)) from error

    result = run_experiment(experiment, arguments.workers)
    sys.stdout.write(result.summary_path.read_text(encoding='utf-8'))
    if result.exit_code != EXIT_OK:
        logger.warning('Some method runs ended in a numerical failure, see %s', result.results_path)
        return EXIT_NUMERICAL_FAILURE
    return EXIT_OK


def _scaling(arguments: argparse.Namespace) -> int:
    try:
        variance = parse_quantity(arguments.variance)
        power = parse_quantity(arguments.power, 'W')
    except ValueError as error:
        raise ConfigurationError('<command line>', 0, str(error)) from error
    report = scaling_law_report(arguments.units, variance, power, arguments.trials, arguments.seed)
    sys.stdout.write(report.to_string(index=False) + '\n')
    if len(set(arguments.units)) > 1:
        for mode, rows in report.groupby('mode', sort=False):
            sys.stdout.write(f'fitted exponent {mode}: {fit_scaling_exponent(rows["N"], rows["monte_carlo_w"]):.3f}\n')
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
