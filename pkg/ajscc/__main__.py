from __future__ import absolute_import, print_function

import argparse
import logging
import re
import sys
import time
from os.path import expanduser, expandvars
from typing import Any, Dict, List, Optional

import six.moves.configparser as configparser

from ajscc import __version__
from ajscc.analysis.optimize import DEFAULT_BUDGET, DEFAULT_SEARCH_BOUND
from ajscc.budget.power import PowerBudgetParams
from ajscc.errors import AjsccError, SpecError
from ajscc.experiments import (COMMANDS, KINDS, PROCESSES_ENV,
                               default_processes, effective_spec, load_spec)
from ajscc.link.experiment import DEFAULT_REFERENCE_BANDWIDTH_HZ, WINDOW_POLICIES
from ajscc.link.plan import DEFAULT_WINDOW_S
from ajscc.results import FORMATS, ResultTable, write_table

NAME = 'ajscc'
# later files win
CONFIG_FILES = ['setup.cfg', NAME + '.ini']

MDR_SNR_GRID = [-60.0, -55.0, -50.0, -45.0, -40.0, -35.0, -30.0, -25.0]


def _common_parser():
    # type: () -> argparse.ArgumentParser
    common = argparse.ArgumentParser(add_help=False)
    run_group = common.add_argument_group('run options')
    run_group.add_argument('--config', metavar="FILE",
                           help="JSON experiment spec; command-line flags override its values")
    run_group.add_argument('-o', '--out', metavar="FILE",
                           help="Write the result table to FILE instead of standard output")
    run_group.add_argument('--format', choices=FORMATS, default='csv',
                           help="Result table format (default csv)")
    run_group.add_argument('--seed', type=int, default=0, metavar="N",
                           help="Master seed of all random draws (default 0)")
    run_group.add_argument('--trials', type=int, metavar="N",
                           help="Monte Carlo trials or observation windows per grid point")
    run_group.add_argument('-j', '--processes', type=int, metavar="N",
                           help="Compute grid cells in N parallel processes (default $%s, "
                                "else the number of cores)" % PROCESSES_ENV)
    run_group.add_argument('-v', '--verbose', action='store_true',
                           help="More verbose output")
    run_group.add_argument('-q', '--quiet', action='store_true',
                           help="Only report warnings and errors")
    return common


def _add_mapping_options(parser):
    # type: (argparse.ArgumentParser) -> None
    group = parser.add_argument_group('mapping options')
    group.add_argument('--ranges', type=float, nargs='+', metavar="R",
                       help="Width of each source range (default 1 for every dimension)")
    group.add_argument('--levels', type=int, nargs='+', metavar="L",
                       help="Stage count of each quantized dimension")
    group.add_argument('--d-max', type=float, metavar="D",
                       help="Maximum accumulated curve length")
    group.add_argument('--input', metavar="FILE",
                       help="Read further inputs from FILE, one per line")


def get_parser():
    # type: () -> argparse.ArgumentParser
    parser = argparse.ArgumentParser(
        prog=NAME,
        description="Analog joint source-channel coding toolkit: Shannon mappings, their "
                    "MSE analysis, and a frequency position modulated link simulator")
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True
    common = _common_parser()

    # encode --
    encode = subparsers.add_parser('encode', parents=[common],
                                   help="Map source vectors to curve lengths")
    encode.add_argument('source', type=float, nargs='*', metavar="S",
                        help="Components of one source vector")
    _add_mapping_options(encode)

    # decode --
    decode = subparsers.add_parser('decode', parents=[common],
                                   help="Recover source vectors from received values")
    decode.add_argument('received', type=float, nargs='*', metavar="X",
                        help="Received scalar values")
    _add_mapping_options(decode)

    # mse --
    mse = subparsers.add_parser('mse', parents=[common],
                                help="Closed-form sum-MSE over a grid of stage counts")
    mse_group = mse.add_argument_group('sweep options')
    mse_group.add_argument('--dimensions', type=int, default=2, metavar="N",
                           help="Source dimensions (default 2)")
    mse_group.add_argument('--ranges', type=float, nargs='+', metavar="R",
                           help="Width of each source range (default 1)")
    mse_group.add_argument('--d-max', type=float, nargs='+', default=[500.0, 1000.0, 1500.0],
                           metavar="D", help="Maximum curve lengths")
    mse_group.add_argument('--snr', type=float, nargs='+', default=[20.0, 30.0],
                           metavar="DB", help="Channel SNRs in dB")
    mse_group.add_argument('--levels-min', type=int, default=2, metavar="L",
                           help="Smallest stage count of the scan (default 2)")
    mse_group.add_argument('--levels-max', type=int, metavar="L",
                           help="Largest stage count of the scan (default depends on N)")
    mse_group.add_argument('--monte-carlo', action='store_true',
                           help="Add an empirical MSE column")

    # optimize --
    optimize = subparsers.add_parser('optimize', parents=[common],
                                     help="Optimal stage counts over a parameter grid")
    opt_group = optimize.add_argument_group('sweep options')
    opt_group.add_argument('--dimensions', type=int, nargs='+', default=[2, 3, 4, 5],
                           metavar="N", help="Source dimensions")
    opt_group.add_argument('--source-range', type=float, default=1.0, metavar="R",
                           help="Width of every source range (default 1)")
    opt_group.add_argument('--d-max', type=float, nargs='+',
                           default=[1000.0, 3000.0, 5000.0], metavar="D",
                           help="Maximum curve lengths")
    opt_group.add_argument('--snr', type=float, nargs='+', default=[20.0, 30.0],
                           metavar="DB", help="Channel SNRs in dB")
    opt_group.add_argument('--search-bound', type=int, default=DEFAULT_SEARCH_BOUND,
                           metavar="L", help="Largest stage count searched (default %(default)s)")
    opt_group.add_argument('--budget', type=int, default=DEFAULT_BUDGET, metavar="N",
                           help="Maximum objective evaluations per cell (default %(default)s)")

    # mdr --
    mdr = subparsers.add_parser('mdr', parents=[common],
                                help="Miss detection rate of the multiplexed link")
    link_group = mdr.add_argument_group('link options')
    link_group.add_argument('--bandwidth', type=float, nargs='+', default=[50e3],
                            metavar="HZ", help="Link bandwidths")
    link_group.add_argument('--nodes', type=int, nargs='+', default=[1000], metavar="N",
                            help="Multiplexed node counts")
    link_group.add_argument('--snr', type=float, nargs='+', default=MDR_SNR_GRID,
                            metavar="DB", help="Channel SNRs in dB")
    link_group.add_argument('--n-q', type=int, default=100, metavar="N",
                            help="Quantization points per node (default 100)")
    link_group.add_argument('--n-0', type=int, default=2, metavar="N",
                            help="Points per mapping line (default 2)")
    link_group.add_argument('--d-max', type=float, default=5.0, metavar="D",
                            help="Curve length of the sensor mapping (default 5)")
    link_group.add_argument('--sample-rate', type=float, metavar="HZ",
                            help="Complex sampling rate (default bandwidth plus one pitch)")
    link_group.add_argument('--fading', action='store_true',
                            help="Also run every curve through flat Rayleigh fading")
    link_group.add_argument('--sensor', action='store_true',
                            help="Carry mapped sources and report their end-to-end MSE")
    window_group = mdr.add_argument_group('window options')
    window_group.add_argument('--window', type=float, default=DEFAULT_WINDOW_S, metavar="S",
                              help="Observation window (default %(default)s s)")
    window_group.add_argument('--window-policy', choices=WINDOW_POLICIES,
                              default='fixed-time',
                              help="Keep the window length fixed, or scale it so every "
                                   "bandwidth uses the transform size of the reference")
    window_group.add_argument('--reference-bandwidth', type=float,
                              default=DEFAULT_REFERENCE_BANDWIDTH_HZ, metavar="HZ",
                              help="Reference of the fixed-samples policy")

    # budget --
    defaults = PowerBudgetParams()
    budget = subparsers.add_parser('budget', parents=[common],
                                   help="Receiver power budget and transmit power")
    budget_group = budget.add_argument_group('budget options')
    budget_group.add_argument('--gain', type=float, nargs='+', default=[0.0], metavar="DB",
                              help="RF gains G")
    budget_group.add_argument('--coverage', type=float, nargs='+', default=[100.0, 1000.0],
                              metavar="M", help="Coverage distances")
    budget_group.add_argument('--thermal-noise', type=float,
                              default=defaults.thermal_noise_floor_dbm, metavar="DBM")
    budget_group.add_argument('--noise-figure', type=float, default=defaults.noise_figure_db,
                              metavar="DB")
    budget_group.add_argument('--min-snr', type=float,
                              default=defaults.min_operational_snr_db, metavar="DB")
    budget_group.add_argument('--implementation-loss', type=float,
                              default=defaults.implementation_loss_db, metavar="DB")
    budget_group.add_argument('--adc-bits', type=int, default=defaults.adc_bits, metavar="N")
    budget_group.add_argument('--adc-floor', type=float,
                              default=defaults.adc_floor_below_noise_db, metavar="DB",
                              help="ADC floor below the noise floor")
    budget_group.add_argument('--peak-margin', type=float,
                              default=defaults.peak_to_average_margin_db, metavar="DB",
                              help="Peak to average margin below full scale")
    budget_group.add_argument('--exponent', type=float, default=defaults.path_loss_exponent,
                              metavar="N", help="Path loss exponent")
    budget_group.add_argument('--digital', action='store_true',
                              help="Budget of a digital receiver (0 dB SNR, no "
                                   "implementation loss)")
    return parser


def command_parsers(parser):
    # type: (argparse.ArgumentParser) -> Dict[str, argparse.ArgumentParser]
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return dict(action.choices)
    return {}


def load_config(arg_parser, command):
    # type: (argparse.ArgumentParser, str) -> Dict
    """Use the ArgumentParser to extract values set in a config file.

    Section [ajscc] applies to every command and [ajscc:<command>] to one.
    These are used to set the defaults on the parser before calling
    parse_args(), which ensures that arguments specified on the command line
    have a higher priority than those set in the config file.
    """
    SPLIT = re.compile('[,\n]+')
    paths = [expanduser(expandvars(path)) for path in CONFIG_FILES]
    config_parser = configparser.RawConfigParser()
    config_parser.read(paths)
    defaults = {}  # type: Dict[str, Any]
    for section in (NAME, '%s:%s' % (NAME, command)):
        if not config_parser.has_section(section):
            continue
        for action in arg_parser._actions:
            if isinstance(action, argparse._HelpAction):
                continue
            if not config_parser.has_option(section, action.dest):
                continue
            try:
                if action.nargs == 0:
                    val = config_parser.getboolean(section, action.dest)  # type: Any
                elif action.nargs in {'*', '+'}:
                    val = config_parser.get(section, action.dest)
                    val = [(action.type or str)(x.strip()) for x in SPLIT.split(val)
                           if x.strip()]
                elif action.type is int:
                    val = config_parser.getint(section, action.dest)
                elif action.type is float:
                    val = config_parser.getfloat(section, action.dest)
                else:
                    val = config_parser.get(section, action.dest)
            except ValueError as err:
                raise SpecError(action.dest, 'invalid value in [%s]: %s' % (section, err))
            defaults[action.dest] = val
    return defaults


def _main(args_override=None):
    # type: (Optional[List[str]]) -> ResultTable

    parser = get_parser()
    commands = command_parsers(parser)
    for command, command_parser in commands.items():
        command_parser.set_defaults(**load_config(command_parser, command))
    # Parse command line.
    args = parser.parse_args(args_override)

    # Set up logging handler.
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(format='%(message)s', level=level)

    if args.config:
        command_parser = commands[args.command]
        command_parser.set_defaults(**load_spec(args.config, args.command, command_parser))
        # flags given on the command line win over the spec file
        args = parser.parse_args(args_override)

    if not 0 <= args.seed < 2 ** 64:
        raise SpecError('seed', 'must be an unsigned 64-bit integer, got %r' % args.seed)
    if args.processes is None:
        args.processes = default_processes()
    elif args.processes < 1:
        raise SpecError('processes', 'must be at least 1, got %r' % args.processes)

    start = time.time()
    table = COMMANDS[args.command](args)
    table.metadata.update(
        kind=KINDS[args.command],
        spec=effective_spec(args),
        seed=args.seed,
        version=__version__,
        wall_time_s=round(time.time() - start, 3),
    )
    write_table(table, args.out, args.format)
    if args.out:
        logging.info('Wrote %d rows to %s', len(table.rows), args.out)
    return table


def main(args=None):
    # type: (Optional[List[str]]) -> int
    try:
        _main(args)
    except AjsccError as err:
        sys.exit('%s: error: %s' % (NAME, err))
    return 0


if __name__ == '__main__':
    sys.exit(main())
