"""Experiment drivers behind the ajscc sub-commands.

Each ``cmd_*`` function takes the parsed arguments of its sub-command and
returns a ResultTable.  Grid cells are independent: they are computed by
module-level workers, optionally in a process pool, and assembled in grid
order so the process count never changes the output.
"""

from __future__ import absolute_import, division

import argparse
import itertools
import json
import logging
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar, Union

if sys.version_info[:2] < (3, 10):
    from typing_extensions import TypedDict
else:
    from typing import TypedDict

import numpy as np

from ajscc.analysis.mse import (NoiseModel, closed_form_mse, mse_grid,
                                monte_carlo_mse, noise_term)
from ajscc.analysis.optimize import optimize_levels
from ajscc.budget.power import (PowerBudgetParams, compute_budget,
                                digital_comparison, path_loss_db,
                                tx_power_dbm)
from ajscc.errors import SpecError
from ajscc.link.detect import check_resolution
from ajscc.link.experiment import (DEFAULT_TRIALS, run_mdr_experiment,
                                   window_for)
from ajscc.link.plan import FpmmConfig, plan_frequencies
from ajscc.mapping.shannon import (MappingConfig, build_mapping, decode_array,
                                   encode_array)
from ajscc.results import Number, ResultTable
from ajscc.seeding import cell_seed

logger = logging.getLogger(__name__)

T = TypeVar('T')
R = TypeVar('R')

PROCESSES_ENV = 'AJSCC_PROCESSES'

# sub-command -> experiment kind
KINDS = {
    'encode': 'encode',
    'decode': 'decode',
    'mse': 'mse-sweep',
    'optimize': 'optimize-sweep',
    'mdr': 'mdr-sweep',
    'budget': 'budget',
}

# argument destinations that control how a run is carried out, not what it computes
RUN_OPTIONS = {'command', 'config', 'out', 'format', 'seed', 'processes', 'verbose', 'quiet'}

# run options a spec file may not set
COMMAND_LINE_ONLY = {'command', 'config', 'processes', 'verbose', 'quiet'}

DEFAULT_MONTE_CARLO_TRIALS = 10 ** 5

# largest stage count of an 'mse' scan, by number of dimensions
DEFAULT_LEVELS_MAX = {2: 250, 3: 60}
DEFAULT_LEVELS_MAX_HIGH = 30

# Schema of a --config document.  Grid-valued keys hold lists; 'd_max' is a
# list for the sweeps and a single number for the codec and mdr commands.
ExperimentSpec = TypedDict('ExperimentSpec', {
    'kind': str,
    'seed': int,
    'trials': int,
    'snr': List[float],
    'd_max': Union[float, List[float]],
    'dimensions': Union[int, List[int]],
    'ranges': List[float],
    'levels': List[int],
    'bandwidth': List[float],
    'nodes': List[int],
    'gain': List[float],
    'coverage': List[float],
}, total=False)


class CellLoggingAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        return u'[%s] %s' % (self.extra['cell'], msg), kwargs


def cell_logger(label):
    # type: (str) -> CellLoggingAdapter
    return CellLoggingAdapter(logger, extra={'cell': label})


def default_processes():
    # type: () -> int
    value = os.environ.get(PROCESSES_ENV)
    if value:
        try:
            processes = int(value)
        except ValueError:
            processes = 0
        if processes < 1:
            raise SpecError(PROCESSES_ENV, 'must be a positive integer, got %r' % value)
        return processes
    return os.cpu_count() or 1


def run_cells(function, jobs, processes):
    # type: (Callable[[T], R], Sequence[T], int) -> List[R]
    """Map 'function' over 'jobs', in order, using up to 'processes' workers."""
    if processes <= 1 or len(jobs) <= 1:
        return [function(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=min(processes, len(jobs))) as pool:
        return list(pool.map(function, jobs))


# -- spec files --

def _check_value(key, value, action):
    # type: (str, Any, argparse.Action) -> Any

    def assert_type(item, typ):
        # type: (Any, type) -> Any
        if typ is float:
            ok = isinstance(item, (int, float)) and not isinstance(item, bool)
            item = float(item) if ok else item
        elif typ is int:
            ok = isinstance(item, int) and not isinstance(item, bool)
        elif typ is bool:
            ok = isinstance(item, bool)
        else:
            ok = isinstance(item, str)
        if not ok:
            raise SpecError(key, 'unexpected type %r (expected %s)'
                            % (type(item).__name__, getattr(typ, '__name__', typ)))
        if action.choices is not None and item not in action.choices:
            raise SpecError(key, '%r is not one of %s' % (item, ', '.join(action.choices)))
        return item

    if action.nargs == 0:
        return assert_type(value, bool)
    typ = action.type or str
    if action.nargs in {'*', '+'}:
        if not isinstance(value, list):
            raise SpecError(key, 'unexpected type %r (expected a list)' % type(value).__name__)
        if action.nargs == '+' and not value:
            raise SpecError(key, 'the list is empty')
        return [assert_type(item, typ) for item in value]
    return assert_type(value, typ)


def load_spec(path, command, parser):
    # type: (str, str, argparse.ArgumentParser) -> Dict[str, Any]
    """Read a JSON experiment spec and return argument defaults for 'command'.

    Keys are the argument destinations of the sub-command's 'parser'.
    """
    try:
        with open(path) as f:
            data = json.load(f)  # type: ExperimentSpec
    except IOError as err:
        raise SpecError('config', "can't open spec file: %s" % err)
    except ValueError as err:
        raise SpecError('config', '%s: invalid JSON: %s' % (path, err))
    if not isinstance(data, dict):
        raise SpecError('config', '%s: expected a JSON object' % path)

    actions = {action.dest: action for action in parser._actions
               if not isinstance(action, argparse._HelpAction)}
    values = {}  # type: Dict[str, Any]
    for key, value in data.items():
        if key == 'kind':
            if value not in (command, KINDS[command]):
                raise SpecError('kind', '%r does not match the %r command' % (value, command))
            continue
        if key not in actions or key in COMMAND_LINE_ONLY:
            raise SpecError(key, 'unknown key for the %r command' % command)
        values[key] = _check_value(key, value, actions[key])
    return values


def read_numbers(path):
    # type: (str) -> List[List[float]]
    """Rows of numbers from a text file; '#' starts a comment."""
    split = re.compile(r'[,\s]+')
    rows = []
    try:
        with open(path) as f:
            for number, line in enumerate(f, 1):
                line = line.split('#', 1)[0].strip()
                if not line:
                    continue
                try:
                    rows.append([float(x) for x in split.split(line) if x])
                except ValueError:
                    raise SpecError('input', '%s: line %d: not a list of numbers' % (path, number))
    except IOError as err:
        raise SpecError('input', "can't open input file: %s" % err)
    return rows


def effective_spec(args):
    # type: (argparse.Namespace) -> Dict[str, Any]
    """The parameters that determine a command's result."""
    return {key: value for key, value in sorted(vars(args).items())
            if key not in RUN_OPTIONS}


def _grid(name, values):
    # type: (str, Optional[Sequence[T]]) -> List[T]
    if not values:
        raise SpecError(name, 'the grid is empty')
    return list(values)


def _trials(args, default):
    # type: (argparse.Namespace, int) -> int
    trials = default if args.trials is None else args.trials
    if trials < 1:
        raise SpecError('trials', 'must be at least 1, got %r' % trials)
    return trials


# -- codec --

def _mapping_config(args):
    # type: (argparse.Namespace) -> MappingConfig
    if not args.levels:
        raise SpecError('levels', 'stage counts are required')
    if args.d_max is None:
        raise SpecError('d_max', 'a maximum curve length is required')
    ranges = args.ranges or [1.0] * (len(args.levels) + 1)
    return MappingConfig(ranges, args.levels, args.d_max)


def _inputs(args, positional):
    # type: (argparse.Namespace, List[float]) -> List[List[float]]
    rows = [list(positional)] if positional else []
    if args.input:
        rows.extend(read_numbers(args.input))
    return rows


def cmd_encode(args):
    # type: (argparse.Namespace) -> ResultTable
    config = _mapping_config(args)
    sources = _inputs(args, args.source)
    if not sources:
        raise SpecError('source', 'nothing to encode')
    for row in sources:
        if len(row) != config.dimensions:
            raise SpecError('source', 'expected %d components, got %d'
                            % (config.dimensions, len(row)))
    encoded = encode_array(build_mapping(config), np.array(sources))
    columns = ['s%d' % (k + 1) for k in range(config.dimensions)] + ['encoded']
    return ResultTable(columns, [row + [float(e)] for row, e in zip(sources, encoded)])


def cmd_decode(args):
    # type: (argparse.Namespace) -> ResultTable
    config = _mapping_config(args)
    received = [x for row in _inputs(args, args.received) for x in row]
    if not received:
        raise SpecError('received', 'nothing to decode')
    values, indices = decode_array(build_mapping(config), np.array(received))
    columns = (['received'] + ['s%d' % (k + 1) for k in range(config.dimensions)]
               + ['i%d' % (k + 1) for k in range(config.dimensions - 1)])
    table = ResultTable(columns)
    for x, value, index in zip(received, values, indices):
        table.append([x] + [float(v) for v in value] + [int(i) for i in index])
    return table


# -- mse --

def _mse_cell(job):
    # type: (Tuple[Tuple[float, ...], float, float, List[int], int, int]) -> List[List[Number]]
    ranges, d_max, snr_db, levels, trials, seed = job
    log = cell_logger('D_max=%g SNR=%g dB' % (d_max, snr_db))
    noise = NoiseModel(snr_db)
    dims = len(ranges) - 1
    if dims <= 2:
        totals = mse_grid(ranges, d_max, noise, [levels] * dims).ravel().tolist()
        tuples = list(itertools.product(levels, repeat=dims))
    else:
        tuples = [(level,) * dims for level in levels]
        totals = [closed_form_mse(MappingConfig(ranges, t, d_max), noise).total for t in tuples]
    rows = []
    for stages, total in zip(tuples, totals):
        row = [d_max, snr_db] + list(stages) + [
            noise_term(ranges[0], stages, d_max, noise), total]  # type: List[Number]
        if trials:
            mapping = build_mapping(MappingConfig(ranges, stages, d_max))
            row.append(monte_carlo_mse(mapping, noise, trials,
                                       cell_seed(seed, 'mse', d_max, snr_db, *stages)))
        rows.append(row)
    log.debug('%d level tuples', len(rows))
    return rows


def cmd_mse(args):
    # type: (argparse.Namespace) -> ResultTable
    dims = args.dimensions
    if dims < 2:
        raise SpecError('dimensions', 'at least 2 source dimensions are required, got %d' % dims)
    ranges = tuple(args.ranges or [1.0] * dims)
    if len(ranges) != dims:
        raise SpecError('ranges', 'expected %d ranges, got %d' % (dims, len(ranges)))
    levels_max = args.levels_max
    if levels_max is None:
        levels_max = DEFAULT_LEVELS_MAX.get(dims, DEFAULT_LEVELS_MAX_HIGH)
    if args.levels_min < 2 or levels_max < args.levels_min:
        raise SpecError('levels_min', 'the level range [%d, %d] is empty or starts below 2'
                        % (args.levels_min, levels_max))
    levels = list(range(args.levels_min, levels_max + 1))
    trials = _trials(args, DEFAULT_MONTE_CARLO_TRIALS) if args.monte_carlo else 0
    for d_max in _grid('d_max', args.d_max):
        MappingConfig(ranges, [2] * (dims - 1), d_max)
    jobs = [(ranges, d_max, snr, levels, trials, args.seed)
            for d_max, snr in itertools.product(args.d_max, _grid('snr', args.snr))]

    columns = (['d_max', 'snr_db'] + ['l%d' % (k + 1) for k in range(dims - 1)]
               + ['noise_term', 'mse'])
    if trials:
        columns.append('mse_monte_carlo')
    table = ResultTable(columns)
    for rows in run_cells(_mse_cell, jobs, args.processes):
        for row in rows:
            table.append(row)
    return table


# -- optimize --

def _optimize_cell(job):
    # type: (Tuple[int, float, float, float, int, int, int]) -> List[Number]
    dims, source_range, d_max, snr_db, search_bound, budget, width = job
    log = cell_logger('N=%d D_max=%g SNR=%g dB' % (dims, d_max, snr_db))
    start = time.time()
    result = optimize_levels(dims, [source_range] * dims, d_max, NoiseModel(snr_db),
                             l_hi=search_bound, budget=budget)
    log.info('optimum %s, MSE %.4g (%d evaluations, %.1fs)',
             ','.join(str(level) for level in result.optimal_levels), result.optimal_mse,
             result.evaluations, time.time() - start)
    padding = [0] * (width - len(result.optimal_levels))
    return ([dims, d_max, snr_db] + list(result.optimal_levels) + padding
            + [result.optimal_mse, result.colocated_level, result.colocated_mse,
               result.evaluations])


def cmd_optimize(args):
    # type: (argparse.Namespace) -> ResultTable
    dimensions = _grid('dimensions', args.dimensions)
    width = max(dimensions) - 1
    jobs = [(dims, args.source_range, d_max, snr, args.search_bound, args.budget, width)
            for dims, d_max, snr in itertools.product(
                dimensions, _grid('d_max', args.d_max), _grid('snr', args.snr))]
    columns = (['n', 'd_max', 'snr_db'] + ['l%d' % (k + 1) for k in range(width)]
               + ['optimal_mse', 'colocated_level', 'colocated_mse', 'evaluations'])
    return ResultTable(columns, run_cells(_optimize_cell, jobs, args.processes))


# -- mdr --

def _mdr_cell(job):
    # type: (Tuple[FpmmConfig, List[float], int, int, bool, Optional[MappingConfig]]) -> List[List[Number]]
    config, snr_grid, trials, seed, fading, mapping_config = job
    log = cell_logger('B_w=%g n_node=%d %s' % (config.bandwidth_hz, config.n_node,
                                               'fading' if fading else 'awgn'))
    start = time.time()
    mapping = None if mapping_config is None else build_mapping(mapping_config)
    reports = run_mdr_experiment(config, snr_grid, trials=trials, master_seed=seed,
                                 fading=fading, mapping=mapping, log=log)
    log.info('%d trials in %.1fs', trials, time.time() - start)
    rows = []
    for report in reports:
        row = [config.bandwidth_hz, config.n_node, int(fading), report.snr_db, config.t_win_s,
               report.trials, report.n_missed, report.mdr]  # type: List[Number]
        if mapping is not None:
            row.append(report.source_mse)
        rows.append(row)
    return rows


def cmd_mdr(args):
    # type: (argparse.Namespace) -> ResultTable
    snr_grid = _grid('snr', args.snr)
    trials = _trials(args, DEFAULT_TRIALS)
    jobs = []
    for bandwidth, n_node, fading in itertools.product(
            _grid('bandwidth', args.bandwidth), _grid('nodes', args.nodes),
            [False, True] if args.fading else [False]):
        t_win = window_for(args.window_policy, args.window, bandwidth, args.reference_bandwidth)
        config = FpmmConfig(bandwidth, args.n_q, n_node, t_win_s=t_win, f_s_hz=args.sample_rate,
                            n_0=args.n_0)
        # fail before any cell runs
        check_resolution(plan_frequencies(config), config)
        mapping_config = None
        if args.sensor:
            if config.lines is None:
                raise SpecError('n_0', 'the sensor chain needs points per line')
            mapping_config = MappingConfig((1.0, 1.0), (config.lines,), args.d_max)
        seed = cell_seed(args.seed, 'mdr', bandwidth, n_node, int(fading))
        jobs.append((config, snr_grid, trials, seed, fading, mapping_config))

    columns = ['bandwidth_hz', 'n_node', 'fading', 'snr_db', 't_win_s', 'trials', 'n_missed',
               'mdr']
    if args.sensor:
        columns.append('source_mse')
    table = ResultTable(columns)
    for rows in run_cells(_mdr_cell, jobs, args.processes):
        for row in rows:
            table.append(row)
    return table


# -- budget --

def budget_params(args):
    # type: (argparse.Namespace) -> PowerBudgetParams
    params = PowerBudgetParams(
        thermal_noise_floor_dbm=args.thermal_noise,
        noise_figure_db=args.noise_figure,
        min_operational_snr_db=args.min_snr,
        implementation_loss_db=args.implementation_loss,
        adc_bits=args.adc_bits,
        adc_floor_below_noise_db=args.adc_floor,
        peak_to_average_margin_db=args.peak_margin,
        path_loss_exponent=args.exponent,
    )
    return digital_comparison(params) if args.digital else params


def cmd_budget(args):
    # type: (argparse.Namespace) -> ResultTable
    base = budget_params(args)
    table = ResultTable(['gain_db', 'coverage_m'] + list(compute_budget(base)._fields)
                        + ['path_loss_db', 'min_tx_dbm'])
    for gain, coverage in itertools.product(_grid('gain', args.gain),
                                            _grid('coverage', args.coverage)):
        report = compute_budget(base._replace(rf_gain_db=gain))
        table.append([gain, coverage] + list(report)
                     + [path_loss_db(coverage, base.path_loss_exponent),
                        tx_power_dbm(report.min_rx_antenna_dbm, coverage,
                                     base.path_loss_exponent)])
    return table


COMMANDS = {
    'encode': cmd_encode,
    'decode': cmd_decode,
    'mse': cmd_mse,
    'optimize': cmd_optimize,
    'mdr': cmd_mdr,
    'budget': cmd_budget,
}  # type: Dict[str, Callable[[argparse.Namespace], ResultTable]]
