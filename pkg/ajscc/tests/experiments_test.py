import os
import shutil
import tempfile
import unittest

import pytest

from ajscc.__main__ import get_parser
from ajscc.errors import CapacityError, SpecError, ValidationError
from ajscc.experiments import (cell_logger, cmd_budget, cmd_decode, cmd_encode,
                               cmd_mdr, cmd_mse, cmd_optimize, read_numbers,
                               run_cells)


def _args(*argv):
    args = get_parser().parse_args(list(argv))
    args.processes = 1
    return args


class TestRunCells(unittest.TestCase):
    def test_order(self):
        # type: () -> None
        jobs = [-3, 1, -2, 5, -8]
        assert run_cells(abs, jobs, 1) == [3, 1, 2, 5, 8]
        assert run_cells(abs, jobs, 3) == [3, 1, 2, 5, 8]

    def test_cell_prefix(self):
        # type: () -> None
        with self.assertLogs('ajscc.experiments', 'INFO') as logs:
            cell_logger('N=2 D_max=1500').info('optimum %d', 118)
        assert logs.output == ['INFO:ajscc.experiments:[N=2 D_max=1500] optimum 118']


class TestCodecCommands(unittest.TestCase):
    def test_encode(self):
        # type: () -> None
        table = cmd_encode(_args('encode', '0.25', '0.5', '--levels', '4', '--d-max', '4'))
        assert table.columns == ['s1', 's2', 'encoded']
        assert table.rows[0][2] == pytest.approx(2.25)

    def test_decode(self):
        # type: () -> None
        table = cmd_decode(_args('decode', '0', '2.25', '9', '--levels', '4', '--d-max', '4'))
        assert table.columns == ['received', 's1', 's2', 'i1']
        assert table.rows[0] == [0.0, 0.0, 0.0, 0]
        assert table.rows[1][1:] == [pytest.approx(0.25), pytest.approx(2 / 3.0), 2]
        # clamped to D_max
        assert table.rows[2][3] == 3

    def test_input_file(self):
        # type: () -> None
        tempdir = tempfile.mkdtemp()
        try:
            path = os.path.join(tempdir, 'sources.txt')
            with open(path, 'w') as f:
                f.write('# s1, s2, s3\n0.2, 0.9, 0.4\n\n0 0 0\n')
            assert read_numbers(path) == [[0.2, 0.9, 0.4], [0.0, 0.0, 0.0]]
            table = cmd_encode(_args('encode', '--levels', '2', '2', '--d-max', '4',
                                     '--input', path))
            assert table.column('encoded') == [pytest.approx(1.8), 0.0]
            with open(path, 'w') as f:
                f.write('0.2, high\n')
            with self.assertRaises(SpecError):
                read_numbers(path)
        finally:
            shutil.rmtree(tempdir)

    def test_errors(self):
        # type: () -> None
        with self.assertRaises(SpecError) as e:
            cmd_encode(_args('encode', '0.5', '0.5', '--d-max', '4'))
        assert e.exception.field == 'levels'
        with self.assertRaises(SpecError) as e:
            cmd_encode(_args('encode', '--levels', '4', '--d-max', '4'))
        assert e.exception.field == 'source'
        with self.assertRaises(SpecError):
            cmd_encode(_args('encode', '0.5', '--levels', '4', '--d-max', '4'))
        with self.assertRaises(ValidationError):
            cmd_encode(_args('encode', '0.5', '1.5', '--levels', '4', '--d-max', '4'))


class TestSweepCommands(unittest.TestCase):
    def test_mse_scan(self):
        # type: () -> None
        table = cmd_mse(_args('mse', '--d-max', '1500', '--snr', '30', '--levels-max', '200'))
        assert table.columns == ['d_max', 'snr_db', 'l1', 'noise_term', 'mse']
        assert len(table.rows) == 199
        mse = table.column('mse')
        best = mse.index(min(mse))
        assert table.rows[best][2] == 118
        assert 1e-5 <= mse[best] <= 1e-4

    def test_mse_contour(self):
        # type: () -> None
        table = cmd_mse(_args('mse', '--dimensions', '3', '--d-max', '3000', '--snr', '30',
                              '--levels-min', '20', '--levels-max', '40'))
        assert len(table.rows) == 21 * 21
        values = {(row[2], row[3]): row[5] for row in table.rows}
        for (a, b), value in values.items():
            assert values[(b, a)] == pytest.approx(value, rel=1e-14)
        assert min(values, key=values.get) in ((30, 31), (31, 30))

    def test_mse_diagonal_and_single_point(self):
        # type: () -> None
        table = cmd_mse(_args('mse', '--dimensions', '4', '--d-max', '1000', '--snr', '20',
                              '--levels-max', '12'))
        assert table.columns[2:5] == ['l1', 'l2', 'l3']
        assert all(row[2] == row[3] == row[4] for row in table.rows)
        single = cmd_mse(_args('mse', '--d-max', '500', '--snr', '20', '--levels-min', '39',
                               '--levels-max', '39'))
        assert len(single.rows) == 1

    def test_mse_monte_carlo(self):
        # type: () -> None
        table = cmd_mse(_args('mse', '--d-max', '1500', '--snr', '30', '--levels-min', '118',
                              '--levels-max', '118', '--monte-carlo', '--trials', '200000'))
        row = table.rows[0]
        assert table.columns[-1] == 'mse_monte_carlo'
        assert row[-1] == pytest.approx(row[-2], rel=0.05)

    def test_mse_invalid(self):
        # type: () -> None
        with self.assertRaises(SpecError) as e:
            cmd_mse(_args('mse', '--levels-min', '1'))
        assert e.exception.field == 'levels_min'
        with self.assertRaises(SpecError) as e:
            cmd_mse(_args('mse', '--dimensions', '3', '--ranges', '1', '1'))
        assert e.exception.field == 'ranges'
        with self.assertRaises(ValidationError) as e:
            cmd_mse(_args('mse', '--d-max', '-5'))
        assert e.exception.field == 'd_max'

    def test_optimize(self):
        # type: () -> None
        table = cmd_optimize(_args('optimize', '--dimensions', '2', '3', '--d-max', '3000',
                                   '--snr', '30'))
        assert table.columns == ['n', 'd_max', 'snr_db', 'l1', 'l2', 'optimal_mse',
                                 'colocated_level', 'colocated_mse', 'evaluations']
        two, three = table.rows
        assert two[3:5] == [166, 0]
        assert three[3:5] == [30, 31]
        assert three[6] == 31
        assert three[5] <= three[7]

    def test_budget(self):
        # type: () -> None
        table = cmd_budget(_args('budget'))
        assert table.column('coverage_m') == [100.0, 1000.0]
        assert table.column('min_rx_antenna_dbm') == [-134.0, -134.0]
        assert table.column('path_loss_db') == [pytest.approx(60.0), pytest.approx(90.0)]
        assert table.column('min_tx_dbm')[1] == pytest.approx(-44.0)
        digital = cmd_budget(_args('budget', '--digital', '--coverage', '1000'))
        assert digital.column('min_tx_dbm') == [pytest.approx(-14.0)]
        gains = cmd_budget(_args('budget', '--gain', '0', '20', '--coverage', '1000'))
        assert gains.column('noise_floor_adc_dbm') == [-104.0, -84.0]


class TestMdrCommand(unittest.TestCase):
    SMALL = ('--bandwidth', '1000', '--nodes', '10', '--n-q', '10', '--window', '1')

    def test_rows(self):
        # type: () -> None
        table = cmd_mdr(_args('mdr', '--snr', '10', '-50', '--trials', '3', '--fading',
                              *self.SMALL))
        assert table.columns == ['bandwidth_hz', 'n_node', 'fading', 'snr_db', 't_win_s',
                                 'trials', 'n_missed', 'mdr']
        assert table.column('fading') == [0, 0, 1, 1]
        assert table.column('snr_db') == [10.0, -50.0, 10.0, -50.0]
        assert table.rows[0][-1] == 0.0
        assert table.rows[1][-1] >= 0.5

    def test_sensor(self):
        # type: () -> None
        table = cmd_mdr(_args('mdr', '--snr', '10', '--trials', '2', '--sensor', *self.SMALL))
        assert table.columns[-1] == 'source_mse'
        assert table.rows[0][-1] < 0.2

    def test_capacity(self):
        # type: () -> None
        with self.assertRaises(CapacityError):
            cmd_mdr(_args('mdr', '--bandwidth', '1000', '--nodes', '101', '--n-q', '10',
                          '--window', '1', '--trials', '1'))

    def test_window_policy(self):
        # type: () -> None
        table = cmd_mdr(_args('mdr', '--snr', '10', '--trials', '1', '--bandwidth', '1000',
                              '2000', '--nodes', '10', '--n-q', '10', '--window', '1',
                              '--window-policy', 'fixed-samples', '--reference-bandwidth',
                              '1000'))
        assert table.column('t_win_s') == [1.0, 0.5]
