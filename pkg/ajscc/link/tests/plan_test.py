import math
import unittest

import numpy as np
import pytest

from ajscc.errors import CapacityError, ValidationError
from ajscc.link.plan import FpmmConfig, plan_frequencies


class TestFpmmConfig(unittest.TestCase):
    def test_defaults(self):
        # type: () -> None
        config = FpmmConfig(50e3, 100, 1000)
        assert config.t_win_s == 10.0
        assert config.delta_f_hz == pytest.approx(50000 / 99999.0)
        assert config.sample_rate_hz == pytest.approx(50e3 + 50000 / 99999.0)
        assert config.n_samples == 500005
        assert config.frequency_bins == 500000
        assert config.n_node_max == 5000
        assert config.lines is None

    def test_lines(self):
        # type: () -> None
        assert FpmmConfig(50e3, 100, 1000, n_0=2).lines == 50
        with self.assertRaises(ValidationError) as e:
            FpmmConfig(50e3, 100, 1000, n_0=3)
        assert e.exception.field == 'n_0'

    def test_invalid(self):
        # type: () -> None
        cases = [
            (dict(bandwidth_hz=0, n_q=100, n_node=1), 'bandwidth_hz'),
            (dict(bandwidth_hz=1e3, n_q=1, n_node=1), 'n_q'),
            (dict(bandwidth_hz=1e3, n_q=10, n_node=0), 'n_node'),
            (dict(bandwidth_hz=1e3, n_q=10, n_node=1, t_win_s=-1), 't_win_s'),
            (dict(bandwidth_hz=1e3, n_q=10, n_node=1, f_s_hz=500), 'f_s_hz'),
        ]
        for kwargs, field in cases:
            with self.assertRaises(ValidationError) as e:
                FpmmConfig(**kwargs)
            assert e.exception.field == field

    def test_replace(self):
        # type: () -> None
        config = FpmmConfig(1e3, 10, 10, t_win_s=1.0)
        shorter = config.replace(t_win_s=0.5)
        assert shorter.t_win_s == 0.5
        assert shorter.bandwidth_hz == config.bandwidth_hz
        assert config != shorter
        assert config == FpmmConfig(1e3, 10, 10, t_win_s=1.0)


class TestPlan(unittest.TestCase):
    def test_reference_parameters(self):
        # type: () -> None
        plan = plan_frequencies(FpmmConfig(50e3, 100, 1000))
        assert plan.delta_f_hz == pytest.approx(0.5000050, abs=1e-7)
        assert plan.frequency(0, 0) == -25e3
        assert plan.frequency(1, 0) == pytest.approx(-25e3 + plan.delta_f_hz)
        assert plan.frequency(999, 99) == pytest.approx(25e3)

    def test_capacity(self):
        # type: () -> None
        assert FpmmConfig(50e3, 100, 1000, t_win_s=2.0).n_node_max == 1000
        plan_frequencies(FpmmConfig(50e3, 100, 1000, t_win_s=2.0))
        with self.assertRaises(CapacityError) as e:
            plan_frequencies(FpmmConfig(50e3, 100, 1001, t_win_s=2.0))
        assert e.exception.n_node == 1001
        assert e.exception.n_node_max == 1000

    def test_band_edges(self):
        # type: () -> None
        plan = plan_frequencies(FpmmConfig(1e3, 2, 1, t_win_s=1.0))
        assert list(plan.frequency_grid()[0]) == [-500.0, 500.0]

    def test_interleaving(self):
        # type: () -> None
        plan = plan_frequencies(FpmmConfig(1e3, 7, 5, t_win_s=1.0))
        nodes, levels = np.meshgrid(np.arange(5), np.arange(7), indexing='ij')
        positions = plan.positions(nodes, levels)
        assert sorted(positions.ravel()) == list(range(35))
        # adjacent positions belong to different nodes
        owner = np.empty(35, dtype=int)
        owner[positions.ravel()] = nodes.ravel()
        assert np.all(np.diff(owner) != 0)
        grid = plan.frequency_grid()
        np.testing.assert_allclose(np.diff(grid, axis=1), 5 * plan.delta_f_hz)
        assert grid.min() == pytest.approx(-500.0)
        assert grid.max() == pytest.approx(500.0)


def test_capacity_law():
    rng = np.random.default_rng(12)
    for _ in range(20):
        n_q = int(rng.integers(2, 200))
        t_win = float(rng.uniform(0.5, 5.0))
        bandwidth = float(rng.uniform(2 * n_q / t_win, 1e5))
        n_node_max = int(math.floor(bandwidth * t_win + 1e-9)) // n_q
        assert n_node_max >= 1
        plan = plan_frequencies(FpmmConfig(bandwidth, n_q, n_node_max, t_win_s=t_win))
        assert plan.delta_f_hz >= 1.0 / t_win
        with pytest.raises(CapacityError):
            plan_frequencies(FpmmConfig(bandwidth, n_q, n_node_max + 1, t_win_s=t_win))
