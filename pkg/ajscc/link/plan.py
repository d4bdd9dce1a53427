"""Interleaved frequency plan of the position-modulated multiplex.

Every node owns N_q frequency positions.  Position index p = q * N_node + j
puts level q of node j at f = -B_w/2 + p * delta_f, so neighbouring positions
always belong to different nodes and each node's comb spans the whole band.
"""

from __future__ import absolute_import, division

import math
import numbers
from typing import Optional

import numpy as np

from ajscc.errors import CapacityError, ValidationError

DEFAULT_WINDOW_S = 10.0

# slack for window products that land a hair under an integer
_EPSILON = 1e-9


def _positive(field, value):
    # type: (str, object) -> float
    if (not isinstance(value, numbers.Real) or isinstance(value, bool)
            or not math.isfinite(value) or value <= 0):
        raise ValidationError(field, 'must be a positive real, got %r' % (value,))
    return float(value)


def _count(field, value, minimum):
    # type: (str, object, int) -> int
    if not isinstance(value, numbers.Integral) or isinstance(value, bool) or value < minimum:
        raise ValidationError(field, 'must be an integer of at least %d, got %r'
                              % (minimum, value))
    return int(value)


class FpmmConfig(object):
    """Parameters of one position-modulated link.

    Parameters
    ----------
    bandwidth_hz : float
        double-sided baseband bandwidth B_w
    n_q : int
        quantization points per node
    n_node : int
        multiplexed nodes
    t_win_s : float
        observation window
    f_s_hz : Optional[float]
        complex sampling rate, at least B_w; defaults to B_w + delta_f
    n_0 : Optional[int]
        points per mapping line; when given n_q must be a multiple of it
    """

    def __init__(self, bandwidth_hz, n_q, n_node, t_win_s=DEFAULT_WINDOW_S, f_s_hz=None,
                 n_0=None):
        # type: (float, int, int, float, Optional[float], Optional[int]) -> None
        self.bandwidth_hz = _positive('bandwidth_hz', bandwidth_hz)
        self.n_q = _count('n_q', n_q, 2)
        self.n_node = _count('n_node', n_node, 1)
        self.t_win_s = _positive('t_win_s', t_win_s)
        if f_s_hz is not None:
            f_s_hz = _positive('f_s_hz', f_s_hz)
            if f_s_hz < self.bandwidth_hz:
                raise ValidationError('f_s_hz', 'sampling rate %r is below the bandwidth %r'
                                      % (f_s_hz, self.bandwidth_hz))
        self.f_s_hz = f_s_hz  # type: Optional[float]
        if n_0 is not None:
            n_0 = _count('n_0', n_0, 1)
            if self.n_q % n_0:
                raise ValidationError('n_0', 'n_q=%d is not a whole number of lines of %d '
                                      'points' % (self.n_q, n_0))
        self.n_0 = n_0  # type: Optional[int]

    @property
    def n_positions(self):
        # type: () -> int
        return self.n_q * self.n_node

    @property
    def delta_f_hz(self):
        # type: () -> float
        return self.bandwidth_hz / (self.n_positions - 1)

    @property
    def sample_rate_hz(self):
        # type: () -> float
        if self.f_s_hz is not None:
            return self.f_s_hz
        return self.bandwidth_hz + self.delta_f_hz

    @property
    def n_samples(self):
        # type: () -> int
        return max(1, int(round(self.sample_rate_hz * self.t_win_s)))

    @property
    def frequency_bins(self):
        # type: () -> int
        """Positions the window can resolve across the band, B_w * T_win."""
        return int(math.floor(self.bandwidth_hz * self.t_win_s + _EPSILON))

    @property
    def n_node_max(self):
        # type: () -> int
        return self.frequency_bins // self.n_q

    @property
    def lines(self):
        # type: () -> Optional[int]
        return None if self.n_0 is None else self.n_q // self.n_0

    def replace(self, **changes):
        # type: (**object) -> FpmmConfig
        fields = dict(bandwidth_hz=self.bandwidth_hz, n_q=self.n_q, n_node=self.n_node,
                      t_win_s=self.t_win_s, f_s_hz=self.f_s_hz, n_0=self.n_0)
        fields.update(changes)
        return FpmmConfig(**fields)  # type: ignore

    def _key(self):
        return (self.bandwidth_hz, self.n_q, self.n_node, self.t_win_s, self.f_s_hz, self.n_0)

    def __repr__(self):
        # type: () -> str
        return ('FpmmConfig(bandwidth_hz=%r, n_q=%r, n_node=%r, t_win_s=%r, f_s_hz=%r, n_0=%r)'
                % self._key())

    def __eq__(self, other):
        # type: (object) -> bool
        return isinstance(other, FpmmConfig) and self._key() == other._key()

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash(('fpmm',) + self._key())


class FrequencyPlan(object):
    def __init__(self, bandwidth_hz, n_q, n_node):
        # type: (float, int, int) -> None
        self.bandwidth_hz = bandwidth_hz
        self.n_q = n_q
        self.n_node = n_node
        self.delta_f_hz = bandwidth_hz / (n_q * n_node - 1)

    def __repr__(self):
        # type: () -> str
        return 'FrequencyPlan(bandwidth_hz=%r, n_q=%r, n_node=%r)' % (
            self.bandwidth_hz, self.n_q, self.n_node)

    def __eq__(self, other):
        # type: (object) -> bool
        return (isinstance(other, FrequencyPlan) and self.bandwidth_hz == other.bandwidth_hz
                and self.n_q == other.n_q and self.n_node == other.n_node)

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash(('plan', self.bandwidth_hz, self.n_q, self.n_node))

    def positions(self, node, level):
        """Position index of 'level' on the comb of 'node'; accepts arrays."""
        return np.asarray(level) * self.n_node + np.asarray(node)

    def frequency(self, node, level):
        """Frequency in Hz of a position; accepts arrays."""
        return -self.bandwidth_hz / 2 + self.positions(node, level) * self.delta_f_hz

    def frequency_grid(self):
        # type: () -> np.ndarray
        """(n_node, n_q) array of every node's comb frequencies."""
        return self.frequency(np.arange(self.n_node)[:, None], np.arange(self.n_q)[None, :])


def plan_frequencies(config):
    # type: (FpmmConfig) -> FrequencyPlan
    """Lay out the interleaved plan for 'config'.

    Raises CapacityError when the window cannot resolve n_node * n_q positions
    in the band.
    """
    if config.n_node > config.n_node_max:
        raise CapacityError(config.n_node, config.n_node_max)
    return FrequencyPlan(config.bandwidth_hz, config.n_q, config.n_node)
