"""Sum-MSE of the N:1 mapping: closed form, grid evaluation and Monte Carlo."""

from __future__ import absolute_import, division

import logging
import math
from functools import reduce
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from ajscc.errors import ValidationError
from ajscc.mapping.shannon import (Mapping, MappingConfig, decode_array,
                                   encode_array)

logger = logging.getLogger(__name__)

# Monte Carlo trials are drawn in chunks of this size, each with its own
# generator seeded from (seed, chunk index).
CHUNK_SIZE = 65536

MseBreakdown = NamedTuple('MseBreakdown', [
    ('noise_term', float),
    ('quantization_terms', Tuple[float, ...]),
    ('total', float),
])


class NoiseModel(object):
    """Additive Gaussian channel noise at a given SNR.

    The signal power is normalised to one, so sigma_n2 = 10 ** (-snr_db / 10).
    """

    def __init__(self, snr_db):
        # type: (float) -> None
        snr_db = float(snr_db)
        if math.isnan(snr_db) or snr_db == float('-inf'):
            raise ValidationError('snr_db', 'must be a finite number or +inf, got %r' % snr_db)
        self.snr_db = snr_db
        self.sigma_n2 = 0.0 if snr_db == float('inf') else 10.0 ** (-snr_db / 10.0)

    @classmethod
    def noiseless(cls):
        # type: () -> NoiseModel
        return cls(float('inf'))

    @classmethod
    def from_variance(cls, sigma_n2):
        # type: (float) -> NoiseModel
        if not sigma_n2 >= 0 or math.isinf(sigma_n2):
            raise ValidationError('sigma_n2', 'must be a finite non-negative number, got %r'
                                  % (sigma_n2,))
        if sigma_n2 == 0:
            return cls.noiseless()
        model = cls(-10.0 * math.log10(sigma_n2))
        # keep the exact variance instead of the log/exp round trip
        model.sigma_n2 = float(sigma_n2)
        return model

    @property
    def sigma(self):
        # type: () -> float
        return math.sqrt(self.sigma_n2)

    def __repr__(self):
        # type: () -> str
        return 'NoiseModel(snr_db=%r)' % self.snr_db

    def __eq__(self, other):
        # type: (object) -> bool
        return isinstance(other, NoiseModel) and self.sigma_n2 == other.sigma_n2

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash(('noise', self.sigma_n2))


def quantization_term(range_, level):
    # type: (float, int) -> float
    """Mean squared quantization error of one dimension, Delta**2 / 12."""
    return range_ ** 2 / (12.0 * (level - 1) ** 2)


def noise_term(first_range, levels, d_max, noise):
    # type: (float, Sequence[int], float, NoiseModel) -> float
    """Channel noise amplified by R_1 * prod(L_k) / D_max."""
    product = reduce(lambda a, b: a * b, levels, 1)
    return (first_range * product / d_max) ** 2 * noise.sigma_n2


def closed_form_mse(config, noise):
    # type: (MappingConfig, NoiseModel) -> MseBreakdown
    quantization = tuple(quantization_term(r, level)
                         for r, level in zip(config.ranges[1:], config.levels))
    amplified = noise_term(config.ranges[0], config.levels, config.d_max, noise)
    return MseBreakdown(amplified, quantization, amplified + sum(quantization))


def mse_grid(ranges, d_max, noise, level_grids):
    # type: (Sequence[float], float, NoiseModel, Sequence[Sequence[int]]) -> np.ndarray
    """Evaluate the closed-form total over the Cartesian product of 'level_grids'.

    The result has one axis per quantized dimension, in order.
    """
    ranges = tuple(ranges)
    if len(level_grids) != len(ranges) - 1:
        raise ValidationError('levels', 'expected %d level grids for %d dimensions, got %d'
                              % (len(ranges) - 1, len(ranges), len(level_grids)))
    grids = [np.asarray(g, dtype=np.int64) for g in level_grids]
    for k, grid in enumerate(grids):
        if grid.ndim != 1 or not grid.size or (grid < 2).any():
            raise ValidationError('levels', 'grid for L_%d must be a nonempty list of '
                                  'integers greater than 1' % (k + 1))
    # validates ranges and d_max
    MappingConfig(ranges, [int(g[0]) for g in grids], d_max)
    axes = np.ix_(*[g.astype(float) for g in grids])
    product = reduce(lambda a, b: a * b, axes)
    total = (ranges[0] * product / d_max) ** 2 * noise.sigma_n2
    for r, axis in zip(ranges[1:], axes):
        total = total + r ** 2 / (12.0 * (axis - 1) ** 2)
    return total


def monte_carlo_breakdown(mapping, noise, trials, seed):
    # type: (Mapping, NoiseModel, int, int) -> np.ndarray
    """Empirical per-dimension MSE of uniform sources sent through the channel."""
    if trials < 1:
        raise ValidationError('trials', 'must be at least 1, got %r' % (trials,))
    ranges = np.asarray(mapping.config.ranges)
    sums = np.zeros(len(ranges))
    done = 0
    chunk = 0
    while done < trials:
        size = min(CHUNK_SIZE, trials - done)
        rng = np.random.default_rng([seed, chunk])
        sources = rng.uniform(0.0, 1.0, size=(size, len(ranges))) * ranges
        received = encode_array(mapping, sources)
        if noise.sigma_n2:
            received = received + rng.normal(0.0, noise.sigma, size=size)
        values, _ = decode_array(mapping, received)
        sums += np.sum((values - sources) ** 2, axis=0)
        done += size
        chunk += 1
    logger.debug('monte carlo: %d trials in %d chunks for %r', trials, chunk, mapping.config)
    return sums / trials


def monte_carlo_mse(mapping, noise, trials, seed):
    # type: (Mapping, NoiseModel, int, int) -> float
    return float(np.sum(monte_carlo_breakdown(mapping, noise, trials, seed)))
