"""Comb-restricted DFT peak detection."""

from __future__ import absolute_import, division

import logging

import numpy as np
import scipy.fft
from kids.cache import cache

from ajscc.errors import ResolutionError, ValidationError
from ajscc.link.plan import FpmmConfig, FrequencyPlan

logger = logging.getLogger(__name__)


@cache
def comb_bins(plan, n_samples, sample_rate_hz):
    # type: (FrequencyPlan, int, float) -> np.ndarray
    """(n_node, n_q) array of the DFT bin nearest to every comb frequency."""
    grid = plan.frequency_grid()
    bins = np.rint(grid / sample_rate_hz * n_samples).astype(np.int64) % n_samples
    bins.setflags(write=False)
    logger.debug('comb bins for %r over %d samples', plan, n_samples)
    return bins


def check_resolution(plan, config):
    # type: (FrequencyPlan, FpmmConfig) -> None
    if 1.0 / config.t_win_s > plan.delta_f_hz:
        raise ResolutionError(
            'a %gs window resolves %g Hz, coarser than the %g Hz position pitch'
            % (config.t_win_s, 1.0 / config.t_win_s, plan.delta_f_hz))


def detect_spectrum(spectrum, plan, config):
    # type: (np.ndarray, FrequencyPlan, FpmmConfig) -> np.ndarray
    """Per-node level with the largest magnitude on that node's comb.

    The lowest level wins a tie.
    """
    spectrum = np.asarray(spectrum)
    bins = comb_bins(plan, len(spectrum), config.sample_rate_hz)
    return np.argmax(np.abs(spectrum[bins]), axis=1)


def detect(samples, plan, config):
    # type: (np.ndarray, FrequencyPlan, FpmmConfig) -> np.ndarray
    check_resolution(plan, config)
    samples = np.asarray(samples)
    if samples.shape != (config.n_samples,):
        raise ValidationError('samples', 'expected %d samples for a %gs window at %g Hz, '
                              'got shape %r' % (config.n_samples, config.t_win_s,
                                                config.sample_rate_hz, samples.shape))
    return detect_spectrum(scipy.fft.fft(samples), plan, config)
