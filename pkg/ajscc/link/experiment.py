"""Miss-detection-rate experiments over an SNR grid.

Each trial draws node levels, scrambles them, synthesizes and transforms one
window.  The same trial realisation (levels, phases, fading and a unit noise
draw) is then reused at every SNR of the grid with the noise rescaled, so the
points of one curve differ only by the noise level.  Noise is drawn directly
at the comb bins of the transform, which is exact because the DFT of white
Gaussian noise is again white Gaussian with n times the variance.
"""

from __future__ import absolute_import, division

import logging
import math
from typing import List, NamedTuple, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.fft

from ajscc.errors import ValidationError
from ajscc.link.channel import (complex_noise, draw_fading_gains,
                                noise_variance, synthesize)
from ajscc.link.detect import check_resolution, comb_bins
from ajscc.link.plan import FpmmConfig, plan_frequencies
from ajscc.link.scrambler import (ScramblerState, dequantize_level,
                                  quantize_array, slot_offsets)
from ajscc.mapping.shannon import Mapping, decode_array, encode_array
from ajscc.seeding import mix_seed, node_seed, trial_rng

logger = logging.getLogger(__name__)

DEFAULT_TRIALS = 10

WINDOW_POLICIES = ('fixed-time', 'fixed-samples')
DEFAULT_REFERENCE_BANDWIDTH_HZ = 50e3

MdrReport = NamedTuple('MdrReport', [
    ('snr_db', float),
    ('n_node', int),
    ('trials', int),
    ('n_missed', int),
    ('mdr', float),
    # positions of the last trial
    ('transmitted_positions', Tuple[int, ...]),
    ('detected_positions', Tuple[int, ...]),
    ('source_mse', Optional[float]),
])


def comb_noise(rng, bins, n_samples):
    # type: (np.random.Generator, np.ndarray, int) -> np.ndarray
    """Unit-power white noise transformed over 'n_samples', read at 'bins'.

    Comb positions that share a DFT bin share its noise value.
    """
    unique, inverse = np.unique(bins, return_inverse=True)
    draws = complex_noise(rng, unique.shape, float(n_samples))
    return draws[inverse].reshape(bins.shape)


def window_for(policy, t_win_s, bandwidth_hz, reference_hz=DEFAULT_REFERENCE_BANDWIDTH_HZ):
    # type: (str, float, float, float) -> float
    """Window length for a bandwidth under a window policy.

    'fixed-time' keeps t_win_s; 'fixed-samples' scales it so that every
    bandwidth uses the transform size of 'reference_hz' with t_win_s.
    """
    if policy == 'fixed-time':
        return t_win_s
    if policy == 'fixed-samples':
        return t_win_s * reference_hz / bandwidth_hz
    raise ValidationError('window_policy', 'expected one of %s, got %r'
                          % (', '.join(WINDOW_POLICIES), policy))


class _SensorChain(object):
    """Sources mapped and quantized to levels, and the inverse."""

    def __init__(self, mapping, n_q):
        # type: (Mapping, int) -> None
        self.mapping = mapping
        self.n_q = n_q
        self.d_max = mapping.config.d_max
        self.ranges = np.asarray(mapping.config.ranges)

    def draw(self, rng, n_node):
        # type: (np.random.Generator, int) -> Tuple[np.ndarray, np.ndarray]
        sources = rng.uniform(0.0, 1.0, size=(n_node, len(self.ranges))) * self.ranges
        return sources, quantize_array(encode_array(self.mapping, sources), self.d_max, self.n_q)

    def squared_error(self, sources, levels):
        # type: (np.ndarray, np.ndarray) -> float
        received = dequantize_level(levels.astype(float), self.d_max, self.n_q)
        values, _ = decode_array(self.mapping, received)
        return float(np.sum((values - sources) ** 2))


def run_mdr_experiment(config, snr_grid, trials=DEFAULT_TRIALS, master_seed=0, fading=False,
                       mapping=None, log=None):
    # type: (FpmmConfig, Sequence[float], int, int, bool, Optional[Mapping], Optional[Union[logging.Logger, logging.LoggerAdapter]]) -> List[MdrReport]
    """Miss detection rate at every SNR of 'snr_grid', averaged over trials.

    With a 'mapping', every node carries a uniformly drawn source vector
    through the mapping and the reports carry the end-to-end sum-MSE of the
    recovered sources.
    """
    log = log or logger
    snr_grid = [float(s) for s in snr_grid]
    if not snr_grid:
        raise ValidationError('snr_db', 'the SNR grid is empty')
    if trials < 1:
        raise ValidationError('trials', 'must be at least 1, got %r' % (trials,))
    plan = plan_frequencies(config)
    check_resolution(plan, config)
    n_node, n_q = config.n_node, config.n_q
    nodes = np.arange(n_node)
    states = [ScramblerState(node_seed(master_seed, j), n_q) for j in range(n_node)]
    bins = comb_bins(plan, config.n_samples, config.sample_rate_hz)
    sigmas = [math.sqrt(noise_variance(snr, config)) for snr in snr_grid]
    chain = None if mapping is None else _SensorChain(mapping, n_q)

    missed = np.zeros(len(snr_grid), dtype=np.int64)
    errors = np.zeros(len(snr_grid))
    last_detected = [np.zeros(n_node, dtype=np.int64)] * len(snr_grid)
    transmitted = np.zeros(n_node, dtype=np.int64)
    for trial in range(trials):
        rng = trial_rng(master_seed, trial, 'levels')
        if chain is None:
            sources = None
            levels = rng.integers(0, n_q, size=n_node)
        else:
            sources, levels = chain.draw(rng, n_node)
        offsets = slot_offsets(states, trial)
        transmitted = (levels + offsets) % n_q
        gains = (draw_fading_gains(n_node, mix_seed(master_seed, 'trial', trial, 'fading'))
                 if fading else None)
        samples = synthesize(plan, transmitted, config,
                             mix_seed(master_seed, 'trial', trial, 'phase'), gains=gains)
        signal = scipy.fft.fft(samples)[bins]
        noise = comb_noise(trial_rng(master_seed, trial, 'noise'), bins, config.n_samples)
        for i, sigma in enumerate(sigmas):
            detected = np.argmax(np.abs(signal + sigma * noise), axis=1)
            recovered = (detected - offsets) % n_q
            missed[i] += int(np.count_nonzero(recovered != levels))
            if chain is not None:
                errors[i] += chain.squared_error(sources, recovered)
            last_detected[i] = detected
        log.debug('trial %d/%d: %s missed', trial + 1, trials,
                  ', '.join(str(int(m)) for m in missed))

    total = n_node * trials
    positions = tuple(int(p) for p in plan.positions(nodes, transmitted))
    return [MdrReport(snr, n_node, trials, int(missed[i]), float(missed[i]) / total, positions,
                      tuple(int(p) for p in plan.positions(nodes, last_detected[i])),
                      None if chain is None else float(errors[i]) / total)
            for i, snr in enumerate(snr_grid)]
