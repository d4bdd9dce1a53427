"""Baseband synthesis of the multiplex and the channel impairments."""

from __future__ import absolute_import, division

import math
from typing import NamedTuple, Optional, Sequence, Tuple

import numpy as np
import scipy.fft

from ajscc.errors import ValidationError
from ajscc.link.plan import FpmmConfig, FrequencyPlan

# samples per block of the direct (non-periodic) synthesis
_BLOCK = 4096

LinkSnapshot = NamedTuple('LinkSnapshot', [
    ('transmitted_levels', Tuple[int, ...]),
    ('samples', np.ndarray),
    ('snr_db', float),
    ('fading_gains', Optional[Tuple[complex, ...]]),
])


def noise_variance(snr_db, config):
    # type: (float, FpmmConfig) -> float
    """Per-sample complex noise variance for a unit tone at 'snr_db'.

    The SNR counts only the noise inside B_w, so white noise sampled at f_s
    needs f_s / B_w times that power per sample.
    """
    if snr_db == float('inf'):
        return 0.0
    if math.isnan(snr_db) or snr_db == float('-inf'):
        raise ValidationError('snr_db', 'must be a finite number or +inf, got %r' % (snr_db,))
    return config.sample_rate_hz / (config.bandwidth_hz * 10.0 ** (snr_db / 10.0))


def _check_levels(plan, levels):
    # type: (FrequencyPlan, Sequence[int]) -> np.ndarray
    levels = np.asarray(levels, dtype=np.int64)
    if levels.shape != (plan.n_node,):
        raise ValidationError('levels', 'expected one level per node (%d), got shape %r'
                              % (plan.n_node, levels.shape))
    if levels.size and (levels.min() < 0 or levels.max() >= plan.n_q):
        raise ValidationError('levels', 'levels must lie in [0, %d]' % (plan.n_q - 1))
    return levels


def synthesize(plan, levels, config, seed, gains=None):
    # type: (FrequencyPlan, Sequence[int], FpmmConfig, int, Optional[np.ndarray]) -> np.ndarray
    """Sum of one unit tone per node at its level's position, with random phase.

    'gains' optionally scales each node's tone (flat fading).
    """
    levels = _check_levels(plan, levels)
    phases = np.random.default_rng(seed).uniform(0.0, 2 * math.pi, size=plan.n_node)
    amplitudes = np.exp(1j * phases)
    if gains is not None:
        amplitudes = amplitudes * np.asarray(gains, dtype=complex)
    positions = plan.positions(np.arange(plan.n_node), levels)
    f_s = config.sample_rate_hz
    n = np.arange(config.n_samples)
    period = f_s / plan.delta_f_hz
    if abs(period - round(period)) < 1e-9 * period:
        # every tone is periodic in 'period' samples once the band edge is removed
        period = int(round(period))
        spectrum = np.zeros(period, dtype=complex)
        np.add.at(spectrum, positions % period, amplitudes)
        base = period * scipy.fft.ifft(spectrum)
        ramp = np.exp(2j * math.pi * (-plan.bandwidth_hz / 2) / f_s * n)
        return ramp * base[n % period]
    frequencies = plan.frequency(np.arange(plan.n_node), levels)
    samples = np.empty(config.n_samples, dtype=complex)
    for start in range(0, config.n_samples, _BLOCK):
        t = n[start:start + _BLOCK, None] / f_s
        samples[start:start + _BLOCK] = np.exp(2j * math.pi * t * frequencies).dot(amplitudes)
    return samples


def draw_fading_gains(n_node, seed):
    # type: (int, int) -> np.ndarray
    """Unit mean power flat Rayleigh gains, one per node, constant over the window."""
    rng = np.random.default_rng(seed)
    return (rng.normal(size=n_node) + 1j * rng.normal(size=n_node)) / math.sqrt(2)


def complex_noise(rng, size, variance):
    # type: (np.random.Generator, object, float) -> np.ndarray
    """Circularly symmetric complex Gaussian noise of total 'variance'."""
    scale = math.sqrt(variance / 2)
    return rng.normal(0.0, scale, size=size) + 1j * rng.normal(0.0, scale, size=size)


def apply_channel(samples, snr_db, config, seed):
    # type: (np.ndarray, float, FpmmConfig, int) -> np.ndarray
    """Add white Gaussian noise at per-tone 'snr_db' over the band."""
    samples = np.asarray(samples, dtype=complex)
    if not samples.size:
        raise ValidationError('samples', 'no samples to impair')
    variance = noise_variance(snr_db, config)
    if not variance:
        return samples.copy()
    return samples + complex_noise(np.random.default_rng(seed), samples.shape, variance)


def simulate_snapshot(plan, config, levels, snr_db, seed, fading=False):
    # type: (FrequencyPlan, FpmmConfig, Sequence[int], float, int, bool) -> LinkSnapshot
    """One received window: synthesis, optional fading and channel noise."""
    gains = draw_fading_gains(plan.n_node, seed + 1) if fading else None
    samples = synthesize(plan, levels, config, seed, gains=gains)
    samples = apply_channel(samples, snr_db, config, seed + 2)
    return LinkSnapshot(tuple(int(q) for q in levels), samples, float(snr_db),
                        None if gains is None else tuple(complex(g) for g in gains))
