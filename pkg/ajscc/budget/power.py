"""Receiver power budget and path-loss arithmetic of the position-modulated link.

All levels are in dBm, all ratios in dB.  Report levels at the ADC input
include the RF gain G; the receiver has no automatic gain control.
"""

from __future__ import absolute_import, division

import math
import numbers
from typing import NamedTuple

from ajscc.errors import DistanceError, ValidationError

# dynamic range of an ideal converter per bit
DB_PER_BIT = 6.0

PowerBudgetParams = NamedTuple('PowerBudgetParams', [
    ('thermal_noise_floor_dbm', float),
    ('noise_figure_db', float),
    ('rf_gain_db', float),
    ('min_operational_snr_db', float),
    ('implementation_loss_db', float),
    ('adc_bits', int),
    ('adc_floor_below_noise_db', float),
    ('peak_to_average_margin_db', float),
    ('path_loss_exponent', float),
])
PowerBudgetParams.__new__.__defaults__ = (  # type: ignore
    -110.0, 6.0, 0.0, -30.0, 6.0, 12, 42.0, 9.0, 3.0)

PowerBudgetReport = NamedTuple('PowerBudgetReport', [
    ('noise_floor_adc_dbm', float),
    ('adc_floor_adc_dbm', float),
    ('min_rx_adc_dbm', float),
    ('min_rx_antenna_dbm', float),
    ('full_scale_adc_dbm', float),
    ('max_rx_adc_dbm', float),
    ('dynamic_range_db', float),
])


def digital_comparison(params=None):
    # type: (PowerBudgetParams) -> PowerBudgetParams
    """The same receiver run by a digital modulation: 0 dB SNR, no implementation loss."""
    params = params or PowerBudgetParams()
    return params._replace(min_operational_snr_db=0.0, implementation_loss_db=0.0)


def validate_params(params):
    # type: (PowerBudgetParams) -> None
    for field, value in zip(params._fields, params):
        if (not isinstance(value, numbers.Real) or isinstance(value, bool)
                or not math.isfinite(value)):
            raise ValidationError(field, 'must be a finite number, got %r' % (value,))
    if not isinstance(params.adc_bits, numbers.Integral) or params.adc_bits < 1:
        raise ValidationError('adc_bits', 'must be a positive integer, got %r'
                              % (params.adc_bits,))
    if params.path_loss_exponent <= 0:
        raise ValidationError('path_loss_exponent', 'must be positive, got %r'
                              % (params.path_loss_exponent,))


def compute_budget(params):
    # type: (PowerBudgetParams) -> PowerBudgetReport
    validate_params(params)
    antenna_noise = params.thermal_noise_floor_dbm + params.noise_figure_db
    noise_floor = antenna_noise + params.rf_gain_db
    min_rx = noise_floor + params.min_operational_snr_db + params.implementation_loss_db
    adc_floor = noise_floor - params.adc_floor_below_noise_db
    dynamic_range = DB_PER_BIT * params.adc_bits
    full_scale = adc_floor + dynamic_range
    return PowerBudgetReport(
        noise_floor_adc_dbm=noise_floor,
        adc_floor_adc_dbm=adc_floor,
        min_rx_adc_dbm=min_rx,
        # implementation loss is a receiver-side margin at the ADC only
        min_rx_antenna_dbm=antenna_noise + params.min_operational_snr_db,
        full_scale_adc_dbm=full_scale,
        max_rx_adc_dbm=full_scale - params.peak_to_average_margin_db,
        dynamic_range_db=dynamic_range,
    )


def path_loss_db(distance_m, exponent):
    # type: (float, float) -> float
    """Log-distance path loss with a 1 m reference and no loss at the reference."""
    if not distance_m >= 1.0:
        raise DistanceError('distance_m', 'must be at least the 1 m reference, got %r'
                            % (distance_m,))
    return 10.0 * exponent * math.log10(distance_m)


def tx_power_dbm(rx_power_dbm, coverage_m, exponent):
    # type: (float, float, float) -> float
    """Transmit power that arrives at 'rx_power_dbm' after 'coverage_m'."""
    return rx_power_dbm + path_loss_db(coverage_m, exponent)


def min_tx_power_dbm(coverage_m, params):
    # type: (float, PowerBudgetParams) -> float
    return tx_power_dbm(compute_budget(params).min_rx_antenna_dbm, coverage_m,
                        params.path_loss_exponent)
