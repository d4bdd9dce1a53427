import unittest

import numpy as np
import pytest

from ajscc.errors import SourceRangeError, ValidationError
from ajscc.mapping.shannon import (MappingConfig, build_mapping, decode,
                                   decode_array, encode, encode_array,
                                   quantized_source, round_half_away)


def mapping_of(ranges, levels, d_max):
    return build_mapping(MappingConfig(ranges, levels, d_max))


class TestMappingConfig(unittest.TestCase):
    def test_two_dimensional(self):
        # type: () -> None
        mapping = mapping_of((1, 1), (4,), 4)
        assert mapping.line_length == 1.0
        assert mapping.spacings == pytest.approx((1 / 3.0,))

    def test_three_dimensional(self):
        # type: () -> None
        mapping = mapping_of((1, 1, 1), (2, 2), 4)
        assert mapping.line_length == 1.0
        assert mapping.spacings == (1.0, 1.0)
        assert mapping.line_count * mapping.line_length == pytest.approx(4.0)

    def test_single_stage_rejected(self):
        # type: () -> None
        with self.assertRaises(ValidationError) as e:
            MappingConfig((1, 1), (1,), 4)
        assert e.exception.field == 'levels'

    def test_bad_fields_named(self):
        # type: () -> None
        cases = [
            (((1,), (), 4), 'dimensions'),
            (((1, 1), (4, 4), 4), 'levels'),
            (((1, 0), (4,), 4), 'ranges'),
            (((1, -2), (4,), 4), 'ranges'),
            (((1, 1), (4,), 0), 'd_max'),
            (((1, 1), (2.5,), 4), 'levels'),
        ]
        for args, field in cases:
            with self.assertRaises(ValidationError) as e:
                MappingConfig(*args)
            assert e.exception.field == field, args

    def test_hashable(self):
        # type: () -> None
        a = MappingConfig((1, 1), (4,), 4)
        b = MappingConfig([1.0, 1.0], [4], 4.0)
        assert a == b
        assert hash(a) == hash(b)
        assert build_mapping(a) is build_mapping(b)


class TestEncode(unittest.TestCase):
    def test_worked_two_dimensional(self):
        # type: () -> None
        assert encode(mapping_of((1, 1), (4,), 4), (0.25, 0.5)) == pytest.approx(2.25)

    def test_worked_three_dimensional(self):
        # type: () -> None
        assert encode(mapping_of((1, 1, 1), (2, 2), 4), (0.2, 0.9, 0.4)) == pytest.approx(1.8)

    def test_origin(self):
        # type: () -> None
        for ranges, levels in [((1, 1), (4,)), ((2, 3, 5), (3, 7)), ((1,) * 5, (2, 3, 4, 5))]:
            assert encode(mapping_of(ranges, levels, 10), [0] * len(ranges)) == 0.0

    def test_out_of_range(self):
        # type: () -> None
        mapping = mapping_of((1, 1), (4,), 4)
        with self.assertRaises(SourceRangeError):
            encode(mapping, (1.5, 0.5))
        with self.assertRaises(SourceRangeError):
            encode(mapping, (0.5, -0.01))

    def test_round_half_away(self):
        # type: () -> None
        assert list(round_half_away([0.5, 1.5, 2.5, -0.5, 0.49])) == [1, 2, 3, -1, 0]


class TestDecode(unittest.TestCase):
    def test_worked_two_dimensional(self):
        # type: () -> None
        decoded = decode(mapping_of((1, 1), (4,), 4), 2.25)
        assert decoded.values == pytest.approx((0.25, 2 / 3.0))
        assert decoded.line_indices == (2,)

    def test_zero(self):
        # type: () -> None
        decoded = decode(mapping_of((1, 1, 1), (3, 5), 7), 0.0)
        assert decoded.values == (0.0, 0.0, 0.0)
        assert decoded.line_indices == (0, 0)

    def test_clamped(self):
        # type: () -> None
        mapping = mapping_of((1, 1), (4,), 4)
        assert decode(mapping, 4.3) == decode(mapping, 4.0)
        assert decode(mapping, -2.0) == decode(mapping, 0.0)
        assert decode(mapping, float('inf')) == decode(mapping, 4.0)
        assert decode(mapping, float('-inf')) == decode(mapping, 0.0)

    def test_nan_rejected(self):
        # type: () -> None
        mapping = mapping_of((1, 1), (4,), 4)
        with self.assertRaises(ValidationError) as e:
            decode(mapping, float('nan'))
        assert e.exception.field == 'received'
        with self.assertRaises(ValidationError):
            decode_array(mapping, np.array([1.0, np.nan, 2.0]))

    def test_line_index_identity(self):
        # type: () -> None
        mapping = mapping_of((1, 2, 3), (3, 4), 24)
        for line in range(mapping.line_count):
            indices = mapping.split_line_index(line)
            assert mapping.line_index(indices) == line
            # middle of the line avoids the shared junction lengths
            decoded = decode(mapping, (line + 0.5) * mapping.line_length)
            assert decoded.line_indices == indices


class TestRoundTrip(unittest.TestCase):
    def test_random_configs(self):
        # type: () -> None
        rng = np.random.default_rng(20240611)
        for _ in range(2000):
            n = rng.integers(2, 6)
            while True:
                levels = rng.integers(2, 30, size=n - 1)
                if np.prod(levels) <= 10 ** 4:
                    break
            ranges = rng.uniform(0.1, 10.0, size=n)
            mapping = mapping_of(ranges, levels, rng.uniform(1.0, 1e4))
            sources = rng.uniform(0, 1, size=(5, n)) * ranges
            values, _ = decode_array(mapping, encode_array(mapping, sources))
            assert np.all(np.abs(values[:, 0] - sources[:, 0]) <= 1e-9 * ranges[0])
            tolerance = np.asarray(mapping.spacings) / 2 + 1e-9
            assert np.all(np.abs(values[:, 1:] - sources[:, 1:]) <= tolerance)

    def test_noise_moves_first_dimension_only(self):
        # type: () -> None
        mapping = mapping_of((1, 1), (4,), 4)
        sent = encode(mapping, (0.3, 0.5))
        for noise in (0.1, -0.1, 0.25):
            decoded = decode(mapping, sent + noise)
            amplification = mapping.config.ranges[0] / mapping.line_length
            assert decoded.values[0] == pytest.approx(0.3 + amplification * noise)
            assert decoded.values[1] == pytest.approx(2 / 3.0)

    def test_odd_line_reverses_direction(self):
        # type: () -> None
        mapping = mapping_of((1, 1, 1), (2, 2), 4)
        sent = encode(mapping, (0.2, 0.9, 0.4))
        # on an odd line a larger length means a smaller first coordinate
        assert decode(mapping, sent + 0.1).values[0] == pytest.approx(0.1)


def _dense_curve(mapping, pitch):
    """Sample every line of the curve independently of the decoder."""
    config = mapping.config
    d = mapping.line_length
    steps = int(round(d / pitch))
    along = np.arange(steps + 1) * pitch
    lengths, points = [], []
    for line in range(mapping.line_count):
        indices = mapping.split_line_index(line)
        first = along / d * config.ranges[0]
        if line % 2:
            first = config.ranges[0] - first
        rest = np.tile([i * s for i, s in zip(indices, mapping.spacings)], (len(along), 1))
        lengths.append(line * d + along)
        points.append(np.column_stack([first, rest]))
    return np.concatenate(lengths), np.concatenate(points)


@pytest.mark.parametrize('ranges,levels,d_max', [
    ((1, 1), (4,), 4),
    ((1, 1), (64,), 10),
    ((2, 0.5), (7,), 3),
    ((1, 1, 1), (2, 2), 4),
    ((1, 2, 3), (4, 16), 50),
    ((1, 1, 1, 1), (2, 4, 8), 9),
    ((3, 1, 2, 1), (3, 3, 3), 27),
    ((1, 1, 1, 1, 1), (2, 2, 2, 2), 16),
])
def test_nearest_point_oracle(ranges, levels, d_max):
    mapping = mapping_of(ranges, levels, d_max)
    pitch = mapping.line_length / 10 ** 4
    lengths, points = _dense_curve(mapping, pitch)
    rng = np.random.default_rng(len(ranges) * 1000 + sum(levels))
    for source in rng.uniform(0, 1, size=(40, len(ranges))) * np.asarray(ranges):
        target = np.asarray(quantized_source(mapping, source))
        nearest = lengths[np.argmin(np.sum((points - target) ** 2, axis=1))]
        assert abs(encode(mapping, source) - nearest) <= pitch * (1 + 1e-6)
