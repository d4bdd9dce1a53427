"""N:1 rectangular Shannon mapping.

The first source dimension runs along a family of parallel lines; every other
dimension is quantized and selects which line is used.  The transmitted
quantity is the accumulated length of the lines from the origin to the mapped
point.  Lines are traversed serpentine style (even lines left to right, odd
lines right to left) so that the accumulated length is continuous across line
boundaries.

The main entry points are 'build_mapping', 'encode' and 'decode'.
"""

from __future__ import absolute_import, division

import math
import numbers
from functools import reduce
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np
from kids.cache import cache

from ajscc.errors import SourceRangeError, ValidationError

# An N-tuple of readings already shifted to [0, R_k].
SourceVector = Sequence[float]

# Accumulated length along the curve, in [0, D_max].
EncodedValue = float

DecodedVector = NamedTuple('DecodedVector', [
    ('values', Tuple[float, ...]),
    ('line_indices', Tuple[int, ...]),
])


def round_half_away(x):
    # type: (np.ndarray) -> np.ndarray
    """Round to the nearest integer, ties away from zero."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def _is_integer(value):
    # type: (object) -> bool
    return isinstance(value, numbers.Integral) and not isinstance(value, bool)


def _is_positive(value):
    # type: (object) -> bool
    return (isinstance(value, numbers.Real) and not isinstance(value, bool)
            and math.isfinite(value) and value > 0)


class MappingConfig(object):
    """Geometry of an N:1 rectangular mapping.

    Parameters
    ----------
    ranges : Sequence[float]
        width R_k of each source range, one per dimension
    levels : Sequence[int]
        stage count L_k of each quantized dimension (dimensions 2..N)
    d_max : float
        maximum accumulated length of the curve
    """

    def __init__(self, ranges, levels, d_max):
        # type: (Sequence[float], Sequence[int], float) -> None
        ranges = tuple(ranges)
        levels = tuple(levels)
        if len(ranges) < 2:
            raise ValidationError('dimensions',
                                  'at least 2 source dimensions are required, got %d'
                                  % len(ranges))
        if len(levels) != len(ranges) - 1:
            raise ValidationError('levels',
                                  'expected %d stage counts for %d dimensions, got %d'
                                  % (len(ranges) - 1, len(ranges), len(levels)))
        for k, r in enumerate(ranges):
            if not _is_positive(r):
                raise ValidationError('ranges', 'R_%d must be a positive real, got %r'
                                      % (k + 1, r))
        for k, level in enumerate(levels):
            if not _is_integer(level) or level < 2:
                raise ValidationError('levels',
                                      'L_%d must be an integer greater than 1, got %r'
                                      % (k + 1, level))
        if not _is_positive(d_max):
            raise ValidationError('d_max', 'must be a positive real, got %r' % (d_max,))
        self.ranges = tuple(float(r) for r in ranges)  # type: Tuple[float, ...]
        self.levels = tuple(int(level) for level in levels)  # type: Tuple[int, ...]
        self.d_max = float(d_max)

    @property
    def dimensions(self):
        # type: () -> int
        return len(self.ranges)

    def __repr__(self):
        # type: () -> str
        return 'MappingConfig(ranges=%r, levels=%r, d_max=%r)' % (
            self.ranges, self.levels, self.d_max)

    def __eq__(self, other):
        # type: (object) -> bool
        return (isinstance(other, MappingConfig) and self.ranges == other.ranges
                and self.levels == other.levels and self.d_max == other.d_max)

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash(('mapping', self.ranges, self.levels, self.d_max))


class Mapping(object):
    """Derived geometry of a validated MappingConfig.

    Attributes
    ----------
    line_length : float
        length d of each line, D_max divided by the product of all L_k
    spacings : Tuple[float, ...]
        quantization spacing of dimensions 2..N, R_{k+1} / (L_k - 1)
    line_count : int
        total number of lines
    """

    def __init__(self, config):
        # type: (MappingConfig) -> None
        self.config = config
        self.line_count = reduce(lambda a, b: a * b, config.levels, 1)
        self.line_length = config.d_max / self.line_count
        self.spacings = tuple(r / (level - 1)
                              for r, level in zip(config.ranges[1:], config.levels))
        # mixed-radix weights, dimension 2 least significant
        radix = [1]
        for level in config.levels[:-1]:
            radix.append(radix[-1] * level)
        self.radix = tuple(radix)  # type: Tuple[int, ...]

    def __repr__(self):
        # type: () -> str
        return 'Mapping(%r, line_length=%r)' % (self.config, self.line_length)

    def __eq__(self, other):
        # type: (object) -> bool
        return isinstance(other, Mapping) and self.config == other.config

    def __ne__(self, other):
        # type: (object) -> bool
        return not self == other

    def __hash__(self):
        # type: () -> int
        return hash(('built', self.config))

    def line_index(self, indices):
        # type: (Sequence[int]) -> int
        """Combine per-dimension line indices into the composite line number."""
        return sum(i * w for i, w in zip(indices, self.radix))

    def split_line_index(self, line):
        # type: (int) -> Tuple[int, ...]
        """Expand a composite line number into per-dimension indices."""
        return tuple((line // w) % level
                     for w, level in zip(self.radix, self.config.levels))


@cache
def build_mapping(config):
    # type: (MappingConfig) -> Mapping
    return Mapping(config)


def _check_sources(mapping, sources):
    # type: (Mapping, np.ndarray) -> None
    ranges = np.asarray(mapping.config.ranges)
    if sources.ndim != 2 or sources.shape[1] != len(ranges):
        raise ValidationError('source', 'expected %d components per source, got shape %r'
                              % (len(ranges), sources.shape))
    bad = ~np.isfinite(sources) | (sources < 0) | (sources > ranges)
    if bad.any():
        row, col = np.argwhere(bad)[0]
        raise SourceRangeError('source',
                               's_%d=%r is outside [0, %r]'
                               % (col + 1, sources[row, col], ranges[col]))


def encode_array(mapping, sources):
    # type: (Mapping, np.ndarray) -> np.ndarray
    """Vectorised 'encode' over an (n, N) array of sources."""
    sources = np.atleast_2d(np.asarray(sources, dtype=float))
    _check_sources(mapping, sources)
    levels = np.asarray(mapping.config.levels)
    indices = round_half_away(sources[:, 1:] / np.asarray(mapping.spacings))
    indices = np.clip(indices, 0, levels - 1).astype(np.int64)
    line = indices.dot(np.asarray(mapping.radix, dtype=np.int64))
    d = mapping.line_length
    along = sources[:, 0] / mapping.config.ranges[0] * d
    offset = np.where(line % 2 == 0, along, d - along)
    return line * d + offset


def encode(mapping, source):
    # type: (Mapping, SourceVector) -> EncodedValue
    """Map one source vector to its accumulated length on the curve."""
    return float(encode_array(mapping, [list(source)])[0])


def decode_array(mapping, received):
    # type: (Mapping, np.ndarray) -> Tuple[np.ndarray, np.ndarray]
    """Vectorised 'decode'.

    Returns
    -------
    values : np.ndarray
        (n, N) array of recovered sources
    indices : np.ndarray
        (n, N-1) array of per-dimension line indices
    """
    config = mapping.config
    received = np.atleast_1d(np.asarray(received, dtype=float))
    if np.isnan(received).any():
        raise ValidationError('received', 'cannot decode NaN')
    received = np.clip(received, 0.0, config.d_max)
    d = mapping.line_length
    line = np.clip(np.floor(received / d), 0, mapping.line_count - 1).astype(np.int64)
    offset = received - line * d
    along = np.where(line % 2 == 0, offset, d - offset)
    first = np.clip(along / d * config.ranges[0], 0.0, config.ranges[0])
    radix = np.asarray(mapping.radix, dtype=np.int64)
    levels = np.asarray(config.levels, dtype=np.int64)
    indices = (line[:, None] // radix) % levels
    values = np.column_stack([first, indices * np.asarray(mapping.spacings)])
    return values, indices


def decode(mapping, received):
    # type: (Mapping, float) -> DecodedVector
    """Maximum-likelihood reverse mapping of a (possibly noisy) scalar.

    Values outside [0, D_max], infinities included, are clamped to the
    nearest end first; NaN raises ValidationError.
    """
    values, indices = decode_array(mapping, [received])
    return DecodedVector(tuple(float(v) for v in values[0]),
                         tuple(int(i) for i in indices[0]))


def quantized_source(mapping, source):
    # type: (Mapping, SourceVector) -> List[float]
    """The source with dimensions 2..N snapped to their nearest line."""
    s = np.asarray(source, dtype=float)
    indices = round_half_away(s[1:] / np.asarray(mapping.spacings))
    indices = np.clip(indices, 0, np.asarray(mapping.config.levels) - 1)
    return [float(s[0])] + [float(v) for v in indices * np.asarray(mapping.spacings)]
