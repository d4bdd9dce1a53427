"""Quantization of mapped values and the per-node modular scrambler.

The scrambler offset for a slot comes from a 64-bit linear congruential
generator seeded per node:

    state' = (6364136223846793005 * state + 1442695040888963407) mod 2**64
    x_r    = (state >> 33) mod N_q

Slot s uses the state reached after s + 1 steps from the seed.
"""

from __future__ import absolute_import, division

import numbers
from typing import List, Tuple

import numpy as np

from ajscc.errors import ValidationError
from ajscc.mapping.shannon import round_half_away

MULTIPLIER = 6364136223846793005
INCREMENT = 1442695040888963407
MASK = (1 << 64) - 1


def _jump(steps):
    # type: (int) -> Tuple[int, int]
    """Multiplier and increment equivalent to 'steps' generator steps."""
    mult, plus = 1, 0
    cur_mult, cur_plus = MULTIPLIER, INCREMENT
    while steps > 0:
        if steps & 1:
            mult = (mult * cur_mult) & MASK
            plus = (plus * cur_mult + cur_plus) & MASK
        cur_plus = ((cur_mult + 1) * cur_plus) & MASK
        cur_mult = (cur_mult * cur_mult) & MASK
        steps >>= 1
    return mult, plus


class ScramblerState(object):
    def __init__(self, seed, n_q):
        # type: (int, int) -> None
        if not isinstance(seed, numbers.Integral) or not 0 <= seed <= MASK:
            raise ValidationError('seed', 'must be an unsigned 64-bit integer, got %r' % (seed,))
        if not isinstance(n_q, numbers.Integral) or n_q < 1:
            raise ValidationError('n_q', 'must be a positive integer, got %r' % (n_q,))
        self.seed = int(seed)
        self.n_q = int(n_q)

    def __repr__(self):
        # type: () -> str
        return 'ScramblerState(seed=%r, n_q=%r)' % (self.seed, self.n_q)

    def state_at(self, slot):
        # type: (int) -> int
        if slot < 0:
            raise ValidationError('slot', 'must be non-negative, got %r' % (slot,))
        mult, plus = _jump(slot + 1)
        return (mult * self.seed + plus) & MASK

    def offset(self, slot):
        # type: (int) -> int
        return (self.state_at(slot) >> 33) % self.n_q

    def offsets(self, count, start=0):
        # type: (int, int) -> List[int]
        """Offsets of 'count' consecutive slots beginning at 'start'."""
        state = self.state_at(start)
        result = []
        for _ in range(count):
            result.append((state >> 33) % self.n_q)
            state = (MULTIPLIER * state + INCREMENT) & MASK
        return result


def scramble(x_q, state, slot):
    # type: (int, ScramblerState, int) -> int
    return (x_q + state.offset(slot)) % state.n_q


def descramble(y, state, slot):
    # type: (int, ScramblerState, int) -> int
    return (y - state.offset(slot)) % state.n_q


def slot_offsets(states, slot):
    # type: (List[ScramblerState], int) -> np.ndarray
    """Offsets of every node's scrambler for one slot."""
    mult, plus = _jump(slot + 1)
    return np.array([(((mult * s.seed + plus) & MASK) >> 33) % s.n_q for s in states],
                    dtype=np.int64)


def quantize_encoded(value, d_max, n_q):
    # type: (float, float, int) -> int
    """Grid index of a mapped value on n_q evenly spaced points over [0, D_max]."""
    return int(quantize_array([value], d_max, n_q)[0])


def quantize_array(values, d_max, n_q):
    # type: (np.ndarray, float, int) -> np.ndarray
    scaled = np.clip(np.asarray(values, dtype=float), 0.0, d_max) / d_max * (n_q - 1)
    return np.clip(round_half_away(scaled), 0, n_q - 1).astype(np.int64)


def dequantize_level(x_q, d_max, n_q):
    # type: (int, float, int) -> float
    return x_q / (n_q - 1) * d_max
