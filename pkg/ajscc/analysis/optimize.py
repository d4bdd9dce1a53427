"""Integer minimisation of the closed-form sum-MSE over the stage counts.

The main entry point is 'optimize_levels'.
"""

from __future__ import absolute_import, division

import logging
import math
from typing import List, NamedTuple, Sequence, Tuple

import numpy as np

from ajscc.analysis.mse import NoiseModel, closed_form_mse
from ajscc.errors import SearchSpaceError, ValidationError
from ajscc.mapping.shannon import MappingConfig

logger = logging.getLogger(__name__)

DEFAULT_SEARCH_BOUND = 500
DEFAULT_BUDGET = 10 ** 8

OptimizationResult = NamedTuple('OptimizationResult', [
    ('optimal_levels', Tuple[int, ...]),
    ('optimal_mse', float),
    ('search_bound', int),
    # best level when every L_k is equal
    ('colocated_level', int),
    ('colocated_mse', float),
    ('evaluations', int),
])


class _Search(object):
    """Depth-first branch-and-bound over level tuples in lexicographic order.

    A branch is cut as soon as its noise term, with every remaining dimension
    at the smallest level, plus the smallest reachable quantization terms can
    no longer beat the incumbent.
    """

    def __init__(self, ranges, d_max, noise, l_hi, budget):
        # type: (Sequence[float], float, NoiseModel, int, int) -> None
        self.scale = (ranges[0] / d_max) ** 2 * noise.sigma_n2
        self.l_hi = l_hi
        self.budget = budget
        self.dims = len(ranges) - 1
        levels = np.arange(l_hi + 1, dtype=float)
        levels[:2] = np.nan
        # quantization[k][L] for L in [2, l_hi]; entries 0 and 1 unused
        self.quantization = [r ** 2 / (12.0 * (levels - 1) ** 2) for r in ranges[1:]]
        q_min = [float(q[l_hi]) for q in self.quantization]
        self.tail_min = [sum(q_min[k + 1:]) for k in range(self.dims)]
        self.q_min = q_min
        self.symmetric = len(set(ranges[1:])) == 1
        self.evaluations = 0
        self.best_levels = (2,) * self.dims  # type: Tuple[int, ...]
        self.best = self._total(self.best_levels)

    def _total(self, levels):
        # type: (Sequence[int]) -> float
        self._count(1)
        product = float(np.prod(levels, dtype=float))
        return (self.scale * product ** 2
                + sum(float(q[level]) for q, level in zip(self.quantization, levels)))

    def _count(self, n):
        # type: (int) -> None
        if self.evaluations + n > self.budget:
            raise SearchSpaceError(
                'search over %d stage counts up to %d needs more than %d evaluations'
                % (self.dims, self.l_hi, self.budget))
        self.evaluations += n

    def run(self):
        # type: () -> None
        self._branch(0, 2, 1.0, 0.0, [])

    def _branch(self, depth, start, product, partial, prefix):
        # type: (int, int, float, float, List[int]) -> None
        if depth == self.dims - 1:
            self._leaves(start, product, partial, prefix)
            return
        quantization = self.quantization[depth]
        rest = self.dims - depth - 1
        floor = partial + self.q_min[depth] + self.tail_min[depth]
        for level in range(start, self.l_hi + 1):
            inner = product * level
            smallest_noise = self.scale * (inner * 2 ** rest) ** 2
            if smallest_noise + floor >= self.best:
                break
            here = partial + float(quantization[level])
            if smallest_noise + here + self.tail_min[depth] >= self.best:
                continue
            self._branch(depth + 1, level if self.symmetric else 2, inner, here,
                         prefix + [level])

    def _leaves(self, start, product, partial, prefix):
        # type: (int, float, float, List[int]) -> None
        stop = self.l_hi
        if self.scale > 0:
            stop = min(stop, int(math.sqrt(self.best / self.scale) / product) + 1)
        if stop < start:
            return
        levels = np.arange(start, stop + 1)
        self._count(len(levels))
        totals = (self.scale * (product * levels) ** 2 + partial
                  + self.quantization[-1][start:stop + 1])
        i = int(np.argmin(totals))
        if totals[i] < self.best:
            self.best = float(totals[i])
            self.best_levels = tuple(prefix) + (int(levels[i]),)


def colocated_optimum(ranges, d_max, noise, l_hi=DEFAULT_SEARCH_BOUND):
    # type: (Sequence[float], float, NoiseModel, int) -> Tuple[int, float]
    """Best common level when every L_k takes the same value."""
    levels = np.arange(2, l_hi + 1, dtype=float)
    dims = len(ranges) - 1
    totals = (ranges[0] * levels ** dims / d_max) ** 2 * noise.sigma_n2
    for r in ranges[1:]:
        totals = totals + r ** 2 / (12.0 * (levels - 1) ** 2)
    i = int(np.argmin(totals))
    return int(levels[i]), float(totals[i])


def optimize_levels(dimensions, ranges, d_max, noise, l_hi=DEFAULT_SEARCH_BOUND,
                    budget=DEFAULT_BUDGET):
    # type: (int, Sequence[float], float, NoiseModel, int, int) -> OptimizationResult
    """Find the stage counts in [2, l_hi] minimising the closed-form sum-MSE.

    The search is exact.  When all R_k (k >= 2) are equal only non-decreasing
    tuples are visited and the canonical (sorted) minimiser is returned.  Among
    equal minima the lexicographically first tuple wins.

    Raises SearchSpaceError when more than 'budget' objective evaluations
    would be needed.
    """
    ranges = tuple(float(r) for r in ranges)
    if dimensions != len(ranges):
        raise ValidationError('dimensions', 'got %d dimensions but %d ranges'
                              % (dimensions, len(ranges)))
    if not isinstance(l_hi, int) or l_hi < 2:
        raise ValidationError('l_hi', 'must be an integer of at least 2, got %r' % (l_hi,))
    # validates dimensions, ranges and d_max
    MappingConfig(ranges, [2] * (dimensions - 1), d_max)

    search = _Search(ranges, d_max, noise, l_hi, budget)
    search.run()
    config = MappingConfig(ranges, search.best_levels, d_max)
    colocated_level, colocated_mse = colocated_optimum(ranges, d_max, noise, l_hi)
    logger.debug('optimum %r after %d evaluations (colocated %d)',
                 search.best_levels, search.evaluations, colocated_level)
    return OptimizationResult(search.best_levels, closed_form_mse(config, noise).total,
                              l_hi, colocated_level, colocated_mse, search.evaluations)
