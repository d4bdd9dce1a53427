"""Derived seeds.

A seed for any piece of an experiment is the first eight bytes (big endian) of
BLAKE2b over the text 'master|part|part...'.  Derived seeds depend only on the
master seed and the coordinates, so adding grid points never perturbs
existing cells.
"""

from __future__ import absolute_import

import hashlib

import numpy as np


def mix_seed(master, *parts):
    # type: (int, *object) -> int
    text = '|'.join(str(p) for p in (master,) + parts)
    digest = hashlib.blake2b(text.encode('utf-8'), digest_size=8).digest()
    return int.from_bytes(digest, 'big')


def cell_seed(master, *coords):
    # type: (int, *object) -> int
    """Seed of one experiment grid cell."""
    return mix_seed(master, *coords)


def node_seed(seed, node):
    # type: (int, int) -> int
    """Scrambler seed of one node."""
    return mix_seed(seed, 'node', node)


def trial_rng(seed, trial, stream):
    # type: (int, int, str) -> np.random.Generator
    """Generator for one named random stream of one trial."""
    return np.random.default_rng(mix_seed(seed, 'trial', trial, stream))
