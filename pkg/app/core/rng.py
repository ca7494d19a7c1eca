"""
Reproducible random streams

Every stochastic stage draws from a stream derived from the master seed with
numpy's SeedSequence, so results never depend on worker count or call order.
"""
from enum import IntEnum

import numpy as np


class Stream(IntEnum):
    """Spawn keys of the pipeline's independent random streams"""
    EVALUATION = 0
    SELECTION = 1
    JACCARD = 2
    NMF = 3
    SYNTHETIC = 4


def derive_seed(master: int, *keys: int) -> int:
    """A 64-bit seed for the stream identified by ``keys`` under ``master``"""
    seq = np.random.SeedSequence(master, spawn_key=tuple(int(k) for k in keys))
    return int(seq.generate_state(1, dtype=np.uint64)[0])


def chunk_generator(master: int, chunk: int) -> np.random.Generator:
    """Generator for one fixed-size chunk of Monte Carlo runs"""
    return np.random.default_rng(np.random.SeedSequence(master, spawn_key=(chunk,)))
