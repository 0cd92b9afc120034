"""Counter-based pseudorandom generator for reproducible ensembles.

Every variate is a pure function of (seed, trial, k): the 64-bit output
word is ``mix(mix(mix(seed + GOLDEN) ^ trial) ^ k)`` where ``mix`` is the
splitmix64 finalizer.  There is no stream state, so trials and steps can
be generated in any order, on any number of workers, with bit-identical
results.  Golden vectors are pinned in the test suite; changing the
algorithm is a breaking change.
"""
from __future__ import annotations

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MUL1 = np.uint64(0xBF58476D1CE4E5B9)
_MUL2 = np.uint64(0x94D049BB133111EB)
_U53 = 2.0 ** -53


def mix64(x):
    """splitmix64 finalizer on uint64 scalars or arrays (wrapping)."""
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (x ^ (x >> np.uint64(30))) * _MUL1
        z = (z ^ (z >> np.uint64(27))) * _MUL2
        return z ^ (z >> np.uint64(31))


def words(seed: int, trial, k):
    """64-bit output words for broadcastable trial/k indices.

    ``trial`` and ``k`` may be scalars or arrays; they are broadcast
    against each other (e.g. trial[:, None] with k[None, :] yields a
    matrix of words).
    """
    trial = np.asarray(trial, dtype=np.uint64)
    k = np.asarray(k, dtype=np.uint64)
    with np.errstate(over="ignore"):
        h = mix64(np.uint64(seed) + GOLDEN)
        h = mix64(h ^ trial)
        return mix64(h ^ k)


def word(seed: int, trial: int, k: int) -> int:
    """Scalar convenience wrapper around words()."""
    return int(words(seed, trial, k))


def uniform01(seed: int, trial, k):
    """Uniform variates in [0, 1) with full 53-bit mantissas."""
    return (words(seed, trial, k) >> np.uint64(11)).astype(np.float64) * _U53


def uniform_symmetric(seed: int, trial, k, bound: float = 1.0):
    """Uniform variates in [-bound, bound] (mean zero)."""
    return bound * (2.0 * uniform01(seed, trial, k) - 1.0)


def rademacher(seed: int, trial, k):
    """Fair +/-1 variates from the top output bit."""
    top = (words(seed, trial, k) >> np.uint64(63)).astype(np.float64)
    return 1.0 - 2.0 * top
