"""Counter-based random numbers with one independent substream per p-bit.

Every draw is a pure function of ``(seed, stream, index)``: the stream key is
derived from the seed and stream id with SplitMix64, and the ``index``-th
output is SplitMix64 evaluated at ``key + index * GAMMA``.  No generator
object carries hidden state, so serial, colored and event-driven samplers
that consume the same per-p-bit draws produce bit-identical results.
"""

from __future__ import annotations

import numpy as np
from numba import njit

GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_STREAM_SALT = np.uint64(0xD1B54A32D192ED03)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True, inline="always")
def _mix(z):
    z = (z ^ (z >> _S30)) * _M1
    z = (z ^ (z >> _S27)) * _M2
    return z ^ (z >> _S31)


@njit(cache=True, inline="always")
def stream_key(seed, stream):
    return _mix(np.uint64(seed) ^ (np.uint64(stream) * _STREAM_SALT + GAMMA))


@njit(cache=True, inline="always")
def draw_u64(key, index):
    return _mix(key + np.uint64(index + 1) * GAMMA)


@njit(cache=True, inline="always")
def draw_unit(key, index):
    """Uniform in [0, 1)."""
    return float(draw_u64(key, index) >> _S11) * _INV53


@njit(cache=True, inline="always")
def draw_symmetric(key, index):
    """Uniform in [-1, +1), the ``r`` of the p-bit equation."""
    return 2.0 * draw_unit(key, index) - 1.0


@njit(cache=True)
def stream_keys(seed, first_stream, count):
    out = np.empty(count, dtype=np.uint64)
    for k in range(count):
        out[k] = stream_key(seed, first_stream + k)
    return out


def _mix_py(z: int) -> int:
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


_MASK = 0xFFFFFFFFFFFFFFFF


def derive_seed(seed: int, *path: int) -> int:
    """Child seed for restarts, minibatch chains, etc.  Pure function of its inputs."""
    z = seed & _MASK
    for p in path:
        z = _mix_py(z ^ (((p & _MASK) * 0xD1B54A32D192ED03 + 0x9E3779B97F4A7C15) & _MASK))
    return z & 0x7FFFFFFFFFFFFFFF


class RandomStream:
    """Per-p-bit uniform substreams addressed by (stream id, draw index).

    ``counters`` tracks how many draws each stream has consumed; samplers
    advance it in place.
    """

    def __init__(self, seed: int, n_streams: int = 0):
        self.seed = int(seed) & 0x7FFFFFFFFFFFFFFF
        self.counters = np.zeros(n_streams, dtype=np.int64)

    def key(self, stream: int) -> np.uint64:
        # numba hands uint64 results back as Python ints; keep the dtype explicit
        return np.uint64(stream_key(np.uint64(self.seed), np.uint64(stream)))

    def uniform(self, stream: int, index: int) -> float:
        """Value in [-1, +1) for a given substream and draw index."""
        return float(draw_symmetric(self.key(stream), np.int64(index)))

    def next(self, stream: int) -> float:
        if stream >= len(self.counters):
            grown = np.zeros(stream + 1, dtype=np.int64)
            grown[: len(self.counters)] = self.counters
            self.counters = grown
        value = self.uniform(stream, int(self.counters[stream]))
        self.counters[stream] += 1
        return value

    def ensure(self, n_streams: int) -> None:
        if len(self.counters) < n_streams:
            grown = np.zeros(n_streams, dtype=np.int64)
            grown[: len(self.counters)] = self.counters
            self.counters = grown

    def spawn(self, *path: int) -> "RandomStream":
        return RandomStream(derive_seed(self.seed, *path))

    def numpy(self, *path: int) -> np.random.Generator:
        """A numpy Generator for bulk work outside the p-bit inner loop (init, shuffles)."""
        return np.random.default_rng(derive_seed(self.seed, 0x5EED, *path))
