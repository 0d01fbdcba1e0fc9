import numpy as np
import pytest

from pbitsim.core import PBitNetwork, all_states, ground_states, random_network


def dense_energy(W, h, m):
    """Double-loop reference energy."""
    n = len(m)
    e = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            e -= W[i, j] * m[i] * m[j]
        e -= h[i] * m[i]
    return e


def small_net(n, seed, density=0.6, bias_scale=0.5):
    gen = np.random.default_rng(seed)
    return random_network(n, gen, density=density, weight_scale=1.0, bias_scale=bias_scale)


def ground_set(net):
    return set(ground_states(net)[1].tolist())


def empirical(states):
    """Histogram of +-1 rows in state-index order."""
    S = np.asarray(states)
    n = S.shape[1]
    idx = ((S > 0).astype(np.int64) << np.arange(n)).sum(axis=1)
    return np.bincount(idx, minlength=1 << n) / len(S)


@pytest.fixture
def ferro2():
    return PBitNetwork.from_edges(2, [(0, 1, 1.0)], [0.0, 0.0])


__all__ = ["all_states", "dense_energy", "empirical", "ground_set", "small_net"]
