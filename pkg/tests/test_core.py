import math

import numpy as np
import pytest
from hypothesis import given, settings
from numba import njit
from hypothesis import strategies as st

from pbitsim.core import (
    NetworkFormatError,
    PBitNetwork,
    SizeGuardError,
    all_states,
    bipolar_binary_convert,
    energies,
    energy,
    exact_boltzmann,
    index_to_state,
    pbit_input,
    pbit_probability,
    pbit_update,
    state_to_index,
)
from pbitsim.rng import RandomStream, derive_seed, draw_symmetric

from conftest import dense_energy, small_net


# ---------------------------------------------------------------- network


def test_rejects_self_coupling_and_nonfinite():
    with pytest.raises(ValueError):
        PBitNetwork.from_edges(2, [(1, 1, 1.0)])
    with pytest.raises(ValueError):
        PBitNetwork.from_edges(2, [(0, 1, float("inf"))])
    with pytest.raises(ValueError):
        PBitNetwork(2, [1], [0], [1.0], [0.0, 0.0])  # non-canonical symmetric edge


def test_from_edges_canonicalises_and_sums():
    net = PBitNetwork.from_edges(3, [(2, 0, 1.0), (0, 2, 0.5)])
    assert net.edge_list() == [(0, 2, 1.5)]


def test_json_round_trip(tmp_path):
    net = small_net(6, 1)
    p = tmp_path / "n.json"
    net.save(p)
    back = PBitNetwork.load(p)
    assert np.array_equal(back.dense(), net.dense())
    assert np.array_equal(back.bias, net.bias)


def test_bad_json_is_format_error(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2, "edges": [[0, 5, 1.0]]}')
    with pytest.raises((NetworkFormatError, IndexError, ValueError)):
        PBitNetwork.load(p)


# ---------------------------------------------------------------- input and update


def test_pbit_input_examples():
    net = PBitNetwork.from_edges(3, [], [0.3, 0.0, 0.0])
    assert pbit_input(net, [1, -1, 1], 0) == pytest.approx(0.3)
    net = PBitNetwork.from_edges(2, [(0, 1, 1.0)], [0.0, 0.0])
    assert pbit_input(net, [-1, 1], 0) == pytest.approx(1.0)
    with pytest.raises(IndexError):
        pbit_input(net, [1, 1], 2)


def test_pbit_input_matches_dense():
    net = small_net(5, 3)
    W = net.dense()
    m = np.array([1, -1, -1, 1, 1])
    for i in range(5):
        assert pbit_input(net, m, i) == pytest.approx(W[i] @ m + net.bias[i], abs=1e-12)


@njit
def _draws(key, count):
    out = np.empty(count)
    for k in range(count):
        out[k] = draw_symmetric(key, k)
    return out


def _freq(beta, I, draws=10**6, seed=0):
    """Empirical P(+1) of sign(tanh(beta I) - r) over one p-bit substream."""
    r = _draws(RandomStream(seed, 1).key(0), draws)
    return np.mean(np.tanh(beta * I) >= r)


@pytest.mark.parametrize("beta,I", [(0.0, 3.0), (1.0, 0.5), (2.0, -0.3), (0.5, 1.5)])
def test_update_frequency(beta, I):
    p = pbit_probability(beta, I)
    f = _freq(beta, I)
    assert abs(f - p) < 3 * math.sqrt(p * (1 - p) / 1e6) + 1e-12


def test_update_examples():
    assert pbit_probability(1.0, 0.5) == pytest.approx(0.7310585786, abs=1e-9)
    net = PBitNetwork.from_edges(1, [], [1.0])
    rs = RandomStream(4, 1)
    assert all(pbit_update(net, [1], 0, 50.0, rs) == 1 for _ in range(1000))
    assert rs.counters[0] == 1000  # one draw per update


def test_uniform_draws_in_range_and_reproducible():
    rs = RandomStream(123, 4)
    vals = [rs.uniform(s, k) for s in range(4) for k in range(200)]
    assert all(-1.0 <= v < 1.0 for v in vals)
    assert vals == [RandomStream(123).uniform(s, k) for s in range(4) for k in range(200)]
    assert derive_seed(1, 2) != derive_seed(1, 3)


# ---------------------------------------------------------------- energy


def test_energy_examples():
    net = PBitNetwork.from_edges(2, [], [1.0, -1.0])
    assert energy(net, [1, 1]) == 0.0
    net = PBitNetwork.from_edges(2, [(0, 1, 1.0)])
    assert energy(net, [1, 1]) == -1.0


def test_energy_matches_double_loop():
    net = small_net(8, 5)
    W = net.dense()
    for m in all_states(8)[::17]:
        assert energy(net, m) == pytest.approx(dense_energy(W, net.bias, m), abs=1e-12)


def test_energy_rejects_directed():
    net = PBitNetwork(2, [1], [0], [1.0], [0.0, 0.0], symmetric=False)
    with pytest.raises(ValueError):
        energy(net, [1, 1])


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6))
def test_energy_flip_symmetry_without_bias(n, seed):
    net = small_net(n, seed, bias_scale=0.0)
    S = all_states(n)
    assert np.allclose(energies(net, S), energies(net, -S))


# ---------------------------------------------------------------- Boltzmann


def test_boltzmann_examples():
    assert np.allclose(exact_boltzmann(PBitNetwork.from_edges(1, []), 1.0), [0.5, 0.5])
    p = exact_boltzmann(PBitNetwork.from_edges(2, [(0, 1, 1.0)]), 1.0)
    aligned = math.e / (2 * math.e + 2 / math.e)
    assert p[0] == pytest.approx(aligned) and p[3] == pytest.approx(aligned)
    assert np.allclose(exact_boltzmann(small_net(6, 2), 0.0), 1 / 64)
    assert exact_boltzmann(small_net(10, 4), 2.0).sum() == pytest.approx(1.0, abs=1e-12)


def test_enumeration_guard():
    with pytest.raises(SizeGuardError):
        exact_boltzmann(PBitNetwork.from_edges(25, []), 1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 7), st.integers(0, 10**6))
def test_boltzmann_permutation_equivariance(n, seed):
    net = small_net(n, seed)
    perm = np.random.default_rng(seed).permutation(n)
    inv = np.argsort(perm)
    W = net.dense()[np.ix_(perm, perm)]
    pnet = PBitNetwork.from_dense(W, net.bias[perm])
    p, q = exact_boltzmann(net, 1.3), exact_boltzmann(pnet, 1.3)
    for k in range(1 << n):
        m = index_to_state(k, n)
        assert q[state_to_index(m[perm])] == pytest.approx(p[k], abs=1e-12)
    assert np.array_equal(inv[perm], np.arange(n))


def test_binary_conversion_preserves_boltzmann():
    net = small_net(3, 9)
    b = bipolar_binary_convert(net, "to_binary")
    assert np.allclose(exact_boltzmann(net, 1.0), exact_boltzmann(b, 1.0))
    back = bipolar_binary_convert(b, "to_bipolar")
    assert np.allclose(back.weights, net.weights) and np.allclose(back.bias, net.bias)
    assert list(bipolar_binary_convert(np.array([1, -1]), "to_binary")) == [1, 0]
    for m in all_states(3):
        assert energy(b, (m + 1) // 2) == pytest.approx(energy(net, m))
