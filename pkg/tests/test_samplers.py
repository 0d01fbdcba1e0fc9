import numpy as np
import pytest
from scipy import stats

from pbitsim.core import PBitNetwork, exact_boltzmann, total_variation
from pbitsim.rng import RandomStream
from pbitsim.samplers import (
    AsyncConfig,
    ColoringPlan,
    async_run,
    color_graph,
    colored_sweep,
    directed_samples,
    directed_sweep,
    sample,
    serial_sweep,
    throughput,
    topological_order,
)

from conftest import small_net


def _rbm(nv, nh, seed=0):
    gen = np.random.default_rng(seed)
    edges = [(i, nv + j, gen.uniform(-1, 1)) for i in range(nv) for j in range(nh)]
    return PBitNetwork.from_edges(nv + nh, edges, gen.uniform(-0.3, 0.3, nv + nh))


# ---------------------------------------------------------------- coloring


def test_coloring_examples():
    assert color_graph(PBitNetwork.from_edges(10, [])).num_colors == 1
    k5 = PBitNetwork.from_edges(5, [(i, j, 1.0) for i in range(5) for j in range(i + 1, 5)])
    assert color_graph(k5).num_colors == 5
    for nv, nh in [(3, 5), (4, 4), (7, 2)]:
        net = _rbm(nv, nh)
        plan = color_graph(net)
        plan.validate(net)
        assert plan.num_colors == 2


def test_improper_coloring_rejected():
    net = PBitNetwork.from_edges(2, [(0, 1, 1.0)])
    bad = ColoringPlan.from_colors([0, 0])
    with pytest.raises(ValueError, match="improper"):
        colored_sweep(net, [1, 1], 1.0, bad, RandomStream(0))


# ---------------------------------------------------------------- serial / colored


def test_single_unbiased_pbit():
    net = PBitNetwork.from_edges(1, [])
    rec = sample(net, 1.0, 20000, RandomStream(1), "serial")
    assert abs(rec.marginals[0]) < 3 / np.sqrt(rec.sweeps * 0.9)


def test_ferromagnet_pair_serial():
    net = PBitNetwork.from_edges(2, [(0, 1, 1.0)])
    rec = sample(net, 2.0, 50000, RandomStream(2), "serial")
    assert total_variation(rec.distribution(), exact_boltzmann(net, 2.0)) < 0.05


@pytest.mark.parametrize("sampler", ["serial", "colored"])
def test_random_sparse_net_tv(sampler):
    net = small_net(10, 11, density=0.3)
    rec = sample(net, 1.0, 100000, RandomStream(3), sampler, burn_in=10000)
    assert total_variation(rec.distribution(), exact_boltzmann(net, 1.0)) < 0.05
    assert rec.attempted_flips == net.n * rec.sweeps


def test_update_order_invariance():
    net = small_net(8, 12)
    p = exact_boltzmann(net, 1.0)
    perm = np.random.default_rng(0).permutation(8)
    rec = sample(net, 1.0, 60000, RandomStream(5), "serial", order=perm)
    assert total_variation(rec.distribution(), p) < 0.05
    plan = color_graph(net)
    rev = ColoringPlan.from_colors(plan.num_colors - 1 - np.asarray(plan.colors))
    rec = sample(net, 1.0, 60000, RandomStream(6), "colored", plan=rev)
    assert total_variation(rec.distribution(), p) < 0.05


def test_rbm_colored_vs_serial_marginals():
    net = _rbm(4, 4, seed=3)
    a = sample(net, 1.0, 40000, RandomStream(7), "serial")
    b = sample(net, 1.0, 40000, RandomStream(8), "colored")
    se = np.sqrt((1 - a.marginals**2) / 36000 + (1 - b.marginals**2) / 36000)
    # autocorrelation inflates the naive error; 3 sigma on a doubled error bar
    assert np.all(np.abs(a.marginals - b.marginals) < 3 * 2 * se)


def test_edgeless_colored_is_independent_coins():
    net = PBitNetwork.from_edges(5, [], [0.2, -0.4, 0.0, 0.6, -1.0])
    rec = sample(net, 1.0, 40000, RandomStream(9), "colored")
    assert rec.extra["colors"] == 1
    assert np.allclose(rec.marginals, np.tanh(net.bias), atol=0.02)


def test_determinism():
    net = small_net(9, 4)
    m0 = np.ones(9, dtype=np.int8)
    a = serial_sweep(net, m0, 1.0, RandomStream(42))
    b = serial_sweep(net, m0, 1.0, RandomStream(42))
    assert np.array_equal(a, b)
    plan = color_graph(net)
    a = colored_sweep(net, m0, 1.0, plan, RandomStream(42))
    b = colored_sweep(net, m0, 1.0, plan, RandomStream(42))
    assert np.array_equal(a, b)
    r1 = sample(net, 1.0, 500, RandomStream(1), "colored", traces=True)
    r2 = sample(net, 1.0, 500, RandomStream(1), "colored", traces=True)
    assert np.array_equal(r1.energy, r2.energy) and np.array_equal(r1.final_state, r2.final_state)


def test_colored_uses_snapshot_within_class():
    # two disconnected p-bits share a class; each reads only the other class
    net = PBitNetwork.from_edges(3, [(0, 2, 5.0), (1, 2, -5.0)])
    plan = color_graph(net)
    out = colored_sweep(net, [1, 1, 1], 40.0, plan, RandomStream(0))
    assert out.tolist() in ([1, -1, 1], [1, -1, -1], [-1, 1, -1])


# ---------------------------------------------------------------- async


def test_async_zero_latency_matches_boltzmann():
    net = small_net(5, 21)
    cfg = AsyncConfig(mean_flip_interval=1.0, synapse_latency=0.0, horizon=60000.0)
    rec = async_run(net, None, 1.0, cfg, RandomStream(3))
    assert total_variation(rec.distribution(), exact_boltzmann(net, 1.0)) < 0.05


def test_async_intervals_are_exponential():
    net = PBitNetwork.from_edges(1, [])
    cfg = AsyncConfig(mean_flip_interval=2.0, horizon=20000.0)
    rec = async_run(net, None, 1.0, cfg, RandomStream(4), trace_node=0)
    assert stats.kstest(rec.intervals, "expon", args=(0, 2.0)).pvalue > 0.01


def test_async_latency_biases_ferromagnetic_chain():
    n = 5
    net = PBitNetwork.from_edges(n, [(i, i + 1, 1.0) for i in range(n - 1)])
    p = exact_boltzmann(net, 1.0)
    tv = []
    for lat in (0.0, 10.0):
        cfg = AsyncConfig(mean_flip_interval=1.0, synapse_latency=lat, horizon=40000.0, history=64)
        tv.append(total_variation(async_run(net, None, 1.0, cfg, RandomStream(5)).distribution(), p))
    assert tv[0] < 0.05
    assert tv[1] > 2 * tv[0] and tv[1] > 0.05


# ---------------------------------------------------------------- directed


def test_directed_root_and_chain():
    w, h = 0.8, 0.4
    root = PBitNetwork(1, [], [], [], [h], symmetric=False)
    c = directed_samples(root, 1.0, 40000, RandomStream(1))
    assert c[1] / c.sum() == pytest.approx((1 + np.tanh(h)) / 2, abs=0.01)
    # A (0) -> B (1): B reads A with weight w
    chain = PBitNetwork(2, [1], [0], [w], [h, 0.0], symmetric=False)
    c = directed_samples(chain, 1.0, 60000, RandomStream(2)) / 60000
    pa = (1 + np.tanh(h)) / 2
    exact = np.zeros(4)
    for k in range(4):
        a, b = (1 if k & 1 else -1), (1 if k & 2 else -1)
        pb = (1 + b * np.tanh(w * a)) / 2
        exact[k] = (pa if a > 0 else 1 - pa) * pb
    assert total_variation(c, exact) < 0.02
    rev = directed_samples(chain, 1.0, 60000, RandomStream(2), topo_order=[1, 0], check_order=False) / 60000
    assert total_variation(rev, exact) > 0.05


def test_directed_rejects_cycles_and_bad_order():
    cyc = PBitNetwork(2, [0, 1], [1, 0], [1.0, 1.0], [0.0, 0.0], symmetric=False)
    with pytest.raises(ValueError, match="cycle"):
        topological_order(cyc)
    chain = PBitNetwork(2, [1], [0], [1.0], [0.0, 0.0], symmetric=False)
    with pytest.raises(ValueError):
        directed_sweep(chain, [1, 1], 1.0, [1, 0], RandomStream(0))


# ---------------------------------------------------------------- throughput


def test_throughput():
    rec = sample(PBitNetwork.from_edges(10, []), 1.0, 100, RandomStream(0), "serial")
    rec.attempted_flips, rec.wall_time = 1000, 1.0
    assert throughput(rec) == 1000.0
    rec.wall_time = 0.0
    assert throughput(rec) == 0.0
