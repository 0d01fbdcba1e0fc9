import numpy as np
import pytest

from pbitsim.anneal import (
    DEFAULT_SCHEDULE,
    AnnealSchedule,
    anneal,
    linear_schedule,
    parse_schedule,
    success_probability,
)
from pbitsim.core import PBitNetwork, all_states, energies, energy, exact_boltzmann, ground_states
from pbitsim.logic import encode_number_partitioning

from conftest import small_net


def test_linear_schedule_examples():
    s = linear_schedule(0, 5, 0.125, 10)
    assert len(s) == 41 and s.betas[0] == 0 and s.betas[-1] == 5 and s.total_sweeps == 410
    assert linear_schedule(1, 1, 0.5, 3).betas == (1.0,)
    assert linear_schedule(0, 1, 0.3, 1).betas == pytest.approx((0, 0.3, 0.6, 0.9, 1.0))
    with pytest.raises(ValueError):
        linear_schedule(0, 1, 0, 1)


def test_parse_schedule():
    assert parse_schedule(DEFAULT_SCHEDULE) == linear_schedule(0, 5, 0.125, 10)
    s = parse_schedule("0.5x3,2x7")
    assert s.betas == (0.5, 2.0) and s.sweeps == (3, 7)
    assert parse_schedule(s.to_string()) == s
    for bad in ["", "fast", "1x0", "-1x3", "nanx2"]:
        with pytest.raises(ValueError):
            parse_schedule(bad)
    with pytest.raises(ValueError):
        AnnealSchedule((), ())


def test_ferromagnet_pair(ferro2):
    run = anneal(ferro2, parse_schedule(DEFAULT_SCHEDULE), restarts=4, rng=1)
    assert run.best_energy == -1.0
    assert run.best_state[0] == run.best_state[1]


@pytest.mark.parametrize("sampler", ["serial", "colored"])
def test_best_trace_non_increasing_and_consistent(sampler):
    net = small_net(12, 3, density=0.4)
    run = anneal(net, linear_schedule(0, 3, 0.25, 5), sampler=sampler, restarts=3, rng=2)
    for r in run.restarts:
        assert np.all(np.diff(r.best_trace) <= 1e-12)
        assert r.best_energy == pytest.approx(energy(net, r.best_state))
        assert r.best_trace[-1] == pytest.approx(r.best_energy)
    assert run.best_energy == min(r.best_energy for r in run.restarts)


def test_deterministic_given_seed():
    net = small_net(10, 4)
    sched = linear_schedule(0, 2, 0.5, 3)
    a = anneal(net, sched, restarts=5, rng=9, threads=4)
    b = anneal(net, sched, restarts=5, rng=9, threads=1)
    for x, y in zip(a.restarts, b.restarts):
        assert np.array_equal(x.best_state, y.best_state)
        assert np.array_equal(x.energy_trace, y.energy_trace)


def test_beta_zero_is_uniform():
    gen = np.random.default_rng(0)
    n = 6
    edges = [(i, j, float(gen.choice([-1, 1]))) for i in range(n) for j in range(i + 1, n) if gen.random() < 0.5]
    net = PBitNetwork.from_edges(n, edges)
    run = anneal(net, AnnealSchedule((0.0,) * 20000, (1,) * 20000), sampler="colored", rng=3)
    levels, counts = np.unique(np.round(energies(net, all_states(n)), 9), return_counts=True)
    seen = np.array([np.mean(np.isclose(run.energy_trace, e)) for e in levels])
    assert seen.sum() == pytest.approx(1.0)
    assert 0.5 * np.abs(seen - counts / counts.sum()).sum() < 0.05


def test_ground_probability_lower_bounds_hit_rate():
    net = small_net(6, 8)
    sched = linear_schedule(0, 2, 0.25, 10)
    _, g = ground_states(net)
    p_ground = exact_boltzmann(net, 2.0)[g].sum()
    run = anneal(net, sched, restarts=400, rng=5)
    S = all_states(net.n)
    hits = np.mean([any(np.array_equal(r.best_state, S[k]) for k in g) for r in run.restarts])
    assert hits >= p_ground - 3 * np.sqrt(p_ground * (1 - p_ground) / 400)


def test_partition_success():
    enc = encode_number_partitioning([4, 5, 6, 7, 8])
    run = anneal(enc.network, parse_schedule(DEFAULT_SCHEDULE), restarts=20, rng=7, encoding=enc)
    assert success_probability(run.restarts) >= 0.9
    rep = run.report()
    assert rep["restarts"] == 20 and rep["success"] and rep["best_objective"]["residue"] == 0


def test_success_probability_examples():
    assert success_probability([True] * 9 + [False]) == 0.9
    assert success_probability([]) == 0.0
    assert success_probability([3, 5, 7], target=5) == pytest.approx(2 / 3)


def test_rejects_bad_arguments(ferro2):
    with pytest.raises(ValueError):
        anneal(ferro2, linear_schedule(0, 1, 0.5, 1), sampler="async")
    with pytest.raises(ValueError):
        anneal(ferro2, linear_schedule(0, 1, 0.5, 1), restarts=0)
    with pytest.raises(ValueError):
        anneal(PBitNetwork(2, [1], [0], [1.0], [0.0, 0.0], symmetric=False), linear_schedule(0, 1, 0.5, 1))
