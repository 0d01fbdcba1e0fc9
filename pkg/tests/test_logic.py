import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pbitsim.core import NetworkFormatError, PBitNetwork, all_states, energies, ground_states
from pbitsim.logic import (
    CNF,
    Circuit,
    GateEncodingError,
    GateSpec,
    brute_force_knapsack,
    brute_force_maxsat,
    brute_force_partition,
    compile_circuit,
    encode_knapsack,
    encode_maxsat,
    encode_number_partitioning,
    encode_number_partitioning_circuit,
    gate,
    gate_library,
    parse_dimacs,
    read_dimacs,
    write_dimacs,
)
from pbitsim.rng import RandomStream
from pbitsim.samplers import sample


def ground_rows(net):
    _, idx = ground_states(net)
    return all_states(net.n)[idx]


def rows_set(M):
    return {tuple(int(x) for x in r) for r in M}


# ---------------------------------------------------------------- gates


@pytest.mark.parametrize("name", sorted(gate_library()))
def test_gate_soundness(name):
    g = gate(name)
    e0, gap, ground = g.spectrum()
    assert ground == g.truth_rows
    assert gap >= 1.0
    assert np.all(g.W == np.round(g.W)) and np.all(g.h == np.round(g.h))


def test_gate_examples():
    assert gate("NOT").truth_rows == {(1, -1), (-1, 1)}
    assert gate("COPY").truth_rows == {(1, 1), (-1, -1)}
    assert gate("AND2").truth_rows == {(-1, -1, -1), (-1, 1, -1), (1, -1, -1), (1, 1, 1)}


@pytest.mark.parametrize("name", ["AND2", "OR2", "AND3", "OR3"])
def test_inverted_inputs_sound(name):
    g = gate(name)
    n_in = g.visible - 1
    for mask in itertools.product((False, True), repeat=n_in):
        inv = g.invert_inputs(mask)
        assert inv.spectrum()[2] == inv.truth_rows
        for row in inv.truth_rows:
            x = [(v > 0) != m for v, m in zip(row[:n_in], mask)]
            want = all(x) if name.startswith("AND") else any(x)
            assert (row[-1] > 0) == want


def test_bad_encoding_rejected():
    bad = GateSpec("BAD", ("a", "out"), np.array([[0.0, 1.0], [1.0, 0.0]]), np.zeros(2), gate("NOT").truth_rows)
    with pytest.raises(GateEncodingError):
        bad.verify()


# ---------------------------------------------------------------- circuits


def test_and_output_clamped_forces_inputs():
    c = Circuit()
    a, b = c.net("a"), c.net("b")
    out = c.AND(a, b)
    c.clamp(out, 1)
    comp = compile_circuit(c)
    for row in ground_rows(comp.network):
        assert comp.full_state(row).tolist() == [1, 1, 1]
    frozen = compile_circuit(c, clamp_mode="freeze")
    assert frozen.network.n == 2
    assert rows_set(ground_rows(frozen.network)) == {(1, 1)}


def test_double_not():
    c = Circuit()
    a = c.net("a")
    z = c.NOT(c.NOT(a))
    comp = compile_circuit(c)
    G = ground_rows(comp.network)
    assert len(G) == 2 and all(r[a] == r[z] for r in G)


def test_half_adder():
    c = Circuit()
    a, b = c.net("a"), c.net("b")
    s, carry = c.XOR(a, b)
    comp = compile_circuit(c)
    got = {(int(r[a]), int(r[b]), int(r[s]), int(r[carry])) for r in ground_rows(comp.network)}
    want = {(x, y, 1 if x != y else -1, 1 if x == y == 1 else -1) for x in (-1, 1) for y in (-1, 1)}
    assert got == want


def test_compiled_ground_states_are_satisfying_assignments():
    c = Circuit()
    x = [c.net(f"x{i}") for i in range(3)]
    t = c.OR(c.AND(x[0], x[1]), c.NOT(x[2]))
    c.clamp(t, -1)
    comp = compile_circuit(c, clamp_mode="freeze")
    sat = [comp.network_state(v) for v in all_states(len(c.nets)) if c.satisfied(v)]
    assert rows_set(ground_rows(comp.network)) == rows_set(sat)


def test_circuit_errors():
    c = Circuit()
    a = c.net("a")
    with pytest.raises(ValueError):
        c.add_gate("AND2", a, a)
    with pytest.raises(ValueError):
        c.clamp(a, 0)
    c.clamp(a, 1)
    with pytest.raises(ValueError):
        c.clamp(a, -1)


def test_invertibility_by_sampling():
    c = Circuit()
    a, b = c.net("a"), c.net("b")
    out = c.AND(a, b)
    c.clamp(out, 1)
    comp = compile_circuit(c)
    rec = sample(comp.network, 5.0, 10000, RandomStream(0), "serial", burn_in=100)
    assert rec.distribution()[0b111] >= 0.99


# ---------------------------------------------------------------- Max-SAT


def test_maxsat_single_clause():
    enc = encode_maxsat(CNF(2, [[1, 2]]))
    got = {tuple(int(v) for v in enc.variables(r)) for r in ground_rows(enc.network)}
    assert got == {(1, 1), (1, -1), (-1, 1)}


def test_maxsat_contradiction():
    enc = encode_maxsat(CNF(1, [[1], [-1]]))
    for r in ground_rows(enc.network):
        assert enc.decode(r)["satisfied"] == 1
    assert brute_force_maxsat(CNF(1, [[1], [-1]])) == 1


def test_maxsat_rejects_weak_gates():
    with pytest.raises(ValueError):
        encode_maxsat(CNF(2, [[1, 2]]), clause_weight=1.0, gate_scale=0.5)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_maxsat_energy_monotone_in_satisfied_clauses(seed):
    gen = np.random.default_rng(seed)
    nv = 4
    clauses = []
    for _ in range(int(gen.integers(2, 4))):
        k = int(gen.integers(1, 4))
        vs = gen.choice(nv, size=k, replace=False) + 1
        clauses.append([int(v) * int(gen.choice([-1, 1])) for v in vs])
    cnf = CNF(nv, clauses)
    enc = encode_maxsat(cnf)
    assert enc.network.n <= 16
    S = all_states(enc.network.n)
    E = energies(enc.network, S)
    X = S[:, enc.variable_map]
    best = {}
    for x, e in zip(map(tuple, X), E):
        best[x] = min(best.get(x, np.inf), e)
    levels = {}
    for x, e in best.items():
        k = cnf.satisfied_count(np.array(x) > 0)
        levels.setdefault(k, []).append(e)
    ks = sorted(levels)
    for lo, hi in zip(ks, ks[1:]):
        # every assignment with more satisfied clauses sits strictly lower
        assert max(levels[hi]) < min(levels[lo]) - 1e-9
    for k in ks:
        assert np.ptp(levels[k]) < 1e-9


def test_uf20_encoding_size():
    from importlib.resources import files

    cnf = read_dimacs(files("pbitsim.data") / "uf20-91-standin.cnf")
    assert (cnf.num_vars, len(cnf.clauses)) == (20, 91)
    enc = encode_maxsat(cnf)
    assert 56 <= enc.network.n <= 224  # same order as 112


# ---------------------------------------------------------------- partitioning and knapsack


def test_partition_examples():
    for values, residue in [([1, 1], 0), ([4, 5, 6, 7, 8], 0), ([3, 1, 1, 2, 2, 1], 0), ([2, 3], 1)]:
        assert brute_force_partition(values)[0] == residue
        enc = encode_number_partitioning(values)
        for r in ground_rows(enc.network):
            assert enc.decode(r)["residue"] == residue
            assert enc.is_optimal(r)


def test_partition_circuit_variant():
    values = np.array([1, 2, 3, 4])
    enc = encode_number_partitioning_circuit(values)
    comp = compile_circuit(enc.circuit, clamp_mode="freeze")
    x = [enc.circuit.index(f"x{i}") for i in range(len(values))]
    G = ground_rows(comp.network)
    assert len(G) > 0
    for r in G:
        full = comp.full_state(r)
        sel = np.array([full[k] > 0 for k in x])
        assert abs(2 * values[sel].sum() - values.sum()) == 0


def test_knapsack_examples():
    assert brute_force_knapsack([6, 10, 12], [1, 2, 3], 5) == (22, [1, 2])
    enc = encode_knapsack([6, 10, 12], [1, 2, 3], 5)
    comp = compile_circuit(enc.circuit, clamp_mode="freeze")
    for r in ground_rows(comp.network):
        v = comp.full_state(r)
        sel = [i for i in range(3) if v[enc.circuit.index(f"x{i}")] > 0]
        assert sel == [1, 2]
    one = encode_knapsack([5], [2], 3)
    for r in ground_rows(one.network):
        assert one.decode(r)["selection"] == [0]


@settings(max_examples=15, deadline=None)
@given(st.lists(st.integers(1, 5), min_size=2, max_size=3), st.lists(st.integers(1, 4), min_size=3, max_size=3),
       st.integers(0, 6))
def test_knapsack_ground_state_feasible_and_optimal(values, weights, cap):
    weights = weights[: len(values)]
    enc = encode_knapsack(values, weights, cap)
    comp = compile_circuit(enc.circuit, clamp_mode="freeze")
    if comp.network.n > 20:
        return
    best = brute_force_knapsack(values, weights, cap)[0]
    for r in ground_rows(comp.network):
        v = comp.full_state(r)
        sel = np.array([v[enc.circuit.index(f"x{i}")] > 0 for i in range(len(values))])
        assert np.asarray(weights)[sel].sum() <= cap
        assert np.asarray(values)[sel].sum() == best


def test_encoding_round_trip(tmp_path):
    enc = encode_knapsack([6, 10, 12], [1, 2, 3], 5).sparsified(4)
    enc.save(tmp_path / "k.json")
    again = type(enc).load(tmp_path / "k.json")
    assert again.network.n == enc.network.n and again.plan.groups == enc.plan.groups
    assert again.meta == enc.meta


# ---------------------------------------------------------------- DIMACS


def test_dimacs_parse_and_write():
    text = "c hello\np cnf 3 2\n1 -2\n 3 0\n-1 2 0\n%\n0\n"
    cnf = parse_dimacs(text)
    assert cnf.clauses == [[1, -2, 3], [-1, 2]] and cnf.comments == ("hello",)
    assert parse_dimacs(write_dimacs(cnf)).clauses == cnf.clauses
    assert cnf.satisfied_count([True, True, False]) == 2


@pytest.mark.parametrize("text", [
    "1 2 0\n",
    "p cnf 2 1\n1 3 0\n",
    "p cnf 2 2\n1 2 0\n",
    "p cnf 2 1\n1 2\n",
    "p cnf 2 1\n1 x 0\n",
    "p cnf 2\n1 0\n",
])
def test_dimacs_errors(text):
    with pytest.raises(NetworkFormatError):
        parse_dimacs(text)
