"""Max-SAT, number partitioning and knapsack encodings with objective decoders."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..core import NetworkFormatError, PBitNetwork
from ..sparsify import CopyPlan, collapse, sparsify
from .circuit import Circuit, compile_circuit
from .gates import gate
from .dimacs import CNF

GATE_GAP = 4.0


@dataclass
class ProblemEncoding:
    """A p-bit network for a combinatorial problem plus the map back to problem variables.

    When ``plan`` is set, ``network`` is the sparsified network and states are
    collapsed through the plan before decoding.
    """

    kind: str
    network: PBitNetwork
    variable_map: np.ndarray
    meta: dict
    plan: CopyPlan | None = None
    circuit: Circuit | None = field(default=None, repr=False)

    def __post_init__(self):
        self.variable_map = np.asarray(self.variable_map, dtype=np.int64)
        if len(set(self.variable_map.tolist())) != len(self.variable_map):
            raise ValueError("variable_map must be injective")

    @property
    def n_logical(self) -> int:
        return len(self.plan.groups) if self.plan is not None else self.network.n

    def logical_state(self, state) -> np.ndarray:
        m = np.asarray(state)
        if len(m) != self.network.n:
            raise ValueError(f"state has {len(m)} entries, network has {self.network.n} p-bits")
        return collapse(m, self.plan).state if self.plan is not None else m

    def variables(self, state) -> np.ndarray:
        return self.logical_state(state)[self.variable_map]

    def decode(self, state) -> dict:
        return decode(self, state)

    def objective(self, state) -> float:
        """Scalar objective, larger is better for every problem kind."""
        d = decode(self, state)
        if self.kind == "maxsat":
            return float(d["satisfied"])
        if self.kind == "partition":
            return -float(d["residue"])
        return float(d["value"]) if d["feasible"] else -np.inf

    def is_optimal(self, state) -> bool:
        target = self.meta.get("optimum")
        if target is None:
            raise ValueError("encoding carries no known optimum")
        return self.objective(state) >= target

    def sparsified(self, max_degree: int = 4, copy_strength=None) -> "ProblemEncoding":
        if self.plan is not None:
            raise ValueError("encoding is already sparsified")
        net, plan = sparsify(self.network, max_degree, copy_strength=copy_strength)
        return replace(self, network=net, plan=None if plan.is_identity else plan)

    def to_dict(self) -> dict:
        doc = {
            "kind": self.kind,
            "network": self.network.to_dict(),
            "variable_map": self.variable_map.tolist(),
            "meta": self.meta,
        }
        if self.plan is not None:
            doc["plan"] = self.plan.to_dict()
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "ProblemEncoding":
        try:
            plan = CopyPlan.from_dict(doc["plan"]) if doc.get("plan") else None
            return cls(doc["kind"], PBitNetwork.from_dict(doc["network"]), doc["variable_map"], doc.get("meta", {}), plan)
        except KeyError as exc:
            raise NetworkFormatError(f"problem file lacks {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "ProblemEncoding":
        try:
            return cls.from_dict(json.loads(Path(path).read_text()))
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"{path}: {exc}") from exc


def _from_circuit(kind, circuit, variable_nets, meta, scale=1.0) -> ProblemEncoding:
    compiled = compile_circuit(circuit, scale=scale)
    return ProblemEncoding(kind, compiled.network, compiled.net_index[variable_nets], meta, circuit=circuit)


# ------------------------------------------------------------------ Max-SAT


def encode_maxsat(cnf: CNF, clause_weight: float = 1.0, gate_scale: float = 0.6) -> ProblemEncoding:
    """One OR gate per clause (chained for three literals), output biased to +1.

    Negated literals are read through inverted gate inputs rather than NOT
    p-bits.  Each gate violation costs at least ``4 * gate_scale`` and can gain
    at most ``2 * clause_weight``, so with ``gate_scale > clause_weight / 2``
    the minimum energy over internal nets falls strictly with every extra
    satisfied clause.  Unit clauses bias their variable directly; tautologies
    add nothing.  Clauses wider than three literals are split into OR trees.
    """
    if not cnf.clauses:
        raise ValueError("empty formula")
    if 4.0 * gate_scale <= 2.0 * clause_weight:
        raise ValueError("gate_scale too small for the clause weight; objective would not be monotone")
    c = Circuit()
    var_nets = [c.net(f"x{v}") for v in range(1, cnf.num_vars + 1)]
    for k in var_nets:
        c.add_field(k, 0.0)
    for ci, clause in enumerate(cnf.clauses):
        if not clause:
            raise ValueError(f"clause {ci} is empty")
        lits = list(dict.fromkeys(clause))
        if any(-lit in lits for lit in lits):
            continue
        if len(lits) == 1:
            c.add_field(var_nets[abs(lits[0]) - 1], math.copysign(clause_weight, lits[0]))
            continue
        out = _or_literals(c, [(var_nets[abs(l) - 1], l < 0) for l in lits])
        c.add_field(out, clause_weight)
    meta = {
        "num_vars": cnf.num_vars,
        "clauses": [list(cl) for cl in cnf.clauses],
        "optimum": len(cnf.clauses),
        "clause_weight": clause_weight,
    }
    return _from_circuit("maxsat", c, var_nets, meta, scale=gate_scale)


def _or_literals(c: Circuit, lits) -> int:
    """OR of two or more (net, negated) pairs; leaves of a balanced tree carry the negations."""
    if len(lits) <= 3:
        spec = gate("OR2" if len(lits) == 2 else "OR3").invert_inputs([neg for _, neg in lits])
        return c.add_gate(spec, *[net for net, _ in lits])
    half = (len(lits) + 1) // 2
    return c.OR(_or_literals(c, lits[:half]), _or_literals(c, lits[half:]))


# ------------------------------------------------------------------ number partitioning


def encode_number_partitioning(values) -> ProblemEncoding:
    """Direct quadratic form ``W_ij = -v_i v_j / max(v)^2``; energy = (sum v_i m_i)^2 / (2 max^2) + const."""
    v = np.asarray(values, dtype=float)
    if len(v) == 0:
        raise ValueError("empty value set")
    if np.any(v <= 0) or np.any(v != np.round(v)):
        raise ValueError("values must be positive integers")
    scale = float(v.max()) ** 2
    n = len(v)
    iu, ju = np.triu_indices(n, k=1)
    net = PBitNetwork(n, iu, ju, -np.outer(v, v)[iu, ju] / scale, np.zeros(n))
    meta = {"values": v.astype(int).tolist(), "optimum": -brute_force_partition(v)[0] if n <= 24 else None}
    return ProblemEncoding("partition", net, np.arange(n), meta)


def add_weighted_sum(c: Circuit, terms) -> list:
    """Bits (LSB first) of ``sum w_k x_k`` for nets ``x_k`` and positive integer ``w_k``.

    ``None`` entries are constant-0 bits.  Built from half/full adders of
    AND/OR/NOT gates with ripple carries.
    """
    acc: list = []
    for net, w in terms:
        w = int(w)
        if w <= 0:
            continue
        operand = [net if (w >> b) & 1 else None for b in range(w.bit_length())]
        acc = _ripple_add(c, acc, operand)
    return acc


def _ripple_add(c: Circuit, a: list, b: list) -> list:
    out = []
    carry = None
    for k in range(max(len(a), len(b))):
        bits = [x for x in (a[k] if k < len(a) else None, b[k] if k < len(b) else None, carry) if x is not None]
        if not bits:
            out.append(None)
            carry = None
        elif len(bits) == 1:
            out.append(bits[0])
            carry = None
        elif len(bits) == 2:
            s, carry = c.XOR(bits[0], bits[1])
            out.append(s)
        else:
            s1, c1 = c.XOR(bits[0], bits[1])
            s, c2 = c.XOR(s1, bits[2])
            carry = c.OR(c1, c2)
            out.append(s)
    if carry is not None:
        out.append(carry)
    return out


def encode_number_partitioning_circuit(values) -> ProblemEncoding:
    """Invertible adder tree computing the subset sum, output clamped to floor(total / 2).

    Ground states are the partitions whose subset sum hits the half total,
    i.e. the optimal partitions whenever a residue-0 (even total) or residue-1
    (odd total) split exists.
    """
    v = np.asarray(values, dtype=int)
    if len(v) == 0:
        raise ValueError("empty value set")
    c = Circuit()
    xs = [c.net(f"x{i}") for i in range(len(v))]
    for x in xs:
        c.add_field(x, 0.0)
    bits = add_weighted_sum(c, list(zip(xs, v)))
    target = int(v.sum()) // 2
    for b, net in enumerate(bits):
        want = 1 if (target >> b) & 1 else -1
        if net is None:
            continue
        c.clamp(net, want)
    if target >> len(bits):
        raise ValueError("target exceeds adder width")
    meta = {"values": v.tolist(), "optimum": -brute_force_partition(v)[0] if len(v) <= 24 else None}
    return _from_circuit("partition", c, xs, meta)


# ------------------------------------------------------------------ knapsack


def add_less_equal(c: Circuit, bits: list, bound: int):
    """Net that is +1 iff the unsigned number ``bits`` is <= ``bound`` (``True`` if always)."""
    le = True  # constant true: empty suffix compares equal
    width = max(len(bits), bound.bit_length())
    for k in range(width):
        s = bits[k] if k < len(bits) else None
        cbit = (bound >> k) & 1
        if s is None:
            # S_k = 0: S_k <= c_k holds; if c_k = 1 this bit alone makes S smaller
            le = True if cbit else le
            continue
        ns = c.NOT(s)
        if cbit:
            le = True if le is True else c.OR(ns, le)
        else:
            le = ns if le is True else c.AND(ns, le)
    return le


def encode_knapsack(values, weights, capacity, value_margin: float = 0.9) -> ProblemEncoding:
    """Adder over selected weights, comparator against ``capacity`` clamped true, values as biases.

    Item values enter as fields ``lambda * v_i`` on the selection p-bits with
    ``lambda = value_margin * gap / (2 sum v)``: the whole value range is worth
    less than one gate violation, so no value gain can pay for exceeding the
    capacity.
    """
    v = np.asarray(values, dtype=int)
    w = np.asarray(weights, dtype=int)
    if capacity < 0:
        raise ValueError("capacity must be non-negative")
    if len(v) == 0 or len(v) != len(w):
        raise ValueError("values and weights must be non-empty and equally long")
    if np.any(v < 0) or np.any(w < 0):
        raise ValueError("values and weights must be non-negative integers")
    c = Circuit()
    xs = [c.net(f"x{i}") for i in range(len(v))]
    total_bits = add_weighted_sum(c, list(zip(xs, w)))
    le = add_less_equal(c, total_bits, int(capacity))
    if le is not True:
        c.clamp(le, 1)
    lam = value_margin * GATE_GAP / (2.0 * max(int(v.sum()), 1))
    for x, val in zip(xs, v):
        c.add_field(x, lam * float(val))
    meta = {
        "values": v.tolist(),
        "weights": w.tolist(),
        "capacity": int(capacity),
        "value_scale": lam,
        "optimum": brute_force_knapsack(v, w, capacity)[0] if len(v) <= 24 else None,
    }
    return _from_circuit("knapsack", c, xs, meta)


# ------------------------------------------------------------------ decoding and oracles


def decode(encoding: ProblemEncoding, state) -> dict:
    """Objective value and solution structure for a network state."""
    x = encoding.variables(state) > 0
    meta = encoding.meta
    if encoding.kind == "maxsat":
        clauses = meta["clauses"]
        sat = sum(any(x[abs(l) - 1] == (l > 0) for l in cl) for cl in clauses)
        return {
            "assignment": [int(b) for b in x],
            "satisfied": int(sat),
            "num_clauses": len(clauses),
            "all_satisfied": sat == len(clauses),
        }
    if encoding.kind == "partition":
        vals = np.asarray(meta["values"])
        a = int(vals[x].sum())
        b = int(vals[~x].sum())
        return {"subset": np.flatnonzero(x).tolist(), "sum_a": a, "sum_b": b, "residue": abs(a - b)}
    if encoding.kind == "knapsack":
        vals = np.asarray(meta["values"])
        wts = np.asarray(meta["weights"])
        tw = int(wts[x].sum())
        return {
            "selection": np.flatnonzero(x).tolist(),
            "value": int(vals[x].sum()),
            "weight": tw,
            "feasible": tw <= meta["capacity"],
        }
    raise ValueError(f"unknown problem kind {encoding.kind!r}")


def _subset_masks(n):
    k = np.arange(2**n, dtype=np.int64)[:, None]
    return ((k >> np.arange(n)) & 1).astype(bool)


def brute_force_partition(values) -> tuple[int, list]:
    """Minimum residue over all 2^n splits, and one optimal subset."""
    v = np.asarray(values, dtype=np.int64)
    masks = _subset_masks(len(v))
    res = np.abs(2 * (masks @ v) - v.sum())
    best = int(res.argmin())
    return int(res[best]), np.flatnonzero(masks[best]).tolist()


def brute_force_knapsack(values, weights, capacity) -> tuple[int, list]:
    v = np.asarray(values, dtype=np.int64)
    w = np.asarray(weights, dtype=np.int64)
    masks = _subset_masks(len(v))
    tv = masks @ v
    tv[masks @ w > capacity] = -1
    best = int(tv.argmax())
    return int(tv[best]), np.flatnonzero(masks[best]).tolist()


def brute_force_maxsat(cnf: CNF) -> int:
    """Maximum number of simultaneously satisfiable clauses (vectorised over 2^V)."""
    if cnf.num_vars > 24:
        raise ValueError("brute force limited to 24 variables")
    masks = _subset_masks(cnf.num_vars)
    sat = np.zeros(len(masks), dtype=np.int64)
    for cl in cnf.clauses:
        hit = np.zeros(len(masks), dtype=bool)
        for lit in cl:
            hit |= masks[:, abs(lit) - 1] == (lit > 0)
        sat += hit
    return int(sat.max())


def load_problem_file(path) -> dict:
    """JSON problem file ``{"values": [...], "weights": [...], "capacity": w}``."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(f"{path}: {exc}") from exc
    if "values" not in doc:
        raise NetworkFormatError(f"{path}: missing 'values'")
    return doc
