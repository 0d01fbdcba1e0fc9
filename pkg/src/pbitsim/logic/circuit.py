"""Netlists of invertible gates and their compilation to p-bit networks."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..core import PBitNetwork
from .gates import GateSpec, gate


class CircuitError(ValueError):
    pass


@dataclass
class GateInstance:
    spec: GateSpec
    nets: tuple[int, ...]


@dataclass
class Circuit:
    """Named nets joined by gates.  ``clamps`` pin nets to +-1; ``fields`` add soft biases."""

    nets: list[str] = field(default_factory=list)
    gates: list[GateInstance] = field(default_factory=list)
    clamps: dict[int, int] = field(default_factory=dict)
    fields: dict[int, float] = field(default_factory=dict)
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def net(self, name: str | None = None) -> int:
        """Index of net ``name``, creating it if needed (anonymous if ``name`` is None)."""
        if name is None:
            name = f"_n{len(self.nets)}"
        if name in self._index:
            return self._index[name]
        self._index[name] = len(self.nets)
        self.nets.append(name)
        return self._index[name]

    def index(self, name: str) -> int:
        return self._index[name]

    def add_gate(self, spec: GateSpec | str, *nets: int) -> int:
        """Attach a gate; passing one net fewer than the arity creates the output net."""
        if isinstance(spec, str):
            spec = gate(spec)
        nets = list(nets)
        if len(nets) == spec.visible - 1:
            nets.append(self.net())
        if len(nets) == spec.visible and spec.hidden:
            nets.extend(self.net() for _ in range(spec.hidden))
        if len(nets) != spec.arity:
            raise CircuitError(f"{spec.name} needs {spec.arity} terminals, got {len(nets)}")
        if len(set(nets)) != len(nets):
            raise CircuitError(f"{spec.name}: a net is connected to two terminals of one gate")
        for k in nets:
            if not 0 <= k < len(self.nets):
                raise CircuitError(f"{spec.name}: terminal mapped to unknown net {k}")
        self.gates.append(GateInstance(spec, tuple(nets)))
        return nets[spec.visible - 1]

    def clamp(self, net: int, value: int) -> None:
        if value not in (-1, 1):
            raise CircuitError("clamped nets hold +1 or -1")
        if self.clamps.get(net, value) != value:
            raise CircuitError(f"conflicting clamp on net {self.nets[net]}")
        self.clamps[net] = value

    def add_field(self, net: int, h: float) -> None:
        self.fields[net] = self.fields.get(net, 0.0) + float(h)

    # convenience builders
    def NOT(self, a):
        return self.add_gate("NOT", a)

    def AND(self, a, b):
        return self.add_gate("AND2", a, b)

    def OR(self, a, b):
        return self.add_gate("OR2", a, b)

    def XOR(self, a, b):
        """Returns (a xor b, a and b); the AND net doubles as a half-adder carry."""
        o = self.OR(a, b)
        n = self.AND(a, b)
        return self.AND(o, self.NOT(n)), n

    def or_tree(self, nets: list[int]) -> int:
        return self._tree(nets, self.OR)

    def and_tree(self, nets: list[int]) -> int:
        return self._tree(nets, self.AND)

    @staticmethod
    def _tree(nets, op):
        if not nets:
            raise CircuitError("empty gate tree")
        layer = list(nets)
        while len(layer) > 1:
            nxt = [op(layer[k], layer[k + 1]) for k in range(0, len(layer) - 1, 2)]
            if len(layer) % 2:
                nxt.append(layer[-1])
            layer = nxt
        return layer[0]

    # semantics
    def validate(self) -> None:
        used = set()
        for g in self.gates:
            used.update(g.nets)
        for k in self.clamps:
            if not 0 <= k < len(self.nets):
                raise CircuitError(f"clamp on unknown net {k}")
        dangling = [self.nets[k] for k in range(len(self.nets)) if k not in used and k not in self.fields and k not in self.clamps]
        if dangling and self.gates:
            raise CircuitError(f"unconnected nets: {dangling[:5]}")

    def satisfied(self, values) -> bool:
        """True if every gate and clamp holds for a full net assignment."""
        v = np.asarray(values)
        for g in self.gates:
            row = tuple(int(v[k]) for k in g.nets[: g.spec.visible])
            if row not in g.spec.truth_rows:
                return False
        return all(v[k] == val for k, val in self.clamps.items())

    def evaluate(self, inputs: dict[int, int]) -> np.ndarray:
        """Forward-propagate gate outputs from the given free-input nets (gates in build order)."""
        v = np.zeros(len(self.nets), dtype=np.int8)
        for k, val in inputs.items():
            v[k] = val
        for g in self.gates:
            spec = g.spec
            ins = [v[k] > 0 for k in g.nets[: spec.visible - 1]]
            if any(v[k] == 0 for k in g.nets[: spec.visible - 1]):
                raise CircuitError(f"{spec.name}: input net not yet driven")
            if spec.inverted:
                ins = [x != inv for x, inv in zip(ins, spec.inverted)]
            if spec.name == "NOT":
                out = not ins[0]
            elif spec.name == "COPY":
                out = ins[0]
            elif spec.name.startswith("AND"):
                out = all(ins)
            elif spec.name.startswith("OR"):
                out = any(ins)
            else:
                raise CircuitError(f"no forward rule for {spec.name}")
            v[g.nets[spec.visible - 1]] = 1 if out else -1
            if spec.hidden:
                # chained 3-input gates: hidden net is the first pairwise result
                a, b = ins[0], ins[1]
                v[g.nets[-1]] = 1 if (a and b if spec.name.startswith("AND") else a or b) else -1
        return v


@dataclass
class Compiled:
    network: PBitNetwork
    net_index: np.ndarray
    frozen: dict[int, int]
    gate_energy: float

    def full_state(self, state) -> np.ndarray:
        """Net values (length = number of nets) from a network state."""
        out = np.empty(len(self.net_index), dtype=np.int8)
        for k, idx in enumerate(self.net_index):
            out[k] = self.frozen[k] if idx < 0 else state[idx]
        return out

    def network_state(self, values) -> np.ndarray:
        v = np.asarray(values)
        keep = self.net_index >= 0
        out = np.empty(self.network.n, dtype=np.int8)
        out[self.net_index[keep]] = v[keep]
        return out


def clamp_strength(W: np.ndarray, h: np.ndarray, k: int) -> float:
    """2 x (sum of incident |w| + |h|) on net ``k``."""
    return 2.0 * (float(np.abs(W[k]).sum()) + abs(float(h[k])))


def compile_circuit(circuit: Circuit, scale: float = 1.0, clamp_mode: str = "bias") -> Compiled:
    """One p-bit per net; gate Hamiltonians summed; clamps as strong biases or frozen out.

    ``scale`` multiplies every gate Hamiltonian (soft ``fields`` are left as is).
    ``clamp_mode="freeze"`` removes clamped nets and folds their couplings into
    neighbor biases.
    """
    circuit.validate()
    N = len(circuit.nets)
    W = np.zeros((N, N))
    h = np.zeros(N)
    gate_e0 = 0.0
    for g in circuit.gates:
        idx = np.array(g.nets)
        W[np.ix_(idx, idx)] += scale * g.spec.W
        h[idx] += scale * g.spec.h
        gate_e0 += scale * g.spec.ground_energy
    for k, val in circuit.fields.items():
        h[k] += val
    if clamp_mode == "bias":
        for k, val in circuit.clamps.items():
            h[k] += val * clamp_strength(W, h, k)
        net = PBitNetwork.from_dense(W, h)
        return Compiled(net, np.arange(N), {}, gate_e0)
    if clamp_mode != "freeze":
        raise ValueError("clamp_mode is 'bias' or 'freeze'")
    frozen = dict(circuit.clamps)
    free = np.array([k for k in range(N) if k not in frozen], dtype=np.int64)
    fk = np.array(sorted(frozen), dtype=np.int64)
    fv = np.array([frozen[k] for k in fk], dtype=float)
    h_free = h[free] + W[np.ix_(free, fk)] @ fv
    offset = -(0.5 * fv @ W[np.ix_(fk, fk)] @ fv + h[fk] @ fv)
    net = PBitNetwork.from_dense(W[np.ix_(free, free)], h_free)
    net = PBitNetwork(net.n, net.rows, net.cols, net.weights, net.bias, offset=float(offset))
    net_index = np.full(N, -1, dtype=np.int64)
    net_index[free] = np.arange(len(free))
    return Compiled(net, net_index, frozen, gate_e0)
