"""Degree-bounded sparsification by splitting p-bits into ferromagnetic COPY chains."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .core import PBitNetwork


@dataclass
class CopyPlan:
    groups: list[list[int]]
    copy_edges: list[tuple[int, int, float]]
    max_degree: int
    n_original: int = 0
    n_sparse: int = 0
    extra: dict = field(default_factory=dict)

    @property
    def is_identity(self) -> bool:
        return not self.copy_edges

    def energy_offset(self) -> float:
        """Energy of the saturated COPY bonds, added by the sparse network on copy-consistent states."""
        return -float(sum(w for _, _, w in self.copy_edges))

    def to_dict(self) -> dict:
        return {
            "groups": self.groups,
            "copy_edges": [[a, b, w] for a, b, w in self.copy_edges],
            "max_degree": self.max_degree,
            "n_original": self.n_original,
            "n_sparse": self.n_sparse,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "CopyPlan":
        return cls(
            groups=[list(map(int, g)) for g in doc["groups"]],
            copy_edges=[(int(a), int(b), float(w)) for a, b, w in doc["copy_edges"]],
            max_degree=int(doc["max_degree"]),
            n_original=int(doc.get("n_original", len(doc["groups"]))),
            n_sparse=int(doc.get("n_sparse", 0)),
        )

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "CopyPlan":
        return cls.from_dict(json.loads(Path(path).read_text()))


def graph_density(net: PBitNetwork) -> float:
    """rho = 2|E| / (|V|^2 - |V|)."""
    if not net.symmetric:
        raise ValueError("graph density is defined here for symmetric networks")
    if net.n < 2:
        raise ValueError("graph density needs at least two p-bits")
    return 2.0 * net.num_edges / (net.n * net.n - net.n)


def _identity_plan(net: PBitNetwork, max_degree: int) -> CopyPlan:
    return CopyPlan([[i] for i in range(net.n)], [], max_degree, net.n, net.n)


def copy_coupling(net: PBitNetwork, i: int) -> float:
    """Uniform COPY strength that keeps the chain replacing p-bit ``i`` intact.

    Any inconsistent chain can be repaired by flipping one segment; that
    saves at least ``2 J`` of bond energy and costs at most twice the summed
    payload field ``S = sum|w| + |h|`` of the chain, so ``J > S / 2``
    guarantees every ground state keeps all copies aligned.
    """
    lo, hi = net.indptr[i], net.indptr[i + 1]
    return 1.0 + 0.5 * (float(np.abs(net.data[lo:hi]).sum()) + abs(float(net.bias[i])))


def link_couplings(payload) -> np.ndarray:
    """Per-link COPY strengths for a chain whose copies carry ``payload`` field bounds.

    A broken link can be mended by flipping every copy on its lighter side,
    which keeps all other links as they were.  The bond gains ``2 J`` and the
    payload loses at most twice that side's field, so ``J > min(left, right)``
    suffices.  End links get small couplings, the middle ones at most ``S / 2``.
    """
    payload = np.asarray(payload, dtype=float)
    left = np.cumsum(payload)[:-1]
    right = payload.sum() - left
    return 1.0 + np.minimum(left, right)


def sparsify(net: PBitNetwork, max_degree: int = 4, copy_strength=None) -> tuple[PBitNetwork, CopyPlan]:
    """Split every p-bit of degree above ``max_degree`` into a chain of copies.

    A p-bit of degree ``d`` becomes ``ceil(d / (max_degree - 2))`` copies.
    Interior copies spend two links on the chain, end copies one; payload
    edges are dealt round-robin over copies with spare capacity.  Biases are
    split equally.  By default each link gets the smallest coupling that
    provably keeps ground states copy-consistent (see :func:`link_couplings`);
    ``copy_strength`` overrides it with a uniform value (a float, or a
    callable ``(net, i, n_copies) -> J``, e.g. :func:`copy_coupling`).
    """
    if not net.symmetric:
        raise ValueError("sparsify requires a symmetric network")
    if max_degree < 3:
        raise ValueError("max_degree must be at least 3")
    deg = net.degree()
    if net.n == 0 or deg.max() <= max_degree:
        return net, _identity_plan(net, max_degree)

    groups: list[list[int]] = []
    capacity: list[list[int]] = []
    next_id = 0
    for i in range(net.n):
        d = int(deg[i])
        k = 1 if d <= max_degree else math.ceil(d / (max_degree - 2))
        ids = list(range(next_id, next_id + k))
        next_id += k
        groups.append(ids)
        if k == 1:
            capacity.append([max_degree])
        else:
            capacity.append([max_degree - 1] + [max_degree - 2] * (k - 2) + [max_degree - 1])
    n_new = next_id

    cursor = [0] * net.n

    def place(i: int) -> int:
        caps = capacity[i]
        k = len(caps)
        for step in range(k):
            c = (cursor[i] + step) % k
            if caps[c] > 0:
                caps[c] -= 1
                cursor[i] = (c + 1) % k
                return groups[i][c]
        raise RuntimeError("copy capacity exhausted")  # unreachable by construction

    edges: list[tuple[int, int, float]] = []
    for i, j, w in zip(net.rows, net.cols, net.weights):
        edges.append((place(int(i)), place(int(j)), float(w)))

    bias = np.zeros(n_new)
    payload = np.zeros(n_new)
    for a, b, w in edges:
        payload[a] += abs(w)
        payload[b] += abs(w)
    copy_edges: list[tuple[int, int, float]] = []
    for i, ids in enumerate(groups):
        bias[ids] = net.bias[i] / len(ids)
        if len(ids) > 1:
            if copy_strength is None:
                J = link_couplings(payload[ids] + abs(bias[ids]))
            elif callable(copy_strength):
                J = np.full(len(ids) - 1, float(copy_strength(net, i, len(ids))))
            else:
                J = np.full(len(ids) - 1, float(copy_strength))
            for a, b, w in zip(ids[:-1], ids[1:], J):
                copy_edges.append((a, b, float(w)))

    sparse = PBitNetwork.from_edges(n_new, edges + copy_edges, bias)
    plan = CopyPlan(groups, copy_edges, max_degree, net.n, n_new)
    if sparse.degree().max() > max_degree:
        raise AssertionError("degree bound violated")  # structural guarantee, checked every run
    return sparse, plan


def expand(state, plan: CopyPlan) -> np.ndarray:
    """Copy-consistent sparse state for an original-network state."""
    m = np.asarray(state)
    out = np.empty(plan.n_sparse or sum(len(g) for g in plan.groups), dtype=np.int8)
    for i, ids in enumerate(plan.groups):
        out[ids] = m[i]
    return out


@dataclass
class Collapsed:
    state: np.ndarray
    broken: int
    consistent: bool


def collapse(state, plan: CopyPlan) -> Collapsed:
    """Majority vote per copy group; ties resolve to the lowest-index copy."""
    m = np.asarray(state)
    out = np.empty(len(plan.groups), dtype=np.int8)
    broken = 0
    for g, ids in enumerate(plan.groups):
        vals = m[ids]
        total = int(vals.sum())
        if total > 0:
            out[g] = 1
        elif total < 0:
            out[g] = -1
        else:
            out[g] = vals[0]
        if np.any(vals != vals[0]):
            broken += 1
    return Collapsed(out, broken, broken == 0)
