"""Minor embedding of bipartite RBMs onto chimera p-bit hardware.

A chimera graph is a ``rows x cols`` grid of ``K_{L,L}`` cells.  Each cell
has ``L`` vertical and ``L`` horizontal qubits; vertical qubit ``k`` couples
to vertical qubit ``k`` in the cells above and below, horizontal qubit ``k``
to horizontal qubit ``k`` in the cells left and right.  The standard
``K_{v,h}`` embedding runs each visible unit along a row of horizontal
qubits and each hidden unit down a column of vertical qubits; the two
chains cross in exactly one cell, where the logical weight is placed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..core import PBitNetwork
from ..rng import RandomStream, derive_seed
from ..samplers import ChainBatch, ColoringPlan, color_graph
from ..sparsify import CopyPlan, collapse


class EmbeddingError(ValueError):
    """The requested logical graph does not fit the chimera grid."""


@dataclass
class EmbeddingMap:
    """Logical node -> ordered chain of physical p-bits (visible nodes first, then hidden)."""

    chains: list[list[int]]
    n_visible: int
    n_hidden: int
    rows: int
    cols: int
    cell_size: int
    chain_coupling: float
    chimera_nodes: list[tuple[int, int, int, int]]  # physical p-bit -> (row, col, side, k); side 0 vertical
    logical_edges: dict  # (visible p, hidden q) -> (physical a, physical b)

    @property
    def n_physical(self) -> int:
        return len(self.chimera_nodes)

    def chimera_adjacent(self, a: int, b: int) -> bool:
        r1, c1, s1, k1 = self.chimera_nodes[a]
        r2, c2, s2, k2 = self.chimera_nodes[b]
        if (r1, c1) == (r2, c2):
            return s1 != s2
        if s1 != s2 or k1 != k2:
            return False
        if s1 == 0:
            return c1 == c2 and abs(r1 - r2) == 1
        return r1 == r2 and abs(c1 - c2) == 1

    def validate(self) -> None:
        """Chains vertex-disjoint and connected; every logical edge realised by a hardware edge."""
        seen = set()
        for g, chain in enumerate(self.chains):
            if not chain:
                raise EmbeddingError(f"logical node {g} has an empty chain")
            if seen.intersection(chain):
                raise EmbeddingError(f"chain of logical node {g} overlaps another chain")
            seen.update(chain)
            for a, b in zip(chain, chain[1:]):
                if not self.chimera_adjacent(a, b):
                    raise EmbeddingError(f"chain of logical node {g} is not connected")
        for p in range(self.n_visible):
            for q in range(self.n_hidden):
                a, b = self.logical_edges.get((p, q), (None, None))
                if a is None or a not in self.chains[p] or b not in self.chains[self.n_visible + q]:
                    raise EmbeddingError(f"logical edge ({p}, {q}) is not realised")
                if not self.chimera_adjacent(a, b):
                    raise EmbeddingError(f"logical edge ({p}, {q}) uses a non-hardware coupler")

    def copy_plan(self) -> CopyPlan:
        edges = [(min(a, b), max(a, b), self.chain_coupling)
                 for chain in self.chains for a, b in zip(chain, chain[1:])]
        return CopyPlan([list(c) for c in self.chains], edges, 0, len(self.chains), self.n_physical)

    def physical_network(self, W, a=None, b=None) -> PBitNetwork:
        """Physical network for logical weights ``W`` (v x h) and biases split evenly along chains."""
        W = np.asarray(W, dtype=float)
        a = np.zeros(self.n_visible) if a is None else np.asarray(a, dtype=float)
        b = np.zeros(self.n_hidden) if b is None else np.asarray(b, dtype=float)
        if W.shape != (self.n_visible, self.n_hidden):
            raise ValueError(f"W must be {self.n_visible} x {self.n_hidden}")
        bias = np.zeros(self.n_physical)
        for g, h in enumerate(np.concatenate([a, b])):
            bias[self.chains[g]] = h / len(self.chains[g])
        edges = [(x, y, self.chain_coupling) for chain in self.chains for x, y in zip(chain, chain[1:])]
        edges += [(x, y, W[p, q]) for (p, q), (x, y) in self.logical_edges.items()]
        return PBitNetwork.from_edges(self.n_physical, edges, bias)

    def collapse_batch(self, M) -> tuple[np.ndarray, float]:
        """Majority-vote logical states for each row and the fraction of broken chains."""
        plan = self.copy_plan()
        out = np.empty((len(M), len(self.chains)), dtype=np.int8)
        broken = 0
        for r, row in enumerate(M):
            c = collapse(row, plan)
            out[r] = c.state
            broken += c.broken
        return out, broken / (len(M) * len(self.chains))

    def summary(self) -> dict:
        lengths = [len(c) for c in self.chains]
        return {
            "n_visible": self.n_visible,
            "n_hidden": self.n_hidden,
            "grid": [self.rows, self.cols],
            "cell_size": self.cell_size,
            "physical_pbits": self.n_physical,
            "chain_coupling": self.chain_coupling,
            "visible_chain_length": lengths[0] if self.n_visible else 0,
            "hidden_chain_length": lengths[-1] if self.n_hidden else 0,
            "max_chain_length": max(lengths),
            "logical_edges": len(self.logical_edges),
        }


def embed_bipartite_chimera(n_visible: int, n_hidden: int, cell_size: int = 4, chain_coupling: float = 1.0,
                            weights=None, visible_bias=None, hidden_bias=None,
                            grid: tuple[int, int] | None = None) -> tuple[EmbeddingMap, PBitNetwork]:
    """Embed ``K_{v,h}`` on a ``ceil(v/L) x ceil(h/L)`` chimera grid (or a given ``grid``).

    Visible ``p`` uses horizontal qubit ``p % L`` across every cell of row
    ``p // L``; hidden ``q`` uses vertical qubit ``q % L`` down every cell of
    column ``q // L``.  Only qubits that carry a chain are instantiated.
    """
    if n_visible < 1 or n_hidden < 1 or cell_size < 1:
        raise ValueError("need at least one visible, one hidden unit and a positive cell size")
    need = (-(-n_visible // cell_size), -(-n_hidden // cell_size))
    rows, cols = grid if grid is not None else need
    if rows < need[0] or cols < need[1]:
        raise EmbeddingError(f"K_{{{n_visible},{n_hidden}}} needs a {need[0]} x {need[1]} grid, got {rows} x {cols}")
    rows, cols = need  # chains never use more than the needed cells
    index: dict[tuple[int, int, int, int], int] = {}
    nodes: list[tuple[int, int, int, int]] = []

    def node(key):
        if key not in index:
            index[key] = len(nodes)
            nodes.append(key)
        return index[key]

    chains = []
    for p in range(n_visible):
        R, k = divmod(p, cell_size)
        chains.append([node((R, C, 1, k)) for C in range(cols)])
    for q in range(n_hidden):
        C, k = divmod(q, cell_size)
        chains.append([node((R, C, 0, k)) for R in range(rows)])
    logical = {}
    for p in range(n_visible):
        R, kp = divmod(p, cell_size)
        for q in range(n_hidden):
            C, kq = divmod(q, cell_size)
            logical[(p, q)] = (index[(R, C, 1, kp)], index[(R, C, 0, kq)])
    emb = EmbeddingMap(chains, n_visible, n_hidden, rows, cols, cell_size, float(chain_coupling), nodes, logical)
    emb.validate()
    W = np.zeros((n_visible, n_hidden)) if weights is None else weights
    return emb, emb.physical_network(W, visible_bias, hidden_bias)


@dataclass
class EmbeddedSamples:
    states: np.ndarray          # (samples, logical nodes) after majority vote
    broken_fraction: float
    plan: ColoringPlan


def sample_embedded_rbm(net: PBitNetwork, emb: EmbeddingMap, beta: float = 1.0, sweeps: int = 1000, rng=0,
                        chains: int = 16, burn_in: int = 100) -> EmbeddedSamples:
    """Colored Gibbs on the physical network; every sweep of every chain yields one collapsed sample."""
    if net.n != emb.n_physical:
        raise ValueError("network does not match the embedding")
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    plan = color_graph(net)
    gen = np.random.default_rng(derive_seed(seed, 0xE3))
    M = np.where(gen.random((chains, net.n)) < 0.5, -1, 1).astype(np.int8)
    batch = ChainBatch(net, plan, M, derive_seed(seed, 0xE4))
    batch.run(np.full(burn_in, float(beta)))
    out = []
    broken = 0.0
    for _ in range(sweeps):
        logical, frac = emb.collapse_batch(batch.run(float(beta)))
        out.append(logical)
        broken += frac
    return EmbeddedSamples(np.concatenate(out), broken / max(sweeps, 1), plan)
