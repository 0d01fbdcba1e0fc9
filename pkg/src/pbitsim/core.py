"""p-bit networks, the single p-bit update, energies and the exact Boltzmann oracle."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from numba import njit

from .rng import RandomStream, draw_symmetric

ENUMERATION_LIMIT = 24
SATURATION = 20.0


class SizeGuardError(ValueError):
    """Requested computation exceeds a desk-scale size guard."""


class NetworkFormatError(ValueError):
    """Malformed network or problem file."""


@dataclass(frozen=True, eq=False)
class PBitNetwork:
    """Sparse p-bit network: couplings ``W``, biases ``h`` and a symmetry flag.

    Symmetric networks store each coupling once with ``i < j``.  For directed
    (Bayesian) networks an entry ``(i, j, w)`` means p-bit ``i`` reads p-bit
    ``j`` with weight ``w``, i.e. ``j`` is a parent of ``i``.

    ``binary`` marks networks written in the {0, 1} convention; ``offset`` is
    an additive energy constant kept so conversions preserve energies exactly.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    weights: np.ndarray
    bias: np.ndarray
    symmetric: bool = True
    binary: bool = False
    offset: float = 0.0
    indptr: np.ndarray = field(init=False, repr=False)
    indices: np.ndarray = field(init=False, repr=False)
    data: np.ndarray = field(init=False, repr=False)
    _slot_edge: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        rows = np.ascontiguousarray(self.rows, dtype=np.int64)
        cols = np.ascontiguousarray(self.cols, dtype=np.int64)
        w = np.ascontiguousarray(self.weights, dtype=np.float64)
        h = np.ascontiguousarray(self.bias, dtype=np.float64)
        n = int(self.n)
        if n < 0:
            raise ValueError("n must be non-negative")
        if h.shape != (n,):
            raise ValueError(f"bias must have length {n}, got {h.shape}")
        if not (rows.shape == cols.shape == w.shape):
            raise ValueError("edge arrays must have equal length")
        if len(rows) and (rows.min() < 0 or cols.min() < 0 or rows.max() >= n or cols.max() >= n):
            raise IndexError("edge endpoint out of range")
        if np.any(rows == cols):
            raise ValueError("self-couplings are not allowed")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(h)) and math.isfinite(self.offset)):
            raise ValueError("weights, biases and offset must be finite")
        if self.symmetric and np.any(rows >= cols):
            raise ValueError("symmetric networks store edges canonically with i < j")
        for name, arr in (("rows", rows), ("cols", cols), ("weights", w), ("bias", h)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

        if self.symmetric:
            src = np.concatenate([rows, cols])
            dst = np.concatenate([cols, rows])
            eid = np.concatenate([np.arange(len(rows)), np.arange(len(rows))])
        else:
            src, dst, eid = rows, cols, np.arange(len(rows))
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, src + 1, 1)
        np.cumsum(indptr, out=indptr)
        indices = np.ascontiguousarray(dst[order], dtype=np.int64)
        slot_edge = np.ascontiguousarray(eid[order], dtype=np.int64)
        data = np.ascontiguousarray(w[slot_edge])
        for arr in (indptr, indices, data, slot_edge):
            arr.setflags(write=False)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "_slot_edge", slot_edge)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[float]] = (),
        bias: Sequence[float] | None = None,
        symmetric: bool = True,
        **kwargs,
    ) -> "PBitNetwork":
        """Build from ``(i, j, w)`` triples; duplicates are summed, symmetric edges canonicalised."""
        acc: dict[tuple[int, int], float] = {}
        for i, j, w in edges:
            i, j = int(i), int(j)
            if i == j:
                raise ValueError(f"self-coupling on p-bit {i}")
            if symmetric and i > j:
                i, j = j, i
            acc[(i, j)] = acc.get((i, j), 0.0) + float(w)
        keys = sorted(acc)
        rows = np.array([k[0] for k in keys], dtype=np.int64)
        cols = np.array([k[1] for k in keys], dtype=np.int64)
        w = np.array([acc[k] for k in keys], dtype=np.float64)
        h = np.zeros(n) if bias is None else np.asarray(bias, dtype=np.float64)
        return cls(n, rows, cols, w, h, symmetric=symmetric, **kwargs)

    @classmethod
    def from_dense(cls, W: np.ndarray, h: np.ndarray, tol: float = 0.0) -> "PBitNetwork":
        W = np.asarray(W, dtype=np.float64)
        if not np.allclose(W, W.T):
            raise ValueError("dense coupling matrix must be symmetric")
        i, j = np.nonzero(np.triu(np.abs(W) > tol, k=1))
        return cls(len(h), i, j, W[i, j], np.asarray(h, dtype=np.float64))

    @property
    def num_edges(self) -> int:
        return len(self.weights)

    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def dense(self) -> np.ndarray:
        """Dense ``W`` with ``W[i, j]`` the weight p-bit ``i`` reads from ``j``."""
        W = np.zeros((self.n, self.n))
        np.add.at(W, (self.rows, self.cols), self.weights)
        if self.symmetric:
            np.add.at(W, (self.cols, self.rows), self.weights)
        return W

    def edge_list(self) -> list[tuple[int, int, float]]:
        return [(int(i), int(j), float(w)) for i, j, w in zip(self.rows, self.cols, self.weights)]

    def with_parameters(self, weights=None, bias=None) -> "PBitNetwork":
        """Same topology, new couplings and/or biases."""
        return PBitNetwork(
            self.n,
            self.rows,
            self.cols,
            self.weights if weights is None else np.asarray(weights, dtype=np.float64),
            self.bias if bias is None else np.asarray(bias, dtype=np.float64),
            symmetric=self.symmetric,
            binary=self.binary,
            offset=self.offset,
        )

    # interchange format
    def to_dict(self) -> dict:
        doc = {
            "n": self.n,
            "symmetric": self.symmetric,
            "edges": [[i, j, w] for i, j, w in self.edge_list()],
            "bias": [float(x) for x in self.bias],
        }
        if self.binary:
            doc["convention"] = "binary"
        if self.offset:
            doc["offset"] = self.offset
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "PBitNetwork":
        try:
            n = int(doc["n"])
            edges = doc.get("edges", [])
            bias = doc.get("bias") or [0.0] * n
            symmetric = bool(doc.get("symmetric", True))
            if any(len(e) != 3 for e in edges):
                raise NetworkFormatError("each edge must be [i, j, w]")
            return cls.from_edges(
                n,
                edges,
                bias,
                symmetric=symmetric,
                binary=doc.get("convention", "bipolar") == "binary",
                offset=float(doc.get("offset", 0.0)),
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, NetworkFormatError):
                raise
            raise NetworkFormatError(f"invalid network document: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "PBitNetwork":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"{path}: {exc}") from exc
        if "network" in doc and isinstance(doc["network"], dict):
            doc = doc["network"]
        return cls.from_dict(doc)


def random_network(
    n: int,
    rng: np.random.Generator,
    density: float = 1.0,
    weight_scale: float = 1.0,
    bias_scale: float = 0.0,
) -> PBitNetwork:
    """Random symmetric net with couplings uniform in [-weight_scale, weight_scale]."""
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < density
    w = rng.uniform(-weight_scale, weight_scale, size=int(keep.sum()))
    h = rng.uniform(-bias_scale, bias_scale, size=n) if bias_scale else np.zeros(n)
    return PBitNetwork(n, iu[keep], ju[keep], w, h)


def validate_state(state, n: int | None = None) -> np.ndarray:
    m = np.asarray(state)
    if m.ndim != 1 or (n is not None and len(m) != n):
        raise ValueError(f"state must be a vector of length {n}")
    if not np.all((m == 1) | (m == -1)):
        raise ValueError("spin states take values in {-1, +1}")
    return m.astype(np.int8)


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    return (2 * rng.integers(0, 2, size=n) - 1).astype(np.int8)


def index_to_state(k: int, n: int) -> np.ndarray:
    """Bit ``i`` of ``k`` set means ``m_i = +1``."""
    return (2 * ((k >> np.arange(n)) & 1) - 1).astype(np.int8)


def state_to_index(m) -> int:
    m = np.asarray(m)
    return int(np.sum((m > 0).astype(np.int64) << np.arange(len(m), dtype=np.int64)))


def all_states(n: int) -> np.ndarray:
    """All 2**n bipolar states, row ``k`` matching ``index_to_state(k, n)``."""
    if n > ENUMERATION_LIMIT:
        raise SizeGuardError(f"enumeration of 2^{n} states exceeds guard 2^{ENUMERATION_LIMIT}")
    k = np.arange(2**n, dtype=np.int64)[:, None]
    return (2 * ((k >> np.arange(n)) & 1) - 1).astype(np.int8)


@njit(cache=True, inline="always")
def _local_field(indptr, indices, data, bias, m, i):
    acc = bias[i]
    for s in range(indptr[i], indptr[i + 1]):
        acc += data[s] * m[indices[s]]
    return acc


@njit(cache=True, inline="always")
def _pbit_sample(x, r):
    """sign(tanh(x) - r) with sign(0) = +1 and saturation past |x| > 20."""
    if x > SATURATION:
        return 1
    if x < -SATURATION:
        return -1
    return 1 if math.tanh(x) >= r else -1


@njit(cache=True, inline="always")
def _update_site(indptr, indices, data, bias, m, i, beta, keys, counters):
    x = beta * _local_field(indptr, indices, data, bias, m, i)
    r = draw_symmetric(keys[i], counters[i])
    counters[i] += 1
    return _pbit_sample(x, r)


def pbit_input(net: PBitNetwork, state, i: int) -> float:
    """Synaptic input ``I_i = sum_j W_ij m_j + h_i`` over stored neighbors of ``i``."""
    if not 0 <= i < net.n:
        raise IndexError(f"p-bit index {i} out of range for n={net.n}")
    m = np.asarray(state, dtype=np.float64)
    lo, hi = net.indptr[i], net.indptr[i + 1]
    return float(net.bias[i] + np.dot(net.data[lo:hi], m[net.indices[lo:hi]]))


def pbit_probability(beta: float, field_value: float) -> float:
    """Probability that a p-bit with input ``field_value`` outputs +1."""
    return 0.5 * (1.0 + math.tanh(beta * field_value))


def pbit_update(net: PBitNetwork, state, i: int, beta: float, rng: RandomStream) -> int:
    """New value of ``m_i``; consumes exactly one draw from substream ``i``."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    x = beta * pbit_input(net, state, i)
    return int(_pbit_sample(x, rng.next(i)))


def energy(net: PBitNetwork, state) -> float:
    """Ising energy ``-(sum_{i<j} W_ij m_i m_j + sum_i h_i m_i) + offset``.

    Binary-convention networks are evaluated on 0/1 states.
    """
    if not net.symmetric:
        raise ValueError("energy is undefined for directed (asymmetric) networks")
    m = np.asarray(state, dtype=np.float64)
    pair = np.dot(net.weights, m[net.rows] * m[net.cols])
    return float(-(pair + np.dot(net.bias, m)) + net.offset)


def energies(net: PBitNetwork, states: np.ndarray) -> np.ndarray:
    """Vectorised :func:`energy` over the rows of ``states``."""
    if not net.symmetric:
        raise ValueError("energy is undefined for directed (asymmetric) networks")
    S = np.asarray(states, dtype=np.float64)
    pair = (S[:, net.rows] * S[:, net.cols]) @ net.weights if net.num_edges else 0.0
    return -(pair + S @ net.bias) + net.offset


def _enumerated_energies(net: PBitNetwork) -> np.ndarray:
    if net.n > ENUMERATION_LIMIT:
        raise SizeGuardError(f"exact enumeration refused for n={net.n} > {ENUMERATION_LIMIT}")
    S = all_states(net.n)
    if net.binary:
        S = (S + 1) // 2
    # chunk to bound memory on the largest sizes
    out = np.empty(len(S))
    step = 1 << 16
    for lo in range(0, len(S), step):
        out[lo : lo + step] = energies(net, S[lo : lo + step])
    return out


def exact_boltzmann(net: PBitNetwork, beta: float) -> np.ndarray:
    """Boltzmann probabilities ``exp(-beta E)/Z`` over all ``2**n`` states (index order)."""
    if not net.symmetric:
        raise ValueError("Boltzmann law requires a symmetric network")
    E = _enumerated_energies(net)
    logits = -beta * E
    logits -= logits.max()
    p = np.exp(logits)
    return p / p.sum()


def ground_states(net: PBitNetwork, tol: float = 1e-9) -> tuple[float, np.ndarray]:
    """Minimum energy and the indices of every state attaining it."""
    E = _enumerated_energies(net)
    e0 = E.min()
    return float(e0), np.flatnonzero(E <= e0 + tol)


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)).sum())


def to_binary(obj):
    """Bipolar -> binary.  States map m -> (m+1)/2; networks keep the Boltzmann law."""
    if isinstance(obj, PBitNetwork):
        if obj.binary:
            return obj
        if not obj.symmetric:
            raise ValueError("convention change is defined for symmetric networks")
        Wsum = np.zeros(obj.n)
        np.add.at(Wsum, obj.rows, obj.weights)
        np.add.at(Wsum, obj.cols, obj.weights)
        offset = obj.offset - float(obj.weights.sum()) + float(obj.bias.sum())
        return PBitNetwork(
            obj.n, obj.rows, obj.cols, 4.0 * obj.weights, 2.0 * obj.bias - 2.0 * Wsum,
            binary=True, offset=offset,
        )
    m = validate_state(obj)
    return ((m + 1) // 2).astype(np.int8)


def to_bipolar(obj):
    """Binary -> bipolar; inverse of :func:`to_binary`."""
    if isinstance(obj, PBitNetwork):
        if not obj.binary:
            return obj
        Wsum = np.zeros(obj.n)
        np.add.at(Wsum, obj.rows, obj.weights)
        np.add.at(Wsum, obj.cols, obj.weights)
        offset = obj.offset - 0.25 * float(obj.weights.sum()) - 0.5 * float(obj.bias.sum())
        return PBitNetwork(
            obj.n, obj.rows, obj.cols, 0.25 * obj.weights, 0.5 * obj.bias + 0.25 * Wsum,
            binary=False, offset=offset,
        )
    s = np.asarray(obj)
    if not np.all((s == 0) | (s == 1)):
        raise ValueError("binary states take values in {0, 1}")
    return (2 * s - 1).astype(np.int8)


def bipolar_binary_convert(obj, direction: str):
    """``direction`` is ``"to_binary"`` or ``"to_bipolar"``."""
    if direction == "to_binary":
        return to_binary(obj)
    if direction == "to_bipolar":
        return to_bipolar(obj)
    raise ValueError(f"unknown direction {direction!r}")


def random_regular_network(n: int, degree: int, rng: np.random.Generator, weight_scale: float = 1.0) -> PBitNetwork:
    """Random ``degree``-regular symmetric net (``n * degree`` must be even) with uniform couplings."""
    import networkx as nx

    g = nx.random_regular_graph(degree, n, seed=int(rng.integers(2**31)))
    e = np.array(sorted((min(a, b), max(a, b)) for a, b in g.edges()), dtype=np.int64).reshape(-1, 2)
    w = rng.uniform(-weight_scale, weight_scale, size=len(e))
    return PBitNetwork(n, e[:, 0], e[:, 1], w, np.zeros(n))
