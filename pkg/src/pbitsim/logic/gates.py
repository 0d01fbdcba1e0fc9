"""Invertible gate encodings, verified by enumeration when the library is built."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np


class GateEncodingError(ValueError):
    """An encoding whose ground states are not exactly its truth table."""


@dataclass(frozen=True, eq=False)
class GateSpec:
    """Ising encoding of a logic gate.

    Terminals are ordered inputs first, output last.  ``hidden`` trailing
    terminals are internal nets of composed gates; ``truth_rows`` covers the
    visible terminals only.
    """

    name: str
    terminals: tuple[str, ...]
    W: np.ndarray
    h: np.ndarray
    truth_rows: frozenset
    hidden: int = 0
    inverted: tuple[bool, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.terminals)

    @property
    def visible(self) -> int:
        return self.arity - self.hidden

    def energy(self, m) -> float:
        m = np.asarray(m, dtype=float)
        return float(-(0.5 * m @ self.W @ m + self.h @ m))

    @cached_property
    def ground_energy(self) -> float:
        return self.spectrum()[0]

    def spectrum(self) -> tuple[float, float, frozenset]:
        """(ground energy, gap to the lowest invalid state, visible ground-state rows)."""
        states = np.array(list(itertools.product((-1, 1), repeat=self.arity)))
        E = -(0.5 * np.einsum("si,ij,sj->s", states, self.W, states) + states @ self.h)
        e0 = E.min()
        ground = frozenset(tuple(int(x) for x in s[: self.visible]) for s, e in zip(states, E) if e <= e0 + 1e-12)
        invalid = [e for s, e in zip(states, E) if tuple(int(x) for x in s[: self.visible]) not in self.truth_rows]
        gap = (min(invalid) - e0) if invalid else np.inf
        return float(e0), float(gap), ground

    def verify(self) -> float:
        """Raise unless ground states are exactly the truth rows; return the gap."""
        if not np.allclose(self.W, self.W.T) or np.any(np.diag(self.W) != 0):
            raise GateEncodingError(f"{self.name}: W must be symmetric with zero diagonal")
        e0, gap, ground = self.spectrum()
        if ground != self.truth_rows:
            raise GateEncodingError(f"{self.name}: ground states {sorted(ground)} != truth table {sorted(self.truth_rows)}")
        if not gap > 1e-9:
            raise GateEncodingError(f"{self.name}: no positive gap above the truth-table states")
        return gap

    def invert_inputs(self, mask) -> "GateSpec":
        """The same gate reading the marked inputs through a negation.

        Substituting ``-m`` for a terminal flips the sign of its couplings and
        bias, so no NOT p-bit is needed.
        """
        mask = tuple(bool(x) for x in mask)
        n_in = self.visible - 1
        if len(mask) != n_in:
            raise ValueError(f"{self.name}: mask needs {n_in} entries")
        if not any(mask):
            return self
        prior = self.inverted or (False,) * n_in
        d = np.ones(self.arity)
        d[:n_in][np.array(mask)] = -1.0
        rows = frozenset(tuple(int(x * y) for x, y in zip(row, d)) for row in self.truth_rows)
        label = "".join("~" if x else "." for x in mask)
        g = GateSpec(f"{self.name}[{label}]", self.terminals, d[:, None] * self.W * d[None, :], d * self.h, rows,
                     self.hidden, tuple(a != b for a, b in zip(prior, mask)))
        g.verify()
        return g

    def edges(self):
        for a in range(self.arity):
            for b in range(a + 1, self.arity):
                if self.W[a, b] != 0:
                    yield a, b, float(self.W[a, b])


def truth_table(fn, n_inputs: int) -> frozenset:
    """Rows (inputs..., output) in bipolar form for a boolean function."""
    rows = set()
    for bits in itertools.product((False, True), repeat=n_inputs):
        out = fn(*bits)
        rows.add(tuple(1 if b else -1 for b in (*bits, out)))
    return frozenset(rows)


def _spec(name, terminals, W, h, rows, hidden=0) -> GateSpec:
    g = GateSpec(name, tuple(terminals), np.array(W, dtype=float), np.array(h, dtype=float), rows, hidden)
    g.verify()
    return g


def _chain(name, base: GateSpec, rows) -> GateSpec:
    """Three-input gate as two chained 2-input gates: (a op b) -> t, (t op c) -> out."""
    # terminal order: a, b, c, out, t(hidden)
    W = np.zeros((5, 5))
    h = np.zeros(5)
    for local in ((0, 1, 4), (4, 2, 3)):
        idx = np.array(local)
        W[np.ix_(idx, idx)] += base.W
        h[idx] += base.h
    return _spec(name, ("a", "b", "c", "out", "t"), W, h, rows, hidden=1)


@lru_cache(maxsize=1)
def gate_library() -> dict[str, GateSpec]:
    """NOT, COPY, AND2, OR2 and chained AND3/OR3, each with gap 4."""
    lib = {}
    lib["NOT"] = _spec("NOT", ("a", "out"), [[0, -2], [-2, 0]], [0, 0], truth_table(lambda a: not a, 1))
    lib["COPY"] = _spec("COPY", ("a", "out"), [[0, 2], [2, 0]], [0, 0], truth_table(lambda a: a, 1))
    W2 = [[0, -1, 2], [-1, 0, 2], [2, 2, 0]]
    lib["AND2"] = _spec("AND2", ("a", "b", "out"), W2, [1, 1, -2], truth_table(lambda a, b: a and b, 2))
    lib["OR2"] = _spec("OR2", ("a", "b", "out"), W2, [-1, -1, 2], truth_table(lambda a, b: a or b, 2))
    lib["AND3"] = _chain("AND3", lib["AND2"], truth_table(lambda a, b, c: a and b and c, 3))
    lib["OR3"] = _chain("OR3", lib["OR2"], truth_table(lambda a, b, c: a or b or c, 3))
    return lib


def gate(name: str) -> GateSpec:
    try:
        return gate_library()[name]
    except KeyError:
        raise KeyError(f"unknown gate {name!r}; available: {sorted(gate_library())}") from None
