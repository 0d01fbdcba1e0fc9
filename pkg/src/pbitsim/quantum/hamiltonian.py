"""Spin Hamiltonians in the computational basis and exact-diagonalization oracles.

Convention: ``H = -sum_(ij) [Jz sz_i sz_j + Jxy (sx_i sx_j + sy_i sy_j)] - sum_i G_i sx_i``.
Positive couplings are ferromagnetic.  Basis index ``k`` has bit ``i`` set
when qubit ``i`` is up (``sz = +1``), matching the p-bit state indexing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from ..core import NetworkFormatError, SizeGuardError

ED_LIMIT = 14
DENSE_LIMIT = 12
DENSE_DEFAULT = 10


class SignProblemError(ValueError):
    """Hamiltonian has positive off-diagonal elements in the computational basis."""


@dataclass(frozen=True)
class Coupling:
    i: int
    j: int
    Jz: float
    Jxy: float = 0.0


@dataclass
class QuantumHamiltonian:
    """``n`` qubits, two-body ``couplings`` and a transverse field per qubit.

    ``couplings`` is the complete bond list; ``boundary`` only records how a
    chain was built (``"periodic"`` chains include the closing bond).
    """

    n: int
    couplings: list[Coupling]
    gamma: np.ndarray
    boundary: str = "open"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one qubit")
        self.gamma = np.broadcast_to(np.asarray(self.gamma, dtype=float), (self.n,)).copy()
        if self.boundary not in ("open", "periodic"):
            raise ValueError("boundary is 'open' or 'periodic'")
        clean = []
        for c in self.couplings:
            c = c if isinstance(c, Coupling) else Coupling(*c)
            if not (0 <= c.i < self.n and 0 <= c.j < self.n) or c.i == c.j:
                raise ValueError(f"bad bond ({c.i}, {c.j}) for {self.n} qubits")
            clean.append(Coupling(int(c.i), int(c.j), float(c.Jz), float(c.Jxy)))
        self.couplings = clean

    @classmethod
    def chain(cls, n: int, Jz: float = 1.0, Jxy: float = 0.0, gamma: float = 0.0, periodic: bool = True):
        """Nearest-neighbour chain; periodic chains of n > 2 include the bond (n-1, 0)."""
        bonds = [Coupling(i, i + 1, Jz, Jxy) for i in range(n - 1)]
        if periodic and n > 2:
            bonds.append(Coupling(n - 1, 0, Jz, Jxy))
        return cls(n, bonds, np.full(n, float(gamma)), "periodic" if periodic else "open")

    @property
    def is_tfim(self) -> bool:
        return all(c.Jxy == 0 for c in self.couplings)

    def off_diagonal_signs_ok(self) -> bool:
        """True when every off-diagonal matrix element is <= 0 (stoquastic)."""
        return all(c.Jxy >= 0 for c in self.couplings) and bool(np.all(self.gamma >= 0))

    def require_stoquastic(self) -> None:
        if not self.off_diagonal_signs_ok():
            raise SignProblemError(
                "Hamiltonian is not stoquastic in the computational basis (a negative Jxy or transverse "
                "field gives positive off-diagonal elements): a non-negative wavefunction cannot represent "
                "its ground state - the sign problem"
            )

    def diagonal_energy(self, states) -> np.ndarray:
        """Classical ``-sum Jz s_i s_j`` for +-1 configurations (rows)."""
        s = np.atleast_2d(np.asarray(states, dtype=float))
        e = np.zeros(len(s))
        for c in self.couplings:
            e -= c.Jz * s[:, c.i] * s[:, c.j]
        return e

    def matrix(self) -> scipy.sparse.csr_matrix:
        """Sparse 2^n x 2^n matrix."""
        if self.n > ED_LIMIT:
            raise SizeGuardError(f"{self.n} qubits exceed the exact-diagonalization guard of {ED_LIMIT}")
        dim = 1 << self.n
        k = np.arange(dim, dtype=np.int64)
        bits = ((k[:, None] >> np.arange(self.n)) & 1).astype(np.int8) * 2 - 1
        rows = [k]
        cols = [k]
        vals = [self.diagonal_energy(bits)]
        for c in self.couplings:
            if c.Jxy:
                mask = bits[:, c.i] != bits[:, c.j]
                src = k[mask]
                rows.append(src)
                cols.append(src ^ ((1 << c.i) | (1 << c.j)))
                vals.append(np.full(len(src), -2.0 * c.Jxy))
        for i, g in enumerate(self.gamma):
            if g:
                rows.append(k)
                cols.append(k ^ (1 << i))
                vals.append(np.full(dim, -float(g)))
        return scipy.sparse.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
        )

    # persistence
    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "terms": [{"i": c.i, "j": c.j, "Jz": c.Jz, "Jxy": c.Jxy} for c in self.couplings],
            "gamma": [float(g) for g in self.gamma],
            "boundary": self.boundary,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "QuantumHamiltonian":
        try:
            n = int(doc["n"])
            terms = [Coupling(int(t["i"]), int(t["j"]), float(t.get("Jz", 0.0)), float(t.get("Jxy", 0.0)))
                     for t in doc.get("terms", [])]
            gamma = doc.get("gamma", 0.0)
            return cls(n, terms, np.asarray(gamma, dtype=float), doc.get("boundary", "open"))
        except (KeyError, TypeError, ValueError) as exc:
            raise NetworkFormatError(f"invalid Hamiltonian: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=1))

    @classmethod
    def load(cls, path) -> "QuantumHamiltonian":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise NetworkFormatError(f"{path}: not JSON ({exc})") from exc
        return cls.from_dict(doc)


def fig7_hamiltonian(n: int = 12) -> QuantumHamiltonian:
    """Ferromagnetic Heisenberg ring, Jz = 1, Jxy = 0.5, transverse field 1."""
    return QuantumHamiltonian.chain(n, Jz=1.0, Jxy=0.5, gamma=1.0, periodic=True)


@dataclass
class EDResult:
    ground_energy: float
    ground_state: np.ndarray
    energies: np.ndarray | None = None
    vectors: np.ndarray | None = None


def exact_diagonalize(h: QuantumHamiltonian, full: bool | None = None) -> EDResult:
    """Ground energy and vector; the full spectrum too when ``full`` (default for n <= 10).

    The full spectrum uses a dense Hermitian solve.  Beyond that size only
    the ground state is computed, with sparse Lanczos.
    """
    H = h.matrix()
    if full is None:
        full = h.n <= DENSE_DEFAULT
    if full:
        if h.n > DENSE_LIMIT:
            raise SizeGuardError(f"dense spectra are limited to {DENSE_LIMIT} qubits")
        w, v = scipy.linalg.eigh(H.toarray())
        g = v[:, 0]
        return EDResult(float(w[0]), _fix_sign(g), w, v)
    if H.shape[0] <= 2:
        w, v = scipy.linalg.eigh(H.toarray())
        return EDResult(float(w[0]), _fix_sign(v[:, 0]))
    w, v = scipy.sparse.linalg.eigsh(H, k=1, which="SA", v0=np.ones(H.shape[0]))
    return EDResult(float(w[0]), _fix_sign(v[:, 0]))


def _fix_sign(v: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(v)))
    return v if v[k] >= 0 else -v


@dataclass
class ThermalAverages:
    beta: float
    energy: float
    sigma_x: np.ndarray
    sigma_z: np.ndarray
    zz: dict


def thermal_averages(h: QuantumHamiltonian, beta: float, ed: EDResult | None = None) -> ThermalAverages:
    """Canonical averages of H, each sx_i, each sz_i, and sz_i sz_j on every bond."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    ed = ed if ed is not None and ed.energies is not None else exact_diagonalize(h, full=True)
    w, V = ed.energies, ed.vectors
    p = np.exp(-beta * (w - w[0]))
    p /= p.sum()
    dim = 1 << h.n
    k = np.arange(dim)
    bits = ((k[:, None] >> np.arange(h.n)) & 1) * 2 - 1
    amp2 = (V**2) @ p  # diagonal of the density matrix
    sz = amp2 @ bits
    zz = {(c.i, c.j): float(amp2 @ (bits[:, c.i] * bits[:, c.j])) for c in h.couplings}
    sx = np.empty(h.n)
    for i in range(h.n):
        # <n| sx_i |n> = sum_k v_k v_(k ^ bit i)
        sx[i] = float(np.sum(p * np.sum(V * V[k ^ (1 << i)], axis=0)))
    return ThermalAverages(beta, float(p @ w), sx, sz, zz)


def rayleigh_energy(h: QuantumHamiltonian, psi: np.ndarray, H=None) -> float:
    """``<psi|H|psi> / <psi|psi>`` for a dense amplitude vector."""
    H = h.matrix() if H is None else H
    psi = np.asarray(psi, dtype=float)
    return float(psi @ (H @ psi) / (psi @ psi))
