"""Suzuki-Trotter mapping of the transverse-field Ising model onto replicated p-bits."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core import PBitNetwork
from ..rng import RandomStream, derive_seed
from ..samplers import ChainBatch, ColoringPlan, color_graph
from .hamiltonian import QuantumHamiltonian

J_PERP_CAP = 50.0  # in units of 1/beta


def replica_coupling(beta: float, gamma: float, replicas: int) -> float:
    """``J_perp = ln coth(beta * gamma / r) / (2 beta)``, capped at ``50 / beta``."""
    if beta <= 0 or replicas < 2 or gamma < 0:
        raise ValueError("need beta > 0, replicas >= 2 and gamma >= 0")
    x = beta * gamma / replicas
    if x <= 0:
        return J_PERP_CAP / beta
    # ln coth x = -ln tanh x; tanh underflows only for x below ~1e-308
    t = math.tanh(x)
    j = -math.log(t) / (2.0 * beta) if t > 0 else math.inf
    return min(j, J_PERP_CAP / beta)


@dataclass
class TrotterLattice:
    """``r`` coupled copies of an ``n``-qubit Ising model; p-bit ``k * n + i`` is qubit ``i`` in slice ``k``."""

    hamiltonian: QuantumHamiltonian
    beta: float
    replicas: int
    j_perp: np.ndarray
    network: PBitNetwork
    plan: ColoringPlan

    @property
    def n(self) -> int:
        return self.hamiltonian.n

    def slices(self, states) -> np.ndarray:
        """Reshape p-bit states ``(..., n*r)`` to ``(..., r, n)``."""
        s = np.asarray(states)
        return s.reshape(s.shape[:-1] + (self.replicas, self.n))


def trotterize_tfim(h: QuantumHamiltonian, beta: float, replicas: int) -> TrotterLattice:
    """Classical ``(n * r)``-p-bit network whose Boltzmann law at ``beta`` is the Trotterized TFIM.

    Intra-slice couplings are ``Jz / r``; each qubit's neighbouring slices
    are joined ferromagnetically by ``J_perp`` with periodic closure (for
    ``r = 2`` the two bonds between the slices add up).
    """
    if not h.is_tfim:
        raise ValueError("trotterize_tfim handles Jz couplings and transverse fields only (Jxy must be 0)")
    if np.any(h.gamma < 0):
        raise ValueError("transverse fields must be non-negative")
    n, r = h.n, int(replicas)
    jp = np.array([replica_coupling(beta, float(g), r) for g in h.gamma])
    edges = []
    for k in range(r):
        base = k * n
        for c in h.couplings:
            if c.Jz:
                edges.append((base + c.i, base + c.j, c.Jz / r))
        nxt = ((k + 1) % r) * n
        for i in range(n):
            edges.append((base + i, nxt + i, float(jp[i])))
    net = PBitNetwork.from_edges(n * r, edges, np.zeros(n * r))
    return TrotterLattice(h, float(beta), r, jp, net, color_graph(net))


@dataclass
class TrotterEstimate:
    energy: float
    energy_se: float
    sigma_x: np.ndarray
    sigma_x_se: np.ndarray
    zz: dict
    zz_se: dict
    samples: int

    def to_dict(self) -> dict:
        return {
            "energy": self.energy,
            "energy_se": self.energy_se,
            "sigma_x": [float(x) for x in self.sigma_x],
            "sigma_x_se": [float(x) for x in self.sigma_x_se],
            "zz": {f"{i}-{j}": v for (i, j), v in self.zz.items()},
            "zz_se": {f"{i}-{j}": v for (i, j), v in self.zz_se.items()},
            "samples": self.samples,
        }


def _batch_se(series: np.ndarray, batches: int = 20) -> np.ndarray:
    """Standard error from batch means along axis 0 (handles autocorrelation)."""
    T = len(series)
    b = max(2, min(batches, T))
    usable = (T // b) * b
    means = series[:usable].reshape(b, -1, *series.shape[1:]).mean(axis=1)
    return means.std(axis=0, ddof=1) / np.sqrt(b)


def sample_trotter(lattice: TrotterLattice, sweeps: int = 10000, rng=0, chains: int = 4,
                   burn_in: float = 0.1) -> TrotterEstimate:
    """Colored Gibbs on the replicated lattice with path-integral estimators.

    ``<sz sz>`` averages over slices.  ``<sx_i>`` averages, over the ``r``
    imaginary-time bonds of qubit ``i``, ``tanh(eps G)`` for aligned and
    ``coth(eps G)`` for anti-aligned neighbours (``eps = beta / r``): the
    ratio of the ``sx``-inserted to the plain transfer-matrix element.
    """
    h, r, n = lattice.hamiltonian, lattice.replicas, lattice.n
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    gen = np.random.default_rng(derive_seed(seed, 0x7207))
    M = np.where(gen.random((chains, n * r)) < 0.5, -1, 1).astype(np.int8)
    batch = ChainBatch(lattice.network, lattice.plan, M, derive_seed(seed, 0x7208))
    burn = int(burn_in * sweeps)
    batch.run(np.full(max(burn, 0), lattice.beta))
    eps = lattice.beta / r
    gam = h.gamma
    with np.errstate(divide="ignore", over="ignore"):
        t_al = np.tanh(eps * gam)
        t_anti = np.where(gam > 0, 1.0 / np.tanh(eps * gam), 0.0)
    bonds = [(c.i, c.j) for c in h.couplings]
    jz = np.array([c.Jz for c in h.couplings])
    kept = max(sweeps - burn, 1)
    sx_series = np.empty((kept, n))
    zz_series = np.empty((kept, len(bonds)))
    for s in range(kept):
        S = lattice.slices(batch.run(lattice.beta)).astype(np.float64)  # (chains, r, n)
        aligned = S * np.roll(S, -1, axis=1) > 0
        sx_series[s] = np.where(aligned, t_al, t_anti).mean(axis=(0, 1))
        if bonds:
            zz_series[s] = np.stack([(S[:, :, i] * S[:, :, j]).mean(axis=(0, 1)) for i, j in bonds])
    e_series = -(zz_series @ jz if bonds else np.zeros(kept)) - sx_series @ gam
    zz_mean = zz_series.mean(axis=0)
    zz_se = _batch_se(zz_series) if bonds else np.zeros(0)
    return TrotterEstimate(
        energy=float(e_series.mean()),
        energy_se=float(_batch_se(e_series)),
        sigma_x=sx_series.mean(axis=0),
        sigma_x_se=_batch_se(sx_series),
        zz={b: float(v) for b, v in zip(bonds, zz_mean)},
        zz_se={b: float(v) for b, v in zip(bonds, zz_se)},
        samples=kept * chains,
    )
