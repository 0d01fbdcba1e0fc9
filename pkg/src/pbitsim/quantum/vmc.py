"""Variational Monte Carlo with a restricted-Boltzmann-machine amplitude sampled by p-bits.

The RBM acts on +-1 spins: ``p(v) ~ exp(a.v) prod_j 2 cosh(b_j + sum_i v_i W_ij)``
and the wavefunction is ``psi(v) = sqrt(p(v))``, valid for stoquastic
Hamiltonians whose ground state is non-negative.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..core import NetworkFormatError, PBitNetwork
from ..rng import RandomStream, derive_seed
from ..samplers import ChainBatch, color_graph
from .hamiltonian import DENSE_LIMIT, QuantumHamiltonian, exact_diagonalize

LN2 = float(np.log(2.0))


def _logcosh(x):
    return np.logaddexp(x, -x) - LN2


@dataclass
class RBMWavefunction:
    a: np.ndarray
    b: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        self.a = np.asarray(self.a, dtype=float).copy()
        self.b = np.asarray(self.b, dtype=float).copy()
        self.W = np.asarray(self.W, dtype=float).copy()
        if self.W.shape != (len(self.a), len(self.b)):
            raise ValueError(f"W must be {len(self.a)} x {len(self.b)}")
        if not all(np.all(np.isfinite(x)) for x in (self.a, self.b, self.W)):
            raise ValueError("RBM parameters must be finite")

    @classmethod
    def random(cls, n_visible: int, n_hidden: int, rng=0, scale: float = 0.01) -> "RBMWavefunction":
        gen = np.random.default_rng(rng)
        return cls(np.zeros(n_visible), np.zeros(n_hidden), scale * gen.standard_normal((n_visible, n_hidden)))

    @property
    def n_visible(self) -> int:
        return len(self.a)

    @property
    def n_hidden(self) -> int:
        return len(self.b)

    @property
    def n_params(self) -> int:
        return self.a.size + self.b.size + self.W.size

    def theta(self, V) -> np.ndarray:
        return self.b + np.asarray(V, dtype=float) @ self.W

    def log_psi(self, V) -> np.ndarray:
        """``log psi`` up to the (irrelevant) normalisation, for rows of ``V``."""
        V = np.atleast_2d(np.asarray(V, dtype=float))
        return 0.5 * (V @ self.a + _logcosh(self.theta(V)).sum(axis=1))

    def log_derivatives(self, V) -> np.ndarray:
        """``O_k = d log psi / d param_k`` per row, parameters ordered (a, b, W row-major)."""
        V = np.atleast_2d(np.asarray(V, dtype=float))
        t = np.tanh(self.theta(V))
        ow = 0.5 * V[:, :, None] * t[:, None, :]
        return np.concatenate([0.5 * V, 0.5 * t, ow.reshape(len(V), -1)], axis=1)

    def flat(self) -> np.ndarray:
        return np.concatenate([self.a, self.b, self.W.ravel()])

    def update(self, delta) -> None:
        na, nb = self.n_visible, self.n_hidden
        self.a += delta[:na]
        self.b += delta[na:na + nb]
        self.W += delta[na + nb:].reshape(self.W.shape)

    def copy(self) -> "RBMWavefunction":
        return RBMWavefunction(self.a, self.b, self.W)

    def network(self) -> PBitNetwork:
        """Joint visible/hidden p-bit network (visible 0..nv-1, hidden after) whose visible marginal is ``p(v)``."""
        nv, nh = self.n_visible, self.n_hidden
        rows = np.repeat(np.arange(nv), nh)
        cols = nv + np.tile(np.arange(nh), nv)
        return PBitNetwork(nv + nh, rows, cols, self.W.ravel(), np.concatenate([self.a, self.b]))

    def dense_psi(self) -> np.ndarray:
        """Normalised amplitudes over all ``2^n`` basis states (bit ``i`` set means spin up)."""
        n = self.n_visible
        if n > DENSE_LIMIT:
            raise ValueError(f"dense amplitudes are limited to {DENSE_LIMIT} qubits")
        k = np.arange(1 << n)
        V = ((k[:, None] >> np.arange(n)) & 1) * 2 - 1
        lp = self.log_psi(V)
        psi = np.exp(lp - lp.max())
        return psi / np.linalg.norm(psi)

    def to_dict(self) -> dict:
        return {"a": self.a.tolist(), "b": self.b.tolist(), "W": self.W.tolist()}

    @classmethod
    def from_dict(cls, doc: dict) -> "RBMWavefunction":
        try:
            return cls(doc["a"], doc["b"], doc["W"])
        except (KeyError, ValueError, TypeError) as exc:
            raise NetworkFormatError(f"invalid RBM: {exc}") from exc

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict()))

    @classmethod
    def load(cls, path) -> "RBMWavefunction":
        return cls.from_dict(json.loads(Path(path).read_text()))


def _flip_ratio(rbm: RBMWavefunction, V, theta, lp, sites) -> np.ndarray:
    """``psi(v') / psi(v)`` with the spins in ``sites`` flipped (rows of ``V``)."""
    Vf = V.copy()
    Vf[:, sites] *= -1
    d_theta = -2.0 * (V[:, sites] @ rbm.W[sites])
    lp_new = 0.5 * (Vf @ rbm.a + _logcosh(theta + d_theta).sum(axis=1))
    # psi > 0 everywhere for finite parameters; the clip only guards overflow
    return np.exp(np.clip(lp_new - lp, -700.0, 700.0))


def local_energies(h: QuantumHamiltonian, rbm: RBMWavefunction, V) -> np.ndarray:
    """``E_loc(v) = sum_v' <v|H|v'> psi(v') / psi(v)`` for each row of ``V``.

    Only configurations reachable by one off-diagonal term are visited: a
    single flip per transverse field and a pair flip per anti-aligned
    exchange bond.
    """
    V = np.atleast_2d(np.asarray(V, dtype=float))
    if V.shape[1] != h.n or rbm.n_visible != h.n:
        raise ValueError("configuration length must equal the number of qubits")
    theta = rbm.theta(V)
    lp = 0.5 * (V @ rbm.a + _logcosh(theta).sum(axis=1))
    e = h.diagonal_energy(V)
    for i, g in enumerate(h.gamma):
        if g:
            e -= g * _flip_ratio(rbm, V, theta, lp, [i])
    for c in h.couplings:
        if c.Jxy:
            anti = V[:, c.i] != V[:, c.j]
            if np.any(anti):
                r = _flip_ratio(rbm, V[anti], theta[anti], lp[anti], [c.i, c.j])
                e[anti] -= 2.0 * c.Jxy * r
    return e


def local_energy(h: QuantumHamiltonian, rbm: RBMWavefunction, v) -> float:
    return float(local_energies(h, rbm, np.asarray(v)[None, :])[0])


def exact_energy(h: QuantumHamiltonian, rbm: RBMWavefunction, H=None) -> float:
    """Dense ``<psi|H|psi>`` for the normalised RBM amplitude."""
    psi = rbm.dense_psi()
    H = h.matrix() if H is None else H
    return float(psi @ (H @ psi))


class DirectSampler:
    """Persistent Gibbs chains on the joint RBM network (two colors: visible, hidden)."""

    def __init__(self, rbm: RBMWavefunction, chains: int, seed: int, sweeps: int = 2, burn_in: int = 50):
        self.nv = rbm.n_visible
        net = rbm.network()
        self.plan = color_graph(net)
        gen = np.random.default_rng(derive_seed(seed, 0x5A))
        M = np.where(gen.random((chains, net.n)) < 0.5, -1, 1).astype(np.int8)
        self.batch = ChainBatch(net, self.plan, M, derive_seed(seed, 0x5B))
        self.sweeps = sweeps
        self.batch.run(np.ones(burn_in))
        self.broken_fraction = 0.0

    def draw(self, rbm: RBMWavefunction) -> np.ndarray:
        self.batch.net = self.batch.net.with_parameters(rbm.W.ravel(), np.concatenate([rbm.a, rbm.b]))
        M = self.batch.run(np.ones(self.sweeps))
        return M[:, : self.nv].astype(float)


class EmbeddedSampler:
    """Samples the RBM through its chimera embedding; chains are collapsed by majority vote."""

    def __init__(self, rbm: RBMWavefunction, chains: int, seed: int, sweeps: int = 2, burn_in: int = 50,
                 cell_size: int = 4, chain_coupling: float = 1.0):
        from .embedding import embed_bipartite_chimera

        self.cell_size, self.chain_coupling = cell_size, chain_coupling
        self.emb, net = embed_bipartite_chimera(rbm.n_visible, rbm.n_hidden, cell_size, chain_coupling,
                                                rbm.W, rbm.a, rbm.b)
        self.plan = color_graph(net)
        gen = np.random.default_rng(derive_seed(seed, 0x5C))
        M = np.where(gen.random((chains, net.n)) < 0.5, -1, 1).astype(np.int8)
        self.batch = ChainBatch(net, self.plan, M, derive_seed(seed, 0x5D))
        self.sweeps = sweeps
        self.batch.run(np.ones(burn_in))
        self.broken_fraction = 0.0

    def draw(self, rbm: RBMWavefunction) -> np.ndarray:
        self.batch.net = self.emb.physical_network(rbm.W, rbm.a, rbm.b)
        M = self.batch.run(np.ones(self.sweeps))
        logical, broken = self.emb.collapse_batch(M)
        self.broken_fraction = broken
        return logical[:, : rbm.n_visible].astype(float)


@dataclass
class VMCResult:
    rbm: RBMWavefunction
    energies: np.ndarray          # sampled mean local energy per iteration
    energy_se: np.ndarray
    exact_energies: np.ndarray | None  # dense <psi|H|psi> per iteration (small systems)
    ground_energy: float | None
    broken_fraction: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def final_energy(self) -> float:
        """Exact energy of the final state when tracked, else the mean of the last 10% of samples."""
        if self.exact_energies is not None:
            return float(self.exact_energies[-1])
        tail = max(1, len(self.energies) // 10)
        return float(np.mean(self.energies[-tail:]))

    def relative_error(self) -> float | None:
        if self.ground_energy is None:
            return None
        return abs(self.final_energy - self.ground_energy) / abs(self.ground_energy)

    def report(self) -> dict:
        out = {
            "iterations": len(self.energies),
            "final_energy": self.final_energy,
            "final_sampled_energy": float(self.energies[-1]),
            "ground_energy": self.ground_energy,
            "relative_error": self.relative_error(),
            "n_visible": self.rbm.n_visible,
            "n_hidden": self.rbm.n_hidden,
        }
        if len(self.broken_fraction):
            out["mean_broken_chain_fraction"] = float(np.mean(self.broken_fraction))
        return out

    def trace_rows(self):
        for k in range(len(self.energies)):
            row = {"iteration": k, "energy": float(self.energies[k]), "energy_se": float(self.energy_se[k])}
            if self.exact_energies is not None:
                row["exact_energy"] = float(self.exact_energies[k])
            if len(self.broken_fraction):
                row["broken_chain_fraction"] = float(self.broken_fraction[k])
            yield row


def vmc_train(
    h: QuantumHamiltonian,
    rbm: RBMWavefunction,
    iterations: int = 500,
    samples_per_iter: int = 200,
    step_size: float = 0.05,
    sampler: str = "direct",
    sr: bool = False,
    sr_shift: float = 1e-3,
    sweeps_per_sample: int = 2,
    rng=0,
    track_exact: bool | None = None,
    callback=None,
) -> VMCResult:
    """Stochastic gradient descent on ``<E_loc>`` with samples drawn from ``|psi|^2 = p_RBM``.

    The gradient is ``2 Cov(O_k, E_loc)``.  With ``sr`` the step is
    preconditioned by the regularised covariance of ``O`` (stochastic
    reconfiguration).  ``rbm`` is updated in place and returned.  The exact
    energy of every iterate is recorded when ``track_exact`` (default for
    ``n <= 12``).
    """
    h.require_stoquastic()
    if rbm.n_visible != h.n:
        raise ValueError("RBM visible count must equal the number of qubits")
    if iterations < 1 or samples_per_iter < 2:
        raise ValueError("need iterations >= 1 and samples_per_iter >= 2")
    seed = rng.seed if isinstance(rng, RandomStream) else int(rng)
    if sampler == "direct":
        chain = DirectSampler(rbm, samples_per_iter, seed, sweeps_per_sample)
    elif sampler == "embedded":
        chain = EmbeddedSampler(rbm, samples_per_iter, seed, sweeps_per_sample)
    else:
        raise ValueError(f"sampler is 'direct' or 'embedded', not {sampler!r}")
    if track_exact is None:
        track_exact = h.n <= DENSE_LIMIT
    H = h.matrix() if track_exact else None
    e_ground = exact_diagonalize(h).ground_energy if h.n <= DENSE_LIMIT + 2 else None
    energies = np.empty(iterations)
    ses = np.empty(iterations)
    exact = np.empty(iterations) if track_exact else None
    broken = np.empty(iterations) if sampler == "embedded" else np.zeros(0)
    for it in range(iterations):
        if track_exact:
            exact[it] = exact_energy(h, rbm, H)
        V = chain.draw(rbm)
        e = local_energies(h, rbm, V)
        O = rbm.log_derivatives(V)
        energies[it] = e.mean()
        ses[it] = e.std(ddof=1) / np.sqrt(len(e))
        if sampler == "embedded":
            broken[it] = chain.broken_fraction
        dO = O - O.mean(axis=0)
        grad = 2.0 * (dO.T @ (e - e.mean())) / len(e)
        if sr:
            S = dO.T @ dO / len(e)
            S[np.diag_indices_from(S)] += sr_shift * (1.0 + np.diag(S))
            grad = np.linalg.solve(S, grad)
        rbm.update(-step_size * grad)
        if callback is not None:
            callback(it, energies[it])
    return VMCResult(rbm, energies, ses, exact, e_ground, broken)
