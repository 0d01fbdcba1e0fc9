"""Quantum emulation: exact diagonalization, Suzuki-Trotter sampling, RBM variational Monte Carlo and chimera embedding."""

from .embedding import EmbeddedSamples, EmbeddingError, EmbeddingMap, embed_bipartite_chimera, sample_embedded_rbm
from .hamiltonian import (
    Coupling,
    EDResult,
    QuantumHamiltonian,
    SignProblemError,
    ThermalAverages,
    exact_diagonalize,
    fig7_hamiltonian,
    rayleigh_energy,
    thermal_averages,
)
from .trotter import TrotterEstimate, TrotterLattice, replica_coupling, sample_trotter, trotterize_tfim
from .vmc import RBMWavefunction, VMCResult, exact_energy, local_energies, local_energy, vmc_train

__all__ = [
    "Coupling",
    "EDResult",
    "EmbeddedSamples",
    "EmbeddingError",
    "EmbeddingMap",
    "QuantumHamiltonian",
    "RBMWavefunction",
    "SignProblemError",
    "ThermalAverages",
    "TrotterEstimate",
    "TrotterLattice",
    "VMCResult",
    "embed_bipartite_chimera",
    "exact_diagonalize",
    "exact_energy",
    "fig7_hamiltonian",
    "local_energies",
    "local_energy",
    "rayleigh_energy",
    "replica_coupling",
    "sample_embedded_rbm",
    "sample_trotter",
    "thermal_averages",
    "trotterize_tfim",
    "vmc_train",
]
