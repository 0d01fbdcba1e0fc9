"""pbitsim: a software p-bit probabilistic computer."""

from .core import (
    PBitNetwork,
    bipolar_binary_convert,
    energy,
    exact_boltzmann,
    pbit_input,
    pbit_update,
)
from .rng import RandomStream

__all__ = [
    "PBitNetwork",
    "RandomStream",
    "bipolar_binary_convert",
    "energy",
    "exact_boltzmann",
    "pbit_input",
    "pbit_update",
]
__version__ = "0.1.0"
