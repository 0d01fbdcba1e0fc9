"""Invertible logic: gate library, circuit compiler and problem encoders."""

from .circuit import Circuit, CircuitError, Compiled, compile_circuit
from .dimacs import CNF, parse_dimacs, read_dimacs, write_dimacs
from .encoders import (
    ProblemEncoding,
    brute_force_knapsack,
    brute_force_maxsat,
    brute_force_partition,
    decode,
    encode_knapsack,
    encode_maxsat,
    encode_number_partitioning,
    encode_number_partitioning_circuit,
)
from .gates import GateEncodingError, GateSpec, gate, gate_library

__all__ = [
    "CNF",
    "Circuit",
    "CircuitError",
    "Compiled",
    "GateEncodingError",
    "GateSpec",
    "ProblemEncoding",
    "brute_force_knapsack",
    "brute_force_maxsat",
    "brute_force_partition",
    "compile_circuit",
    "decode",
    "encode_knapsack",
    "encode_maxsat",
    "encode_number_partitioning",
    "encode_number_partitioning_circuit",
    "gate",
    "gate_library",
    "parse_dimacs",
    "read_dimacs",
    "write_dimacs",
]
