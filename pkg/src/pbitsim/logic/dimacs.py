"""DIMACS CNF reading and writing."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..core import NetworkFormatError


@dataclass
class CNF:
    num_vars: int
    clauses: list[list[int]]
    comments: tuple[str, ...] = ()

    def satisfied_count(self, assignment) -> int:
        """``assignment[v - 1]`` is truthy when variable ``v`` is true."""
        count = 0
        for clause in self.clauses:
            for lit in clause:
                if bool(assignment[abs(lit) - 1]) == (lit > 0):
                    count += 1
                    break
        return count


def parse_dimacs(text: str) -> CNF:
    """Parse DIMACS CNF text: ``c`` comments, one ``p cnf V C`` header, 0-terminated clauses.

    Clauses may span lines.  SATLIB's trailing ``%`` end marker is accepted.
    """
    num_vars = num_clauses = None
    clauses: list[list[int]] = []
    comments = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            parts = line.split()
            if num_vars is not None:
                raise NetworkFormatError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "cnf":
                raise NetworkFormatError(f"line {lineno}: invalid problem line {line!r}")
            try:
                num_vars, num_clauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise NetworkFormatError(f"line {lineno}: non-integer header counts") from None
            continue
        if num_vars is None:
            raise NetworkFormatError(f"line {lineno}: clause before 'p cnf' header")
        try:
            lits = [int(tok) for tok in line.split()]
        except ValueError:
            raise NetworkFormatError(f"line {lineno}: non-integer literal") from None
        for lit in lits:
            if lit == 0:
                if not current:
                    raise NetworkFormatError(f"line {lineno}: empty clause")
                clauses.append(current)
                current = []
            else:
                if abs(lit) > num_vars:
                    raise NetworkFormatError(f"line {lineno}: literal {lit} exceeds {num_vars} variables")
                current.append(lit)
    if num_vars is None:
        raise NetworkFormatError("missing 'p cnf' header")
    if current:
        raise NetworkFormatError("last clause is not terminated by 0")
    if len(clauses) != num_clauses:
        raise NetworkFormatError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return CNF(num_vars, clauses, tuple(comments))


def read_dimacs(path) -> CNF:
    return parse_dimacs(Path(path).read_text())


def write_dimacs(cnf: CNF, path=None) -> str:
    lines = [f"c {c}" for c in cnf.comments]
    lines.append(f"p cnf {cnf.num_vars} {len(cnf.clauses)}")
    lines += [" ".join(map(str, clause)) + " 0" for clause in cnf.clauses]
    text = "\n".join(lines) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text
