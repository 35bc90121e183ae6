"""DIMACS CNF parsing, clause representation and canonical reprinting.

Clauses are plain tuples of nonzero ints (DIMACS literals).  Clause IDs are
1-based positions in file order.  Weight comments in the model-counting
competition convention (``c p weight <lit> <w> 0``) are captured verbatim.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Clause = tuple  # tuple[int, ...]

MAX_INDEX = (1 << 63) - 1


class DimacsError(ValueError):
    """Malformed DIMACS input; carries a 1-based line/column position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


@dataclass
class CnfFormula:
    var_count: int
    clauses: list = field(default_factory=list)
    weights: dict = field(default_factory=dict)  # literal -> decimal string
    tautologies: frozenset = frozenset()  # IDs of clauses containing l and -l
    duplicates: frozenset = frozenset()  # IDs of clauses with repeated literals

    @property
    def clause_count(self) -> int:
        return len(self.clauses)

    def clause(self, cid: int) -> Clause:
        return self.clauses[cid - 1]

    def ids(self) -> range:
        return range(1, len(self.clauses) + 1)

    def items(self):
        return zip(self.ids(), self.clauses)

    @classmethod
    def from_clauses(cls, var_count: int, clauses: Iterable[Sequence[int]],
                     weights: dict | None = None) -> "CnfFormula":
        cls_list = [tuple(c) for c in clauses]
        for c in cls_list:
            for lit in c:
                if lit == 0 or abs(lit) > var_count:
                    raise DimacsError(f"literal {lit} out of range for {var_count} variables")
        return cls(var_count, cls_list, dict(weights or {}),
                   frozenset(i for i, c in enumerate(cls_list, 1) if clause_is_tautology(c)),
                   frozenset(i for i, c in enumerate(cls_list, 1) if len(set(c)) != len(c)))


def clause_is_tautology(clause: Sequence[int]) -> bool:
    seen = set(clause)
    return any(-lit in seen for lit in seen)


def _lines(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.strip():
            yield lineno, line


def parse_dimacs(data) -> CnfFormula:
    """Parse a DIMACS CNF document (``str`` or ``bytes``).

    Raises :class:`DimacsError` on a missing/short header, an out-of-range
    literal, a clause-count mismatch, or a non-integer token.
    """
    if isinstance(data, (bytes, bytearray)):
        data = data.decode("ascii", errors="replace")
    nvars = nclauses = None
    weights: dict[int, str] = {}
    clauses: list[Clause] = []
    current: list[int] = []
    last_line = 0
    for lineno, line in _lines(data):
        last_line = lineno
        stripped = line.strip()
        if stripped.startswith("c"):
            parts = stripped.split()
            if len(parts) >= 5 and parts[:3] == ["c", "p", "weight"]:
                try:
                    lit = int(parts[3])
                except ValueError:
                    raise DimacsError(f"bad weight literal {parts[3]!r}", lineno, line.find(parts[3]) + 1)
                if lit == 0:
                    raise DimacsError("weight literal must be nonzero", lineno, line.find(parts[3]) + 1)
                weights[lit] = parts[4]
            continue
        if stripped.startswith("p"):
            if nvars is not None:
                raise DimacsError("duplicate header", lineno, 1)
            parts = stripped.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError("expected header 'p cnf <nvars> <nclauses>'", lineno, 1)
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError("non-integer header field", lineno, 1)
            if nvars < 0 or nclauses < 0 or nvars > MAX_INDEX:
                raise DimacsError("header counts out of range", lineno, 1)
            continue
        if nvars is None:
            raise DimacsError("clause before header", lineno, 1)
        col = 0
        for tok in stripped.split():
            col = line.find(tok, col) + 1
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"non-integer token {tok!r}", lineno, col)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                if abs(lit) > nvars:
                    raise DimacsError(f"literal {lit} exceeds declared {nvars} variables", lineno, col)
                current.append(lit)
            col += len(tok) - 1
    if nvars is None:
        raise DimacsError("missing 'p cnf' header", last_line, 0)
    if current:
        raise DimacsError("last clause not terminated by 0", last_line, 0)
    if len(clauses) != nclauses:
        raise DimacsError(f"header declares {nclauses} clauses, found {len(clauses)}", last_line, 0)
    for lit in weights:
        if abs(lit) > nvars:
            raise DimacsError(f"weight for literal {lit} exceeds declared variables")
    return CnfFormula.from_clauses(nvars, clauses, weights)


def format_dimacs(formula: CnfFormula, weights: bool = False) -> str:
    """Reprint *formula* canonically: header, then one clause per line."""
    out = [f"p cnf {formula.var_count} {formula.clause_count}"]
    if weights:
        for lit in sorted(formula.weights, key=lambda l: (abs(l), l < 0)):
            out.append(f"c p weight {lit} {formula.weights[lit]} 0")
    for c in formula.clauses:
        out.append(" ".join(map(str, c)) + (" 0" if c else "0"))
    return "\n".join(out) + "\n"
