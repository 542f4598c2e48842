"""CNF formulas: data model, DIMACS reading/writing and preprocessing.

Tautological clauses are dropped at parse time and counted, empty clauses
are counted but never stored. Both counts matter to the callers: an empty
clause makes the formula unsatisfiable, a tautology is one extra clause
that every assignment satisfies.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .hypergraph import Hypergraph

logger = logging.getLogger(__name__)


class DimacsError(ValueError):
    """Malformed DIMACS input; ``line`` is the 1-based line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class Literal(NamedTuple):
    variable: int
    positive: bool

    @classmethod
    def from_int(cls, lit: int) -> "Literal":
        if lit == 0:
            raise ValueError("0 is not a literal")
        return cls(abs(lit), lit > 0)

    def __int__(self) -> int:
        return self.variable if self.positive else -self.variable


@dataclass(frozen=True)
class Clause:
    """A non-tautological clause, literals sorted by variable."""

    literals: tuple[Literal, ...]

    @classmethod
    def from_ints(cls, lits: Iterable[int]) -> "Clause":
        merged = {Literal.from_int(lit) for lit in lits}
        if len({lit.variable for lit in merged}) != len(merged):
            raise ValueError("tautological clause")
        return cls(tuple(sorted(merged)))

    @property
    def variables(self) -> frozenset[int]:
        return frozenset(lit.variable for lit in self.literals)

    def falsifier(self) -> dict[int, int]:
        """The only assignment of the clause's variables that falsifies it."""
        return {lit.variable: 0 if lit.positive else 1 for lit in self.literals}

    def satisfied_by(self, assignment) -> bool:
        return any(bool(assignment[lit.variable]) == lit.positive for lit in self.literals)

    def __len__(self) -> int:
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)


@dataclass(frozen=True)
class CnfFormula:
    declared_var_count: int
    clauses: tuple[Clause, ...] = ()
    tautology_count: int = 0
    empty_clause_count: int = 0

    def __post_init__(self):
        for clause in self.clauses:
            if not clause.literals:
                raise ValueError("empty clauses are counted, not stored")
            if max(clause.variables) > self.declared_var_count:
                raise ValueError(
                    f"clause uses variable {max(clause.variables)} "
                    f"> declared {self.declared_var_count}")

    @classmethod
    def from_clauses(cls, declared_var_count: int,
                     clauses: Iterable[Iterable[int]]) -> "CnfFormula":
        """Build a formula from signed-int clauses, applying the parse-time preprocessing."""
        stored = []
        tautologies = empties = 0
        for lits in clauses:
            lits = list(lits)
            if not lits:
                empties += 1
            elif any(-lit in lits for lit in lits):
                tautologies += 1
            else:
                stored.append(Clause.from_ints(lits))
        return cls(declared_var_count, tuple(stored), tautologies, empties)

    @property
    def variables(self) -> frozenset[int]:
        """Variables occurring in some stored clause."""
        out: set[int] = set()
        for clause in self.clauses:
            out |= clause.variables
        return frozenset(out)

    def is_monotone(self) -> bool:
        return all(lit.positive for clause in self.clauses for lit in clause)

    def __len__(self) -> int:
        """Total formula size: number of literal occurrences."""
        return sum(len(c) for c in self.clauses)


def parse_dimacs(text: str | bytes) -> CnfFormula:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    nvars = nclauses = None
    raw_clauses: list[list[int]] = []
    current: list[int] = []
    current_start = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("c"):
            continue
        if stripped.startswith("%"):
            # SATLIB trailer
            break
        if stripped.startswith("p"):
            if nvars is not None:
                raise DimacsError("duplicate problem line", lineno)
            parts = stripped.split()
            if len(parts) != 4 or parts[0] != "p" or parts[1] != "cnf":
                raise DimacsError(f"malformed header {stripped!r}", lineno)
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {stripped!r}", lineno) from None
            if nvars < 0 or nclauses < 0:
                raise DimacsError("negative count in header", lineno)
            continue
        if nvars is None:
            raise DimacsError("clause before problem line", lineno)
        for token in stripped.split():
            try:
                lit = int(token)
            except ValueError:
                raise DimacsError(f"non-integer token {token!r}", lineno) from None
            if lit == 0:
                if token.startswith("-"):
                    raise DimacsError("literal with variable index 0", lineno)
                raw_clauses.append(current)
                current = []
                continue
            if abs(lit) > nvars:
                raise DimacsError(f"variable {abs(lit)} exceeds declared {nvars}", lineno)
            if not current:
                current_start = lineno
            current.append(lit)
    if nvars is None:
        raise DimacsError("missing problem line", 1)
    if current:
        raise DimacsError("clause not terminated by 0", current_start)
    if len(raw_clauses) != nclauses:
        logger.warning("header declares %d clauses, found %d", nclauses, len(raw_clauses))
    return CnfFormula.from_clauses(nvars, raw_clauses)


def serialize_dimacs(formula: CnfFormula) -> str:
    """DIMACS text for the stored clauses; empty clauses are written last as bare ``0``."""
    lines = [f"p cnf {formula.declared_var_count} "
             f"{len(formula.clauses) + formula.empty_clause_count}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(int(lit)) for lit in clause) + " 0")
    lines.extend("0" for _ in range(formula.empty_clause_count))
    return "\n".join(lines) + "\n"


def formula_hypergraph(formula: CnfFormula) -> Hypergraph:
    return Hypergraph.from_edges(clause.variables for clause in formula.clauses)


def isolated_variables(formula: CnfFormula) -> int:
    return formula.declared_var_count - len(formula.variables)
