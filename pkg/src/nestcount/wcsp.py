"""Weighted constraints with default values.

A constraint lists explicit values for a finite set of tuples (its support)
and takes its default value everywhere else. Values are non-negative
``Fraction``s, which are always kept in lowest terms.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .formula import CnfFormula
from .hypergraph import Hypergraph

Tuple = tuple[int, ...]


class EvalMode(enum.Enum):
    SUM = "sum"
    MAX = "max"


class WcspdError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def as_weight(value) -> Fraction:
    w = Fraction(value)
    if w < 0:
        raise ValueError(f"negative weight {w}")
    return w


@dataclass(frozen=True, eq=False)
class WeightedConstraint:
    id: int
    scope: Tuple
    default: Fraction
    support: Mapping[Tuple, Fraction]
    original_scope: frozenset[int]

    @classmethod
    def make(cls, id: int, scope: Iterable[int], default,
             support: Mapping[Tuple, object] | Iterable[tuple[Tuple, object]] = ()) -> "WeightedConstraint":
        """Build a constraint, sorting the scope and permuting support keys to match."""
        scope = tuple(scope)
        if len(set(scope)) != len(scope):
            raise ValueError(f"repeated variable in scope {scope}")
        perm = sorted(range(len(scope)), key=scope.__getitem__)
        items = support.items() if isinstance(support, Mapping) else support
        table: dict[Tuple, Fraction] = {}
        for key, value in items:
            key = tuple(key)
            if len(key) != len(scope):
                raise ValueError(f"support key {key} has arity {len(key)}, scope has {len(scope)}")
            key = tuple(key[i] for i in perm)
            if key in table:
                raise ValueError(f"duplicate support key {key}")
            table[key] = as_weight(value)
        sorted_scope = tuple(scope[i] for i in perm)
        return cls(id, sorted_scope, as_weight(default), table, frozenset(scope))

    def value(self, key: Tuple) -> Fraction:
        return self.support.get(key, self.default)

    def evaluate(self, assignment: Mapping[int, int]) -> Fraction:
        return self.value(tuple(assignment[v] for v in self.scope))

    @property
    def size(self) -> int:
        return len(self.support) * len(self.scope)

    def weights(self) -> Iterable[Fraction]:
        yield self.default
        yield from self.support.values()

    def same_table(self, other: "WeightedConstraint") -> bool:
        return (self.scope == other.scope and self.default == other.default
                and dict(self.support) == dict(other.support))

    def __repr__(self) -> str:
        return (f"WeightedConstraint(id={self.id}, scope={self.scope}, "
                f"default={self.default}, support={dict(self.support)})")


@dataclass(frozen=True)
class WcspInstance:
    domain_size: int
    constraints: tuple[WeightedConstraint, ...] = ()
    scalar: Fraction = Fraction(1)
    num_vars: int | None = None

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError("domain size must be at least 1")
        object.__setattr__(self, "constraints", tuple(self.constraints))
        object.__setattr__(self, "scalar", as_weight(self.scalar))
        ids = [c.id for c in self.constraints]
        if len(set(ids)) != len(ids):
            raise ValueError("constraint ids must be distinct")
        for c in self.constraints:
            for key in c.support:
                if any(not 0 <= d < self.domain_size for d in key):
                    raise ValueError(f"support key {key} outside domain {self.domain_size}")

    @property
    def variables(self) -> frozenset[int]:
        out: set[int] = set()
        for c in self.constraints:
            out.update(c.scope)
        return frozenset(out)

    @property
    def structural_size(self) -> int:
        return sum(len(c.scope) for c in self.constraints)

    @property
    def size(self) -> int:
        return sum(c.size for c in self.constraints)

    def hypergraph(self) -> Hypergraph:
        return Hypergraph.from_edges(c.scope for c in self.constraints)

    def by_id(self) -> dict[int, WeightedConstraint]:
        return {c.id: c for c in self.constraints}


def cnf_to_count_instance(formula: CnfFormula) -> WcspInstance:
    """Each clause becomes default 1 with its single falsifying tuple mapped to 0."""
    if formula.empty_clause_count:
        raise ValueError("formula has empty clauses; its model count is 0")
    return _clause_instance(formula, default=1, falsified=0)


def cnf_to_max_instance(formula: CnfFormula) -> WcspInstance:
    """Each clause becomes default 2 with its falsifying tuple mapped to 1.

    The value of an assignment is then 2 to the number of satisfied clauses.
    """
    return _clause_instance(formula, default=2, falsified=1)


def _clause_instance(formula: CnfFormula, default: int, falsified: int) -> WcspInstance:
    constraints = []
    for i, clause in enumerate(formula.clauses):
        bad = clause.falsifier()
        scope = tuple(sorted(bad))
        constraints.append(WeightedConstraint.make(
            i, scope, default, {tuple(bad[v] for v in scope): falsified}))
    return WcspInstance(2, constraints, num_vars=formula.declared_var_count)


def merge_equal_scopes(instance: WcspInstance) -> WcspInstance:
    """Multiply together constraints on the same variable set.

    Empty-scope constraints are folded into the instance scalar. The merged
    constraint keeps the id of the first constraint of its group.
    """
    scalar = instance.scalar
    groups: dict[Tuple, list[WeightedConstraint]] = {}
    for c in instance.constraints:
        if not c.scope:
            scalar *= c.value(())
        else:
            groups.setdefault(c.scope, []).append(c)
    merged = []
    for scope, group in groups.items():
        first = group[0]
        if len(group) == 1:
            merged.append(replace(first, original_scope=frozenset(scope)))
            continue
        default = Fraction(1)
        keys: dict[Tuple, None] = {}
        for c in group:
            default *= c.default
            keys.update(dict.fromkeys(c.support))
        table = {}
        for key in keys:
            v = Fraction(1)
            for c in group:
                v *= c.value(key)
            table[key] = v
        merged.append(WeightedConstraint(first.id, scope, default, table, frozenset(scope)))
    return replace(instance, constraints=tuple(merged), scalar=scalar)


def eval_total(instance: WcspInstance, mode: EvalMode = EvalMode.SUM) -> Fraction:
    """Partition function (SUM) or maximum (MAX) of the instance, scalar included."""
    from .elim import solve
    return solve(instance, mode)


def all_tuples(domain_size: int, arity: int) -> Iterable[Tuple]:
    return product(range(domain_size), repeat=arity)


_RATIONAL = re.compile(r"(\d+)(?:/(\d+))?")


def parse_rational(token: str) -> Fraction:
    m = _RATIONAL.fullmatch(token)
    if not m:
        raise ValueError(f"malformed rational {token!r}")
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {token!r}")
    return Fraction(int(m.group(1)), den)


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def parse_wcspd(text: str | bytes) -> WcspInstance:
    """Parse the line-oriented ``.wcspd`` format.

    ::

        p wcspd <num_vars> <domain_size> <num_constraints>
        con <arity> <v1> ... <vk> default <num>/<den>
        t <d1> ... <dk> <num>/<den>
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header = None
    pending: list[tuple[int, list[int], Fraction, list[tuple[Tuple, Fraction]], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "p":
                if header is not None:
                    raise ValueError("duplicate problem line")
                if len(parts) != 5 or parts[1] != "wcspd":
                    raise ValueError(f"malformed header {line!r}")
                header = tuple(int(p) for p in parts[2:])
                if header[0] < 0 or header[1] < 1 or header[2] < 0:
                    raise ValueError(f"bad header values {line!r}")
            elif header is None:
                raise ValueError("content before problem line")
            elif parts[0] == "con":
                arity = int(parts[1])
                if arity < 0 or len(parts) != arity + 4 or parts[arity + 2] != "default":
                    raise ValueError(f"malformed constraint line {line!r}")
                scope = [int(v) for v in parts[2:arity + 2]]
                for v in scope:
                    if not 1 <= v <= header[0]:
                        raise ValueError(f"variable {v} outside 1..{header[0]}")
                if len(set(scope)) != len(scope):
                    raise ValueError(f"repeated variable in scope {scope}")
                pending.append((len(pending), scope, parse_rational(parts[-1]), [], lineno))
            elif parts[0] == "t":
                if not pending:
                    raise ValueError("tuple line before any constraint")
                scope, table = pending[-1][1], pending[-1][3]
                if len(parts) != len(scope) + 2:
                    raise ValueError(f"tuple arity {len(parts) - 2} does not match constraint arity {len(scope)}")
                key = tuple(int(d) for d in parts[1:-1])
                for d in key:
                    if not 0 <= d < header[1]:
                        raise ValueError(f"domain value {d} outside 0..{header[1] - 1}")
                if any(k == key for k, _ in table):
                    raise ValueError(f"duplicate support key {key}")
                table.append((key, parse_rational(parts[-1])))
            else:
                raise ValueError(f"unknown line type {parts[0]!r}")
        except ValueError as exc:
            if isinstance(exc, WcspdError):
                raise
            raise WcspdError(str(exc), lineno) from None
    if header is None:
        raise WcspdError("missing problem line", 1)
    if len(pending) != header[2]:
        raise WcspdError(f"header declares {header[2]} constraints, found {len(pending)}", 1)
    constraints = [WeightedConstraint.make(i, scope, default, table)
                   for i, scope, default, table, _ in pending]
    return WcspInstance(header[1], constraints, num_vars=header[0])


def serialize_wcspd(instance: WcspInstance) -> str:
    """Canonical ``.wcspd`` text.

    Support entries equal to the default are omitted and the remaining ones
    are sorted. A non-unit scalar is written as a leading arity-0 constraint.
    """
    body = []
    if instance.scalar != 1:
        body.append(f"con 0 default {format_rational(instance.scalar)}")
    for c in instance.constraints:
        body.append(" ".join(["con", str(len(c.scope)), *map(str, c.scope),
                              "default", format_rational(c.default)]))
        for key in sorted(c.support):
            if c.support[key] != c.default:
                body.append(" ".join(["t", *map(str, key), format_rational(c.support[key])]))
    num_vars = instance.num_vars
    if num_vars is None:
        num_vars = max(instance.variables, default=0)
    count = sum(1 for line in body if line.startswith("con"))
    return "\n".join([f"p wcspd {num_vars} {instance.domain_size} {count}", *body]) + "\n"
