"""Nest-point elimination for weighted constraints with default values.

Eliminating a nest point x rewrites every constraint containing x into a
constraint on the remaining variables, so that the partition function drops
by exactly a factor |D| (SUM) or stays equal (MAX). Iterating along a
beta-elimination order leaves only empty-scope constraints, whose product
gives the answer.

The constraints containing x are processed in a fixed total order derived
from the elimination order and the constraints' original scopes. Together
with reducing every value to lowest terms, this order keeps all intermediate
numerators and denominators polynomially bounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import cmp_to_key
from typing import Callable, Iterable, Mapping, Sequence

from .hypergraph import is_chain, beta_elimination_order, remove_vertex
from .wcsp import EvalMode, WcspInstance, WeightedConstraint, merge_equal_scopes

ZERO = Fraction(0)
ONE = Fraction(1)


class NotANestPoint(Exception):
    pass


class OrderViolation(Exception):
    pass


class InvariantViolation(AssertionError):
    """An internal postcondition of the elimination step failed."""


class PrecOrder:
    """Total order on constraints induced by an elimination order.

    Two constraints with different original scopes are compared on the
    variable eliminated last among those in exactly one of the scopes: the
    constraint holding that variable is the larger one.
    """

    def __init__(self, order: Sequence[int]):
        self.index = {x: i for i, x in enumerate(order)}

    def compare(self, c: WeightedConstraint, d: WeightedConstraint) -> int:
        diff = c.original_scope ^ d.original_scope
        if not diff:
            return 0
        last = max(diff, key=self.index.__getitem__)
        return -1 if last in d.original_scope else 1

    def sorted(self, constraints: Iterable[WeightedConstraint]) -> list[WeightedConstraint]:
        return sorted(constraints, key=cmp_to_key(self.compare))


def prec_compare(c: WeightedConstraint, d: WeightedConstraint, prec: PrecOrder) -> int:
    """-1 if c precedes d, 1 if d precedes c, 0 if their original scopes coincide."""
    return prec.compare(c, d)


@dataclass(frozen=True)
class ElimState:
    """Working instance after ``step`` variables of ``order`` have been eliminated.

    ``alpha_exponent[c]`` counts how often constraint c was the first one
    processed at a nest point in SUM mode. ``folded`` keeps the final value of
    each constraint whose scope became empty; that value is also multiplied
    into the instance scalar.
    """

    instance: WcspInstance
    order: tuple[int, ...]
    step: int = 0
    alpha_exponent: Mapping[int, int] = field(default_factory=dict)
    folded: Mapping[int, Fraction] = field(default_factory=dict)

    @classmethod
    def start(cls, instance: WcspInstance, order: Sequence[int] | None = None) -> "ElimState":
        if order is None:
            order = beta_elimination_order(instance.hypergraph())
        return cls(instance, tuple(order), 0,
                   {c.id: 0 for c in instance.constraints}, {})

    @property
    def eliminated(self) -> frozenset[int]:
        return frozenset(self.order[:self.step])

    @property
    def prec(self) -> PrecOrder:
        return PrecOrder(self.order)

    def weights(self) -> Iterable[Fraction]:
        for c in self.instance.constraints:
            yield from c.weights()
        yield from self.folded.values()


def _eliminate_group(group: list[WeightedConstraint], x: int, domain_size: int,
                     mode: EvalMode) -> list[WeightedConstraint]:
    """Rewrite the constraints containing x, already sorted along the chain.

    ``P[i][(b, d)]`` is the product of the first i+1 constraints at b + {x: d},
    with b an assignment of the i-th residual scope; ``A[i][b]`` aggregates it
    over d. Both are memoised so each value costs one multiplication.
    """
    agg = sum if mode is EvalMode.SUM else max
    domain = range(domain_size)
    base = Fraction(domain_size) if mode is EvalMode.SUM else ONE

    xpos, residual, down = [], [], []
    for i, c in enumerate(group):
        pos = c.scope.index(x)
        r = c.scope[:pos] + c.scope[pos + 1:]
        xpos.append(pos)
        residual.append(r)
        if i == 0:
            down.append(())
        else:
            where = {v: j for j, v in enumerate(r)}
            down.append(tuple(where[v] for v in residual[i - 1]))

    P: list[dict] = [{} for _ in group]
    A: list[dict] = [{} for _ in group]

    def restrict(i, b):
        return tuple(b[j] for j in down[i])

    def prod(i, b, d):
        pending = []
        while i >= 0 and (b, d) not in P[i]:
            pending.append((i, b))
            b = restrict(i, b)
            i -= 1
        val = ONE if i < 0 else P[i][(b, d)]
        for j, key in reversed(pending):
            pos = xpos[j]
            val = val * group[j].value(key[:pos] + (d,) + key[pos:])
            P[j][(key, d)] = val
        return val

    def aggregate(i, b):
        if i < 0:
            return base
        if b not in A[i]:
            A[i][b] = agg(prod(i, b, d) for d in domain)
        return A[i][b]

    out = []
    for i, c in enumerate(group):
        pos = xpos[i]
        table = {}
        for a in dict.fromkeys(key[:pos] + key[pos + 1:] for key in c.support):
            den = aggregate(i - 1, restrict(i, a))
            table[a] = ZERO if den == 0 else aggregate(i, a) / den
        out.append(WeightedConstraint(c.id, residual[i], c.default, table, c.original_scope))
    return out


def eliminate_nest_point(state: ElimState, x: int, mode: EvalMode = EvalMode.SUM,
                         check: bool = True) -> ElimState:
    if state.step >= len(state.order) or state.order[state.step] != x:
        expected = state.order[state.step] if state.step < len(state.order) else None
        raise OrderViolation(f"expected to eliminate {expected}, got {x}")
    inst = state.instance
    group = [c for c in inst.constraints if x in c.scope]
    if not group:
        raise NotANestPoint(f"variable {x} occurs in no constraint")
    if not is_chain(set(c.scope) for c in group):
        raise NotANestPoint(f"variable {x} is not a nest point")
    group = state.prec.sorted(group)
    for c, d in zip(group, group[1:]):
        if not set(c.scope) <= set(d.scope):
            raise InvariantViolation(
                f"constraint order at {x} does not follow scope inclusion")

    rewritten = {c.id: c for c in _eliminate_group(group, x, inst.domain_size, mode)}
    scalar = inst.scalar
    folded = dict(state.folded)
    kept = []
    for c in inst.constraints:
        c = rewritten.get(c.id, c)
        if c.scope:
            kept.append(c)
        else:
            value = c.value(())
            folded[c.id] = value
            scalar *= value
    alpha = dict(state.alpha_exponent)
    if mode is EvalMode.SUM:
        alpha[group[0].id] += 1
    new = replace(inst, constraints=tuple(kept), scalar=scalar)

    if check:
        if new.size > inst.size:
            raise InvariantViolation(f"instance size grew from {inst.size} to {new.size}")
        if new.hypergraph() != remove_vertex(inst.hypergraph(), x):
            raise InvariantViolation(f"hypergraph after eliminating {x} is not H \\ {x}")
    return ElimState(new, state.order, state.step + 1, alpha, folded)


def solve(instance: WcspInstance, mode: EvalMode = EvalMode.SUM,
          on_step: Callable[[ElimState], None] | None = None,
          check: bool = True) -> Fraction:
    """Partition function (SUM) or maximum (MAX) of a beta-acyclic instance.

    Raises NotBetaAcyclic if the instance hypergraph has no beta-elimination order.
    ``on_step`` sees the initial state and the state after every elimination.
    """
    merged = merge_equal_scopes(instance)
    state = ElimState.start(merged)
    if on_step:
        on_step(state)
    for x in state.order:
        state = eliminate_nest_point(state, x, mode, check=check)
        if on_step:
            on_step(state)
    if state.instance.constraints:
        raise InvariantViolation("constraints left after eliminating every variable")
    result = state.instance.scalar
    if mode is EvalMode.SUM:
        result *= merged.domain_size ** len(state.order)
    return result


def compute_I_k(instance: WcspInstance, order: Sequence[int], k: int) -> dict[int, frozenset[int]]:
    """Ids of the original constraints that the value of each constraint depends on after k steps.

    Only meaningful for instances whose constraints have pairwise distinct
    scopes, i.e. after ``merge_equal_scopes``.
    """
    scopes = [c.original_scope for c in instance.constraints]
    if len(set(scopes)) != len(scopes):
        raise ValueError("constraints must have pairwise distinct original scopes")
    prec = PrecOrder(order)
    deps = {c.id: frozenset([c.id]) for c in instance.constraints}
    for x in order[:k]:
        group = prec.sorted(c for c in instance.constraints if x in c.original_scope)
        for prev, c in zip(group, group[1:]):
            deps[c.id] = deps[c.id] | deps[prev.id]
    return deps
