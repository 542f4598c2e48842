"""Brute-force reference implementations.

Everything here enumerates. Nothing is clever on purpose: these functions
are the ground truth the solver is tested against, and each has a hard
size guard instead of degrading silently.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from .formula import CnfFormula, isolated_variables
from .hypergraph import IncidenceGraph
from .wcsp import EvalMode, WcspInstance, WeightedConstraint

MAX_FREE_VARS = 24
MAX_GRAPH_NODES = 16


class OracleGuardError(ValueError):
    pass


def _guard(n: int, limit: int, what: str):
    if n > limit:
        raise OracleGuardError(f"{what}: {n} exceeds oracle limit {limit}")


def brute_count(formula: CnfFormula) -> int:
    """Number of models over all declared variables."""
    variables = sorted(formula.variables)
    _guard(len(variables), MAX_FREE_VARS, "variables")
    if formula.empty_clause_count:
        return 0
    models = 0
    for values in product((0, 1), repeat=len(variables)):
        a = dict(zip(variables, values))
        if all(clause.satisfied_by(a) for clause in formula.clauses):
            models += 1
    return models * 2 ** isolated_variables(formula)


def brute_max_sat(formula: CnfFormula) -> int:
    """Maximum number of simultaneously satisfiable clauses, tautologies included."""
    variables = sorted(formula.variables)
    _guard(len(variables), MAX_FREE_VARS, "variables")
    best = 0
    for values in product((0, 1), repeat=len(variables)):
        a = dict(zip(variables, values))
        best = max(best, sum(clause.satisfied_by(a) for clause in formula.clauses))
    return best + formula.tautology_count


def brute_w(constraints: Iterable[WeightedConstraint], assignment: Mapping[int, int],
            mode: EvalMode, domain_size: int) -> Fraction:
    """Sum (or max) of the constraint product over all extensions of ``assignment``.

    The extension ranges over the constraints' variables not fixed by the
    assignment. An empty set of constraints gives 1.
    """
    constraints = list(constraints)
    free = sorted({v for c in constraints for v in c.scope} - set(assignment))
    _guard(len(free), MAX_FREE_VARS, "free variables")
    total = Fraction(0)
    for values in product(range(domain_size), repeat=len(free)):
        a = dict(assignment)
        a.update(zip(free, values))
        term = Fraction(1)
        for c in constraints:
            term *= c.evaluate(a)
        if mode is EvalMode.SUM:
            total += term
        else:
            total = max(total, term)
    return total


def brute_total(instance: WcspInstance, mode: EvalMode = EvalMode.SUM) -> Fraction:
    """scalar * w(I) or scalar * m(I) by enumeration."""
    return instance.scalar * brute_w(instance.constraints, {}, mode, instance.domain_size)


def _two_colouring(graph: IncidenceGraph) -> dict | None:
    colour = {}
    for root in sorted(graph.nodes, key=repr):
        if root in colour:
            continue
        colour[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for v in graph.adjacency[u]:
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    queue.append(v)
                elif colour[v] == colour[u]:
                    return None
    return colour


def brute_chordal_bipartite(graph: IncidenceGraph, limit: int = MAX_GRAPH_NODES) -> bool:
    """Bipartite and without chordless cycles of length 6 or more.

    Chordless cycles are grown by DFS from their smallest node (in a fixed
    ranking), only ever through larger nodes.
    """
    nodes = sorted(graph.nodes, key=repr)
    _guard(len(nodes), limit, "graph nodes")
    if _two_colouring(graph) is None:
        return False
    rank = {n: i for i, n in enumerate(nodes)}
    adj = graph.adjacency

    def long_hole_from(path: list) -> bool:
        start, last = path[0], path[-1]
        for w in adj[last]:
            if rank[w] <= rank[start] or w in path:
                continue
            if any(w in adj[u] for u in path[1:-1]):
                continue
            if start in adj[w]:
                if len(path) + 1 >= 6:
                    return True
                continue
            path.append(w)
            if long_hole_from(path):
                return True
            path.pop()
        return False

    for s in nodes:
        for v in adj[s]:
            if rank[v] > rank[s] and long_hole_from([s, v]):
                return False
    return True


def explicit_form_violations(instance: WcspInstance, mode: EvalMode = EvalMode.SUM,
                             order=None) -> list[str]:
    """Check every stored weight against its closed form, at every elimination step.

    After k steps, a constraint c with non-zero value at a must satisfy
    ``|D|**t_c * c(a) * w(I_k(c) - {c}, a) == w(I_k(c), a)`` in SUM mode and
    ``c(a) * m(I_k(c) - {c}, a) == m(I_k(c), a)`` in MAX mode, where the w/m
    are taken over the original constraints and ``t_c <= k``. Returns a
    description of every failure (empty list when all hold).
    """
    from .elim import ElimState, compute_I_k, eliminate_nest_point
    from .wcsp import all_tuples, merge_equal_scopes

    merged = merge_equal_scopes(instance)
    original = merged.by_id()
    state = ElimState.start(merged, order)
    D = merged.domain_size
    problems = []
    for k in range(len(state.order) + 1):
        deps = compute_I_k(merged, state.order, k)
        current = [(c.id, c.scope, c) for c in state.instance.constraints]
        current += [(cid, (), None) for cid in state.folded]
        for cid, scope, c in current:
            t = state.alpha_exponent[cid]
            if t > k or (mode is EvalMode.MAX and t):
                problems.append(f"k={k} c={cid}: alpha exponent {t}")
            with_c = [original[i] for i in deps[cid]]
            without_c = [original[i] for i in deps[cid] if i != cid]
            for key in all_tuples(D, len(scope)):
                value = state.folded[cid] if c is None else c.value(key)
                if value == 0:
                    continue
                a = dict(zip(scope, key))
                lhs = value * brute_w(without_c, a, mode, D)
                if mode is EvalMode.SUM:
                    lhs *= D ** t
                rhs = brute_w(with_c, a, mode, D)
                if lhs != rhs:
                    problems.append(f"k={k} c={cid} a={a}: {lhs} != {rhs}")
        if k < len(state.order):
            state = eliminate_nest_point(state, state.order[k], mode)
    return problems
