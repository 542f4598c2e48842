"""Seeded instance generators.

``interval-cnf`` / ``interval-wcsp`` place scopes as a laminar family of
intervals over a random variable order, which is beta-acyclic by
construction. ``hardps`` builds the monotone formula whose incidence graph is
the chordal bipartite blow-up of a subdivided random base graph; these
formulas are beta-acyclic but have no small decomposition for the usual
dynamic programming algorithms.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .formula import CnfFormula
from .hypergraph import Hypergraph, beta_elimination_order
from .wcsp import WcspInstance, WeightedConstraint, all_tuples

KINDS = ("interval-cnf", "interval-wcsp", "hardps")


class GenSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GenSpec:
    seed: int = 0
    kind: str = "interval-cnf"
    num_vars: int = 10
    num_constraints: int = 15
    min_arity: int = 1
    max_arity: int = 3
    domain_size: int = 2
    max_numerator: int = 20
    max_denominator: int = 20
    max_support: int = 6
    base_vertices: int = 8
    edge_prob: float = 0.3
    degree: int | None = None

    def validate(self):
        if self.kind not in KINDS:
            raise GenSpecError(f"unknown kind {self.kind!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise GenSpecError("seed must fit in 64 bits")
        if self.kind == "hardps":
            if self.base_vertices < 1:
                raise GenSpecError("base graph needs at least one vertex")
            if self.degree is not None and (
                    self.degree >= self.base_vertices or self.degree * self.base_vertices % 2):
                raise GenSpecError("no regular graph with that degree and vertex count")
            if not 0 <= self.edge_prob <= 1:
                raise GenSpecError("edge probability must lie in [0, 1]")
            return
        if self.num_vars < 1 or self.num_constraints < 1:
            raise GenSpecError("variable and constraint counts must be positive")
        if not 1 <= self.min_arity <= self.max_arity:
            raise GenSpecError("need 1 <= min_arity <= max_arity")
        if self.min_arity > self.num_vars:
            raise GenSpecError("min_arity exceeds the number of variables")
        if self.domain_size < 1 or self.max_numerator < 0 or self.max_denominator < 1:
            raise GenSpecError("bad domain size or weight bounds")


def laminar_intervals(rng: random.Random, n: int, count: int, lo: int, hi: int,
                      attempts: int = 50) -> list[tuple[int, int]]:
    """``count`` closed intervals of positions 0..n-1, pairwise nested or disjoint.

    Repeats are allowed (an interval is nested in itself). When no fresh
    interval fits after ``attempts`` tries an existing one is repeated.
    """
    hi = min(hi, n)
    if lo > hi:
        raise GenSpecError(f"no interval length in [{lo}, {hi}] fits {n} positions")
    placed: list[tuple[int, int]] = []
    for _ in range(count):
        for _ in range(attempts):
            length = rng.randint(lo, hi)
            start = rng.randint(0, n - length)
            cand = (start, start + length - 1)
            if all(cand[1] < l or r < cand[0] or (l <= cand[0] and cand[1] <= r)
                   or (cand[0] <= l and r <= cand[1]) for l, r in placed):
                placed.append(cand)
                break
        else:
            placed.append(rng.choice(placed))
    return placed


def random_weight(rng: random.Random, max_num: int, max_den: int) -> Fraction:
    return Fraction(rng.randint(0, max_num), rng.randint(1, max_den))


def random_wcsp(rng: random.Random, scopes: Sequence[Sequence[int]], domain_size: int,
                max_num: int = 20, max_den: int = 20, max_support: int = 6,
                num_vars: int | None = None) -> WcspInstance:
    """Random tables on the given scopes; defaults are never zero."""
    constraints = []
    for i, scope in enumerate(scopes):
        scope = tuple(scope)
        tuples = list(all_tuples(domain_size, len(scope)))
        size = rng.randint(0, min(len(tuples), max_support))
        keys = rng.sample(tuples, size)
        default = Fraction(rng.randint(1, max(max_num, 1)), rng.randint(1, max_den))
        table = {k: random_weight(rng, max_num, max_den) for k in keys}
        constraints.append(WeightedConstraint.make(i, scope, default, table))
    return WcspInstance(domain_size, constraints, num_vars=num_vars)


def random_formula(rng: random.Random, scopes: Sequence[Sequence[int]], num_vars: int) -> CnfFormula:
    clauses = [[v if rng.random() < 0.5 else -v for v in scope] for scope in scopes]
    return CnfFormula.from_clauses(num_vars, clauses)


def gen_interval_beta_acyclic(spec: GenSpec) -> CnfFormula | WcspInstance:
    spec.validate()
    if spec.kind not in ("interval-cnf", "interval-wcsp"):
        raise GenSpecError(f"interval generator cannot build {spec.kind!r}")
    rng = random.Random(spec.seed)
    order = list(range(1, spec.num_vars + 1))
    rng.shuffle(order)
    intervals = laminar_intervals(rng, spec.num_vars, spec.num_constraints,
                                  spec.min_arity, spec.max_arity)
    scopes = [sorted(order[l:r + 1]) for l, r in intervals]
    if spec.kind == "interval-cnf":
        out = random_formula(rng, scopes, spec.num_vars)
        edges = [c.variables for c in out.clauses]
    else:
        out = random_wcsp(rng, scopes, spec.domain_size, spec.max_numerator,
                          spec.max_denominator, spec.max_support, spec.num_vars)
        edges = scopes
    beta_elimination_order(Hypergraph.from_edges(edges))
    return out


def random_beta_acyclic_edges(rng: random.Random, num_vertices: int,
                              max_arity: int | None = None,
                              grow: float = 0.6, fresh: float = 0.5) -> list[frozenset[int]]:
    """A random beta-acyclic edge set, built by inserting nest points.

    Each new vertex joins a random inclusion chain of existing edges (or the
    empty set), either in place or as a new copy of the chain element, so it
    is a nest point and deleting it restores the previous hypergraph. Labels
    are shuffled at the end so that the construction order is hidden.
    """
    edges: list[frozenset[int]] = []
    for x in range(1, num_vertices + 1):
        if edges and rng.random() < 0.7:
            current = rng.choice(edges)
        else:
            current = frozenset()
        chain = [current]
        while rng.random() < grow:
            bigger = [e for e in edges if current < e]
            if not bigger:
                break
            current = rng.choice(bigger)
            chain.append(current)
        if max_arity is not None:
            chain = [e for e in chain if len(e) < max_arity] or [frozenset()]
        for e in chain:
            grown = e | {x}
            if e and rng.random() >= fresh:
                edges[edges.index(e)] = grown
            elif grown not in edges:
                edges.append(grown)
    labels = list(range(1, num_vertices + 1))
    rng.shuffle(labels)
    relabel = dict(zip(range(1, num_vertices + 1), labels))
    return [frozenset(relabel[v] for v in e) for e in edges]


def random_edges(rng: random.Random, num_vertices: int, num_edges: int,
                 max_arity: int | None = None) -> list[frozenset[int]]:
    """Uniformly random non-empty vertex subsets (duplicates removed)."""
    max_arity = min(max_arity or num_vertices, num_vertices)
    out: list[frozenset[int]] = []
    for _ in range(num_edges):
        k = rng.randint(1, max_arity)
        e = frozenset(rng.sample(range(1, num_vertices + 1), k))
        if e not in out:
            out.append(e)
    return out


def base_graph(spec: GenSpec) -> nx.Graph:
    if spec.degree is not None:
        return nx.random_regular_graph(spec.degree, spec.base_vertices, seed=spec.seed)
    rng = random.Random(spec.seed)
    g = nx.empty_graph(spec.base_vertices)
    for u in range(spec.base_vertices):
        for v in range(u + 1, spec.base_vertices):
            if rng.random() < spec.edge_prob:
                g.add_edge(u, v)
    return g


def hardps_graph(g: nx.Graph) -> nx.Graph:
    """The chordal bipartite graph built from ``g``.

    Vertex names: ``("x", v)``, ``("y", v)`` for every vertex v and
    ``("p", e, u)``, ``("q", e, u)`` for every edge e and endpoint u. All x–y
    pairs are adjacent, and each edge e = uv contributes the paths
    x_u - p_{e,u} - q_{e,u} - y_v and x_v - p_{e,v} - q_{e,v} - y_u.
    """
    h = nx.Graph()
    vs = sorted(g.nodes)
    h.add_nodes_from(("x", v) for v in vs)
    h.add_nodes_from(("y", v) for v in vs)
    h.add_edges_from((("x", v), ("y", u)) for v in vs for u in vs)
    for u, v in sorted(tuple(sorted(e)) for e in g.edges):
        e = (u, v)
        h.add_edges_from([
            (("p", e, u), ("q", e, u)), (("p", e, v), ("q", e, v)),
            (("x", u), ("p", e, u)), (("y", v), ("q", e, u)),
            (("x", v), ("p", e, v)), (("y", u), ("q", e, v)),
        ])
    return h


def subdivide(g: nx.Graph) -> nx.Graph:
    """Replace every edge uv by a path u - w - v through a fresh vertex."""
    s = nx.Graph()
    s.add_nodes_from(("v", v) for v in g.nodes)
    for u, v in sorted(tuple(sorted(e)) for e in g.edges):
        w = ("s", u, v)
        s.add_edges_from([(("v", u), w), (w, ("v", v))])
    return s


def gen_hardps(spec: GenSpec) -> CnfFormula:
    """Monotone formula with variables x_*, q_* and one clause per y_*, p_* vertex."""
    spec.validate()
    if spec.kind != "hardps":
        raise GenSpecError(f"hardps generator cannot build {spec.kind!r}")
    h = hardps_graph(subdivide(base_graph(spec)))
    variables = sorted((n for n in h if n[0] in "xq"), key=lambda n: (n[0] != "x", repr(n)))
    number = {n: i for i, n in enumerate(variables, start=1)}
    clause_nodes = sorted((n for n in h if n[0] in "yp"), key=lambda n: (n[0] != "y", repr(n)))
    clauses = [sorted(number[m] for m in h[n]) for n in clause_nodes]
    formula = CnfFormula.from_clauses(len(variables), clauses)
    beta_elimination_order(Hypergraph.from_edges(c.variables for c in formula.clauses))
    return formula


def generate(spec: GenSpec) -> CnfFormula | WcspInstance:
    if spec.kind == "hardps":
        return gen_hardps(spec)
    return gen_interval_beta_acyclic(spec)
