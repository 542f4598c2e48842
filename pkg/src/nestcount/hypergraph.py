"""Hypergraphs, nest points and beta-elimination orders."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Hashable, Iterable


class NotBetaAcyclic(Exception):
    """No nest point left; ``witness`` is the residual vertex set."""

    def __init__(self, witness: Iterable[int]):
        self.witness = frozenset(witness)
        super().__init__("hypergraph is not beta-acyclic; residual vertices: "
                         + " ".join(map(str, sorted(self.witness))))


class UnknownVertex(KeyError):
    pass


@dataclass(frozen=True)
class Hypergraph:
    vertices: frozenset[int]
    edges: frozenset[frozenset[int]]

    def __post_init__(self):
        for e in self.edges:
            if not e:
                raise ValueError("hypergraph edges must be non-empty")
            if not e <= self.vertices:
                raise ValueError(f"edge {sorted(e)} not contained in vertex set")

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[int]],
                   vertices: Iterable[int] = ()) -> "Hypergraph":
        """Build from possibly repeated edges; empty edges are dropped, vertices inferred."""
        es = frozenset(frozenset(e) for e in edges) - {frozenset()}
        vs = frozenset(vertices).union(*es) if es else frozenset(vertices)
        return cls(vs, es)

    @property
    def size(self) -> int:
        return sum(len(e) for e in self.edges)

    def incident_edges(self, x: int) -> list[frozenset[int]]:
        if x not in self.vertices:
            raise UnknownVertex(x)
        return [e for e in self.edges if x in e]

    def canonical_edges(self) -> list[tuple[int, ...]]:
        return sorted(tuple(sorted(e)) for e in self.edges)


def is_chain(edges: Iterable[frozenset[int] | set[int]]) -> bool:
    ordered = sorted(edges, key=len)
    return all(a <= b for a, b in zip(ordered, ordered[1:]))


def is_nest_point(h: Hypergraph, x: int) -> bool:
    return is_chain(h.incident_edges(x))


def remove_vertex(h: Hypergraph, x: int) -> Hypergraph:
    if x not in h.vertices:
        raise UnknownVertex(x)
    return Hypergraph.from_edges((e - {x} for e in h.edges), h.vertices - {x})


def induced(h: Hypergraph, keep: Iterable[int]) -> Hypergraph:
    keep = frozenset(keep)
    return Hypergraph.from_edges((e & keep for e in h.edges), keep & h.vertices)


def beta_elimination_order(h: Hypergraph) -> tuple[int, ...]:
    """Greedy nest-point elimination, smallest vertex first among nest points.

    Raises NotBetaAcyclic when a non-empty residual has no nest point.

    Removing a vertex keeps every other nest point a nest point, and can only
    create new ones among the vertices sharing an edge with it, so only those
    are re-examined after each removal.
    """
    edges = [set(e) for e in h.edges]
    incident: dict[int, set[int]] = {v: set() for v in h.vertices}
    for i, e in enumerate(edges):
        for v in e:
            incident[v].add(i)

    def nest(v: int) -> bool:
        return is_chain(edges[i] for i in incident[v])

    heap = [v for v in incident if nest(v)]
    heapq.heapify(heap)
    queued = set(heap)
    order = []
    while heap:
        x = heapq.heappop(heap)
        order.append(x)
        neighbours: set[int] = set()
        for i in incident.pop(x):
            e = edges[i]
            e.discard(x)
            neighbours |= e
        for v in neighbours - queued:
            if nest(v):
                heapq.heappush(heap, v)
                queued.add(v)
    if incident:
        raise NotBetaAcyclic(incident)
    return tuple(order)


def is_beta_elimination_order(h: Hypergraph, order: Iterable[int]) -> bool:
    order = list(order)
    if sorted(order) != sorted(h.vertices):
        return False
    for x in order:
        if not is_nest_point(h, x):
            return False
        h = remove_vertex(h, x)
    return True


def is_beta_acyclic(h: Hypergraph) -> bool:
    try:
        beta_elimination_order(h)
    except NotBetaAcyclic:
        return False
    return True


Node = tuple[str, Hashable]


@dataclass(frozen=True)
class IncidenceGraph:
    """Bipartite vertex/edge incidence graph.

    Nodes are ``("v", x)`` for hypergraph vertices and ``("e", edge)`` for
    edges, where ``edge`` is the sorted vertex tuple.
    """

    left: frozenset[Node]
    right: frozenset[Node]
    adjacency: dict[Node, frozenset[Node]]

    @property
    def nodes(self) -> frozenset[Node]:
        return self.left | self.right

    def edge_count(self) -> int:
        return sum(len(n) for n in self.adjacency.values()) // 2


def incidence_graph(h: Hypergraph) -> IncidenceGraph:
    left = frozenset(("v", x) for x in h.vertices)
    right = frozenset(("e", e) for e in h.canonical_edges())
    adj: dict[Node, set[Node]] = {n: set() for n in left | right}
    for _, e in right:
        for x in e:
            adj[("v", x)].add(("e", e))
            adj[("e", e)].add(("v", x))
    return IncidenceGraph(left, right, {n: frozenset(s) for n, s in adj.items()})
