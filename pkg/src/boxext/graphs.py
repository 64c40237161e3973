"""Labeled simple graphs plus the metric and structural predicates the rest
of the package builds on.

Vertices are dense integers ``0..n-1``; edges are stored normalized with the
smaller endpoint first.  Distances between vertices in different components
are reported as ``math.inf``, never as a sentinel integer.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

Edge = tuple[int, int]

INF = math.inf


def norm_edge(u: int, v: int) -> Edge:
    """Normalize an edge to (min, max) order."""
    if u == v:
        raise ValueError(f"self-loop at vertex {u}")
    return (u, v) if u < v else (v, u)


class SimpleGraph:
    """Undirected simple graph on vertices 0..n-1, immutable after build."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        self.n = n
        es: set[Edge] = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            e = norm_edge(u, v)
            if e in es:
                continue
            es.add(e)
            adj[e[0]].append(e[1])
            adj[e[1]].append(e[0])
        self.edges = frozenset(es)
        self.adj = tuple(tuple(sorted(ns)) for ns in adj)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SimpleGraph)
            and self.n == other.n
            and self.edges == other.edges
        )

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"SimpleGraph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def vertices(self) -> range:
        return range(self.n)

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edges

    def neighbors(self, u: int) -> tuple[int, ...]:
        self._check_vertex(u)
        return self.adj[u]

    def degree(self, u: int) -> int:
        self._check_vertex(u)
        return len(self.adj[u])

    def max_degree(self) -> int:
        return max((len(ns) for ns in self.adj), default=0)

    def min_degree(self) -> int:
        return min((len(ns) for ns in self.adj), default=0)

    def _check_vertex(self, u: int) -> None:
        if not (0 <= u < self.n):
            raise ValueError(f"invalid vertex {u} (n={self.n})")

    def _check_edge(self, e: tuple[int, int]) -> Edge:
        e = norm_edge(*e)
        if e not in self.edges:
            raise ValueError(f"edge {e} not in graph")
        return e


@dataclass(frozen=True)
class EdgeColoring:
    """A (partial or total) assignment of colors 0..palette_size-1 to edges."""

    assignment: dict[Edge, int]
    palette_size: int

    def color(self, u: int, v: int) -> int:
        return self.assignment[norm_edge(u, v)]

    def is_proper_on(self, g: SimpleGraph) -> bool:
        return not properness_violations(g, self.assignment)

    def colors_used(self) -> set[int]:
        return set(self.assignment.values())


def properness_violations(
    g: SimpleGraph, assignment: dict[Edge, int]
) -> list[tuple[int, int]]:
    """Vertices where two incident assigned edges repeat a color, as
    (vertex, color) pairs."""
    out = []
    for v in g.vertices():
        seen: set[int] = set()
        for w in g.adj[v]:
            c = assignment.get(norm_edge(v, w))
            if c is None:
                continue
            if c in seen:
                out.append((v, c))
            seen.add(c)
    return out


def bfs_distances(g: SimpleGraph, source: int) -> list[float]:
    """Distances from source to every vertex; INF where unreachable."""
    g._check_vertex(source)
    dist: list[float] = [INF] * g.n
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        for w in g.adj[u]:
            if dist[w] == INF:
                dist[w] = dist[u] + 1
                q.append(w)
    return dist


def vertex_distance(g: SimpleGraph, u: int, v: int) -> float:
    """Shortest-path length between u and v (INF if disconnected)."""
    g._check_vertex(v)
    return bfs_distances(g, u)[v]


def all_pairs_distances(g: SimpleGraph) -> list[list[float]]:
    return [bfs_distances(g, s) for s in g.vertices()]


def edge_distance(g: SimpleGraph, e: tuple[int, int], f: tuple[int, int]) -> float:
    """min over the four endpoint vertex distances between edges e and f."""
    e = g._check_edge(e)
    f = g._check_edge(f)
    de = bfs_distances(g, e[0]), bfs_distances(g, e[1])
    return min(de[i][f[j]] for i in range(2) for j in range(2))


def is_distance_k_matching(
    g: SimpleGraph, edges: Iterable[tuple[int, int]], k: int
) -> bool:
    """True iff the edges are pairwise at edge-distance >= k.

    For k >= 1 this implies the set is a matching.
    """
    es = [g._check_edge(e) for e in edges]
    if len(set(es)) != len(es):
        return k <= 0
    return all(edge_distance(g, e, f) >= k for e, f in combinations(es, 2))


def connected_components(g: SimpleGraph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in g.vertices():
        if seen[s]:
            continue
        seen[s] = True
        comp = [s]
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.adj[u]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    q.append(w)
        comps.append(sorted(comp))
    return comps


def bipartition(g: SimpleGraph) -> tuple[list[int], list[int]] | None:
    """2-coloring of the vertices by BFS, or None if an odd cycle exists."""
    side: list[int] = [-1] * g.n
    for s in g.vertices():
        if side[s] != -1:
            continue
        side[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for w in g.adj[u]:
                if side[w] == -1:
                    side[w] = 1 - side[u]
                    q.append(w)
                elif side[w] == side[u]:
                    return None
    left = [v for v in g.vertices() if side[v] == 0]
    right = [v for v in g.vertices() if side[v] == 1]
    return left, right


@dataclass(frozen=True)
class StructureReport:
    max_degree: int
    is_regular: bool
    is_bipartite: bool
    components: tuple[tuple[int, ...], ...]

    @property
    def component_count(self) -> int:
        return len(self.components)


def structure_report(g: SimpleGraph) -> StructureReport:
    """Degree, regularity, bipartiteness and component partition of g."""
    degs = {g.degree(v) for v in g.vertices()}
    return StructureReport(
        max_degree=g.max_degree(),
        is_regular=len(degs) <= 1,
        is_bipartite=bipartition(g) is not None,
        components=tuple(tuple(c) for c in connected_components(g)),
    )


def is_cycle(g: SimpleGraph) -> bool:
    """Connected, 2-regular, at least 3 vertices."""
    if g.n < 3 or g.m != g.n:
        return False
    if any(g.degree(v) != 2 for v in g.vertices()):
        return False
    return len(connected_components(g)) == 1


# ---------------------------------------------------------------------------
# Builders


def cycle(n: int) -> SimpleGraph:
    if n < 3:
        raise ValueError("cycle needs at least 3 vertices")
    return SimpleGraph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> SimpleGraph:
    """Path on n vertices (n-1 edges)."""
    if n < 1:
        raise ValueError("path needs at least 1 vertex")
    return SimpleGraph(n, [(i, i + 1) for i in range(n - 1)])


def k2() -> SimpleGraph:
    return SimpleGraph(2, [(0, 1)])


def complete_bipartite(a: int, b: int) -> SimpleGraph:
    return SimpleGraph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star(leaves: int) -> SimpleGraph:
    """K_{1,leaves}: center 0 joined to 1..leaves."""
    return SimpleGraph(leaves + 1, [(0, i + 1) for i in range(leaves)])
