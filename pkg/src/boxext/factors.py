"""Factors of the product: a graph together with a proper edge coloring that
uses exactly max-degree many colors, and the doubling construction that makes
a factor regular without spending extra colors.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .graphs import (
    Edge,
    EdgeColoring,
    SimpleGraph,
    all_pairs_distances,
    bipartition,
    is_cycle,
    norm_edge,
    properness_violations,
    star,
)

FAMILIES = ("bipartite", "even_cycle", "user_supplied")


@dataclass(frozen=True)
class Factor:
    """A graph whose edges carry a proper coloring with exactly Δ colors."""

    graph: SimpleGraph
    delta: int
    coloring: EdgeColoring
    family: str


@dataclass(frozen=True)
class RegularizedFactor:
    """A Δ-regular extension of a factor.

    ``embedding`` maps original vertices into the regular graph; here it is
    always the identity on indices, kept explicit so downstream code never
    assumes that.
    """

    factor: Factor
    embedding: dict[int, int]
    original_vertex_count: int

    @property
    def graph(self) -> SimpleGraph:
        return self.factor.graph

    @property
    def delta(self) -> int:
        return self.factor.delta

    @property
    def coloring(self) -> EdgeColoring:
        return self.factor.coloring


def color_bipartite(g: SimpleGraph) -> EdgeColoring:
    """Proper Δ(g)-edge-coloring of a bipartite graph.

    Insert edges one at a time; when the smallest free colors at the two
    endpoints disagree, flip the two-color alternating path from one endpoint
    to merge them.
    """
    if bipartition(g) is None:
        raise ValueError("graph is not bipartite")
    delta = g.max_degree()
    # at_color[v][c] = neighbor joined to v by an edge of color c
    at_color: list[dict[int, int]] = [{} for _ in range(g.n)]
    assignment: dict[Edge, int] = {}

    def free(v: int) -> int:
        for c in range(delta):
            if c not in at_color[v]:
                return c
        raise AssertionError("no free color at vertex during insertion")

    def set_color(u: int, v: int, c: int) -> None:
        assignment[norm_edge(u, v)] = c
        at_color[u][c] = v
        at_color[v][c] = u

    for (u, v) in g.sorted_edges():
        a, b = free(u), free(v)
        if a != b:
            # Walk the a/b alternating path from v.  It cannot touch u:
            # passing through needs both colors at u, and ending there needs
            # even length, which bipartiteness forbids for a neighbor of v.
            walk: list[tuple[int, int, int]] = []
            x, want = v, a
            while want in at_color[x]:
                y = at_color[x][want]
                walk.append((x, y, want))
                x, want = y, (b if want == a else a)
            # swap a <-> b along the walk, two-phase to avoid clobbering
            for x, y, c in walk:
                del at_color[x][c]
                del at_color[y][c]
            for x, y, c in walk:
                other = b if c == a else a
                assignment[norm_edge(x, y)] = other
                at_color[x][other] = y
                at_color[y][other] = x
        set_color(u, v, a)
    return EdgeColoring(assignment, delta)


def color_even_cycle(g: SimpleGraph) -> EdgeColoring:
    """Alternating 2-coloring of an even cycle."""
    if not is_cycle(g):
        raise ValueError("graph is not a cycle")
    if g.n % 2 != 0:
        raise ValueError("cycle has odd length")
    order = [0, g.adj[0][0]]
    while len(order) < g.n:
        prev, cur = order[-2], order[-1]
        order.append(next(w for w in g.adj[cur] if w != prev))
    assignment = {
        norm_edge(order[i], order[(i + 1) % g.n]): i % 2 for i in range(g.n)
    }
    return EdgeColoring(assignment, 2)


def validate_factor(
    g: SimpleGraph, coloring: EdgeColoring, family: str = "user_supplied"
) -> Factor:
    """Accept any graph with a user-certified proper Δ-edge-coloring.

    This is the only entry point for factors that are neither bipartite nor
    even cycles, since finding a Δ-coloring is hard in general.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    delta = g.max_degree()
    missing = g.edges - set(coloring.assignment)
    if missing:
        raise ValueError(f"coloring is partial; {len(missing)} edges uncolored")
    extra = set(coloring.assignment) - g.edges
    if extra:
        raise ValueError(f"coloring mentions non-edges: {sorted(extra)[:3]}")
    bad = [c for c in coloring.assignment.values() if not 0 <= c < delta]
    if bad or coloring.palette_size != delta:
        raise ValueError(
            f"palette must be exactly delta={delta} "
            f"(got palette_size={coloring.palette_size})"
        )
    if properness_violations(g, coloring.assignment):
        raise ValueError("coloring is not proper")
    return Factor(g, delta, coloring, family)


def bipartite_factor(g: SimpleGraph) -> Factor:
    return Factor(g, g.max_degree(), color_bipartite(g), "bipartite")


def even_cycle_factor(g: SimpleGraph) -> Factor:
    return Factor(g, 2, color_even_cycle(g), "even_cycle")


def regularize(f: Factor) -> RegularizedFactor:
    """Make a factor Δ-regular by iterated doubling.

    Each round duplicates the current graph, colors the copy identically and
    joins every deficient vertex to its twin with a color missing at both
    ends (the two ends miss the same colors, so the smallest missing color
    works).  Every round raises each deficient degree by exactly one, so at
    most Δ - δ_min rounds are needed.
    """
    g, delta = f.graph, f.delta
    assignment = dict(f.coloring.assignment)
    rounds = 0
    max_rounds = max(delta - g.min_degree(), 0) if g.n else 0
    while g.n and g.min_degree() < delta:
        if rounds >= max_rounds:
            raise AssertionError("doubling did not terminate in delta rounds")
        n = g.n
        edges = list(g.edges)
        new_edges = edges + [(u + n, v + n) for u, v in edges]
        new_assignment = dict(assignment)
        for (u, v), c in assignment.items():
            new_assignment[norm_edge(u + n, v + n)] = c
        for v in range(n):
            if g.degree(v) < delta:
                used = {assignment[norm_edge(v, w)] for w in g.adj[v]}
                c = min(set(range(delta)) - used)
                new_edges.append((v, v + n))
                new_assignment[norm_edge(v, v + n)] = c
        g = SimpleGraph(2 * n, new_edges)
        assignment = new_assignment
        rounds += 1
    coloring = EdgeColoring(assignment, delta)
    reg = Factor(g, delta, coloring, f.family)
    embedding = {v: v for v in range(f.graph.n)}
    return RegularizedFactor(reg, embedding, f.graph.n)


def doubling_rounds(f: Factor) -> int:
    """Number of doublings regularize will perform."""
    if f.graph.n == 0:
        return 0
    return max(f.delta - f.graph.min_degree(), 0)


def distance_preservation_check(
    f: Factor, rf: RegularizedFactor, partner_delta: int
) -> bool:
    """Regularizing one factor never pulls far product edges close.

    Pairs f with a star of the given degree, and checks that every pair of
    product edges at distance >= 3 in the original product keeps distance
    >= 3 after the factor is regularized.  Test utility only.
    """
    partner = star(partner_delta) if partner_delta > 0 else SimpleGraph(1, [])
    d_orig = all_pairs_distances(f.graph)
    d_reg = all_pairs_distances(rf.graph)
    d_partner = all_pairs_distances(partner)

    def product_edges(g: SimpleGraph):
        for (u, v) in g.sorted_edges():
            for p in partner.vertices():
                yield ("f", (u, v), p)  # edge inside the factor, at partner p
        for (p, q) in partner.sorted_edges():
            for u in g.vertices():
                yield ("p", (p, q), u)  # partner edge, at factor vertex u

    def pair_dist(dg, e1, e2):
        kind1, a1, b1 = e1
        kind2, a2, b2 = e2
        ends1 = [(a1[0], b1), (a1[1], b1)] if kind1 == "f" else [(b1, a1[0]), (b1, a1[1])]
        ends2 = [(a2[0], b2), (a2[1], b2)] if kind2 == "f" else [(b2, a2[0]), (b2, a2[1])]
        return min(
            dg[x1][x2] + d_partner[y1][y2] for x1, y1 in ends1 for x2, y2 in ends2
        )

    orig = list(product_edges(f.graph))
    for e1, e2 in combinations(orig, 2):
        if pair_dist(d_orig, e1, e2) >= 3 and pair_dist(d_reg, e1, e2) < 3:
            return False
    return True
