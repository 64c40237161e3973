"""Special product families with their own constructions.

* bipartite graph x K2, via a constructive kernel-based list edge coloring;
* odd cycle x K2, same reduction but a greedy cycle coloring;
* bipartite graph x a power of K2, by peeling the last K2 factor;
* odd cycle x odd cycle with five colors, via the truncated grid, a
  designated fifth color on the wrap edges, and local repairs.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator

from .engine import (
    ExtensionResult,
    HypothesisReport,
    Precoloring,
    ProductExtender,
)
from .errors import HypothesisViolation, InternalInvariantError
from .factors import Factor, color_bipartite, validate_factor
from .graphs import (
    Edge,
    EdgeColoring,
    SimpleGraph,
    all_pairs_distances,
    bipartition,
    cycle,
    k2,
    norm_edge,
    path,
)
from .oracle import verify
from .product import (
    MaterializedProduct,
    ProductEdge,
    bricks_of,
    edge_between,
    iter_product_edges,
    make_edge,
    make_square,
    product_edge_distance,
)


# ---------------------------------------------------------------------------
# Constructive list edge coloring of bipartite graphs


@dataclass(frozen=True)
class ListAssignment:
    """Per-edge color lists for a list edge coloring problem."""

    lists: dict[Edge, frozenset[int]]

    @classmethod
    def uniform(cls, g: SimpleGraph, colors: Iterable[int]) -> "ListAssignment":
        cs = frozenset(colors)
        return cls({e: cs for e in g.sorted_edges()})


def galvin_list_color(
    g: SimpleGraph,
    lists: ListAssignment,
    reference: EdgeColoring,
    check: bool = True,
) -> dict[Edge, int]:
    """Proper edge coloring of a bipartite graph from lists of size >= Delta.

    The reference coloring orders conflicting edges: at a left vertex the
    higher reference color dominates, at a right vertex the lower one.  For
    each color in turn, a kernel of the still-uncolored edges whose lists
    contain it is found by deferred acceptance (left endpoints propose along
    descending reference colors, right endpoints hold the lowest offer); the
    kernel is colored and the color is deleted from neighboring lists.  Each
    deletion is justified by a dominating kernel edge, so every list outlasts
    its deletions and the coloring completes.

    With ``check`` on, kernel independence and the absorption property are
    asserted on every color round.
    """
    parts = bipartition(g)
    if parts is None:
        raise ValueError("graph is not bipartite")
    left = set(parts[0])
    delta = g.max_degree()
    remaining: dict[Edge, set[int]] = {}
    for e in g.sorted_edges():
        lst = lists.lists.get(e)
        if lst is None or len(lst) < delta:
            raise ValueError(f"list of edge {e} smaller than max degree {delta}")
        remaining[e] = set(lst)

    def left_end(e: Edge) -> int:
        return e[0] if e[0] in left else e[1]

    def dominates(e: Edge, f: Edge, at: int) -> bool:
        # does e dominate f at their shared vertex?
        if at in left:
            return reference.color(*e) > reference.color(*f)
        return reference.color(*e) < reference.color(*f)

    colored: dict[Edge, int] = {}
    all_colors = sorted({c for lst in remaining.values() for c in lst})
    for alpha in all_colors:
        pool = [e for e in g.sorted_edges() if e not in colored and alpha in remaining[e]]
        if not pool:
            continue
        kernel = _deferred_acceptance_kernel(pool, left_end, reference)
        if check:
            _check_kernel_round(g, pool, kernel, left, dominates)
        for e in kernel:
            colored[e] = alpha
        kernel_vertices = {v for e in kernel for v in e}
        for f in pool:
            if f in kernel:
                continue
            if f[0] in kernel_vertices or f[1] in kernel_vertices:
                remaining[f].discard(alpha)

    uncolored = [e for e in g.sorted_edges() if e not in colored]
    if uncolored:
        raise InternalInvariantError(
            f"list coloring left {len(uncolored)} edges uncolored; "
            "lists were too small for the kernel argument"
        )
    return colored


def _deferred_acceptance_kernel(pool, left_end, reference):
    """Stable matching of the pool edges: left side proposes along descending
    reference colors, right side keeps the lowest offer."""
    by_left: dict[int, list[Edge]] = {}
    for e in pool:
        by_left.setdefault(left_end(e), []).append(e)
    for u, es in by_left.items():
        es.sort(key=lambda e: -reference.color(*e))
    cursor = {u: 0 for u in by_left}
    held: dict[int, Edge] = {}
    free = sorted(by_left)
    while free:
        u = free.pop()
        es = by_left[u]
        while cursor[u] < len(es):
            e = es[cursor[u]]
            cursor[u] += 1
            v = e[0] if e[1] == u else e[1]
            cur = held.get(v)
            if cur is None:
                held[v] = e
                break
            if reference.color(*e) < reference.color(*cur):
                held[v] = e
                free.append(left_end(cur))
                break
            # rejected; u proposes along its next edge
        # u stays unmatched if it ran out of edges
    return set(held.values())


def _check_kernel_round(g, pool, kernel, left, dominates) -> None:
    for e, f in combinations(sorted(kernel), 2):
        if set(e) & set(f):
            raise InternalInvariantError(f"kernel edges {e} and {f} share a vertex")
    kernel_at: dict[int, Edge] = {}
    for e in kernel:
        kernel_at[e[0]] = e
        kernel_at[e[1]] = e
    for f in pool:
        if f in kernel:
            continue
        absorbed = any(
            v in kernel_at and dominates(kernel_at[v], f, v) for v in f
        )
        touched = any(v in kernel_at for v in f)
        if touched and not absorbed:
            raise InternalInvariantError(
                f"edge {f} loses a list color without a dominating kernel edge"
            )


# ---------------------------------------------------------------------------
# bipartite x K2 and odd cycle x K2


def _k2_hypotheses(
    g: SimpleGraph, pre: Precoloring, palette: int, extra: list[str]
) -> HypothesisReport:
    violations = list(extra)
    if pre.palette != palette:
        violations.append(f"palette: declared {pre.palette}, expected {palette}")
    dm = [all_pairs_distances(g), all_pairs_distances(k2())]
    good = []
    seen = set()
    for e, c in pre.entries:
        if len(e.base) != 2 or e.axis not in (0, 1):
            violations.append(f"edge: {e} has wrong arity")
            continue
        u, lv = e.base
        if not (0 <= u < g.n and lv in (0, 1) and (e.axis == 1 or e.other < g.n)):
            violations.append(f"edge: {e} out of range")
            continue
        if e.axis == 0 and not g.has_edge(u, e.other):
            violations.append(f"edge: {e} not an edge of the base graph")
            continue
        if not 0 <= c < palette:
            violations.append(f"palette: color {c} of {e} outside 0..{palette - 1}")
        if e in seen:
            violations.append(f"matching: edge {e} prescribed twice")
        seen.add(e)
        good.append((e, c))
    for (e1, _), (e2, _) in combinations(good, 2):
        d = product_edge_distance(dm, e1, e2)
        if d < 3:
            violations.append(f"distance: {e1} and {e2} at distance {d} < 3")
    return HypothesisReport(not violations, tuple(violations))


def _split_k2_pre(pre: Precoloring):
    level_pre: dict[Edge, tuple[int, int]] = {}  # base edge -> (level, color)
    rung_pre: dict[int, int] = {}  # base vertex -> color
    for e, c in pre.entries:
        if e.axis == 0:
            level_pre[e.factor_edge] = (e.base[1], c)
        else:
            rung_pre[e.base[0]] = c
    return level_pre, rung_pre


def _k2_result(
    g: SimpleGraph,
    chi: dict[Edge, int],
    rung_pre: dict[int, int],
    palette: int,
    stats: dict,
) -> ExtensionResult:
    """Copy a proper coloring of g to both levels and color every rung with
    a color missing at its vertex; the two levels see identical color sets
    at each vertex, so a free color always exists."""
    colors: dict[ProductEdge, int] = {}
    for (u, v), c in chi.items():
        for lv in (0, 1):
            colors[make_edge(0, u, v, (0, lv))] = c
    for u in g.vertices():
        at_u = {chi[norm_edge(u, w)] for w in g.neighbors(u)}
        free = [c for c in range(palette) if c not in at_u]
        if not free:
            raise InternalInvariantError(f"no free color for the rung at {u}")
        want = rung_pre.get(u)
        if want is not None:
            if want not in free:
                raise InternalInvariantError(
                    f"prescribed rung color {want} not free at {u}"
                )
            rc = want
        else:
            rc = free[0]
        colors[make_edge(1, 0, 1, (u, 0))] = rc

    def edges() -> Iterator[ProductEdge]:
        return iter_product_edges([g, k2()])

    return ExtensionResult(
        palette=palette,
        color_of=colors.__getitem__,
        edges=edges,
        diff=dict(colors),
        stats=stats,
        loci=frozenset(),
    )


def extend_bipartite_k2(
    g: SimpleGraph, pre: Precoloring, check: bool = True
) -> ExtensionResult:
    """Extend a distance-3 precoloring of (bipartite g) x K2 with Delta+1
    colors.

    Level-prescribed edges are removed from the base graph and their colors
    struck from adjacent lists; rung prescriptions are struck from the lists
    at their vertex.  The remainder is list-colored by the kernel method,
    copied to both levels, and the rungs take the color missing at their
    vertex.
    """
    extra = [] if bipartition(g) is not None else ["bipartite: base graph is not"]
    palette = g.max_degree() + 1
    report = _k2_hypotheses(g, pre, palette, extra)
    if not report.ok:
        raise HypothesisViolation(report)
    level_pre, rung_pre = _split_k2_pre(pre)

    kept = [e for e in g.sorted_edges() if e not in level_pre]
    gp = SimpleGraph(g.n, kept)
    lists = {e: set(range(palette)) for e in kept}
    for (u, v), (_, c) in level_pre.items():
        for e in kept:
            if u in e or v in e:
                lists[e].discard(c)
    for u, c in rung_pre.items():
        for w in gp.neighbors(u):
            lists[norm_edge(u, w)].discard(c)
    for e, lst in lists.items():
        if len(lst) < g.max_degree():
            raise InternalInvariantError(
                f"list at {e} shrank below Delta; distance condition broken?"
            )

    reference = color_bipartite(gp) if gp.edges else EdgeColoring({}, 0)
    psi = galvin_list_color(
        gp, ListAssignment({e: frozenset(s) for e, s in lists.items()}), reference, check
    )
    chi = dict(psi)
    for (u, v), (_, c) in level_pre.items():
        chi[(u, v)] = c
    if check:
        bad = verify(g, chi, palette=palette)
        if not bad.proper:
            raise InternalInvariantError("base coloring improper after reinsertion")
    return _k2_result(
        g, chi, rung_pre, palette, {"mode": "bipartite_k2", "baseline": "none"}
    )


def extend_odd_cycle_k2(
    cycle_order: int, pre: Precoloring, check: bool = True
) -> ExtensionResult:
    """Extend a distance-3 precoloring of C_(2k+1) x K2 with 3 colors.

    Same reduction as the bipartite case, but the base is list-colored
    greedily: removed edges split the cycle into paths, and an intact cycle
    is traversed so that the closing edge still has a full list.
    """
    if cycle_order < 3 or cycle_order % 2 == 0:
        raise ValueError("cycle order must be an odd number >= 3")
    g = cycle(cycle_order)
    report = _k2_hypotheses(g, pre, 3, [])
    if not report.ok:
        raise HypothesisViolation(report)
    level_pre, rung_pre = _split_k2_pre(pre)

    ring = [norm_edge(i, (i + 1) % cycle_order) for i in range(cycle_order)]
    lists: dict[Edge, set[int]] = {e: {0, 1, 2} for e in ring if e not in level_pre}
    for (u, v), (_, c) in level_pre.items():
        for e in lists:
            if u in e or v in e:
                lists[e].discard(c)
    for u, c in rung_pre.items():
        for e in lists:
            if u in e:
                lists[e].discard(c)

    chi: dict[Edge, int] = {}
    if level_pre:
        # the removed edges cut the ring into paths; color each greedily
        runs: list[list[Edge]] = []
        cur: list[Edge] = []
        start = min(i for i, e in enumerate(ring) if e in level_pre)
        for off in range(1, cycle_order + 1):
            e = ring[(start + off) % cycle_order]
            if e in level_pre:
                if cur:
                    runs.append(cur)
                    cur = []
            else:
                cur.append(e)
        if cur:
            runs.append(cur)
        for run in runs:
            prev = None
            for e in run:
                c = min(x for x in lists[e] if x != prev)
                chi[e] = c
                prev = c
    elif lists:
        # intact odd cycle: start right after an edge with a full list so
        # the closing constraint lands on that edge
        full = min(i for i, e in enumerate(ring) if len(lists[e]) == 3)
        order = [ring[(full + off) % cycle_order] for off in range(1, cycle_order + 1)]
        prev = None
        for e in order[:-1]:
            c = min(x for x in lists[e] if x != prev)
            chi[e] = c
            prev = c
        last = order[-1]
        first_color = chi[order[0]]
        chi[last] = min(x for x in lists[last] if x != prev and x != first_color)
    for e, (_, c) in level_pre.items():
        chi[e] = c
    if check:
        rep = verify(g, chi, palette=3)
        if not rep.proper:
            raise InternalInvariantError("cycle coloring improper after reinsertion")
    return _k2_result(
        g, chi, rung_pre, 3, {"mode": "odd_cycle_k2", "baseline": "none"}
    )


def extend_k2_power(
    g: SimpleGraph, alpha: int, pre: Precoloring, check: bool = True
) -> ExtensionResult:
    """Extend a distance-3 precoloring of g x K2^alpha with Delta+alpha
    colors, for bipartite g.

    The last K2 factor is peeled by the K2 theorem applied to the bipartite
    base g x K2^(alpha-1); the base itself is materialized and list-colored
    in one pass.  The peel re-checks the distance condition on the product
    it actually colors, so any gap fails loudly.
    """
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    if bipartition(g) is None:
        raise HypothesisViolation(
            HypothesisReport(False, ("bipartite: base graph is not",))
        )
    factor_graphs = [g] + [k2() for _ in range(alpha)]
    palette = g.max_degree() + alpha

    if alpha == 0:
        return _extend_alpha0(g, pre, palette, check)

    base_mp = MaterializedProduct(factor_graphs[:-1])
    base = base_mp.graph

    def to_base(e: ProductEdge) -> ProductEdge:
        lo, hi = e.endpoints()
        if e.axis == len(factor_graphs) - 1:
            return make_edge(1, 0, 1, (base_mp.index(lo[:-1]), 0))
        u, v = base_mp.index(lo[:-1]), base_mp.index(hi[:-1])
        return make_edge(0, u, v, (min(u, v), lo[-1]))

    violations = []
    inner_entries = []
    for e, c in pre.entries:
        if len(e.base) != alpha + 1:
            violations.append(f"edge: {e} has wrong arity for alpha={alpha}")
            continue
        ok = all(
            0 <= coord < fg.n for coord, fg in zip(e.base, factor_graphs)
        ) and e.other < factor_graphs[e.axis].n
        if not ok or not factor_graphs[e.axis].has_edge(*e.factor_edge):
            violations.append(f"edge: {e} is not an edge of the product")
            continue
        inner_entries.append((to_base(e), c))
    if violations:
        raise HypothesisViolation(HypothesisReport(False, tuple(violations)))

    inner = extend_bipartite_k2(
        base, Precoloring.of(inner_entries, palette), check=check
    )

    def color_of(e: ProductEdge) -> int:
        return inner.color_of(to_base(e))

    return ExtensionResult(
        palette=palette,
        color_of=color_of,
        edges=lambda: iter_product_edges(factor_graphs),
        diff={e: color_of(e) for e in iter_product_edges(factor_graphs)},
        stats={"mode": "k2_power", "alpha": alpha, "baseline": "none"},
        loci=frozenset(),
    )


def _extend_alpha0(
    g: SimpleGraph, pre: Precoloring, palette: int, check: bool
) -> ExtensionResult:
    violations = []
    level_pre: dict[Edge, int] = {}
    for e, c in pre.entries:
        if len(e.base) != 1 or e.axis != 0:
            violations.append(f"edge: {e} is a rung prescription; alpha=0 has no rungs")
            continue
        if not (e.base[0] < g.n and e.other < g.n and g.has_edge(e.base[0], e.other)):
            violations.append(f"edge: {e} not an edge of the base graph")
            continue
        if not 0 <= c < palette:
            violations.append(f"palette: color {c} outside 0..{palette - 1}")
        level_pre[e.factor_edge] = c
    if violations:
        raise HypothesisViolation(HypothesisReport(False, tuple(violations)))
    kept = [e for e in g.sorted_edges() if e not in level_pre]
    gp = SimpleGraph(g.n, kept)
    lists = {e: set(range(palette)) for e in kept}
    for (u, v), c in level_pre.items():
        for e in kept:
            if u in e or v in e:
                lists[e].discard(c)
    reference = color_bipartite(gp) if gp.edges else EdgeColoring({}, 0)
    psi = galvin_list_color(
        gp, ListAssignment({e: frozenset(s) for e, s in lists.items()}), reference, check
    )
    chi = dict(psi)
    chi.update(level_pre)
    colors = {make_edge(0, u, v, (u,)): c for (u, v), c in chi.items()}
    return ExtensionResult(
        palette=palette,
        color_of=colors.__getitem__,
        edges=lambda: iter_product_edges([g]),
        diff=dict(colors),
        stats={"mode": "k2_power", "alpha": 0, "baseline": "none"},
        loci=frozenset(),
    )


# ---------------------------------------------------------------------------
# odd cycle x odd cycle with five colors


@dataclass(frozen=True)
class TorusInstance:
    """C_(2k+1) x C_(2l+1): vertices (i, j) with i mod 2k+1, j mod 2l+1;
    the wrap edges (i,2l)(i,0) and (2k,j)(0,j) close the rows and columns."""

    k: int
    l: int

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise ValueError("need k, l >= 1")

    @property
    def rows(self) -> int:
        return 2 * self.k + 1

    @property
    def cols(self) -> int:
        return 2 * self.l + 1

    def factor_graphs(self) -> list[SimpleGraph]:
        return [cycle(self.rows), cycle(self.cols)]

    def materialize(self) -> MaterializedProduct:
        return MaterializedProduct(self.factor_graphs())

    def is_wrap(self, e: ProductEdge) -> bool:
        closing = (0, self.rows - 1) if e.axis == 0 else (0, self.cols - 1)
        return e.factor_edge == closing


def _odd_odd_hypotheses(inst: TorusInstance, pre: Precoloring) -> HypothesisReport:
    violations: list[str] = []
    fg = inst.factor_graphs()
    if inst.k < 2 or inst.l < 2:
        # a brick needs a 3-edge path with 4 distinct vertices, so C3 factors
        # have no brick-neighborhoods and the free-square argument is vacuous
        violations.append("torus: construction needs k >= 2 and l >= 2")
    if pre.palette != 5:
        violations.append(f"palette: declared {pre.palette}, expected 5")
    dm = [all_pairs_distances(g) for g in fg]
    good = []
    seen = set()
    for e, c in pre.entries:
        if len(e.base) != 2 or e.axis not in (0, 1):
            violations.append(f"edge: {e} has wrong arity")
            continue
        ok = all(0 <= x < fg[i].n for i, x in enumerate(e.base)) and e.other < fg[e.axis].n
        if not ok or not fg[e.axis].has_edge(*e.factor_edge):
            violations.append(f"edge: {e} not an edge of the torus")
            continue
        if not 0 <= c < 5:
            violations.append(f"palette: color {c} of {e} outside 0..4")
        if e in seen:
            violations.append(f"matching: edge {e} prescribed twice")
        seen.add(e)
        good.append((e, c))
    for (e1, _), (e2, _) in combinations(good, 2):
        d = product_edge_distance(dm, e1, e2)
        if d < 3:
            violations.append(f"distance: {e1} and {e2} at distance {d} < 3")
    return HypothesisReport(not violations, tuple(violations))


def _square_edges(i0: int, j0: int, R: int, C: int) -> frozenset[ProductEdge]:
    """Edge set of the square whose corners are (i0,j0) and (i0+1,j0+1)."""
    i1, j1 = (i0 + 1) % R, (j0 + 1) % C
    return frozenset(
        {
            make_edge(0, i0, i1, (i0, j0)),
            make_edge(0, i0, i1, (i0, j1)),
            make_edge(1, j0, j1, (i0, j0)),
            make_edge(1, j0, j1, (i1, j0)),
        }
    )


def find_free_square(inst: TorusInstance, entries) -> tuple[int, int]:
    """First square (lexicographic base) contained in no brick-neighborhood
    of any precolored edge."""
    fg = inst.factor_graphs()
    blocked: set[frozenset[ProductEdge]] = set()
    for e, _ in entries:
        for b in bricks_of(fg, e):
            for sq in b.squares():
                blocked.add(frozenset(sq.edges()))
    for i0 in range(inst.rows):
        for j0 in range(inst.cols):
            if _square_edges(i0, j0, inst.rows, inst.cols) not in blocked:
                return (i0, j0)
    raise InternalInvariantError("no free square in the torus")


def _map_edge(e: ProductEdge, f) -> ProductEdge:
    lo, hi = e.endpoints()
    return edge_between(f(lo), f(hi))


def extend_odd_odd(
    inst: TorusInstance,
    pre: Precoloring,
    free_square: tuple[int, int] | None = None,
    fifth_color: int | None = None,
    check: bool = True,
) -> ExtensionResult:
    """Extend a distance-3 precoloring of an odd x odd torus with 5 colors.

    A square untouched by every brick-neighborhood of the precolored edges is
    moved to the corner by relabeling.  A designated fifth color is set
    aside; the torus minus its wrap edges (the truncated grid) is colored
    with the other four by the general engine, the wrap edges all take the
    fifth color, fifth-color prescriptions are repaired by local swaps and
    square rotations, and finally the corner square is fixed by recoloring
    its non-kept edges with colors free at their endpoints.

    ``free_square`` and ``fifth_color`` override the automatic choices (used
    by the locality tests to compare against a baseline run).
    """
    R, C = inst.rows, inst.cols
    fg = inst.factor_graphs()
    report = _odd_odd_hypotheses(inst, pre)
    if not report.ok:
        raise HypothesisViolation(report)

    if free_square is None:
        i0, j0 = find_free_square(inst, pre.entries)
    else:
        i0, j0 = free_square

    sig = lambda v: ((v[0] - i0 - 1) % R, (v[1] - j0 - 1) % C)
    sig_inv = lambda v: ((v[0] + i0 + 1) % R, (v[1] + j0 + 1) % C)
    entries = sorted((_map_edge(e, sig), c) for e, c in pre.entries)

    if fifth_color is None:
        counts = Counter(c for _, c in entries)
        fifth = min(range(5), key=lambda c: (counts.get(c, 0), c))
    else:
        fifth = fifth_color
    reals = [c for c in range(5) if c != fifth]  # role r <-> real color reals[r]
    role_of = {real: r for r, real in enumerate(reals)}

    # --- truncated grid, colored by the general engine in role space
    prow = validate_factor(
        path(R), EdgeColoring({(t, t + 1): t % 2 for t in range(R - 1)}, 2)
    )
    pcol = validate_factor(
        path(C), EdgeColoring({(t, t + 1): t % 2 for t in range(C - 1)}, 2)
    )

    def is_wrap(e: ProductEdge) -> bool:
        return e.factor_edge == ((0, R - 1) if e.axis == 0 else (0, C - 1))

    def grid_role(e: ProductEdge) -> int:
        # canonical role: rows alternate 0/1, columns alternate 2/3
        t = e.factor_edge[0]
        return t % 2 if e.axis == 0 else 2 + t % 2

    grid_entries = [
        (e, role_of[c]) for e, c in entries if not is_wrap(e) and c != fifth
    ]
    grid_res = ProductExtender([prow, pcol]).extend(
        Precoloring.of(grid_entries, 4), check_local=check
    )

    toring: dict[ProductEdge, int] = {
        e: reals[grid_res.color_of(e)]
        for e in iter_product_edges([prow.graph, pcol.graph])
    }
    wrap_edges = [make_edge(0, 0, R - 1, (0, j)) for j in range(C)] + [
        make_edge(1, 0, C - 1, (i, 0)) for i in range(R)
    ]
    for e in wrap_edges:
        toring[e] = fifth

    def incident(v: tuple[int, int]):
        for ax, g in enumerate(fg):
            for w in g.neighbors(v[ax]):
                yield make_edge(ax, v[ax], w, v)

    def colors_at(v: tuple[int, int], skip: ProductEdge) -> set[int]:
        return {toring[f] for f in incident(v) if f != skip}

    def assert_proper_at(vs, allow_corner: bool, ctx: str) -> None:
        for v in vs:
            if allow_corner and v in corner_vertices:
                continue
            seen: set[int] = set()
            for f in incident(v):
                c = toring[f]
                if c in seen:
                    raise InternalInvariantError(
                        f"repair '{ctx}' made vertex {v} improper on color {c}"
                    )
                seen.add(c)

    corner_vertices = {(R - 1, C - 1), (R - 1, 0), (0, 0), (0, C - 1)}
    corner_edges = [
        edge_between((0, 0), (0, C - 1)),  # axis1 wrap at i = 0
        edge_between((R - 1, C - 1), (R - 1, 0)),  # axis1 wrap at i = 2k
        edge_between((R - 1, 0), (0, 0)),  # axis0 wrap at j = 0
        edge_between((R - 1, C - 1), (0, C - 1)),  # axis0 wrap at j = 2l
    ]
    corner_edge_set = set(corner_edges)

    # before the repairs the only impropriety is the doubled fifth color at
    # the four corner vertices
    pre_repair_ok = True
    if check:
        bad = set()
        for i in range(R):
            for j in range(C):
                seen: set[int] = set()
                for f in incident((i, j)):
                    c = toring[f]
                    if c in seen:
                        bad.add((i, j))
                    seen.add(c)
        pre_repair_ok = bad == corner_vertices
        if not pre_repair_ok:
            raise InternalInvariantError(
                f"pre-repair violations at {sorted(bad)} != corner square"
            )

    loci: set[ProductEdge] = set(grid_res.loci)
    killed: dict[ProductEdge, list[ProductEdge]] = {}
    repairs = {"interior": 0, "swap": 0, "rotate": 0}

    def rotate_dict(sq_edges: list[ProductEdge], ctx: str) -> None:
        ea0, ea1, eb0, eb1 = sq_edges
        ca, cb = toring[ea0], toring[eb0]
        if toring[ea1] != ca or toring[eb1] != cb or ca == cb:
            raise InternalInvariantError(
                f"repair '{ctx}': square not 2-colored "
                f"({[toring[x] for x in sq_edges]})"
            )
        toring[ea0] = toring[ea1] = cb
        toring[eb0] = toring[eb1] = ca
        loci.update(sq_edges)
        newly_fifth = [x for x in sq_edges if toring[x] == fifth]
        for x in sq_edges:
            if x in corner_edge_set and toring[x] != fifth:
                killed[x] = newly_fifth

    for e, c in entries:
        if is_wrap(e):
            if c == fifth:
                if toring[e] != fifth:
                    raise InternalInvariantError(f"wrap {e} lost the fifth color")
                continue
            adj = sorted(
                {f for v in e.endpoints() for f in incident(v)} - {e},
            )
            same = [f for f in adj if toring[f] == c]
            if len(same) == 1:
                f = same[0]
                toring[e], toring[f] = c, fifth
                loci.update((e, f))
                repairs["swap"] += 1
                if check:
                    touched = set(e.endpoints()) | set(f.endpoints())
                    assert_proper_at(touched, True, f"wrap swap {e}")
            elif len(same) == 2:
                f1, f2 = same
                if f1.axis == e.axis or f1.factor_edge != f2.factor_edge:
                    raise InternalInvariantError(
                        f"two {c}-colored edges at wrap {e} are not parallel"
                    )
                sq = make_square(e.axis, e.factor_edge, f1.axis, f1.factor_edge, e.base)
                es = set(sq.edges())
                if not {e, f1, f2} <= es:
                    raise InternalInvariantError(f"no square through {e}, {f1}, {f2}")
                fourth = next(iter(es - {e, f1, f2}))
                rotate_dict([e, fourth, f1, f2], f"wrap rotate {e}")
                repairs["rotate"] += 1
                if check:
                    touched = {v for x in es for v in x.endpoints()}
                    assert_proper_at(touched, True, f"wrap rotate {e}")
            else:
                raise InternalInvariantError(
                    f"wrap {e} prescribed {c} has {len(same)} adjacent edges "
                    "of that color"
                )
        else:
            if c != fifth:
                if toring[e] != c:
                    raise InternalInvariantError(f"grid entry {e} not honored")
                continue
            lo, hi = e.endpoints()
            flags = [
                lo[0] in (0, R - 1),
                hi[0] in (0, R - 1),
                lo[1] in (0, C - 1),
                hi[1] in (0, C - 1),
            ]
            nb = sum(flags)
            if nb == 0:
                toring[e] = fifth
                loci.add(e)
                repairs["interior"] += 1
                if check:
                    assert_proper_at(set(e.endpoints()), True, f"interior {e}")
            elif nb == 1:
                fifth_adj = sorted(
                    f
                    for v in e.endpoints()
                    for f in incident(v)
                    if f != e and toring[f] == fifth
                )
                if len(fifth_adj) != 1:
                    raise InternalInvariantError(
                        f"{e} should touch exactly one fifth-colored wrap, "
                        f"found {len(fifth_adj)}"
                    )
                f = fifth_adj[0]
                toring[e], toring[f] = fifth, toring[e]
                loci.update((e, f))
                repairs["swap"] += 1
                if check:
                    touched = set(e.endpoints()) | set(f.endpoints())
                    assert_proper_at(touched, True, f"boundary swap {e}")
            elif nb == 2 and (flags[0] and flags[1]) != (flags[2] and flags[3]):
                # both endpoints on the same boundary line: rotate the square
                # spanned with the two wraps and the opposite boundary line
                other_axis = 1 - e.axis
                wrap_fe = (0, R - 1) if other_axis == 0 else (0, C - 1)
                sq = make_square(e.axis, e.factor_edge, other_axis, wrap_fe, e.base)
                ea0, ea1, eb0, eb1 = sq.edges()
                pair_a = [x for x in (ea0, ea1, eb0, eb1) if x.axis == e.axis]
                pair_b = [x for x in (ea0, ea1, eb0, eb1) if x.axis != e.axis]
                if set(pair_b) & corner_edge_set:
                    raise InternalInvariantError(
                        f"boundary-line repair of {e} touches the corner square"
                    )
                rotate_dict(pair_a + pair_b, f"boundary rotate {e}")
                repairs["rotate"] += 1
                if check:
                    touched = {v for x in sq.edges() for v in x.endpoints()}
                    assert_proper_at(touched, True, f"boundary rotate {e}")
            else:
                raise InternalInvariantError(
                    f"fifth-color prescription on {e} has an unexpected "
                    "boundary pattern; it should be excluded by the free square"
                )

    # --- corner square
    for ce in corner_edges:
        for h in killed.get(ce, ()):
            present = colors_at(h.endpoints()[0], h) | colors_at(h.endpoints()[1], h)
            frees = [c for c in range(5) if c not in present]
            if not frees:
                raise InternalInvariantError(f"no free color for collateral {h}")
            toring[h] = frees[0]
            loci.add(h)

    # keep an intact opposite pair on the fifth color (repairs can strip one
    # pair but never both, since their triggering prescriptions would be too
    # close together); recolor the rest of the square
    pair_i, pair_j = corner_edges[:2], corner_edges[2:]
    if all(toring[ce] == fifth for ce in pair_i):
        keep = set(pair_i)
    elif all(toring[ce] == fifth for ce in pair_j):
        keep = set(pair_j)
    else:
        keep = set()
    for ce in corner_edges:
        if toring[ce] == fifth and ce not in keep:
            present = colors_at(ce.endpoints()[0], ce) | colors_at(ce.endpoints()[1], ce)
            frees = [c for c in range(5) if c != fifth and c not in present]
            if not frees:
                raise InternalInvariantError(f"no free color for corner edge {ce}")
            toring[ce] = frees[0]
            loci.add(ce)
    loci.update(corner_edges)

    if check:
        want = {e: c for e, c in entries}
        rep = verify(list(toring), toring, list(want.items()), palette=5)
        if not rep.ok:
            raise InternalInvariantError(
                f"odd-odd construction failed verification: {rep.violations[:5]}"
            )

    # --- map back to the caller's labels
    colors_out = {_map_edge(e, sig_inv): col for e, col in toring.items()}

    def baseline_of(e: ProductEdge) -> int:
        em = _map_edge(e, sig)
        return fifth if is_wrap(em) else reals[grid_role(em)]

    diff = {e: col for e, col in colors_out.items() if col != baseline_of(e)}
    stats = {
        "mode": "odd_odd",
        "baseline": "grid-canonical+wraps",
        "free_square": (i0, j0),
        "fifth_color": fifth,
        "pre_repair_corner_only": pre_repair_ok,
        "repairs": repairs,
        "grid": grid_res.stats,
    }
    return ExtensionResult(
        palette=5,
        color_of=colors_out.__getitem__,
        edges=lambda: iter_product_edges(fg),
        diff=diff,
        stats=stats,
        loci=frozenset(_map_edge(e, sig_inv) for e in loci),
    )
