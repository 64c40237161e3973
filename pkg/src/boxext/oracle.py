"""Independent ground truth: a full verifier and an exact backtracking
extender for small instances.

The oracle is deliberately separate from the constructive algorithms; every
cross-check in the test suite runs both sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

import numpy as np

from . import _kernel
from .graphs import Edge, SimpleGraph, norm_edge
from .product import MaterializedProduct, ProductEdge

DEFAULT_BUDGET = 50_000_000

EXTENDED = "extended"
UNEXTENDABLE = "unextendable"
BUDGET_EXHAUSTED = "budget-exhausted"


@dataclass(frozen=True)
class VerificationReport:
    proper: bool
    palette_ok: bool
    prescriptions_ok: bool
    violations: tuple[tuple[object, str], ...]

    @property
    def ok(self) -> bool:
        return self.proper and self.palette_ok and self.prescriptions_ok

    def __bool__(self) -> bool:
        return self.ok


def _edge_endpoints(e) -> tuple[object, object]:
    if isinstance(e, ProductEdge):
        return e.endpoints()
    u, v = e
    return u, v


def verify(
    edges: SimpleGraph | Iterable,
    coloring: Mapping | Callable,
    pre: Iterable[tuple[object, int]] = (),
    palette: int | None = None,
) -> VerificationReport:
    """Check properness, palette bounds and prescriptions exhaustively.

    ``edges`` is a SimpleGraph or any iterable of edges (vertex pairs or
    ProductEdges); ``coloring`` maps each edge to a color, as a mapping or a
    callable.  The coloring must be total on the stated edge set.
    """
    if isinstance(edges, SimpleGraph):
        edge_list = edges.sorted_edges()
    else:
        edge_list = list(edges)
    color_of = coloring if callable(coloring) else coloring.__getitem__

    violations: list[tuple[object, str]] = []
    proper = True
    palette_ok = True
    prescriptions_ok = True

    incident: dict[object, set[int]] = {}
    for e in edge_list:
        c = color_of(e)
        if palette is not None and not 0 <= c < palette:
            palette_ok = False
            violations.append((e, "palette"))
        for v in _edge_endpoints(e):
            seen = incident.setdefault(v, set())
            if c in seen:
                proper = False
                violations.append((v, "improper"))
            seen.add(c)
    for e, want in pre:
        if color_of(e) != want:
            prescriptions_ok = False
            violations.append((e, "prescription"))
    return VerificationReport(proper, palette_ok, prescriptions_ok, tuple(violations))


@dataclass(frozen=True)
class OracleResult:
    status: str  # extended | unextendable | budget-exhausted
    coloring: dict[Edge, int] | None
    nodes: int

    @property
    def extended(self) -> bool:
        return self.status == EXTENDED


def brute_force_extend(
    g: SimpleGraph,
    pre: Iterable[tuple[tuple[int, int], int]] = (),
    num_colors: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> OracleResult:
    """Exact search for a proper edge coloring of g with the given palette
    that honors the prescriptions.

    Backtracks over edges ordered by descending endpoint degree sum (then
    lexicographically) with forward checking; the budget counts assignments,
    not wall time, so runs are reproducible.  ``unextendable`` is an exact
    answer; ``budget-exhausted`` is not.
    """
    if num_colors < 0 or num_colors > 60:
        raise ValueError("palette must be between 0 and 60 colors")
    edges = g.sorted_edges()
    index = {e: i for i, e in enumerate(edges)}
    m = len(edges)

    col = np.full(m, -1, dtype=np.int64)
    for e, c in pre:
        e = g._check_edge(e)
        if not 0 <= c < num_colors:
            raise ValueError(f"prescribed color {c} outside palette {num_colors}")
        i = index[e]
        if col[i] >= 0 and col[i] != c:
            return OracleResult(UNEXTENDABLE, None, 0)
        col[i] = c

    if m and num_colors == 0:
        return OracleResult(UNEXTENDABLE, None, 0)

    eu = np.array([e[0] for e in edges], dtype=np.int64)
    ev = np.array([e[1] for e in edges], dtype=np.int64)
    counts = np.zeros(g.n + 1, dtype=np.int64)
    for u, v in edges:
        counts[u + 1] += 1
        counts[v + 1] += 1
    inc_start = np.cumsum(counts).astype(np.int64)
    inc_edge = np.zeros(int(inc_start[-1]), dtype=np.int64)
    fill = inc_start[:-1].copy()
    for i, (u, v) in enumerate(edges):
        inc_edge[fill[u]] = i
        fill[u] += 1
        inc_edge[fill[v]] = i
        fill[v] += 1

    free = [i for i in range(m) if col[i] < 0]
    free.sort(key=lambda i: (-(g.degree(edges[i][0]) + g.degree(edges[i][1])), i))
    order = np.array(free, dtype=np.int64)

    status, nodes = _kernel.solve(
        eu, ev, inc_start, inc_edge, order, col, num_colors, budget
    )
    nodes = int(nodes)
    if status == _kernel.SAT:
        coloring = {e: int(col[i]) for i, e in enumerate(edges)}
        return OracleResult(EXTENDED, coloring, nodes)
    if status == _kernel.UNSAT:
        return OracleResult(UNEXTENDABLE, None, nodes)
    return OracleResult(BUDGET_EXHAUSTED, None, nodes)


def oracle_on_product(
    mp: MaterializedProduct,
    pre: Iterable[tuple[ProductEdge, int]] = (),
    num_colors: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> OracleResult:
    """brute_force_extend on the flat graph of a materialized product."""
    flat_pre = [(mp.flat_edge(e), c) for e, c in pre]
    return brute_force_extend(mp.graph, flat_pre, num_colors, budget)
