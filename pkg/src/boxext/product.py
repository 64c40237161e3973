"""The Cartesian product of the factors, kept implicit.

Vertices are coordinate tuples, edges are axis-tagged factor edges at a base
coordinate, and the working coloring is the canonical coloring plus a finite
override map.  The product is never materialized by the extension machinery;
an explicit graph is only built for the brute-force oracle, the verifier and
full CLI output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

from .factors import Factor, RegularizedFactor, regularize
from .graphs import SimpleGraph, norm_edge


class ProductEdge(NamedTuple):
    """An edge of the product: ``base`` is the endpoint with the smaller
    coordinate along ``axis``; the other endpoint has ``other`` there."""

    axis: int
    base: tuple[int, ...]
    other: int

    @property
    def factor_edge(self) -> tuple[int, int]:
        return (self.base[self.axis], self.other)

    def endpoints(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        lo = self.base
        hi = lo[: self.axis] + (self.other,) + lo[self.axis + 1 :]
        return lo, hi

    def __str__(self) -> str:
        lo, hi = self.endpoints()
        return f"{lo}-{hi}"


def make_edge(axis: int, a: int, b: int, coords: tuple[int, ...]) -> ProductEdge:
    """Product edge along ``axis`` over factor edge {a, b}; all other
    coordinates taken from ``coords`` (its axis entry is ignored)."""
    lo, hi = norm_edge(a, b)
    base = coords[:axis] + (lo,) + coords[axis + 1 :]
    return ProductEdge(axis, base, hi)


def edge_between(u: tuple[int, ...], v: tuple[int, ...]) -> ProductEdge:
    """The product edge joining two adjacent coordinate tuples."""
    diff = [i for i in range(len(u)) if u[i] != v[i]]
    if len(diff) != 1:
        raise ValueError(f"{u} and {v} differ in {len(diff)} coordinates")
    ax = diff[0]
    return make_edge(ax, u[ax], v[ax], u)


class Square(NamedTuple):
    """The 4-cycle spanned by a factor edge on each of two distinct axes."""

    axis_a: int
    edge_a: tuple[int, int]
    axis_b: int
    edge_b: tuple[int, int]
    base: tuple[int, ...]

    def edges(self) -> tuple[ProductEdge, ProductEdge, ProductEdge, ProductEdge]:
        """The two axis_a edges then the two axis_b edges."""
        a0, a1 = self.edge_a
        b0, b1 = self.edge_b
        c = self.base
        put = lambda t, ax, val: t[:ax] + (val,) + t[ax + 1 :]
        return (
            make_edge(self.axis_a, a0, a1, put(c, self.axis_b, b0)),
            make_edge(self.axis_a, a0, a1, put(c, self.axis_b, b1)),
            make_edge(self.axis_b, b0, b1, put(c, self.axis_a, a0)),
            make_edge(self.axis_b, b0, b1, put(c, self.axis_a, a1)),
        )


def make_square(
    axis_a: int,
    edge_a: tuple[int, int],
    axis_b: int,
    edge_b: tuple[int, int],
    coords: tuple[int, ...],
) -> Square:
    """Normalized square (axes ordered, factor edges sorted)."""
    if axis_a == axis_b:
        raise ValueError("square needs two distinct axes")
    if axis_a > axis_b:
        axis_a, edge_a, axis_b, edge_b = axis_b, edge_b, axis_a, edge_a
    ea, eb = norm_edge(*edge_a), norm_edge(*edge_b)
    base = list(coords)
    base[axis_a], base[axis_b] = ea[0], eb[0]
    return Square(axis_a, ea, axis_b, eb, tuple(base))


@dataclass(frozen=True)
class BrickNeighborhood:
    """path (x,y,z,w) along ``path_axis`` times rung edge {p,q} along
    ``rung_axis``; the precolored edge sits over (y,z) at coordinate q."""

    path_axis: int
    path: tuple[int, int, int, int]
    rung_axis: int
    rung_p: int
    rung_q: int
    coords: tuple[int, ...]  # coordinate template; path/rung axes overwritten

    def __post_init__(self):
        if len(set(self.path)) != 4:
            raise ValueError("brick path must have 4 distinct vertices")

    def _at(self, path_v: int, rung_v: int) -> tuple[int, ...]:
        t = list(self.coords)
        t[self.path_axis] = path_v
        t[self.rung_axis] = rung_v
        return tuple(t)

    def _path_edge(self, a: int, b: int, rung_v: int) -> ProductEdge:
        return make_edge(self.path_axis, a, b, self._at(a, rung_v))

    def _rung_edge(self, path_v: int) -> ProductEdge:
        return make_edge(
            self.rung_axis, self.rung_p, self.rung_q, self._at(path_v, self.rung_p)
        )

    @property
    def precolored_edge(self) -> ProductEdge:
        x, y, z, w = self.path
        return self._path_edge(y, z, self.rung_q)

    def internal_edges(self) -> tuple[ProductEdge, ...]:
        x, y, z, w = self.path
        p, q = self.rung_p, self.rung_q
        return (
            self._path_edge(y, z, p),  # parallel copy of the precolored edge
            self._path_edge(x, y, q),
            self._path_edge(y, z, q),
            self._path_edge(z, w, q),
            self._rung_edge(y),
            self._rung_edge(z),
        )

    def external_edges(self) -> tuple[ProductEdge, ...]:
        x, y, z, w = self.path
        p = self.rung_p
        return (
            self._path_edge(x, y, p),
            self._path_edge(z, w, p),
            self._rung_edge(x),
            self._rung_edge(w),
        )

    def all_edges(self) -> tuple[ProductEdge, ...]:
        return self.internal_edges() + self.external_edges()

    def squares(self) -> tuple[Square, Square, Square]:
        """The three squares (path edge x rung edge) the brick consists of."""
        x, y, z, w = self.path
        rung = (self.rung_p, self.rung_q)
        mk = lambda a, b: make_square(
            self.path_axis, (a, b), self.rung_axis, rung, self._at(a, self.rung_p)
        )
        return (mk(x, y), mk(y, z), mk(z, w))


@dataclass(frozen=True)
class ProductSpace:
    """Ordered regularized factors plus the color band layout."""

    factors: tuple[RegularizedFactor, ...]
    original_factors: tuple[Factor, ...]
    color_offsets: tuple[int, ...]
    total_colors: int

    @property
    def k(self) -> int:
        return len(self.factors)

    def band_of(self, color: int) -> int:
        """Index of the factor whose band contains the color."""
        if not 0 <= color < self.total_colors:
            raise ValueError(f"color {color} outside palette {self.total_colors}")
        for i in range(self.k - 1, -1, -1):
            if color >= self.color_offsets[i]:
                return i
        raise AssertionError

    def band(self, i: int) -> range:
        return range(self.color_offsets[i], self.color_offsets[i] + self.factors[i].delta)

    def factor_graphs(self) -> list[SimpleGraph]:
        return [rf.graph for rf in self.factors]

    def original_graphs(self) -> list[SimpleGraph]:
        return [f.graph for f in self.original_factors]

    def validate_edge(self, e: ProductEdge) -> None:
        if len(e.base) != self.k or not 0 <= e.axis < self.k:
            raise ValueError(f"edge {e} has wrong arity for this product")
        for i, c in enumerate(e.base):
            if not 0 <= c < self.factors[i].graph.n:
                raise ValueError(f"edge {e}: coordinate {i} out of range")
        if not self.factors[e.axis].graph.has_edge(*e.factor_edge):
            raise ValueError(f"edge {e}: {e.factor_edge} not in factor {e.axis}")

    def is_original_edge(self, e: ProductEdge) -> bool:
        """Does the edge live in the product of the original factors?"""
        for i, c in enumerate(e.base):
            if c >= self.original_factors[i].graph.n:
                return False
        if e.other >= self.original_factors[e.axis].graph.n:
            return False
        return self.original_factors[e.axis].graph.has_edge(*e.factor_edge)

    def incident_edges(self, v: tuple[int, ...]) -> Iterator[ProductEdge]:
        for ax, rf in enumerate(self.factors):
            for w in rf.graph.neighbors(v[ax]):
                yield make_edge(ax, v[ax], w, v)


def build_space(factors: Iterable[Factor]) -> ProductSpace:
    """Regularize every factor and lay out the color bands."""
    origs = tuple(factors)
    regs = tuple(regularize(f) for f in origs)
    offsets = []
    total = 0
    for f in origs:
        offsets.append(total)
        total += f.delta
    return ProductSpace(regs, origs, tuple(offsets), total)


def canonical_color(space: ProductSpace, e: ProductEdge) -> int:
    """Band offset of the axis plus the factor color of the factor edge."""
    space.validate_edge(e)
    return space.color_offsets[e.axis] + space.factors[e.axis].coloring.color(
        *e.factor_edge
    )


@dataclass
class SparseColoring:
    """Canonical coloring plus a finite override map; single-owner mutable."""

    space: ProductSpace
    overrides: dict[ProductEdge, int] = field(default_factory=dict)

    def color_of(self, e: ProductEdge) -> int:
        got = self.overrides.get(e)
        return got if got is not None else canonical_color(self.space, e)

    def set_color(self, e: ProductEdge, color: int) -> None:
        # overrides equal to the canonical color are pruned
        if canonical_color(self.space, e) == color:
            self.overrides.pop(e, None)
        else:
            self.overrides[e] = color


def rotate(c: SparseColoring, s: Square) -> None:
    """Swap the two colors of a 2-colored square (opposite edges equal)."""
    ea0, ea1, eb0, eb1 = s.edges()
    ca = c.color_of(ea0)
    cb = c.color_of(eb0)
    if ca != c.color_of(ea1) or cb != c.color_of(eb1) or ca == cb:
        raise ValueError(
            f"square {s} is not 2-colored with equal opposite edges: "
            f"{[c.color_of(e) for e in s.edges()]}"
        )
    c.set_color(ea0, cb)
    c.set_color(ea1, cb)
    c.set_color(eb0, ca)
    c.set_color(eb1, ca)


def local_properness_check(
    c: SparseColoring, touched_vertices: Iterable[tuple[int, ...]]
) -> list[tuple[tuple[int, ...], int]]:
    """(vertex, color) pairs where a color repeats among incident edges."""
    violations = []
    for v in touched_vertices:
        seen: set[int] = set()
        for e in c.space.incident_edges(v):
            col = c.color_of(e)
            if col in seen:
                violations.append((v, col))
            seen.add(col)
    return violations


# ---------------------------------------------------------------------------
# Brick enumeration


def bricks_of(
    factor_graphs: list[SimpleGraph], e: ProductEdge
) -> Iterator[BrickNeighborhood]:
    """Every brick-neighborhood of a product edge (no color filtering)."""
    j = e.axis
    y, z = e.factor_edge
    gj = factor_graphs[j]
    for i in range(len(factor_graphs)):
        if i == j:
            continue
        q = e.base[i]
        for p in factor_graphs[i].neighbors(q):
            for x in gj.neighbors(y):
                if x == z:
                    continue
                for w in gj.neighbors(z):
                    if w == y or w == x:
                        continue
                    yield BrickNeighborhood(j, (x, y, z, w), i, p, q, e.base)


def enumerate_bricks(
    space: ProductSpace,
    e: ProductEdge,
    desired_path_color: int,
    desired_rung_color: int,
) -> list[BrickNeighborhood]:
    """Bricks whose flanking path edges carry the desired path color and
    whose rung carries the desired rung color.

    With regularized factors there is at most one such brick, and exactly one
    when the path color differs from the edge's canonical factor color.
    """
    space.validate_edge(e)
    j = e.axis
    if space.band_of(desired_path_color) != j:
        return []
    i = space.band_of(desired_rung_color)
    if i == j:
        return []
    pc = desired_path_color - space.color_offsets[j]
    rc = desired_rung_color - space.color_offsets[i]
    fj, fi = space.factors[j], space.factors[i]
    y, z = e.factor_edge
    q = e.base[i]
    xs = [v for v in fj.graph.neighbors(y) if fj.coloring.color(y, v) == pc and v != z]
    ws = [v for v in fj.graph.neighbors(z) if fj.coloring.color(z, v) == pc and v != y]
    ps = [v for v in fi.graph.neighbors(q) if fi.coloring.color(q, v) == rc]
    out = []
    for x in xs:
        for w in ws:
            if x == w:
                continue
            for p in ps:
                out.append(BrickNeighborhood(j, (x, y, z, w), i, p, q, e.base))
    return out


# ---------------------------------------------------------------------------
# Materialization (oracle / verifier / full output)


class MaterializedProduct:
    """Explicit graph of a product of factor graphs, with translation
    between flat vertex indices and coordinate tuples."""

    def __init__(self, factor_graphs: list[SimpleGraph]):
        self.factor_graphs = list(factor_graphs)
        if not self.factor_graphs:
            raise ValueError("need at least one factor")
        strides = [1] * len(self.factor_graphs)
        for i in range(len(self.factor_graphs) - 2, -1, -1):
            strides[i] = strides[i + 1] * self.factor_graphs[i + 1].n
        self.strides = strides
        self.n = strides[0] * self.factor_graphs[0].n
        edges = []
        for v in self.vertices():
            for ax, g in enumerate(self.factor_graphs):
                for w in g.neighbors(v[ax]):
                    if w > v[ax]:
                        edges.append((self.index(v), self.index(v[:ax] + (w,) + v[ax + 1 :])))
        self.graph = SimpleGraph(self.n, edges)

    def vertices(self) -> Iterator[tuple[int, ...]]:
        def rec(prefix: tuple[int, ...], axis: int):
            if axis == len(self.factor_graphs):
                yield prefix
                return
            for v in self.factor_graphs[axis].vertices():
                yield from rec(prefix + (v,), axis + 1)

        yield from rec((), 0)

    def index(self, coords: tuple[int, ...]) -> int:
        return sum(c * s for c, s in zip(coords, self.strides))

    def coords(self, idx: int) -> tuple[int, ...]:
        out = []
        for s, g in zip(self.strides, self.factor_graphs):
            out.append((idx // s) % g.n)
        return tuple(out)

    def flat_edge(self, e: ProductEdge) -> tuple[int, int]:
        lo, hi = e.endpoints()
        return norm_edge(self.index(lo), self.index(hi))

    def product_edge(self, flat: tuple[int, int]) -> ProductEdge:
        return edge_between(self.coords(flat[0]), self.coords(flat[1]))

    def product_edges(self) -> Iterator[ProductEdge]:
        for u, v in self.graph.sorted_edges():
            yield self.product_edge((u, v))


def iter_product_edges(factor_graphs: list[SimpleGraph]) -> Iterator[ProductEdge]:
    """All product edges, without building the flat graph."""

    def rec(prefix: tuple[int, ...], axis: int):
        if axis == len(factor_graphs):
            yield prefix
            return
        for v in factor_graphs[axis].vertices():
            yield from rec(prefix + (v,), axis + 1)

    for v in rec((), 0):
        for ax, g in enumerate(factor_graphs):
            for w in g.neighbors(v[ax]):
                if w > v[ax]:
                    yield make_edge(ax, v[ax], w, v)


def product_vertex_distance(
    dist_matrices: list[list[list[float]]],
    u: tuple[int, ...],
    v: tuple[int, ...],
) -> float:
    """Distance in a Cartesian product is the sum of factor distances."""
    return sum(m[a][b] for m, a, b in zip(dist_matrices, u, v))


def product_edge_distance(
    dist_matrices: list[list[list[float]]], e: ProductEdge, f: ProductEdge
) -> float:
    ue, ve = e.endpoints()
    uf, vf = f.endpoints()
    return min(
        product_vertex_distance(dist_matrices, a, b)
        for a in (ue, ve)
        for b in (uf, vf)
    )
