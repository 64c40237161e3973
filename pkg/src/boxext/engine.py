"""The main extension algorithm for products of Class 1 factors.

Pipeline: validate the hypotheses, regularize the factors, pair up the
colors across bands, then correct each precolored edge in place — a single
square rotation when the prescribed color lives in another factor's band,
or three rotations through a selected brick-neighborhood when it lives in
the edge's own band.  All changes are local to those bricks and squares.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Iterator

from .errors import HypothesisViolation, InternalInvariantError
from .factors import Factor
from .graphs import all_pairs_distances
from .product import (
    BrickNeighborhood,
    ProductEdge,
    ProductSpace,
    SparseColoring,
    Square,
    build_space,
    canonical_color,
    enumerate_bricks,
    iter_product_edges,
    make_square,
    product_edge_distance,
    rotate,
)


@dataclass(frozen=True)
class Precoloring:
    """Prescribed (edge, color) pairs over the product, plus the palette
    they are drawn from."""

    entries: tuple[tuple[ProductEdge, int], ...]
    palette: int

    @classmethod
    def of(cls, entries: Iterable[tuple[ProductEdge, int]], palette: int) -> "Precoloring":
        return cls(tuple(entries), palette)


@dataclass(frozen=True)
class ColorPairing:
    """Perfect pairing of the color identifiers, never within one band."""

    partner: tuple[int, ...]

    def pairs(self) -> list[tuple[int, int]]:
        return [(c, p) for c, p in enumerate(self.partner) if c < p]

    def __getitem__(self, color: int) -> int:
        return self.partner[color]


@dataclass(frozen=True)
class HypothesisReport:
    ok: bool
    violations: tuple[str, ...]


def pair_colors(band_sizes: list[int]) -> ColorPairing:
    """Pair all colors so no pair stays inside one band.

    Greedy: repeatedly take one color from each of the two largest bands.
    Feasible whenever the total is even and no band holds more than half of
    all colors; the greedy step preserves both conditions.
    """
    total = sum(band_sizes)
    if total % 2 != 0:
        raise ValueError(f"total number of colors {total} is odd")
    if band_sizes and 2 * max(band_sizes) > total:
        raise ValueError(f"band of {max(band_sizes)} colors exceeds half of {total}")
    offsets = []
    acc = 0
    for s in band_sizes:
        offsets.append(acc)
        acc += s
    remaining = list(band_sizes)
    nxt = list(offsets)
    partner = [-1] * total
    for _ in range(total // 2):
        first, second = sorted(
            range(len(band_sizes)), key=lambda i: (-remaining[i], i)
        )[:2]
        if remaining[second] == 0:
            raise AssertionError("pairing ran out of cross-band colors")
        a, b = nxt[first], nxt[second]
        partner[a], partner[b] = b, a
        nxt[first] += 1
        nxt[second] += 1
        remaining[first] -= 1
        remaining[second] -= 1
    return ColorPairing(tuple(partner))


def check_hypotheses(
    factors: list[Factor],
    pre: Precoloring,
    strict_degree: bool = False,
    _dist_matrices: list[list[list[float]]] | None = None,
) -> HypothesisReport:
    """Report every violated hypothesis of the extension theorem.

    Checks the factor count, palette parity, the per-factor degree condition
    (non-strict by default; see the strict_degree flag), that the prescribed
    edges exist in the original product, and that they form a matching at
    pairwise distance >= 3 there.
    """
    violations: list[str] = []
    k = len(factors)
    deltas = [f.delta for f in factors]
    total = sum(deltas)
    if k < 2:
        violations.append(f"k: need at least 2 factors, got {k}")
    if total % 2 != 0:
        violations.append(f"parity: sum of degrees {total} is odd")
    for i, d in enumerate(deltas):
        if strict_degree and 2 * d >= total:
            violations.append(
                f"degree: factor {i} has 2*Delta = {2 * d} >= {total} (strict mode)"
            )
        elif 2 * d > total:
            violations.append(f"degree: factor {i} has 2*Delta = {2 * d} > {total}")
    if pre.palette != total:
        violations.append(f"palette: declared {pre.palette}, product needs {total}")

    good_entries = []
    seen_edges = set()
    for e, c in pre.entries:
        bad = _original_edge_error(factors, e)
        if bad:
            violations.append(f"edge: {bad}")
            continue
        if not 0 <= c < total:
            violations.append(f"palette: color {c} of edge {e} outside 0..{total - 1}")
        if e in seen_edges:
            violations.append(f"matching: edge {e} prescribed twice")
        seen_edges.add(e)
        good_entries.append((e, c))

    if _dist_matrices is None:
        _dist_matrices = [all_pairs_distances(f.graph) for f in factors]
    for (e1, _), (e2, _) in combinations(good_entries, 2):
        d = product_edge_distance(_dist_matrices, e1, e2)
        if d < 3:
            violations.append(f"distance: edges {e1} and {e2} at distance {d} < 3")
    return HypothesisReport(not violations, tuple(violations))


def _original_edge_error(factors: list[Factor], e: ProductEdge) -> str | None:
    if len(e.base) != len(factors) or not 0 <= e.axis < len(factors):
        return f"{e} has wrong arity"
    for i, c in enumerate(e.base):
        if not 0 <= c < factors[i].graph.n:
            return f"{e} coordinate {i} out of range"
    if e.other >= factors[e.axis].graph.n:
        return f"{e} coordinate {e.axis} out of range"
    if not factors[e.axis].graph.has_edge(*e.factor_edge):
        return f"{e} not an edge of factor {e.axis}"
    return None


def _rotate_internal(coloring: SparseColoring, square: Square) -> None:
    try:
        rotate(coloring, square)
    except ValueError as exc:
        raise InternalInvariantError(f"rotation precondition failed: {exc}") from exc


def step1(coloring: SparseColoring, e: ProductEdge, prescribed: int) -> Square:
    """Correct an edge whose prescribed color lives in another band.

    One rotation on the square spanned by the edge and the uniquely-colored
    neighbor edge in the prescribed color's factor; only internal edges of
    one brick-neighborhood of e change.
    """
    space = coloring.space
    j = e.axis
    l = space.band_of(prescribed)
    if l == j:
        raise ValueError("step1 needs a prescribed color from another band")
    fl = space.factors[l]
    fc = prescribed - space.color_offsets[l]
    x_l = e.base[l]
    zs = [z for z in fl.graph.neighbors(x_l) if fl.coloring.color(x_l, z) == fc]
    if not zs:
        raise InternalInvariantError(
            f"no edge of factor color {fc} at vertex {x_l} of factor {l}; "
            "factor not regular?"
        )
    square = make_square(j, e.factor_edge, l, (x_l, min(zs)), e.base)
    _rotate_internal(coloring, square)
    return square


def step2(coloring: SparseColoring, brick: BrickNeighborhood, prescribed: int) -> None:
    """Correct an edge whose prescribed color lives in its own band.

    Three rotations through the brick: both end squares first, then the
    middle square; afterwards the precolored edge carries the prescribed
    color and only the brick's ten edges have changed.
    """
    sq_xy, sq_yz, sq_zw = brick.squares()
    _rotate_internal(coloring, sq_xy)
    _rotate_internal(coloring, sq_zw)
    _rotate_internal(coloring, sq_yz)
    got = coloring.color_of(brick.precolored_edge)
    if got != prescribed:
        raise InternalInvariantError(
            f"brick rotations left {brick.precolored_edge} at color {got}, "
            f"wanted {prescribed}"
        )


def _brick_key(b: BrickNeighborhood):
    return (b.path_axis, b.path, b.rung_axis, b.rung_p, b.rung_q, b.coords)


def select_bricks(
    space: ProductSpace, pre: Precoloring, pairing: ColorPairing
) -> dict[ProductEdge, BrickNeighborhood]:
    """One brick per own-band entry: flanks in the prescribed color, rung in
    its pairing partner.  The pairing makes the chosen bricks pairwise
    edge-disjoint; that is asserted, not assumed.
    """
    chosen: dict[ProductEdge, BrickNeighborhood] = {}
    for e, c in pre.entries:
        canon = canonical_color(space, e)
        if c == canon or space.band_of(c) != e.axis:
            continue
        cands = enumerate_bricks(space, e, c, pairing[c])
        if not cands:
            raise InternalInvariantError(
                f"no brick with flank color {c} and rung color {pairing[c]} "
                f"for edge {e}; factor not regular?"
            )
        chosen[e] = min(cands, key=_brick_key)
    picked = sorted(chosen.items(), key=lambda kv: _brick_key(kv[1]))
    for (e1, b1), (e2, b2) in combinations(picked, 2):
        shared = set(b1.all_edges()) & set(b2.all_edges())
        if shared:
            raise InternalInvariantError(
                f"selected bricks of {e1} and {e2} share edges {sorted(map(str, shared))}"
            )
    return chosen


class ExtensionResult:
    """A proper coloring of the original product honoring the precoloring.

    ``diff`` lists only the edges whose color differs from the construction
    baseline (the canonical coloring, for the general engine), so results on
    large products stay small; ``color_of`` answers any original edge and
    ``edges()`` enumerates them on demand.
    """

    def __init__(
        self,
        palette: int,
        color_of: Callable[[ProductEdge], int],
        edges: Callable[[], Iterator[ProductEdge]],
        diff: dict[ProductEdge, int],
        stats: dict,
        loci: frozenset[ProductEdge],
    ):
        self.palette = palette
        self._color_of = color_of
        self._edges = edges
        self.diff = diff
        self.stats = stats
        self.loci = loci

    def color_of(self, e: ProductEdge) -> int:
        return self._color_of(e)

    def edges(self) -> Iterator[ProductEdge]:
        return self._edges()

    def items(self) -> Iterator[tuple[ProductEdge, int]]:
        for e in self.edges():
            yield e, self._color_of(e)

    def as_dict(self) -> dict[ProductEdge, int]:
        return dict(self.items())


class ProductExtender:
    """Reusable engine for one factor list: regularizes once, then extends
    any number of precolorings of the same product."""

    def __init__(self, factors: Iterable[Factor], strict_degree: bool = False):
        self.factors = list(factors)
        self.strict_degree = strict_degree
        self.space = build_space(self.factors)
        self._dist = [all_pairs_distances(f.graph) for f in self.factors]
        self._pairing: ColorPairing | None = None

    @property
    def palette(self) -> int:
        return self.space.total_colors

    def pairing(self) -> ColorPairing:
        if self._pairing is None:
            self._pairing = pair_colors([f.delta for f in self.factors])
        return self._pairing

    def check(self, pre: Precoloring) -> HypothesisReport:
        return check_hypotheses(
            self.factors, pre, self.strict_degree, _dist_matrices=self._dist
        )

    def extend(self, pre: Precoloring, check_local: bool = False) -> ExtensionResult:
        """Produce an admissible coloring, or raise HypothesisViolation."""
        report = self.check(pre)
        if not report.ok:
            raise HypothesisViolation(report)
        space = self.space
        coloring = SparseColoring(space)

        ones: list[tuple[ProductEdge, int]] = []
        twos: list[tuple[ProductEdge, int]] = []
        for e, c in pre.entries:
            canon = canonical_color(space, e)
            if c == canon:
                continue
            (ones if space.band_of(c) != e.axis else twos).append((e, c))

        loci: set[ProductEdge] = set()
        bricks = (
            select_bricks(space, pre, self.pairing()) if twos else {}
        )
        for e, c in ones:
            square = step1(coloring, e, c)
            loci.update(square.edges())
            if check_local:
                self._assert_proper_around(coloring, square.edges())
        for e, c in twos:
            brick = bricks[e]
            step2(coloring, brick, c)
            loci.update(brick.all_edges())
            if check_local:
                self._assert_proper_around(coloring, brick.all_edges())

        for e, c in pre.entries:
            if coloring.color_of(e) != c:
                raise InternalInvariantError(f"entry {e} ended at {coloring.color_of(e)}")

        diff = {
            e: c for e, c in coloring.overrides.items() if space.is_original_edge(e)
        }
        original = [f.graph for f in self.factors]
        stats = {
            "step1": len(ones),
            "step2": len(twos),
            "already_canonical": len(pre.entries) - len(ones) - len(twos),
            "overrides": len(coloring.overrides),
        }

        def color_of(e: ProductEdge) -> int:
            if not space.is_original_edge(e):
                raise ValueError(f"{e} is not an edge of the original product")
            return coloring.color_of(e)

        return ExtensionResult(
            palette=space.total_colors,
            color_of=color_of,
            edges=lambda: iter_product_edges(original),
            diff=diff,
            stats=stats,
            loci=frozenset(e for e in loci if space.is_original_edge(e)),
        )

    def _assert_proper_around(self, coloring: SparseColoring, edges) -> None:
        from .product import local_properness_check

        touched = {v for e in edges for v in e.endpoints()}
        bad = local_properness_check(coloring, touched)
        if bad:
            raise InternalInvariantError(f"local properness violated at {bad}")


def extend(
    factors: Iterable[Factor], pre: Precoloring, strict_degree: bool = False
) -> ExtensionResult:
    """One-shot wrapper around ProductExtender."""
    return ProductExtender(factors, strict_degree).extend(pre)
