"""Instance and coloring files.

JSON documents; colors are 1-based in files and 0-based in memory.  An
instance lists the factors (edges over arbitrary labels, optional coloring,
optional family tag) and the precoloring as vertex-tuple pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .engine import Precoloring
from .graphs import EdgeColoring, SimpleGraph, norm_edge
from .product import ProductEdge, edge_between

MODES = ("auto", "general", "k2", "k2_power", "odd_cycle_k2", "odd_odd")


class ParseError(ValueError):
    pass


@dataclass
class ParsedFactor:
    name: str
    labels: list  # label of each internal vertex index
    graph: SimpleGraph
    family: str | None  # None = auto-detect
    coloring: EdgeColoring | None
    index: dict = field(default_factory=dict)

    def __post_init__(self):
        self.index = {lab: i for i, lab in enumerate(self.labels)}


@dataclass
class InstanceFile:
    factors: list[ParsedFactor]
    precoloring: list[tuple[ProductEdge, int]]
    mode: str


def _sorted_labels(labels):
    try:
        return sorted(labels)
    except TypeError:
        return sorted(labels, key=str)


def _parse_factor(doc, pos: int) -> ParsedFactor:
    if not isinstance(doc, dict) or "edges" not in doc:
        raise ParseError(f"factor {pos}: expected an object with an 'edges' array")
    edges_doc = doc["edges"]
    if not isinstance(edges_doc, list):
        raise ParseError(f"factor {pos}: 'edges' must be an array")
    seen = []
    for e in edges_doc:
        if not (isinstance(e, list) and len(e) == 2):
            raise ParseError(f"factor {pos}: edge {e!r} must be a pair")
        seen.extend(e)
    labels = doc.get("vertices")
    if labels is None:
        labels = _sorted_labels(set(seen))
    elif not isinstance(labels, list) or len(set(map(str, labels))) != len(labels):
        raise ParseError(f"factor {pos}: 'vertices' must be a list of unique labels")
    index = {lab: i for i, lab in enumerate(labels)}
    try:
        edges = [(index[a], index[b]) for a, b in edges_doc]
    except KeyError as exc:
        raise ParseError(f"factor {pos}: unknown vertex label {exc}") from exc
    try:
        graph = SimpleGraph(len(labels), edges)
    except ValueError as exc:
        raise ParseError(f"factor {pos}: {exc}") from exc
    family = doc.get("family")
    if family is not None and family not in ("bipartite", "even_cycle", "user_supplied"):
        raise ParseError(f"factor {pos}: unknown family {family!r}")
    coloring = None
    if "coloring" in doc:
        assignment = {}
        palette = 0
        for item in doc["coloring"]:
            if not (isinstance(item, list) and len(item) == 3):
                raise ParseError(f"factor {pos}: coloring entry {item!r} must be [u, v, color]")
            a, b, c = item
            if a not in index or b not in index or not isinstance(c, int) or c < 1:
                raise ParseError(f"factor {pos}: bad coloring entry {item!r}")
            assignment[norm_edge(index[a], index[b])] = c - 1
            palette = max(palette, c)
        coloring = EdgeColoring(assignment, palette)
    return ParsedFactor(
        name=str(doc.get("name", f"factor{pos}")),
        labels=list(labels),
        graph=graph,
        family=family,
        coloring=coloring,
    )


def parse_instance(text: str) -> InstanceFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")
    factors_doc = doc.get("factors")
    if not isinstance(factors_doc, list) or not factors_doc:
        raise ParseError("'factors' must be a non-empty array")
    factors = [_parse_factor(f, i) for i, f in enumerate(factors_doc)]
    mode = doc.get("mode", "auto")
    if mode not in MODES:
        raise ParseError(f"unknown mode {mode!r}; expected one of {MODES}")
    pre = []
    for item in doc.get("precoloring", []):
        if not (isinstance(item, dict) and {"u", "v", "color"} <= set(item)):
            raise ParseError(f"precoloring entry {item!r} needs 'u', 'v', 'color'")
        u, v, c = item["u"], item["v"], item["color"]
        if not (isinstance(u, list) and isinstance(v, list) and len(u) == len(v) == len(factors)):
            raise ParseError(
                f"precoloring entry {item!r}: vertex tuples need one coordinate per factor"
            )
        if not isinstance(c, int) or c < 1:
            raise ParseError(f"precoloring entry {item!r}: colors are 1-based integers")
        try:
            ut = tuple(factors[i].index[x] for i, x in enumerate(u))
            vt = tuple(factors[i].index[x] for i, x in enumerate(v))
        except KeyError as exc:
            raise ParseError(f"precoloring entry {item!r}: unknown label {exc}") from exc
        try:
            edge = edge_between(ut, vt)
        except ValueError as exc:
            raise ParseError(f"precoloring entry {item!r}: {exc}") from exc
        pre.append((edge, c - 1))
    return InstanceFile(factors=factors, precoloring=pre, mode=mode)


def load_instance(path: str) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def serialize_instance(inst: InstanceFile) -> str:
    """Canonical form: explicit vertex lists, sorted edges, sorted entries."""
    factors = []
    for f in inst.factors:
        fd = {
            "name": f.name,
            "vertices": f.labels,
            "edges": [[f.labels[a], f.labels[b]] for a, b in f.graph.sorted_edges()],
        }
        if f.family is not None:
            fd["family"] = f.family
        if f.coloring is not None:
            fd["coloring"] = [
                [f.labels[a], f.labels[b], c + 1]
                for (a, b), c in sorted(f.coloring.assignment.items())
            ]
        factors.append(fd)
    pre = []
    for e, c in sorted(inst.precoloring):
        lo, hi = e.endpoints()
        pre.append(
            {
                "u": [inst.factors[i].labels[x] for i, x in enumerate(lo)],
                "v": [inst.factors[i].labels[x] for i, x in enumerate(hi)],
                "color": c + 1,
            }
        )
    doc = {"mode": inst.mode, "factors": factors, "precoloring": pre}
    return json.dumps(doc, indent=2)


def entries_to_doc(inst: InstanceFile, items) -> list[dict]:
    out = []
    for e, c in sorted(items):
        lo, hi = e.endpoints()
        out.append(
            {
                "u": [inst.factors[i].labels[x] for i, x in enumerate(lo)],
                "v": [inst.factors[i].labels[x] for i, x in enumerate(hi)],
                "color": c + 1,
            }
        )
    return out


def parse_coloring(text: str, inst: InstanceFile) -> tuple[dict[ProductEdge, int], int]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ParseError("coloring document must be an object")
    assignment = doc.get("assignment", doc.get("coloring"))
    if assignment is None or "palette" not in doc:
        raise ParseError("coloring document needs 'palette' and 'assignment' (or 'coloring')")
    palette = doc["palette"]
    if not isinstance(palette, int) or palette < 0:
        raise ParseError("'palette' must be a non-negative integer")
    out: dict[ProductEdge, int] = {}
    for item in assignment:
        if not (isinstance(item, dict) and {"u", "v", "color"} <= set(item)):
            raise ParseError(f"assignment entry {item!r} needs 'u', 'v', 'color'")
        try:
            ut = tuple(inst.factors[i].index[x] for i, x in enumerate(item["u"]))
            vt = tuple(inst.factors[i].index[x] for i, x in enumerate(item["v"]))
        except (KeyError, IndexError) as exc:
            raise ParseError(f"assignment entry {item!r}: unknown label {exc}") from exc
        c = item["color"]
        if not isinstance(c, int) or c < 1:
            raise ParseError(f"assignment entry {item!r}: colors are 1-based integers")
        out[edge_between(ut, vt)] = c - 1
    return out, palette


def serialize_coloring(inst: InstanceFile, items, palette: int) -> str:
    return json.dumps(
        {"palette": palette, "assignment": entries_to_doc(inst, items)}, indent=2
    )
