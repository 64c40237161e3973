"""Command-line front end.

Subcommands: extend | verify | oracle | fuzz.  Exit codes: 0 success,
1 parse error, 2 hypothesis violation, 3 internal invariant violation,
4 verification failure.  Oracle budget exhaustion is reported in the output
document, not by exit code.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import Precoloring, ProductExtender
from .errors import HypothesisViolation, InternalInvariantError
from .factors import bipartite_factor, even_cycle_factor, validate_factor
from .graphs import SimpleGraph, is_cycle, structure_report
from .io import (
    InstanceFile,
    ParseError,
    entries_to_doc,
    load_instance,
    parse_coloring,
    serialize_coloring,
)
from .oracle import BUDGET_EXHAUSTED, DEFAULT_BUDGET, brute_force_extend, verify
from .product import MaterializedProduct, ProductEdge, edge_between
from .special import (
    TorusInstance,
    extend_bipartite_k2,
    extend_k2_power,
    extend_odd_cycle_k2,
    extend_odd_odd,
)

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_HYPOTHESIS = 2
EXIT_INTERNAL = 3
EXIT_VERIFY = 4


def _is_k2(g: SimpleGraph) -> bool:
    return g.n == 2 and g.m == 1


def resolve_mode(inst: InstanceFile) -> str:
    """auto dispatch: odd x odd tori, bipartite (or odd cycle) x K2 chains,
    else the general engine."""
    if inst.mode != "auto":
        return inst.mode
    graphs = [f.graph for f in inst.factors]
    if (
        len(graphs) == 2
        and all(is_cycle(g) and g.n % 2 == 1 for g in graphs)
    ):
        return "odd_odd"
    if len(graphs) >= 2 and all(_is_k2(g) for g in graphs[1:]):
        first = structure_report(graphs[0])
        if len(graphs) == 2 and is_cycle(graphs[0]) and graphs[0].n % 2 == 1:
            return "odd_cycle_k2"
        if first.is_bipartite:
            return "k2" if len(graphs) == 2 else "k2_power"
    return "general"


def _cycle_perm(g: SimpleGraph) -> list[int]:
    """perm[instance vertex] = position along the cycle, starting at 0."""
    order = [0, min(g.neighbors(0))]
    while len(order) < g.n:
        prev, cur = order[-2], order[-1]
        order.append(next(w for w in g.neighbors(cur) if w != prev))
    perm = [0] * g.n
    for pos, v in enumerate(order):
        perm[v] = pos
    return perm


def _permute_entries(entries, perms):
    def m(v):
        return tuple(perms[i][x] for i, x in enumerate(v))

    out = []
    for e, c in entries:
        lo, hi = e.endpoints()
        out.append((edge_between(m(lo), m(hi)), c))
    return out


def _unpermute_items(items, perms):
    invs = [[0] * len(p) for p in perms]
    for i, p in enumerate(perms):
        for v, pos in enumerate(p):
            invs[i][pos] = v

    def m(v):
        return tuple(invs[i][x] for i, x in enumerate(v))

    for e, c in items:
        lo, hi = e.endpoints()
        yield edge_between(m(lo), m(hi)), c


def _build_general_factors(inst: InstanceFile):
    factors = []
    for f in inst.factors:
        family = f.family
        if family is None:
            rep = structure_report(f.graph)
            if is_cycle(f.graph) and f.graph.n % 2 == 0:
                family = "even_cycle"
            elif rep.is_bipartite:
                family = "bipartite"
            else:
                family = "user_supplied"
        if family == "even_cycle":
            factors.append(even_cycle_factor(f.graph))
        elif family == "bipartite":
            factors.append(bipartite_factor(f.graph))
        else:
            if f.coloring is None:
                raise HypothesisViolation(
                    _report(f"factor {f.name}: non-bipartite factors need a supplied coloring")
                )
            factors.append(validate_factor(f.graph, f.coloring))
    return factors


def _report(*msgs: str):
    from .engine import HypothesisReport

    return HypothesisReport(False, tuple(msgs))


def run_extension(inst: InstanceFile, mode: str, strict_degree: bool):
    """Dispatch to the algorithm for the resolved mode; returns the result
    and the identity-mapped precoloring entries."""
    graphs = [f.graph for f in inst.factors]
    entries = list(inst.precoloring)
    if mode == "general":
        factors = _build_general_factors(inst)
        ext = ProductExtender(factors, strict_degree=strict_degree)
        pre = Precoloring.of(entries, ext.palette)
        return ext.extend(pre), entries
    if mode == "k2":
        if len(graphs) != 2 or not _is_k2(graphs[1]):
            raise HypothesisViolation(_report("mode k2: expected two factors, the second K2"))
        pre = Precoloring.of(entries, graphs[0].max_degree() + 1)
        return extend_bipartite_k2(graphs[0], pre), entries
    if mode == "k2_power":
        if not all(_is_k2(g) for g in graphs[1:]):
            raise HypothesisViolation(_report("mode k2_power: factors after the first must be K2"))
        alpha = len(graphs) - 1
        pre = Precoloring.of(entries, graphs[0].max_degree() + alpha)
        return extend_k2_power(graphs[0], alpha, pre), entries
    if mode == "odd_cycle_k2":
        if (
            len(graphs) != 2
            or not _is_k2(graphs[1])
            or not is_cycle(graphs[0])
            or graphs[0].n % 2 == 0
        ):
            raise HypothesisViolation(
                _report("mode odd_cycle_k2: expected an odd cycle and K2")
            )
        perms = [_cycle_perm(graphs[0]), [0, 1]]
        pre = Precoloring.of(_permute_entries(entries, perms), 3)
        res = extend_odd_cycle_k2(graphs[0].n, pre)
        return _Remapped(res, perms), entries
    if mode == "odd_odd":
        if len(graphs) != 2 or not all(is_cycle(g) and g.n % 2 == 1 for g in graphs):
            raise HypothesisViolation(_report("mode odd_odd: expected two odd cycles"))
        perms = [_cycle_perm(graphs[0]), _cycle_perm(graphs[1])]
        pre = Precoloring.of(_permute_entries(entries, perms), 5)
        inst_t = TorusInstance((graphs[0].n - 1) // 2, (graphs[1].n - 1) // 2)
        res = extend_odd_odd(inst_t, pre)
        return _Remapped(res, perms), entries
    raise ParseError(f"unknown mode {mode!r}")


class _Remapped:
    """Presents a result computed in canonical cycle coordinates under the
    instance's own labels."""

    def __init__(self, inner, perms):
        self._inner = inner
        self._perms = perms
        self.palette = inner.palette
        self.stats = inner.stats
        self.diff = dict(_unpermute_items(inner.diff.items(), perms))
        self.loci = frozenset(e for e, _ in _unpermute_items(((e, 0) for e in inner.loci), perms))

    def color_of(self, e: ProductEdge) -> int:
        ((em, _),) = _permute_entries([(e, 0)], self._perms)
        return self._inner.color_of(em)

    def edges(self):
        for e, _ in _unpermute_items(((e, 0) for e in self._inner.edges()), self._perms):
            yield e

    def items(self):
        yield from _unpermute_items(self._inner.items(), self._perms)


def cmd_extend(args) -> int:
    try:
        inst = load_instance(args.instance)
    except (OSError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.mode:
        inst.mode = args.mode
    mode = resolve_mode(inst)
    try:
        result, entries = run_extension(inst, mode, args.strict_degree)
    except HypothesisViolation as exc:
        doc = {"status": "hypothesis-violation", "mode": mode, "violations": list(exc.report.violations)}
        print(json.dumps(doc, indent=2))
        return EXIT_HYPOTHESIS
    except InternalInvariantError as exc:
        print(json.dumps({"status": "internal-invariant-violation", "mode": mode, "error": str(exc)}, indent=2))
        return EXIT_INTERNAL
    rep = verify(result.edges(), result.color_of, entries, palette=result.palette)
    doc = {
        "status": "ok" if rep.ok else "verification-failed",
        "mode": mode,
        "palette": result.palette,
        "verification": {
            "proper": rep.proper,
            "palette_ok": rep.palette_ok,
            "prescriptions_ok": rep.prescriptions_ok,
        },
        "stats": _jsonable(result.stats),
        "diff": entries_to_doc(inst, result.diff.items()),
    }
    if not args.diff:
        doc["coloring"] = entries_to_doc(inst, result.items())
    out = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    if not rep.ok:
        return EXIT_INTERNAL
    return EXIT_OK


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def cmd_verify(args) -> int:
    try:
        inst = load_instance(args.instance)
        with open(args.coloring, encoding="utf-8") as fh:
            coloring, palette = parse_coloring(fh.read(), inst)
    except (OSError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    mp = MaterializedProduct([f.graph for f in inst.factors])
    edges = list(mp.product_edges())
    missing = [e for e in edges if e not in coloring]
    violations = [(str(e), "missing") for e in missing]
    if not missing:
        rep = verify(edges, coloring, inst.precoloring, palette=palette)
        violations = [(str(loc), kind) for loc, kind in rep.violations]
        ok = rep.ok
    else:
        ok = False
    print(
        json.dumps(
            {"status": "ok" if ok else "violations", "violations": violations},
            indent=2,
        )
    )
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_oracle(args) -> int:
    try:
        inst = load_instance(args.instance)
    except (OSError, ParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    mp = MaterializedProduct([f.graph for f in inst.factors])
    if any(c >= args.colors for _, c in inst.precoloring):
        # no coloring with this palette can honor the prescription
        print(json.dumps({"status": "unextendable", "nodes": 0, "colors": args.colors,
                          "reason": "prescribed color outside palette"}, indent=2))
        return EXIT_OK
    flat_pre = [(mp.flat_edge(e), c) for e, c in inst.precoloring]
    try:
        res = brute_force_extend(mp.graph, flat_pre, args.colors, args.budget)
    except ValueError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    doc = {"status": res.status, "nodes": res.nodes, "colors": args.colors}
    if res.coloring is not None:
        items = ((mp.product_edge(e), c) for e, c in res.coloring.items())
        doc["coloring"] = entries_to_doc(inst, items)
    print(json.dumps(doc, indent=2))
    if res.status == BUDGET_EXHAUSTED:
        print("warning: node budget exhausted; answer is inconclusive", file=sys.stderr)
    return EXIT_OK


def cmd_fuzz(args) -> int:
    from .fuzz import RECIPES, fuzz, summarize

    if args.recipe not in RECIPES:
        print(
            f"unknown recipe {args.recipe!r}; available: {', '.join(sorted(RECIPES))}",
            file=sys.stderr,
        )
        return EXIT_PARSE
    try:
        cases = fuzz(args.recipe, args.trials, args.seed, corpus_path=args.corpus)
    except InternalInvariantError as exc:
        print(f"MISMATCH: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    s = summarize(cases)
    print(
        f"recipe={args.recipe} trials={s['trials']} extended={s['extended']} "
        f"unextendable={s['unextendable']} skipped={s['skipped']} mismatches={s['mismatch']}"
    )
    return EXIT_OK


def main(argv=None) -> int:
    p = argparse.ArgumentParser(
        prog="boxext",
        description="Extend precolored distance-3 matchings in Cartesian products of Class 1 graphs.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("extend", help="extend a precoloring to a full proper coloring")
    pe.add_argument("instance")
    pe.add_argument("--mode", choices=["auto", "general", "k2", "k2_power", "odd_cycle_k2", "odd_odd"])
    pe.add_argument("--strict-degree", action="store_true", help="use the strict 2*Delta < sum degree condition")
    pe.add_argument("--diff", action="store_true", help="emit only the diff from the canonical coloring")
    pe.add_argument("--out", help="write the output document to this path")
    pe.set_defaults(fn=cmd_extend)

    pv = sub.add_parser("verify", help="verify a coloring document against an instance")
    pv.add_argument("instance")
    pv.add_argument("coloring")
    pv.set_defaults(fn=cmd_verify)

    po = sub.add_parser("oracle", help="exact backtracking extension on a small instance")
    po.add_argument("instance")
    po.add_argument("--colors", type=int, required=True)
    po.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    po.set_defaults(fn=cmd_oracle)

    pf = sub.add_parser("fuzz", help="randomized cross-checks against the oracle")
    pf.add_argument("--recipe", required=True)
    pf.add_argument("--trials", type=int, default=100)
    pf.add_argument("--seed", type=int, default=0)
    pf.add_argument("--corpus", help="append failing seeds to this file")
    pf.set_defaults(fn=cmd_fuzz)

    args = p.parse_args(argv)
    try:
        return args.fn(args)
    except InternalInvariantError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
