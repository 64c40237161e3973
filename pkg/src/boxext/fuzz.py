"""Randomized cross-checking of the constructive algorithms.

Each trial builds a random precoloring for a recipe's product, runs the
matching constructive algorithm, verifies the output, and (on products small
enough) asks the brute-force oracle to confirm.  Any disagreement is a
MISMATCH: the seed is appended to the corpus file and the run halts with a
reproducer.  Distance-2 recipes deliberately violate the hypotheses and use
the oracle to hunt for non-extendable precolorings.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .engine import Precoloring, ProductExtender
from .errors import HypothesisViolation, InternalInvariantError
from .factors import bipartite_factor, even_cycle_factor
from .graphs import SimpleGraph, all_pairs_distances, cycle, k2
from .oracle import BUDGET_EXHAUSTED, EXTENDED, UNEXTENDABLE, oracle_on_product, verify
from .product import MaterializedProduct, product_edge_distance
from .special import TorusInstance, extend_bipartite_k2, extend_k2_power, extend_odd_cycle_k2, extend_odd_odd

MISMATCH = "mismatch"


@dataclass(frozen=True)
class FuzzCase:
    recipe: str
    seed: int
    size: int
    min_distance: int
    outcome: str  # extended | unextendable | skipped | mismatch
    detail: str = ""


@dataclass(frozen=True)
class Recipe:
    name: str
    factor_graphs: Callable[[], list[SimpleGraph]]
    mode: str  # general | k2 | odd_cycle_k2 | k2_power | odd_odd
    palette: int
    min_distance: int = 3
    max_size: int = 4
    oracle_edges: int = 40
    oracle_budget: int = 2_000_000


RECIPES: dict[str, Recipe] = {
    r.name: r
    for r in [
        Recipe("c4xc4", lambda: [cycle(4), cycle(4)], "general", 4),
        Recipe("c6xc6", lambda: [cycle(6), cycle(6)], "general", 4, oracle_edges=72),
        Recipe("c4xc4xc4", lambda: [cycle(4)] * 3, "general", 6, oracle_edges=0),
        Recipe("q3", lambda: [cycle(4), k2()], "k2", 3),
        Recipe("c6xk2", lambda: [cycle(6), k2()], "k2", 3),
        Recipe("c4xk2xk2", lambda: [cycle(4), k2(), k2()], "k2_power", 4),
        Recipe("c5xk2", lambda: [cycle(5), k2()], "odd_cycle_k2", 3),
        Recipe("c7xk2", lambda: [cycle(7), k2()], "odd_cycle_k2", 3),
        Recipe("c5xc5", lambda: [cycle(5), cycle(5)], "odd_odd", 5, oracle_edges=50),
        Recipe("c5xc7", lambda: [cycle(5), cycle(7)], "odd_odd", 5, oracle_edges=0),
        Recipe("dist2-c4xc4", lambda: [cycle(4), cycle(4)], "general", 4, min_distance=2, max_size=4),
        Recipe(
            "dist2-c6xc6",
            lambda: [cycle(6), cycle(6)],
            "general",
            4,
            min_distance=2,
            max_size=4,
            oracle_edges=72,
            oracle_budget=20_000_000,
        ),
    ]
}


def random_matching(rng, edges, dist_matrices, min_distance, size, clustered=False):
    """Greedy random edge set with pairwise distance >= min_distance.

    Clustered mode packs the matching around a random center vertex; that is
    where non-extendable sub-distance-3 configurations live (edges crowding
    one vertex's palette), so the distance-2 recipes use it.
    """
    pool = list(edges)
    rng.shuffle(pool)
    if clustered:
        center = rng.choice(pool).base

        def crowding(e):
            # prefer edges one step from the center: those are the ones that
            # constrain the center vertex's palette without touching it
            lo, hi = e.endpoints()
            return abs(
                min(
                    sum(m[a][b] for m, a, b in zip(dist_matrices, v, center))
                    for v in (lo, hi)
                )
                - 1
            )

        pool.sort(key=crowding)
    chosen = []
    for e in pool:
        if len(chosen) >= size:
            break
        if all(
            product_edge_distance(dist_matrices, e, f) >= min_distance
            for f in chosen
        ):
            chosen.append(e)
    return chosen


def _run_constructive(recipe: Recipe, graphs, pre: Precoloring):
    if recipe.mode == "general":
        factors = [
            even_cycle_factor(g) if g.n % 2 == 0 and g.n == g.m else bipartite_factor(g)
            for g in graphs
        ]
        return ProductExtender(factors).extend(pre)
    if recipe.mode == "k2":
        return extend_bipartite_k2(graphs[0], pre)
    if recipe.mode == "odd_cycle_k2":
        return extend_odd_cycle_k2(graphs[0].n, pre)
    if recipe.mode == "k2_power":
        return extend_k2_power(graphs[0], len(graphs) - 1, pre)
    if recipe.mode == "odd_odd":
        inst = TorusInstance((graphs[0].n - 1) // 2, (graphs[1].n - 1) // 2)
        return extend_odd_odd(inst, pre)
    raise ValueError(f"unknown mode {recipe.mode}")


def run_trial(recipe: Recipe, seed: int) -> FuzzCase:
    rng = random.Random(seed)
    graphs = recipe.factor_graphs()
    mp = MaterializedProduct(graphs)
    dm = [all_pairs_distances(g) for g in graphs]
    edges = list(mp.product_edges())
    size = rng.randint(1, recipe.max_size)
    probing = recipe.min_distance < 3
    matching = random_matching(
        rng, edges, dm, recipe.min_distance, size, clustered=probing
    )
    if probing and rng.random() < 0.6:
        col = rng.randrange(recipe.palette)
        entries = [(e, col) for e in matching]
    else:
        entries = [(e, rng.randrange(recipe.palette)) for e in matching]
    pre = Precoloring.of(entries, recipe.palette)
    dists = [
        product_edge_distance(dm, e1, e2)
        for i, (e1, _) in enumerate(entries)
        for (e2, _) in entries[i + 1 :]
    ]
    # a matching with fewer than two edges satisfies every distance bound
    min_dist = int(min(dists)) if dists else 3

    if recipe.min_distance < 3:
        # hypothesis-violating probe: the construction must refuse, the
        # oracle decides extendability
        if min_dist >= 3:
            return FuzzCase(recipe.name, seed, len(entries), min_dist, "skipped", "drew a distance-3 matching")
        try:
            _run_constructive(recipe, graphs, pre)
            return FuzzCase(
                recipe.name, seed, len(entries), min_dist, MISMATCH,
                "construction accepted a sub-distance-3 precoloring",
            )
        except HypothesisViolation:
            pass
        orc = oracle_on_product(mp, entries, recipe.palette, recipe.oracle_budget)
        outcome = {
            EXTENDED: "extended",
            UNEXTENDABLE: "unextendable",
            BUDGET_EXHAUSTED: "skipped",
        }[orc.status]
        return FuzzCase(recipe.name, seed, len(entries), min_dist, outcome)

    try:
        res = _run_constructive(recipe, graphs, pre)
    except (HypothesisViolation, InternalInvariantError) as exc:
        return FuzzCase(recipe.name, seed, len(entries), min_dist, MISMATCH, f"construction failed: {exc}")
    rep = verify(res.edges(), res.color_of, entries, palette=recipe.palette)
    if not rep.ok:
        return FuzzCase(
            recipe.name, seed, len(entries), min_dist, MISMATCH,
            f"verification failed: {rep.violations[:3]}",
        )
    if 0 < len(edges) <= recipe.oracle_edges:
        orc = oracle_on_product(mp, entries, recipe.palette, recipe.oracle_budget)
        if orc.status == UNEXTENDABLE:
            return FuzzCase(
                recipe.name, seed, len(entries), min_dist, MISMATCH,
                "construction extended but the oracle proves unextendable",
            )
    return FuzzCase(recipe.name, seed, len(entries), min_dist, "extended")


def fuzz(
    recipe: str,
    trials: int,
    seed: int = 0,
    corpus_path: str | None = None,
) -> list[FuzzCase]:
    """Run trials of a recipe; persist and raise on the first mismatch."""
    spec = RECIPES[recipe]
    rng = random.Random(seed)
    cases: list[FuzzCase] = []
    for _ in range(trials):
        trial_seed = rng.randrange(2**32)
        case = run_trial(spec, trial_seed)
        cases.append(case)
        if case.outcome == MISMATCH:
            if corpus_path:
                with open(corpus_path, "a", encoding="utf-8") as fh:
                    fh.write(f"{case.recipe} {case.seed} {case.outcome} {case.detail}\n")
            raise InternalInvariantError(
                f"fuzz mismatch: recipe={case.recipe} seed={case.seed}: {case.detail}"
            )
    return cases


def summarize(cases: list[FuzzCase]) -> dict[str, int]:
    out = {"trials": len(cases), "extended": 0, "unextendable": 0, "skipped": 0, "mismatch": 0}
    for c in cases:
        out[c.outcome] = out.get(c.outcome, 0) + 1
    return out
