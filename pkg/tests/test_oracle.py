import os
import subprocess
import sys
from itertools import product as iproduct

import pytest

from boxext.graphs import SimpleGraph, cycle, complete_bipartite, k2, norm_edge, path
from boxext.oracle import (
    BUDGET_EXHAUSTED,
    EXTENDED,
    UNEXTENDABLE,
    brute_force_extend,
    oracle_on_product,
    verify,
)
from boxext.product import MaterializedProduct


def enumerate_all_extensions(g: SimpleGraph, pre, num_colors):
    """Independent re-check: plain exhaustive enumeration over all edges."""
    edges = g.sorted_edges()
    fixed = dict(pre)
    results = []

    def ok(assign):
        for v in g.vertices():
            seen = set()
            for w in g.adj[v]:
                c = assign.get(norm_edge(v, w))
                if c is None:
                    continue
                if c in seen:
                    return False
                seen.add(c)
        return True

    def rec(i, assign):
        if not ok(assign):
            return
        if i == len(edges):
            results.append(dict(assign))
            return
        e = edges[i]
        if e in fixed:
            assign[e] = fixed[e]
            rec(i + 1, assign)
            del assign[e]
            return
        for c in range(num_colors):
            assign[e] = c
            rec(i + 1, assign)
            del assign[e]

    rec(0, {})
    return results


class TestVerify:
    def test_clean_coloring(self):
        g = cycle(4)
        rep = verify(g, {norm_edge(0, 1): 0, norm_edge(1, 2): 1, norm_edge(2, 3): 0, norm_edge(0, 3): 1}, palette=2)
        assert rep.ok

    def test_conflict_located(self):
        g = cycle(4)
        rep = verify(g, {norm_edge(0, 1): 0, norm_edge(1, 2): 0, norm_edge(2, 3): 1, norm_edge(0, 3): 1}, palette=2)
        assert not rep.proper
        assert any(kind == "improper" for _, kind in rep.violations)

    def test_palette_violation(self):
        g = k2()
        rep = verify(g, {norm_edge(0, 1): 5}, palette=2)
        assert not rep.palette_ok

    def test_prescription_violation(self):
        g = k2()
        rep = verify(g, {norm_edge(0, 1): 0}, pre=[(norm_edge(0, 1), 1)], palette=2)
        assert not rep.prescriptions_ok


class TestBruteForce:
    def test_c4c4_single_prescriptions(self):
        mp = MaterializedProduct([cycle(4), cycle(4)])
        for e in list(mp.product_edges())[:4]:
            res = oracle_on_product(mp, [(e, 3)], 4)
            assert res.extended
            rep = verify(mp.graph, res.coloring, palette=4)
            assert rep.ok

    def test_c5c5_not_4_colorable(self):
        mp = MaterializedProduct([cycle(5), cycle(5)])
        res = brute_force_extend(mp.graph, [], 4)
        assert res.status == UNEXTENDABLE

    def test_budget_is_distinguished(self):
        mp = MaterializedProduct([cycle(5), cycle(5)])
        res = brute_force_extend(mp.graph, [], 4, budget=100)
        assert res.status == BUDGET_EXHAUSTED

    def test_conflicting_prescriptions_unextendable(self):
        g = path(3)
        res = brute_force_extend(g, [((0, 1), 0), ((1, 2), 0)], 2)
        assert res.status == UNEXTENDABLE

    def test_returned_colorings_always_verify(self):
        for g, colors in [(cycle(6), 2), (complete_bipartite(3, 3), 3), (path(5), 2)]:
            res = brute_force_extend(g, [], colors)
            assert res.extended
            assert verify(g, res.coloring, palette=colors).ok

    def test_agrees_with_full_enumeration(self):
        cases = [
            (cycle(5), [], 2),
            (cycle(5), [], 3),
            (cycle(6), [(norm_edge(0, 1), 0)], 2),
            (path(5), [(norm_edge(1, 2), 1)], 2),
            (complete_bipartite(2, 3), [], 3),
            (complete_bipartite(2, 2), [(norm_edge(0, 2), 0), (norm_edge(1, 3), 0)], 2),
            (SimpleGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)]), [], 3),
        ]
        for g, pre, colors in cases:
            assert g.m <= 12
            all_ext = enumerate_all_extensions(g, pre, colors)
            res = brute_force_extend(g, pre, colors)
            assert res.extended == bool(all_ext)
            if res.extended:
                assert verify(g, res.coloring, pre, palette=colors).ok

    def test_deterministic(self):
        g = complete_bipartite(3, 3)
        r1 = brute_force_extend(g, [], 3)
        r2 = brute_force_extend(g, [], 3)
        assert r1.coloring == r2.coloring and r1.nodes == r2.nodes


class TestFallbackAgreement:
    def test_python_path_matches_compiled(self):
        code = (
            "from boxext.graphs import cycle, complete_bipartite\n"
            "from boxext.oracle import brute_force_extend\n"
            "from boxext.product import MaterializedProduct\n"
            "import boxext._kernel as k\n"
            "assert not k.HAVE_NUMBA\n"
            "mp = MaterializedProduct([cycle(4), cycle(4)])\n"
            "r = brute_force_extend(mp.graph, [((0, 1), 2)], 4)\n"
            "print(r.status, r.nodes, sorted(r.coloring.items())[:3])\n"
        )
        env = dict(os.environ, BOXEXT_NO_NUMBA="1")
        out = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, env=env
        )
        assert out.returncode == 0, out.stderr
        mp = MaterializedProduct([cycle(4), cycle(4)])
        r = brute_force_extend(mp.graph, [((0, 1), 2)], 4)
        want = f"{r.status} {r.nodes} {sorted(r.coloring.items())[:3]}"
        assert out.stdout.strip() == want

    def test_python_fallback_unsat_small(self):
        import boxext._kernel as kernel

        g = cycle(5)
        import numpy as np

        edges = g.sorted_edges()
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
        col = np.full(len(edges), -1, dtype=np.int64)
        order = np.arange(len(edges), dtype=np.int64)
        st, nodes = kernel.solve_python(
            eu, ev, inc_start, inc_edge, order, col, 2, 10**6
        )
        assert st == kernel.UNSAT  # an odd cycle has no proper 2-edge-coloring
