"""Backtracking kernel for the exact edge-coloring oracle.

One implementation, two execution paths: the function below is written in
numba-compatible array style and is JIT-compiled when numba is importable.
Setting ``BOXEXT_NO_NUMBA=1`` (or a failed import) selects the uncompiled
pure-Python/numpy path; both paths run the identical search and return
identical results.  ``benchmarks/bench_oracle.py`` compares the two.
"""

from __future__ import annotations

import os

import numpy as np

SAT = 1
UNSAT = 0
BUDGET = 2


def _solve(eu, ev, inc_start, inc_edge, order, col, palette, budget):
    """Exact search for a proper edge coloring extending the fixed entries.

    eu, ev: edge endpoints.  inc_start/inc_edge: CSR of incident edge ids per
    vertex.  order: free-edge decision order.  col: -1 for free edges, the
    prescribed color otherwise (mutated in place; holds the coloring on SAT).
    Returns (status, nodes): status SAT/UNSAT/BUDGET.

    Branching follows the static order; after every assignment the adjacent
    free edges are forward-checked, edges with a single remaining color are
    assigned immediately, and each endpoint must keep at least as many free
    colors as uncolored incident edges.  All pruning is sound, so UNSAT is a
    proof.
    """
    m = eu.shape[0]
    n = inc_start.shape[0] - 1
    num_order = order.shape[0]
    full = (np.int64(1) << palette) - 1

    used = np.zeros(n, dtype=np.int64)
    free_deg = np.zeros(n, dtype=np.int64)
    for e in range(m):
        if col[e] < 0:
            free_deg[eu[e]] += 1
            free_deg[ev[e]] += 1

    # install prescribed colors; an immediate clash means no extension exists
    for e in range(m):
        c = col[e]
        if c >= 0:
            bit = np.int64(1) << c
            if (used[eu[e]] & bit) != 0 or (used[ev[e]] & bit) != 0:
                return UNSAT, 0
            used[eu[e]] |= bit
            used[ev[e]] |= bit

    trail = np.empty(m, dtype=np.int64)
    trail_len = 0
    level_base = np.empty(m + 2, dtype=np.int64)
    level_color = np.empty(m + 2, dtype=np.int64)
    order_pos = np.empty(m + 2, dtype=np.int64)
    nodes = 0

    def _popcount(x):
        cnt = 0
        while x != 0:
            x &= x - 1
            cnt += 1
        return cnt

    # returns SAT (ok), UNSAT (conflict) or BUDGET; scans the trail from
    # position `head`, unit-propagating forced edges as it goes
    def _propagate(head, trail_len, nodes):
        while head < trail_len:
            e = trail[head]
            head += 1
            for side in range(2):
                v = eu[e] if side == 0 else ev[e]
                if _popcount(full & ~used[v]) < free_deg[v]:
                    return UNSAT, trail_len, nodes
                for idx in range(inc_start[v], inc_start[v + 1]):
                    g = inc_edge[idx]
                    if col[g] >= 0:
                        continue
                    a = full & ~(used[eu[g]] | used[ev[g]])
                    if a == 0:
                        return UNSAT, trail_len, nodes
                    if (a & (a - 1)) == 0:
                        c = 0
                        while ((a >> c) & 1) == 0:
                            c += 1
                        col[g] = c
                        used[eu[g]] |= a
                        used[ev[g]] |= a
                        free_deg[eu[g]] -= 1
                        free_deg[ev[g]] -= 1
                        trail[trail_len] = g
                        trail_len += 1
                        nodes += 1
                        if nodes >= budget:
                            return BUDGET, trail_len, nodes
        return SAT, trail_len, nodes

    def _undo_to(base, trail_len):
        while trail_len > base:
            trail_len -= 1
            e = trail[trail_len]
            bit = np.int64(1) << col[e]
            col[e] = -1
            used[eu[e]] &= ~bit
            used[ev[e]] &= ~bit
            free_deg[eu[e]] += 1
            free_deg[ev[e]] += 1
        return trail_len

    # initial propagation seeded by the prescribed edges
    for e in range(m):
        if col[e] >= 0:
            trail[trail_len] = e
            trail_len += 1
    st, trail_len, nodes = _propagate(0, trail_len, nodes)
    if st != SAT:
        return st, nodes

    level = 0
    level_base[0] = trail_len
    level_color[0] = -1
    order_pos[0] = 0

    while True:
        dp = order_pos[level]
        while dp < num_order and col[order[dp]] >= 0:
            dp += 1
        order_pos[level] = dp
        if dp == num_order:
            return SAT, nodes
        e = order[dp]
        a = full & ~(used[eu[e]] | used[ev[e]])
        c = level_color[level] + 1
        while c < palette and ((a >> c) & 1) == 0:
            c += 1
        if c < palette:
            level_color[level] = c
            bit = np.int64(1) << c
            col[e] = c
            used[eu[e]] |= bit
            used[ev[e]] |= bit
            free_deg[eu[e]] -= 1
            free_deg[ev[e]] -= 1
            base = trail_len
            trail[trail_len] = e
            trail_len += 1
            nodes += 1
            if nodes >= budget:
                return BUDGET, nodes
            st, trail_len, nodes = _propagate(base, trail_len, nodes)
            if st == BUDGET:
                return BUDGET, nodes
            if st == SAT:
                level += 1
                level_base[level] = trail_len
                level_color[level] = -1
                order_pos[level] = dp
            else:
                trail_len = _undo_to(base, trail_len)
        else:
            if level == 0:
                return UNSAT, nodes
            level -= 1
            trail_len = _undo_to(level_base[level], trail_len)


solve_python = _solve

try:  # pragma: no cover - exercised via the dispatch below
    if os.environ.get("BOXEXT_NO_NUMBA"):
        raise ImportError("numba disabled by BOXEXT_NO_NUMBA")
    from numba import njit

    solve_compiled = njit(cache=True)(_solve)
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    solve_compiled = _solve
    HAVE_NUMBA = False


def solve(eu, ev, inc_start, inc_edge, order, col, palette, budget):
    """Dispatch to the compiled kernel unless the fallback is forced."""
    return solve_compiled(eu, ev, inc_start, inc_edge, order, col, palette, budget)
