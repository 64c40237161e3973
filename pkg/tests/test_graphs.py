import math
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxext.graphs import (
    INF,
    SimpleGraph,
    complete_bipartite,
    cycle,
    edge_distance,
    is_cycle,
    is_distance_k_matching,
    k2,
    path,
    star,
    structure_report,
    vertex_distance,
)


def floyd_warshall(g: SimpleGraph):
    d = [[0 if i == j else math.inf for j in range(g.n)] for i in range(g.n)]
    for u, v in g.edges:
        d[u][v] = d[v][u] = 1
    for m in range(g.n):
        for i in range(g.n):
            for j in range(g.n):
                if d[i][m] + d[m][j] < d[i][j]:
                    d[i][j] = d[i][m] + d[m][j]
    return d


random_graphs = st.integers(2, 12).flatmap(
    lambda n: st.builds(
        SimpleGraph,
        st.just(n),
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda e: e[0] != e[1]
            ),
            max_size=24,
        ),
    )
)


class TestVertexDistance:
    def test_cycle_antipodes(self):
        assert vertex_distance(cycle(6), 0, 3) == 3

    def test_identity(self):
        assert vertex_distance(cycle(5), 2, 2) == 0

    def test_disconnected_is_infinite(self):
        g = SimpleGraph(4, [(0, 1), (2, 3)])
        assert vertex_distance(g, 0, 3) == INF

    def test_invalid_vertex(self):
        with pytest.raises(ValueError):
            vertex_distance(cycle(4), 0, 9)


class TestEdgeDistance:
    def test_adjacent_rows(self):
        g = cycle(6)
        assert edge_distance(g, (0, 1), (2, 3)) == 1
        assert edge_distance(g, (0, 1), (3, 4)) == 2

    def test_same_edge(self):
        assert edge_distance(cycle(6), (0, 1), (0, 1)) == 0

    def test_edge_not_in_graph(self):
        with pytest.raises(ValueError):
            edge_distance(cycle(6), (0, 2), (3, 4))

    def test_zero_iff_sharing_a_vertex(self):
        g = cycle(8)
        for e, f in combinations(g.sorted_edges(), 2):
            share = bool(set(e) & set(f))
            assert (edge_distance(g, e, f) == 0) == share

    @settings(max_examples=60, deadline=None)
    @given(random_graphs)
    def test_against_floyd_warshall(self, g):
        d = floyd_warshall(g)
        es = g.sorted_edges()
        for e, f in combinations(es[:10], 2):
            want = min(d[a][b] for a in e for b in f)
            assert edge_distance(g, e, f) == want

    @settings(max_examples=40, deadline=None)
    @given(random_graphs)
    def test_symmetry(self, g):
        es = g.sorted_edges()
        for e, f in combinations(es[:8], 2):
            assert edge_distance(g, e, f) == edge_distance(g, f, e)


class TestDistanceKMatching:
    def test_far_pair(self):
        assert is_distance_k_matching(cycle(8), [(0, 1), (4, 5)], 3)

    def test_near_pair(self):
        assert not is_distance_k_matching(cycle(8), [(0, 1), (3, 4)], 3)

    def test_singleton_vacuous(self):
        assert is_distance_k_matching(cycle(8), [(0, 1)], 99)

    def test_k1_implies_matching(self):
        g = cycle(8)
        for e, f in combinations(g.sorted_edges(), 2):
            if is_distance_k_matching(g, [e, f], 1):
                assert not set(e) & set(f)


class TestStructureReport:
    def test_c5(self):
        r = structure_report(cycle(5))
        assert (r.max_degree, r.is_regular, r.is_bipartite, r.component_count) == (
            2,
            True,
            False,
            1,
        )

    def test_k2(self):
        r = structure_report(k2())
        assert (r.max_degree, r.is_regular, r.is_bipartite, r.component_count) == (
            1,
            True,
            True,
            1,
        )

    def test_p4(self):
        r = structure_report(path(4))
        assert (r.max_degree, r.is_regular, r.is_bipartite, r.component_count) == (
            2,
            False,
            True,
            1,
        )


def test_builders():
    assert complete_bipartite(3, 3).m == 9
    assert star(4).max_degree() == 4
    assert is_cycle(cycle(7)) and not is_cycle(path(7))
    with pytest.raises(ValueError):
        SimpleGraph(3, [(0, 0)])
