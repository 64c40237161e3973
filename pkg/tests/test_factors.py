import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boxext.factors import (
    bipartite_factor,
    color_bipartite,
    color_even_cycle,
    distance_preservation_check,
    doubling_rounds,
    regularize,
    validate_factor,
)
from boxext.graphs import (
    EdgeColoring,
    SimpleGraph,
    complete_bipartite,
    cycle,
    k2,
    norm_edge,
    path,
    star,
    structure_report,
)


def bipartite_graphs(max_side=6):
    def build(a, b, picks):
        edges = [(i, a + j) for i in range(a) for j in range(b)]
        chosen = [e for e, keep in zip(edges, picks) if keep]
        return SimpleGraph(a + b, chosen)

    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(
        lambda ab: st.builds(
            build,
            st.just(ab[0]),
            st.just(ab[1]),
            st.lists(st.booleans(), min_size=ab[0] * ab[1], max_size=ab[0] * ab[1]),
        )
    )


class TestColorBipartite:
    def test_even_cycle(self):
        col = color_bipartite(cycle(6))
        assert col.palette_size == 2 and col.is_proper_on(cycle(6))

    def test_k33_latin(self):
        g = complete_bipartite(3, 3)
        col = color_bipartite(g)
        assert col.palette_size == 3
        assert col.is_proper_on(g)
        assert col.colors_used() == {0, 1, 2}

    def test_star(self):
        g = star(4)
        col = color_bipartite(g)
        assert col.palette_size == 4
        assert sorted(col.assignment.values()) == [0, 1, 2, 3]

    def test_rejects_odd_cycle(self):
        with pytest.raises(ValueError):
            color_bipartite(cycle(5))

    @settings(max_examples=120, deadline=None)
    @given(bipartite_graphs())
    def test_proper_with_delta_colors(self, g):
        col = color_bipartite(g)
        assert col.palette_size == g.max_degree()
        assert col.is_proper_on(g)
        assert len(col.assignment) == g.m


class TestColorEvenCycle:
    def test_c4(self):
        col = color_even_cycle(cycle(4))
        assert col.is_proper_on(cycle(4)) and col.palette_size == 2

    def test_c8_alternates(self):
        col = color_even_cycle(cycle(8))
        assert col.is_proper_on(cycle(8))
        assert sorted(col.colors_used()) == [0, 1]

    def test_rejects_odd(self):
        with pytest.raises(ValueError):
            color_even_cycle(cycle(5))

    def test_rejects_path(self):
        with pytest.raises(ValueError):
            color_even_cycle(path(4))


class TestValidateFactor:
    def test_accepts_alternating_c4(self):
        g = cycle(4)
        f = validate_factor(g, color_even_cycle(g))
        assert f.delta == 2

    def test_rejects_oversized_palette(self):
        g = cycle(4)
        coloring = EdgeColoring(
            {norm_edge(0, 1): 0, norm_edge(1, 2): 1, norm_edge(2, 3): 2, norm_edge(0, 3): 1},
            3,
        )
        with pytest.raises(ValueError):
            validate_factor(g, coloring)

    def test_accepts_k4_perfect_matchings(self):
        g = SimpleGraph(4, [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)])
        coloring = EdgeColoring(
            {
                norm_edge(0, 1): 0,
                norm_edge(2, 3): 0,
                norm_edge(0, 2): 1,
                norm_edge(1, 3): 1,
                norm_edge(0, 3): 2,
                norm_edge(1, 2): 2,
            },
            3,
        )
        f = validate_factor(g, coloring)
        assert f.delta == 3

    def test_rejects_partial(self):
        g = cycle(4)
        with pytest.raises(ValueError):
            validate_factor(g, EdgeColoring({norm_edge(0, 1): 0}, 2))

    def test_rejects_improper(self):
        g = cycle(4)
        bad = EdgeColoring(
            {norm_edge(0, 1): 0, norm_edge(1, 2): 0, norm_edge(2, 3): 1, norm_edge(0, 3): 1},
            2,
        )
        with pytest.raises(ValueError):
            validate_factor(g, bad)


class TestRegularize:
    def test_k2_identity(self):
        rf = regularize(bipartite_factor(k2()))
        assert rf.graph.n == 2
        assert rf.embedding == {0: 0, 1: 1}

    def test_p3_becomes_6_cycle(self):
        rf = regularize(bipartite_factor(path(3)))
        rep = structure_report(rf.graph)
        assert rf.graph.n == 6 and rep.is_regular and rep.max_degree == 2
        assert rep.component_count == 1  # a single 6-cycle
        assert rf.coloring.is_proper_on(rf.graph)
        assert rf.coloring.palette_size == 2

    def test_p4_becomes_8_cycle(self):
        rf = regularize(bipartite_factor(path(4)))
        rep = structure_report(rf.graph)
        assert rf.graph.n == 8 and rep.is_regular and rep.max_degree == 2
        assert rep.component_count == 1
        assert rf.coloring.is_proper_on(rf.graph)

    def test_embedding_preserves_colors(self):
        f = bipartite_factor(star(3))
        rf = regularize(f)
        for e, c in f.coloring.assignment.items():
            assert rf.coloring.assignment[e] == c

    def test_new_vertices_have_at_most_one_original_neighbor(self):
        for g in [path(3), path(5), star(3), SimpleGraph(5, [(0, 1), (1, 2), (1, 3), (3, 4)])]:
            f = bipartite_factor(g)
            rf = regularize(f)
            for v in range(g.n, rf.graph.n):
                originals = [w for w in rf.graph.neighbors(v) if w < g.n]
                assert len(originals) <= 1

    def test_round_count(self):
        f = bipartite_factor(star(3))
        assert doubling_rounds(f) == 2  # leaves have degree 1, delta 3


class TestDistancePreservation:
    def test_p3_with_k2_partner(self):
        f = bipartite_factor(path(3))
        assert distance_preservation_check(f, regularize(f), 1)

    def test_identity_regularization(self):
        f = bipartite_factor(k2())
        assert distance_preservation_check(f, regularize(f), 2)

    def test_p4_with_star_partner(self):
        f = bipartite_factor(path(4))
        assert distance_preservation_check(f, regularize(f), 2)
