from itertools import combinations

import pytest

from boxext.engine import (
    Precoloring,
    ProductExtender,
    check_hypotheses,
    pair_colors,
    select_bricks,
    step1,
    step2,
)
from boxext.errors import HypothesisViolation, InternalInvariantError
from boxext.factors import bipartite_factor, even_cycle_factor
from boxext.graphs import all_pairs_distances, cycle, k2, path, star
from boxext.oracle import oracle_on_product, verify
from boxext.product import (
    MaterializedProduct,
    SparseColoring,
    canonical_color,
    enumerate_bricks,
    local_properness_check,
    make_edge,
    product_edge_distance,
)


def c4_factors(k=2):
    return [even_cycle_factor(cycle(4)) for _ in range(k)]


def c6_factors():
    return [even_cycle_factor(cycle(6)), even_cycle_factor(cycle(6))]


class TestPairColors:
    def test_two_even_bands(self):
        pairing = pair_colors([2, 2])
        for c in range(2):
            assert 2 <= pairing[c] < 4
        assert all(pairing[pairing[c]] == c for c in range(4))

    def test_three_bands(self):
        pairing = pair_colors([3, 3, 2])
        offsets = [0, 3, 6]

        def band(c):
            return max(i for i, o in enumerate(offsets) if c >= o)

        seen = set()
        for c in range(8):
            p = pairing[c]
            assert p != c and pairing[p] == c
            assert band(p) != band(c)
            seen.add(frozenset((c, p)))
        assert len(seen) == 4
        # cross-check feasibility by brute force over all perfect pairings
        import itertools

        def exists_valid(colors):
            if not colors:
                return True
            c0 = colors[0]
            for j in colors[1:]:
                if band(j) != band(c0):
                    rest = [x for x in colors[1:] if x != j]
                    if exists_valid(rest):
                        return True
            return False

        assert exists_valid(list(range(8)))

    def test_rejects_dominant_band(self):
        with pytest.raises(ValueError):
            pair_colors([5, 1, 2])

    def test_rejects_odd_total(self):
        with pytest.raises(ValueError):
            pair_colors([2, 1])

    def test_exhaustive_small_profiles(self):
        # every profile with total <= 12, even, 2*max <= total
        def profiles(total_left, min_part, prefix):
            if len(prefix) >= 2 and sum(prefix) % 2 == 0 and sum(prefix) > 0:
                yield list(prefix)
            if total_left == 0:
                return
            for part in range(min_part, total_left + 1):
                yield from profiles(total_left - part, part, prefix + [part])

        count = 0
        for prof in profiles(12, 1, []):
            total = sum(prof)
            if total % 2 or 2 * max(prof) > total:
                continue
            pairing = pair_colors(prof)
            offsets = []
            acc = 0
            for s in prof:
                offsets.append(acc)
                acc += s

            def band(c):
                return max(i for i, o in enumerate(offsets) if c >= o)

            assert sorted(pairing.partner) == list(range(total))
            for c in range(total):
                assert pairing[pairing[c]] == c and band(pairing[c]) != band(c)
            count += 1
        assert count > 50


class TestCheckHypotheses:
    def test_equal_degrees_pass_non_strict(self):
        rep = check_hypotheses(c4_factors(), Precoloring.of([], 4))
        assert rep.ok

    def test_equal_degrees_fail_strict(self):
        rep = check_hypotheses(c4_factors(), Precoloring.of([], 4), strict_degree=True)
        assert not rep.ok and any("degree" in v for v in rep.violations)

    def test_dominant_degree_profile(self):
        factors = [bipartite_factor(star(5)), bipartite_factor(k2()), bipartite_factor(path(3))]
        rep = check_hypotheses(factors, Precoloring.of([], 8))
        assert not rep.ok
        assert any("degree" in v for v in rep.violations)

    def test_distance_violation_named(self):
        factors = c4_factors()
        e1 = make_edge(0, 0, 1, (0, 0))
        e2 = make_edge(0, 2, 3, (2, 1))
        rep = check_hypotheses(factors, Precoloring.of([(e1, 0), (e2, 1)], 4))
        assert not rep.ok
        assert any("distance" in v for v in rep.violations)

    def test_single_factor_rejected(self):
        rep = check_hypotheses([even_cycle_factor(cycle(4))], Precoloring.of([], 2))
        assert not rep.ok and any(v.startswith("k:") for v in rep.violations)

    def test_bad_edge_reported(self):
        rep = check_hypotheses(
            c4_factors(), Precoloring.of([(make_edge(0, 0, 2, (0, 0)), 0)], 4)
        )
        assert not rep.ok and any("edge" in v for v in rep.violations)


class TestSteps:
    def test_step1_four_overrides(self):
        ext = ProductExtender(c4_factors())
        col = SparseColoring(ext.space)
        e = make_edge(0, 0, 1, (0, 0))
        assert canonical_color(ext.space, e) == 0
        square = step1(col, e, 2)
        assert col.color_of(e) == 2
        assert len(col.overrides) == 4
        touched = {v for x in square.edges() for v in x.endpoints()}
        assert local_properness_check(col, touched) == []

    def test_step1_rejects_same_band(self):
        ext = ProductExtender(c4_factors())
        col = SparseColoring(ext.space)
        e = make_edge(0, 0, 1, (0, 0))
        with pytest.raises(ValueError):
            step1(col, e, 1)

    def test_step2_corrects_within_brick(self):
        ext = ProductExtender(c6_factors())
        col = SparseColoring(ext.space)
        e = make_edge(0, 0, 1, (0, 0))
        prescribed = 1 - canonical_color(ext.space, e)
        pairing = ext.pairing()
        (brick,) = enumerate_bricks(ext.space, e, prescribed, pairing[prescribed])
        step2(col, brick, prescribed)
        assert col.color_of(e) == prescribed
        assert len(col.overrides) <= 10
        assert set(col.overrides) <= set(brick.all_edges())
        touched = {v for x in brick.all_edges() for v in x.endpoints()}
        assert local_properness_check(col, touched) == []

    def test_overlapping_bricks_fail_loudly(self):
        ext = ProductExtender(c6_factors())
        col = SparseColoring(ext.space)
        e = make_edge(0, 0, 1, (0, 0))
        prescribed = 1 - canonical_color(ext.space, e)
        pairing = ext.pairing()
        (brick,) = enumerate_bricks(ext.space, e, prescribed, pairing[prescribed])
        step2(col, brick, prescribed)
        with pytest.raises(InternalInvariantError):
            step2(col, brick, canonical_color(ext.space, e))


class TestSelectBricks:
    def test_deterministic_single_entry(self):
        ext = ProductExtender(c6_factors())
        e = make_edge(0, 0, 1, (0, 0))
        prescribed = 1 - canonical_color(ext.space, e)
        pre = Precoloring.of([(e, prescribed)], 4)
        b1 = select_bricks(ext.space, pre, ext.pairing())
        b2 = select_bricks(ext.space, pre, ext.pairing())
        assert b1 == b2 and set(b1) == {e}

    def test_canonical_entries_excluded(self):
        ext = ProductExtender(c6_factors())
        e = make_edge(0, 0, 1, (0, 0))
        pre = Precoloring.of([(e, canonical_color(ext.space, e))], 4)
        assert select_bricks(ext.space, pre, ext.pairing()) == {}

    def test_distance3_pairs_get_disjoint_bricks(self):
        ext = ProductExtender(c6_factors())
        graphs = [f.graph for f in ext.factors]
        dm = [all_pairs_distances(g) for g in graphs]
        mp = MaterializedProduct(graphs)
        edges = list(mp.product_edges())
        pairs = [
            (e, f)
            for e, f in combinations(edges, 2)
            if product_edge_distance(dm, e, f) >= 3
        ]
        def other_in_band(c):
            return 1 - c if c < 2 else 5 - c

        for e1, e2 in pairs:
            c1 = other_in_band(canonical_color(ext.space, e1))
            c2 = other_in_band(canonical_color(ext.space, e2))
            pre = Precoloring.of([(e1, c1), (e2, c2)], 4)
            bricks = select_bricks(ext.space, pre, ext.pairing())
            s1 = set(bricks[e1].all_edges())
            s2 = set(bricks[e2].all_edges())
            assert not s1 & s2


class TestExtend:
    def test_empty_precoloring_is_canonical(self):
        ext = ProductExtender(c4_factors())
        res = ext.extend(Precoloring.of([], 4))
        assert res.diff == {} and res.stats["step1"] == res.stats["step2"] == 0
        for e in res.edges():
            assert res.color_of(e) == canonical_color(ext.space, e)

    def test_c4c4_singles_against_oracle(self):
        ext = ProductExtender(c4_factors())
        mp = MaterializedProduct([f.graph for f in ext.factors])
        for e in list(mp.product_edges())[:8]:
            for c in range(4):
                pre = Precoloring.of([(e, c)], 4)
                res = ext.extend(pre, check_local=True)
                assert verify(res.edges(), res.color_of, pre.entries, palette=4).ok
                orc = oracle_on_product(mp, pre.entries, 4)
                assert orc.extended

    def test_two_entries_simultaneously(self):
        ext = ProductExtender(c6_factors())
        e1 = make_edge(0, 0, 1, (0, 0))
        e2 = make_edge(0, 3, 4, (3, 3))
        pre = Precoloring.of([(e1, 1), (e2, 3)], 4)
        res = ext.extend(pre, check_local=True)
        assert res.color_of(e1) == 1 and res.color_of(e2) == 3
        assert verify(res.edges(), res.color_of, pre.entries, palette=4).ok

    def test_canonical_prescription_untouched(self):
        ext = ProductExtender(c6_factors())
        e = make_edge(0, 0, 1, (0, 0))
        pre = Precoloring.of([(e, canonical_color(ext.space, e))], 4)
        res = ext.extend(pre)
        assert res.diff == {}

    def test_hypothesis_violation_raises(self):
        ext = ProductExtender(c4_factors())
        e1 = make_edge(0, 0, 1, (0, 0))
        e2 = make_edge(1, 0, 1, (1, 0))
        with pytest.raises(HypothesisViolation):
            ext.extend(Precoloring.of([(e1, 0), (e2, 1)], 4))

    def test_three_factors(self):
        ext = ProductExtender(c4_factors(3))
        e = make_edge(1, 2, 3, (0, 2, 1))
        for c in range(6):
            pre = Precoloring.of([(e, c)], 6)
            res = ext.extend(pre, check_local=True)
            assert verify(res.edges(), res.color_of, pre.entries, palette=6).ok

    def test_diff_stays_in_loci(self):
        ext = ProductExtender(c6_factors())
        e = make_edge(1, 2, 3, (3, 2))
        for c in range(4):
            res = ext.extend(Precoloring.of([(e, c)], 4))
            assert set(res.diff) <= set(res.loci)
