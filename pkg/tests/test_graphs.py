from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spannerlab.graphs import (
    INF,
    EdgeMultiset,
    Walk,
    WeightedGraph,
    apsp,
    concat,
    edge_key,
    floor_pow2,
    format_graph,
    is_connected,
    normalize_edges,
    parse_graph,
    scale_to_integers,
    stretch,
)
from spannerlab.instances import gen_ladder, ladder_u, ladder_v

from bruteforce import brute_all_distances, brute_shortest, brute_stretch_over_pairs


@st.composite
def small_graphs(draw, max_n=6, positive=True):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    lo = 1 if positive else 0
    edges = []
    for u, v in chosen:
        num = draw(st.integers(min_value=lo, max_value=12))
        den = draw(st.integers(min_value=1, max_value=5))
        edges.append((u, v, F(num, den)))
    return WeightedGraph(n, tuple(edges))


class TestWeightedGraph:
    def test_canonical_edge_order(self):
        a = WeightedGraph(3, ((2, 0, F(1)), (1, 2, F(2))))
        b = WeightedGraph(3, ((1, 2, F(2)), (0, 2, F(1))))
        assert a == b
        assert a.edges[0] == (0, 2, F(1))

    def test_rejects_duplicates_and_loops(self):
        with pytest.raises(ValueError):
            WeightedGraph(3, ((0, 1, F(1)), (1, 0, F(2))))
        with pytest.raises(ValueError):
            WeightedGraph(3, ((1, 1, F(1)),))
        with pytest.raises(ValueError):
            WeightedGraph(2, ((0, 1, F(-1)),))
        with pytest.raises(TypeError):
            WeightedGraph(2, ((0, 1, 0.5),))

    def test_planar_bound_enforced(self):
        complete5 = tuple((u, v, F(1)) for u in range(5) for v in range(u + 1, 5))
        with pytest.raises(ValueError):
            WeightedGraph(5, complete5, declared_planar=True)
        WeightedGraph(5, complete5)  # fine undeclared

    def test_subgraph(self):
        g = WeightedGraph(3, ((0, 1, F(1)), (1, 2, F(2))))
        h = g.subgraph([(0, 1)])
        assert h.edge_keys == {(0, 1)} and h.n == 3
        with pytest.raises(ValueError):
            g.subgraph([(0, 2)])


class TestApsp:
    def test_ladder_direct_rung_beats_detour(self):
        g = gen_ladder(2, F(1, 2))
        d = apsp(g)
        assert d.dist(ladder_u(0), ladder_v(2, 0)) == F(1)

    def test_single_vertex(self):
        assert apsp(WeightedGraph(1)).dist(0, 0) == 0

    def test_disconnected_sentinel(self):
        assert apsp(WeightedGraph(2)).dist(0, 1) is INF

    @settings(max_examples=60, deadline=None)
    @given(small_graphs(max_n=8))
    def test_matches_simple_path_enumeration(self, g):
        oracle = apsp(g)
        brute = brute_all_distances(g)
        for pair, d in brute.items():
            assert oracle.dist(*pair) == d

    @settings(max_examples=40, deadline=None)
    @given(small_graphs())
    def test_canonical_path_is_lex_min(self, g):
        oracle = apsp(g)
        for s in range(g.n):
            for t in range(g.n):
                d, verts = brute_shortest(g, s, t)
                if d is INF:
                    continue
                walk = oracle.path(s, t)
                assert walk.weight == d
                assert walk.vertices == verts

    def test_lex_tie_break(self):
        # two equal-weight routes 0-1-3 and 0-2-3; lex picks the one through 1
        g = WeightedGraph(4, ((0, 1, F(1)), (1, 3, F(1)), (0, 2, F(1)), (2, 3, F(1))))
        assert apsp(g).path(0, 3).vertices == (0, 1, 3)


class TestStretch:
    def test_identity(self):
        g = WeightedGraph(3, ((0, 1, F(1)), (1, 2, F(3, 2)), (0, 2, F(2))))
        assert stretch(g, g) == 1

    def test_ladder_missing_center_rung(self):
        g = gen_ladder(4, F(1, 4))
        keep = g.edge_keys - {edge_key(ladder_u(0), ladder_v(4, 0))}
        s = stretch(g, g.subgraph(keep))
        # detour u0 -> u_j -> v_j -> v0 costs eps/2 + 1 + eps/2 = 1 + eps
        assert s == F(5, 4)
        assert s == brute_stretch_over_pairs(g, g.subgraph(keep))

    def test_disconnecting_subgraph(self):
        g = WeightedGraph(3, ((0, 1, F(1)), (1, 2, F(1))))
        assert stretch(g, g.subgraph([(0, 1)])) is INF

    def test_rejects_non_subgraph(self):
        g = WeightedGraph(3, ((0, 1, F(1)),))
        with pytest.raises(ValueError):
            stretch(g, WeightedGraph(3, ((1, 2, F(1)),)))

    @settings(max_examples=40, deadline=None)
    @given(small_graphs(), st.randoms(use_true_random=False))
    def test_edge_form_equals_pairwise_form(self, g, rng):
        keys = sorted(g.edge_keys)
        keep = [k for k in keys if rng.random() < 0.7]
        h = g.subgraph(keep)
        assert stretch(g, h) == brute_stretch_over_pairs(g, h)


class TestNormalize:
    def test_triangle(self):
        g = WeightedGraph(3, ((0, 1, F(1)), (1, 2, F(1)), (0, 2, F(3))))
        assert normalize_edges(g).edge_keys == {(0, 1), (1, 2)}

    def test_ladder_unchanged(self):
        g = gen_ladder(3, F(1, 3))
        assert normalize_edges(g) == g

    def test_empty(self):
        g = WeightedGraph(0)
        assert normalize_edges(g) == g

    @settings(max_examples=40, deadline=None)
    @given(small_graphs())
    def test_idempotent_and_distance_preserving(self, g):
        g1 = normalize_edges(g)
        assert normalize_edges(g1) == g1
        d0, d1 = apsp(g), apsp(g1)
        for s in range(g.n):
            for t in range(g.n):
                assert d0.dist(s, t) == d1.dist(s, t)


class TestFloorPow2:
    @pytest.mark.parametrize("x,expect", [(1, 1), (5, 4), (16, 16), (17, 16), (1023, 512)])
    def test_values(self, x, expect):
        assert floor_pow2(x) == expect

    def test_rejects_non_positive(self):
        for bad in (0, -3, F(1, 2)):
            with pytest.raises(ValueError):
                floor_pow2(bad)


class TestScaleToIntegers:
    def test_examples(self):
        g = WeightedGraph(3, ((0, 1, F(1)), (1, 2, F(1, 4)), (0, 2, F(1, 4))))
        scaled, scale = scale_to_integers(g)
        assert scale == 4
        assert sorted(w for *_, w in scaled.edges) == [F(1), F(1), F(4)]

        g2 = WeightedGraph(3, ((0, 1, F(3, 2)), (1, 2, F(5, 6))))
        scaled2, scale2 = scale_to_integers(g2)
        assert scale2 == 6 and sorted(w for *_, w in scaled2.edges) == [F(5), F(9)]

        g3 = WeightedGraph(2, ((0, 1, F(7)),))
        assert scale_to_integers(g3) == (g3, 1)

    @settings(max_examples=30, deadline=None)
    @given(small_graphs(), st.randoms(use_true_random=False))
    def test_preserves_stretch_exactly(self, g, rng):
        keep = [k for k in sorted(g.edge_keys) if rng.random() < 0.7]
        h = g.subgraph(keep)
        scaled, _ = scale_to_integers(g)
        assert stretch(scaled, scaled.subgraph(keep)) == stretch(g, h)


class TestWalks:
    def test_concat_identity(self):
        g = WeightedGraph(2, ((0, 1, F(2)),))
        single = Walk((0,), ())
        edge = Walk.from_vertices(g, (0, 1))
        assert concat(single, edge) == edge

    def test_concat_weights_add(self):
        g = WeightedGraph(3, ((0, 1, F(1)), (1, 2, F(5, 2))))
        a = Walk.from_vertices(g, (0, 1))
        b = Walk.from_vertices(g, (1, 2))
        joined = concat(a, b)
        assert joined.vertices == (0, 1, 2)
        assert joined.weight == a.weight + b.weight == F(7, 2)

    def test_concat_endpoint_mismatch(self):
        g = WeightedGraph(4, ((0, 1, F(1)), (2, 3, F(1))))
        with pytest.raises(ValueError):
            concat(Walk.from_vertices(g, (0, 1)), Walk.from_vertices(g, (2, 3)))

    def test_walk_requires_host_edges(self):
        g = WeightedGraph(3, ((0, 1, F(1)),))
        with pytest.raises(ValueError):
            Walk.from_vertices(g, (0, 2))

    def test_single_vertex_weight_zero(self):
        assert Walk((4,), ()).weight == 0

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.integers(0, 3), min_size=1, max_size=6))
    def test_concat_additive_on_random_walks(self, mids):
        g = WeightedGraph(4, tuple((u, v, F(u + v + 1, 2)) for u in range(4) for v in range(u + 1, 4)))
        verts = [0] + [m for prev, m in zip([0] + mids, mids) if m != prev]
        walk = Walk.from_vertices(g, verts)
        for cut in range(len(verts)):
            left = Walk.from_vertices(g, verts[: cut + 1])
            right = Walk.from_vertices(g, verts[cut:])
            assert concat(left, right) == walk
            assert left.weight + right.weight == walk.weight


class TestEdgeMultiset:
    def test_union_sums_multiplicities(self):
        a = EdgeMultiset({(0, 1): 2})
        b = EdgeMultiset({(0, 1): 1, (1, 2): 3})
        u = a.union(b)
        assert u.counts == {(0, 1): 3, (1, 2): 3}

    def test_weight(self):
        g = WeightedGraph(3, ((0, 1, F(2)), (1, 2, F(1, 2))))
        ms = EdgeMultiset({(0, 1): 2, (1, 2): 1})
        assert ms.weight(g) == F(9, 2)
        assert ms.support == {(0, 1), (1, 2)}


class TestGraphIO:
    def test_round_trip_bit_exact(self):
        g = gen_ladder(3, F(1, 7))
        text = format_graph(g)
        assert parse_graph(text) == g
        assert format_graph(parse_graph(text)) == text

    def test_comments_and_errors(self):
        text = "# hello\n2 1 planar:1\n0 1 3/2\n"
        g = parse_graph(text)
        assert g.declared_planar and g.weights[(0, 1)] == F(3, 2)
        with pytest.raises(ValueError):
            parse_graph("2 2 planar:0\n0 1 1\n")
        with pytest.raises(ValueError):
            parse_graph("")

    def test_connectivity_helper(self):
        assert is_connected(WeightedGraph(1))
        assert not is_connected(WeightedGraph(2))
        assert is_connected(WeightedGraph(2, ((0, 1, F(1)),)))
