import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from graphsample.structures import (
    UNREACHABLE,
    EdgeSeqGraph,
    MarkedCompleteGraph,
    Partition,
    VertexGraph,
    ball,
    canonical_rooted,
    count_edge_patterns,
    degrees,
    is_ordered,
    key_for,
    multiplicity_counts,
    prefix_distance,
    relabel_r,
    relabel_rprime,
    restrict_edges,
    restrict_rooted,
    restrict_vertices,
    shortest_path_marks,
)
from graphsample.models import cycle_vertex, star_vertex, y4


# -- construction invariants -------------------------------------------------

def test_vertex_graph_rejects_bad_edges():
    with pytest.raises(ValueError):
        VertexGraph(3, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        VertexGraph(3, frozenset({(2, 4)}))


def test_vertex_graph_normalizes_edge_order():
    g = VertexGraph(3, frozenset({(3, 1)}))
    assert g.edges == frozenset({(1, 3)})


def test_edge_seq_rejects_self_loops_and_unordered_pairs():
    with pytest.raises(ValueError):
        EdgeSeqGraph(((2, 2),))
    with pytest.raises(ValueError):
        EdgeSeqGraph(((3, 2),))


def test_edge_seq_canonical_flag():
    assert EdgeSeqGraph(((1, 2), (1, 3))).canonical
    assert not EdgeSeqGraph(((1, 2), (4, 5))).canonical


def test_partition_requires_ordered_labels():
    Partition((1, 2, 1, 3))
    with pytest.raises(ValueError):
        Partition((2, 1))


# -- restriction maps ---------------------------------------------------------

def test_restrict_vertices_y4_examples():
    g = y4()
    assert restrict_vertices(g, 3) == VertexGraph(3, frozenset({(1, 2), (2, 3)}))
    assert restrict_vertices(g, 1) == VertexGraph(1, frozenset())
    path = VertexGraph(3, frozenset({(1, 2), (2, 3)}))
    assert restrict_vertices(path, 3) == path
    with pytest.raises(ValueError):
        restrict_vertices(g, 0)
    with pytest.raises(ValueError):
        restrict_vertices(g, 5)


def test_restrict_edges_examples():
    g = EdgeSeqGraph(((1, 2), (1, 3), (4, 5)))
    assert restrict_edges(g, 2).edges == ((1, 2), (1, 3))
    assert restrict_edges(g, 0).edges == ()
    h = EdgeSeqGraph(((1, 2), (3, 4), (1, 5), (6, 7)))
    assert restrict_edges(restrict_edges(h, 3), 1) == restrict_edges(h, 1)
    with pytest.raises(ValueError):
        restrict_edges(g, 4)


@st.composite
def small_graphs(draw):
    n = draw(st.integers(min_value=1, max_value=6))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    edges = draw(st.sets(st.sampled_from(pairs))) if pairs else set()
    return VertexGraph(n, frozenset(edges))


@given(small_graphs(), st.data())
def test_restriction_functorial(g, data):
    m = data.draw(st.integers(min_value=1, max_value=g.n))
    k = data.draw(st.integers(min_value=1, max_value=m))
    assert restrict_vertices(restrict_vertices(g, m), k) == restrict_vertices(g, k)


# -- balls ---------------------------------------------------------------------

def test_ball_cycle_example():
    rg = ball(cycle_vertex(6), 1, 1)
    assert rg.vertices == frozenset({6, 1, 2})
    assert rg.edges == frozenset({(1, 2), (1, 6)})
    assert rg.root == 1


def test_ball_radius_zero_and_star_leaf():
    g = star_vertex(5)
    rg = ball(g, 3, 0)
    assert rg.vertices == frozenset({3}) and rg.edges == frozenset()
    leaf = ball(g, 2, 1)
    assert leaf.vertices == frozenset({1, 2})
    assert leaf.edges == frozenset({(1, 2)})
    assert leaf.root == 2


def test_ball_bad_center():
    with pytest.raises(ValueError):
        ball(y4(), 9, 1)


def test_restrict_rooted_shrinks_radius():
    rg = ball(cycle_vertex(8), 1, 2)
    inner = restrict_rooted(rg, 1)
    assert inner == ball(cycle_vertex(8), 1, 1)


def test_rooted_graph_invariants():
    from graphsample.structures import RootedGraph

    with pytest.raises(ValueError):  # root outside vertex set
        RootedGraph(frozenset({1, 2}), frozenset({(1, 2)}), 3)
    with pytest.raises(ValueError):  # disconnected
        RootedGraph(frozenset({1, 2, 3}), frozenset({(1, 2)}), 1)


# -- relabeling maps -----------------------------------------------------------

def test_relabel_r_examples():
    assert relabel_r((5, 9, 5, 2)) == (1, 2, 1, 3)
    assert relabel_r((1, 2, 3)) == (1, 2, 3)
    assert relabel_r(()) == ()


@given(st.lists(st.integers(min_value=1, max_value=8), max_size=12))
def test_relabel_r_idempotent_and_pattern_preserving(xs):
    out = relabel_r(xs)
    assert relabel_r(out) == out
    assert is_ordered(out)
    for a in range(len(xs)):
        for b in range(len(xs)):
            assert (xs[a] == xs[b]) == (out[a] == out[b])


def test_relabel_rprime_examples():
    assert relabel_rprime(((7, 3), (3, 9))).edges == ((1, 2), (2, 3))
    assert relabel_rprime(((2, 1),)).edges == ((1, 2),)
    assert relabel_rprime(((1, 2), (3, 4))).edges == ((1, 2), (3, 4))
    with pytest.raises(ValueError):
        relabel_rprime(((2, 2),))


@given(st.lists(st.tuples(st.integers(1, 6), st.integers(1, 6)).filter(
    lambda p: p[0] != p[1]), max_size=8))
def test_relabel_rprime_canonical_and_idempotent(pairs):
    out = relabel_rprime(tuple(pairs))
    assert out.canonical
    assert relabel_rprime(out.edges) == out


def test_is_ordered_examples():
    assert is_ordered((1, 2, 1, 3))
    assert not is_ordered((2, 1))
    assert is_ordered(())


# -- prefix metric ---------------------------------------------------------------

def test_prefix_distance_examples():
    g = y4()
    assert prefix_distance(g, g, 4) == 2 ** -4
    seq = tuple(range(1, 12))
    assert prefix_distance(seq, seq, 10) == 2 ** -10
    g2 = VertexGraph(4, frozenset({(1, 2), (2, 3), (2, 4), (3, 4)}))
    assert prefix_distance(g, g2, 4) == 2 ** -3
    h1 = VertexGraph(2, frozenset({(1, 2)}))
    h2 = VertexGraph(2, frozenset())
    assert prefix_distance(h1, h2, 2) == 2 ** -1
    with pytest.raises(TypeError):
        prefix_distance(g, (1, 2), 2)
    with pytest.raises(ValueError):
        prefix_distance(h1, h2, 3)


@given(st.tuples(small_graphs(), small_graphs(), small_graphs()))
def test_prefix_distance_ultrametric(triple):
    x, z, w = triple
    depth = min(x.n, z.n, w.n)
    dxz = prefix_distance(x, z, depth)
    dxw = prefix_distance(x, w, depth)
    dwz = prefix_distance(w, z, depth)
    assert dxz <= max(dxw, dwz)


# -- counting -------------------------------------------------------------------

def test_count_edge_patterns_examples():
    star = EdgeSeqGraph(((1, 2), (1, 3), (1, 4)))
    assert count_edge_patterns(star, EdgeSeqGraph(((1, 2), (1, 3)))) == 6
    assert count_edge_patterns(star, EdgeSeqGraph(((1, 2), (3, 4)))) == 0
    two = EdgeSeqGraph(((1, 2), (3, 4)))
    assert count_edge_patterns(two, EdgeSeqGraph(((1, 2), (3, 4)))) == 2
    with pytest.raises(ValueError):
        count_edge_patterns(star, EdgeSeqGraph(((2, 3), (1, 2))))


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)).filter(
    lambda p: p[0] != p[1]).map(lambda p: (min(p), max(p))),
    min_size=2, max_size=6),
    st.integers(min_value=1, max_value=2))
@settings(max_examples=40)
def test_count_edge_patterns_matches_naive(pairs, k):
    g = EdgeSeqGraph(tuple(pairs))
    # naive oracle written inline: tally relabelings of all ordered picks
    seen = {}
    for sel in itertools.permutations(range(len(g)), k):
        pat = relabel_rprime(tuple(g.edges[i] for i in sel))
        seen[pat.edges] = seen.get(pat.edges, 0) + 1
    for edges, count in seen.items():
        assert count_edge_patterns(g, EdgeSeqGraph(edges)) == count


def test_degrees_and_multiplicity_examples():
    assert degrees(y4()) == (1, 3, 1, 1)
    assert degrees(VertexGraph(3, frozenset())) == (0, 0, 0)
    g = EdgeSeqGraph(((1, 2), (1, 2), (1, 3)))
    assert multiplicity_counts(g) == {(1, 2): 2, (1, 3): 1}


# -- shortest paths --------------------------------------------------------------

def test_shortest_path_marks_examples():
    c10 = cycle_vertex(10)
    m = shortest_path_marks(c10, (1, 6))
    assert m.mark(1, 2) == 5
    m2 = shortest_path_marks(y4(), (1, 2))
    assert m2.mark(1, 2) == 1
    iso = VertexGraph(4, frozenset({(1, 2)}))
    m3 = shortest_path_marks(iso, (3, 4))
    assert m3.mark(1, 2) == UNREACHABLE
    with pytest.raises(ValueError):
        shortest_path_marks(c10, (1, 1))


def test_marked_complete_graph_requires_full_cover():
    with pytest.raises(ValueError):
        MarkedCompleteGraph(3, (((1, 2), 1),))
    with pytest.raises(ValueError):
        MarkedCompleteGraph(2, (((1, 2), 0),))


# -- canonical keys ---------------------------------------------------------------

def test_key_equality_iff_structural_equality():
    a = VertexGraph(3, frozenset({(1, 2)}))
    b = VertexGraph(3, frozenset({(1, 2)}))
    c = VertexGraph(3, frozenset({(2, 3)}))
    assert key_for(a) == key_for(b)
    assert key_for(a) != key_for(c)
    # same content, different kinds must not collide
    assert key_for((1, 2)) != key_for(Partition((1, 2)))


@given(st.lists(st.integers(1, 5), min_size=0, max_size=8),
       st.lists(st.integers(1, 5), min_size=0, max_size=8))
def test_key_injective_on_sequences(xs, ys):
    assert (key_for(tuple(xs)) == key_for(tuple(ys))) == (tuple(xs) == tuple(ys))


def test_canonical_rooted_cycle_balls_agree():
    c = cycle_vertex(50)
    keys = {key_for(ball(c, v, 2)) for v in range(1, 51)}
    assert len(keys) == 1


def test_canonical_rooted_star_centers_differ():
    s = star_vertex(10)
    hub = key_for(ball(s, 1, 1))
    leaf = key_for(ball(s, 2, 1))
    assert hub != leaf
    assert len({key_for(ball(s, v, 1)) for v in range(2, 11)}) == 1


def test_canonical_rooted_invariant_under_relabeling():
    # path rooted at middle, two labelings
    a = ball(VertexGraph(5, frozenset({(1, 2), (2, 3)})), 2, 1)
    b = ball(VertexGraph(5, frozenset({(3, 4), (4, 5)})), 4, 1)
    assert canonical_rooted(a) == canonical_rooted(b)
    assert key_for(a) == key_for(b)
