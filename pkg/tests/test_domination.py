import itertools
import json

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from _oracle import neighbours
from tridom.constructions import PatternSpec, construct, k2_parallel, k3_qpds, perfect_code, spds
from tridom.domination import (
    boundary_hole_length,
    check_partition,
    classify,
    components,
    dominator_counts,
    is_separated,
    min_component_distance,
    min_distance_graph,
    verify,
    z3_triangles,
)
from tridom.errors import EmptySet, NotAHole, NotAPerfectCode, SingletonSet
from tridom.lattice import VertexSet, build_torus


@st.composite
def torus_sets(draw, lo=3, hi=7):
    m = draw(st.integers(lo, hi))
    n = draw(st.integers(lo, hi))
    ids = draw(st.sets(st.integers(0, m * n - 1), max_size=m * n))
    return build_torus((m, n)), VertexSet(m, n, ids)


def all_pairs_component_distance(g, s):
    comps = components(g, s)
    if len(comps) < 2:
        return float("inf")
    dist = dict(nx.all_pairs_shortest_path_length(g.to_networkx()))
    return min(
        dist[a][b]
        for c1, c2 in itertools.combinations(comps, 2)
        for a in c1.vertices
        for b in c2.vertices
    )


@given(torus_sets())
def test_dominator_counts_match_naive(gs):
    g, s = gs
    nb = neighbours(g.m, g.n)
    counts = dominator_counts(g, s)
    assert set(counts) == set(range(g.order)) - s.ids
    for v, c in counts.items():
        assert c == sum(1 for w in nb[v] if w in s.ids)


@given(torus_sets())
def test_flags_are_consistent(gs):
    g, s = gs
    r = classify(g, s)
    if r.is_spds:
        assert r.is_qpds
    if r.is_perfect_code:
        assert r.is_pds and r.is_qpds
    if r.is_proper and r.is_pds:
        assert not r.is_spds
    assert r.is_proper == (len(s) != g.order)
    assert sum(r.shape_census.values()) == len(r.components)


@given(torus_sets(), st.integers(0, 6), st.integers(0, 6))
def test_classify_is_translation_invariant(gs, a, b):
    g, s = gs
    r1 = classify(g, s)
    r2 = classify(g, s.translate(a, b))
    assert r1.flags() == r2.flags()
    assert r1.delta == r2.delta
    assert r1.shape_census == r2.shape_census


@given(torus_sets(hi=6))
def test_component_distance_matches_all_pairs(gs):
    g, s = gs
    if not s.ids:
        with pytest.raises(EmptySet):
            min_component_distance(g, s)
        return
    assert min_component_distance(g, s) == all_pairs_component_distance(g, s)


def test_component_shapes():
    g = build_torus((6, 6))
    path = VertexSet.from_coords(g, [(0, 0), (1, 0), (2, 0)])
    assert [c.label() for c in components(g, path)] == ["PATH(3)"]
    tri = VertexSet.from_coords(g, [(0, 0), (1, 0), (0, 1)])
    assert components(g, tri)[0].shape == "K3"
    ring = VertexSet.from_coords(g, [(i, 0) for i in range(6)])
    assert components(g, ring)[0].label() == "CYCLE(6)"
    star = VertexSet.from_coords(g, [(0, 0), (1, 0), (0, 1), (-1, 0)])
    assert components(g, star)[0].shape == "OTHER"


def test_wrapped_triangle_is_a_cycle():
    g = build_torus((3, 3))
    s = VertexSet.from_coords(g, [(0, 0), (1, 0), (2, 0)])
    assert components(g, s)[0].label() == "CYCLE(3)"


@pytest.mark.parametrize("k, l", [(1, 1), (1, 2), (2, 2)])
def test_perfect_code_density_and_holes(k, l):
    g = build_torus((7 * k, 7 * l))
    s = perfect_code(g.spec)
    r = classify(g, s)
    assert r.is_perfect_code and len(s) * 7 == g.order
    assert {boundary_hole_length(g, s, c) for c in r.components} == {6}


@pytest.mark.parametrize(
    "make, torus, hole",
    [
        (lambda t: perfect_code(t), (14, 7), 6),
        (lambda t: k3_qpds(t), (12, 6), 9),
        (lambda t: k2_parallel(t, 2), (20, 10), 8),
        (lambda t: construct(PatternSpec("k2-t-linear", t=2), t), (50, 5), 8),
        (lambda t: construct(PatternSpec("k2-diagonal", word="12"), t), (20, 5), 8),
    ],
)
def test_hole_length_law(make, torus, hole):
    g = build_torus(torus)
    s = make(g.spec)
    assert {boundary_hole_length(g, s, c) for c in components(g, s)} == {hole}


def test_k3_component_law():
    for torus in [(6, 6), (6, 12), (12, 12), (18, 6)]:
        g = build_torus(torus)
        assert len(components(g, k3_qpds(g.spec))) * 12 == g.order


def test_hole_lengths_of_larger_shapes():
    g = build_torus((6, 6))
    for pts, length in [
        ([(0, 0), (1, 0), (0, 1), (-1, 0)], 11),
        ([(0, 0), (1, 0), (2, 0), (2, 1)], 12),
        ([(0, 0), (1, 0), (0, 1), (1, 1)], 10),
    ]:
        s = VertexSet.from_coords(g, pts)
        assert boundary_hole_length(g, s, components(g, s)[0]) == length


def test_hole_errors_on_short_tori():
    g = build_torus((3, 3))
    s = VertexSet(3, 3, [0])
    with pytest.raises(NotAHole):
        boundary_hole_length(g, s, components(g, s)[0])


def test_separation():
    g = build_torus((7, 7))
    assert is_separated(g, perfect_code(g.spec))
    # two members two steps apart share an outside neighbour
    assert not is_separated(g, VertexSet.from_coords(g, [(0, 0), (2, 0)]))
    # an outside vertex seeing both ends of an edge is fine
    assert is_separated(g, VertexSet.from_coords(g, [(0, 0), (1, 0)]))


def test_z3_triangles_by_definition():
    g = build_torus((7, 7))
    s = perfect_code(g.spec)
    hole_edges = set()
    for x in s.ids:
        for a, b in itertools.combinations(g.neighbors[x], 2):
            if g.adjacent(a, b):
                hole_edges.add(frozenset((a, b)))
    expected = sorted(
        tuple(sorted(f))
        for f in {frozenset(f) for f in g.faces()}
        if not f & s.ids and not any(frozenset(e) in hole_edges for e in itertools.combinations(f, 2))
    )
    got = z3_triangles(g, s)
    assert got == expected
    assert len(got) == 14
    for tri in got:
        seen = [w for v in tri for w in g.neighbors[v] if w in s.ids]
        assert len(seen) == 3 and len(set(seen)) == 3
    with pytest.raises(NotAPerfectCode):
        z3_triangles(g, VertexSet(7, 7, [0, 1]))


def test_min_distance_graph_of_perfect_code():
    g = build_torus((7, 7))
    md = min_distance_graph(g, perfect_code(g.spec))
    assert md.graph["distance"] == 3
    assert all(d == 6 for _, d in md.degree())
    with pytest.raises(SingletonSet):
        min_distance_graph(g, VertexSet(7, 7, [0]))


def test_check_partition():
    g = build_torus((4, 4))
    parts = [spds(g.spec, "isolated", offset=o) for o in [(0, 0), (1, 0), (0, 1), (1, 1)]]
    assert check_partition(g, parts, "spds")
    assert not check_partition(g, parts[:3], "spds")
    assert not check_partition(g, parts + parts[:1], "spds")
    with pytest.raises(ValueError):
        check_partition(g, parts, "bogus")


def test_full_set_is_improper():
    r = classify(build_torus((3, 3)), VertexSet.full(3, 3))
    assert not r.is_proper
    assert r.is_pds and r.is_spds  # vacuous on an empty complement


def test_report_json_is_stable():
    r = verify(7, 7, [(0, 0), (3, -1), (1, 2), (4, 1), (2, 4), (5, 3), (6, 5)])
    d = json.loads(r.to_json())
    assert d["flags"]["is_perfect_code"] is True
    assert d["delta"] == 3
    assert d["counts"][0] is None and d["counts"][1] == 1
    assert d["shape_census"] == {"K1": 7}
    assert r.to_json() == verify(7, 7, [(6, 5), (0, 0), (3, 6), (1, 2), (4, 1), (2, 4), (5, 3)]).to_json()


def test_empty_set_report():
    r = classify(build_torus((3, 4)), VertexSet(3, 4))
    assert r.delta == float("inf") and r.to_dict()["delta"] is None
    assert not r.is_perfect_code and r.h_qpds_nu is None
