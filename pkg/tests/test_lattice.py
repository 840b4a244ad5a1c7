import itertools
import random

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from tridom.errors import IsometryNotApplicable, SpecTooSmall
from tridom.lattice import (
    OFFSETS,
    Coord,
    Isometry,
    TorusSpec,
    VertexSet,
    adjacent_inf,
    apply_isometry,
    build_torus,
    canonical_form,
    embed,
    hex_norm,
    neighbors_inf,
    point_group,
    project,
)

coords = st.tuples(st.integers(-50, 50), st.integers(-50, 50))
sides = st.integers(3, 10)


def reference_torus(m, n):
    """C_m x C_n plus the anti-diagonal of every elementary 4-cycle."""
    g = nx.Graph()
    for i in range(m):
        for j in range(n):
            v = i * n + j
            g.add_edge(v, ((i + 1) % m) * n + j)
            g.add_edge(v, i * n + (j + 1) % n)
            g.add_edge(i * n + (j + 1) % n, ((i + 1) % m) * n + j)
    return g


def test_coord_third_coordinate():
    c = Coord(2, -5)
    assert c.x3 == 3
    assert sum(c.triple()) == 0
    assert c + (1, 1) == Coord(3, -4)
    assert -c == Coord(-2, 5)
    assert c.scale(3) == Coord(6, -15)


def test_offsets_are_unit_steps():
    assert len(set(OFFSETS)) == 6
    assert all(hex_norm(o) == 1 for o in OFFSETS)
    # counter-clockwise: each step is the previous one turned by 60 degrees
    rot = Isometry.rotation60()
    assert [rot(o) for o in OFFSETS] == list(OFFSETS[1:] + OFFSETS[:1])


@given(coords, coords)
def test_adjacency_is_symmetric(a, b):
    assert (b in neighbors_inf(a)) == (a in neighbors_inf(b))
    assert adjacent_inf(a, b) == (hex_norm((b[0] - a[0], b[1] - a[1])) == 1)


def test_embedding_has_unit_edges():
    for o in OFFSETS:
        x, y = embed(o)
        assert abs(x * x + y * y - 1) < 1e-12


@pytest.mark.parametrize("m, n", [(2, 5), (5, 2), (0, 0), (-3, 4)])
def test_small_torus_rejected(m, n):
    with pytest.raises(SpecTooSmall):
        TorusSpec(m, n)
    with pytest.raises(SpecTooSmall):
        build_torus((m, n))


@pytest.mark.parametrize("m, n", list(itertools.product(range(3, 8), repeat=2)))
def test_torus_matches_reference(m, n):
    g = build_torus((m, n))
    ref = reference_torus(m, n)
    assert set(g.edges()) == {tuple(sorted(e)) for e in ref.edges()}
    assert all(len(nb) == 6 for nb in g.neighbors)
    assert g.num_edges() == 3 * m * n
    assert nx.is_isomorphic(g.to_networkx(), ref)


@pytest.mark.parametrize("m, n", [(3, 3), (3, 4), (4, 7), (6, 6)])
def test_faces(m, n):
    g = build_torus((m, n))
    faces = list(g.faces())
    assert len(faces) == 2 * m * n
    assert len({frozenset(f) for f in faces}) == 2 * m * n
    for a, b, c in faces:
        assert g.adjacent(a, b) and g.adjacent(b, c) and g.adjacent(a, c)


@given(sides, sides, st.data())
def test_vertex_transitive(m, n, data):
    g = build_torus((m, n))
    a = data.draw(st.integers(0, m - 1))
    b = data.draw(st.integers(0, n - 1))
    table = g.translation_table(a, b)
    assert sorted(table) == list(range(m * n))
    for u, w in g.edges():
        assert g.adjacent(table[u], table[w])


@given(coords, sides, sides)
def test_projection_is_periodic(c, m, n):
    spec = TorusSpec(m, n)
    assert project(c, spec) == project((c[0] + m, c[1]), spec) == project((c[0], c[1] - n), spec)


def test_rotation_has_order_six():
    rnd = random.Random(20240611)
    six = Isometry()
    for _ in range(6):
        six = six.then(Isometry.rotation60())
    for _ in range(1000):
        c = (rnd.randint(-10**6, 10**6), rnd.randint(-10**6, 10**6))
        assert six(c) == Coord(*c)
        assert hex_norm(Isometry.rotation60()(c)) == hex_norm(c)


def test_point_group():
    group = point_group()
    assert len({g.matrix for g in group}) == 12
    for iso in group:
        for o in OFFSETS:
            assert iso(o) in OFFSETS


def test_reflection_keeps_x1_and_swaps_the_others():
    r = Isometry.reflect_x1()
    c = Coord(4, -9)
    assert r(c).triple() == (c.x1, c.x3, c.x2)
    assert r((2, -1)) == Coord(2, -1)
    assert r(r((3, -7))) == Coord(3, -7)


def test_point_maps_need_square_torus():
    g = build_torus((4, 6))
    s = VertexSet(4, 6, [0])
    with pytest.raises(IsometryNotApplicable):
        apply_isometry(Isometry.rotation60(), s, g)
    with pytest.raises(IsometryNotApplicable):
        canonical_form(s, g, "full")
    assert apply_isometry(Isometry.translation(1, 2), s, g) == s.translate(1, 2)


def test_descends_to():
    rot = Isometry.rotation60()
    assert rot.descends_to(6, 6)
    assert not rot.descends_to(4, 6)
    assert Isometry.translation(1, 1).descends_to(4, 6)


def test_vertex_set_basics():
    s = VertexSet.from_coords(TorusSpec(4, 5), [(0, 0), (5, 7), (-1, -1)])
    assert s.sorted() == (0, 7, 19)
    assert VertexSet.from_mask(4, 5, s.mask) == s
    assert s.bits().count(True) == 3
    assert s.coords()[1] == Coord(1, 2)
    assert 7 in s and 8 not in s
    assert len(s | VertexSet(4, 5, [1])) == 4
    with pytest.raises(ValueError):
        VertexSet(3, 3, [9])


@given(st.integers(3, 6), st.sets(st.integers(0, 35), max_size=8), st.data())
def test_canonical_form_is_orbit_invariant(k, ids, data):
    g = build_torus((k, k))
    s = VertexSet(k, k, {v % (k * k) for v in ids})
    iso = data.draw(st.sampled_from(point_group()))
    shift = Isometry.translation(data.draw(st.integers(0, k - 1)), data.draw(st.integers(0, k - 1)))
    image = apply_isometry(iso.then(shift), s, g)
    assert canonical_form(image, g, "full") == canonical_form(s, g, "full")
    moved = s.translate(data.draw(st.integers(0, k - 1)), 1)
    assert canonical_form(moved, g) == canonical_form(s, g)


def test_canonical_form_of_empty_set():
    assert len(canonical_form(VertexSet(3, 3))) == 0
    with pytest.raises(ValueError):
        canonical_form(VertexSet(3, 3, [1]), group="affine")
