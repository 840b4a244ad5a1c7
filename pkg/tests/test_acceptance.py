"""Acceptance checks, one group per numbered criterion.

Every comparison is exact.  Wall-clock limits are asserted where a
criterion states one.  Run under pytest for the per-criterion summary, or
directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import math
import time

import pytest

from _oracle import PREDICATES, brute_force_all, small_tori
from tridom.analysis import (
    K2Family,
    TriplePeriod,
    expand_word,
    gamma_graph,
    hexagon_types,
    mixed_triples,
    period_dimensions,
    triple_period,
    classify_k2,
)
from tridom.constructions import (
    PatternSpec,
    construct,
    family_pattern,
    k2_family,
    k2_parallel,
    k3_qpds,
    minimal_torus,
    motif_solve,
    perfect_code,
    spds,
)
from tridom.domination import boundary_hole_length, check_partition, classify
from tridom.lattice import OFFSETS, ORIGIN, build_torus
from tridom.search import (
    K_QPDS,
    PERFECT_CODE,
    SPDS_CYCLES,
    Predicate,
    SearchProblem,
    enumerate_solutions,
    existence_table,
)

TITLES = {
    1: "perfect codes exist exactly on 7|m, 7|n; 14 on (7,7)",
    2: "seven translates partition the (7,7) torus",
    3: "component distance and hole lengths",
    4: "cycle SPDS iff 3|m or 3|n, with line census",
    5: "K3 patterns only on (6,6) in 3..6; mn/12 components",
    6: "parallel K2 on (10,10) and its 10-coset partition",
    7: "surrounded motif on (6,5); t-linear tori",
    8: "triple periods",
    9: "diagonal family torus sizes",
    10: "pruned search equals brute force for mn <= 25",
    11: "classification round trip",
}


def _timed(limit: float):
    class _Clock:
        def __enter__(self):
            self.t0 = time.perf_counter()
            return self

        def __exit__(self, *exc):
            self.elapsed = time.perf_counter() - self.t0
            if exc[0] is None:
                assert self.elapsed < limit, f"took {self.elapsed:.1f}s, limit {limit}s"

    return _Clock()


def _lcm_torus(tori):
    m = n = 1
    for a, b in tori:
        m, n = math.lcm(m, a), math.lcm(n, b)
    return (m, n)


# -- 1 ----------------------------------------------------------------------

SIDES = list(range(3, 10)) + [14]


@pytest.mark.criterion(1)
def test_perfect_code_existence_grid():
    with _timed(60):
        table = existence_table(PERFECT_CODE, SIDES, SIDES)
    assert all(v.found is not None for v in table.cells.values())
    assert table.yes_cells() == [(7, 7), (7, 14), (14, 7), (14, 14)]


@pytest.mark.criterion(1)
def test_perfect_code_count_on_7x7():
    res = enumerate_solutions(SearchProblem(build_torus((7, 7)), PERFECT_CODE))
    assert res.exhausted
    assert res.total_count == 14


# -- 2 ----------------------------------------------------------------------


@pytest.mark.criterion(2)
def test_seven_translates_partition():
    g = build_torus((7, 7))
    with _timed(1):
        parts = [perfect_code((7, 7), offset=o) for o in (ORIGIN,) + OFFSETS]
        assert check_partition(g, parts, "perfect_code")
    assert len({p for p in parts}) == 7


# -- 3 ----------------------------------------------------------------------


def _holes(g, s):
    rep = classify(g, s)
    return rep.delta, {boundary_hole_length(g, s, c) for c in rep.components}


@pytest.mark.criterion(3)
def test_perfect_code_delta_and_holes():
    g = build_torus((7, 7))
    assert _holes(g, perfect_code(g.spec)) == (3, {6})


@pytest.mark.criterion(3)
def test_isolated_spds_delta():
    g = build_torus((4, 4))
    rep = classify(g, spds(g.spec, "isolated"))
    assert rep.is_spds and rep.delta == 2


@pytest.mark.criterion(3)
def test_k3_delta_and_holes():
    g = build_torus((6, 6))
    assert _holes(g, k3_qpds(g.spec)) == (3, {9})


@pytest.mark.criterion(3)
@pytest.mark.parametrize("hex_type", [1, 2, 3])
def test_parallel_k2_delta_and_holes(hex_type):
    g = build_torus((10, 10))
    assert _holes(g, k2_parallel(g.spec, hex_type)) == (3, {8})


# -- 4 ----------------------------------------------------------------------


@pytest.mark.criterion(4)
def test_cycle_spds_existence_and_census():
    sides = [3, 4, 5, 6]
    with _timed(120):
        table = existence_table(SPDS_CYCLES, sides, sides)
        for m, n in itertools.product(sides, sides):
            assert table.cells[(m, n)].found == (m % 3 == 0 or n % 3 == 0), (m, n)
        for m, n in table.yes_cells():
            g = build_torus((m, n))
            res = enumerate_solutions(SearchProblem(g, SPDS_CYCLES))
            assert res.exhausted and res.solutions
            for s in res.solutions:
                comps = classify(g, s).components
                lengths = {c.size for c in comps}
                rows = n % 3 == 0 and len(comps) == n // 3 and lengths == {m}
                cols = m % 3 == 0 and len(comps) == m // 3 and lengths == {n}
                assert rows or cols, (m, n, s)


# -- 5 ----------------------------------------------------------------------


@pytest.mark.criterion(5)
def test_k3_existence_grid():
    sides = [3, 4, 5, 6]
    with _timed(300):
        table = existence_table(K_QPDS(3), sides, sides)
    assert table.yes_cells() == [(6, 6)]
    assert all(v.found is not None for v in table.cells.values())


@pytest.mark.criterion(5)
@pytest.mark.parametrize("torus", [(6, 6), (6, 12)])
def test_k3_component_count(torus):
    g = build_torus(torus)
    rep = classify(g, k3_qpds(g.spec))
    assert rep.h_qpds_nu == 3
    assert rep.shape_census == {"K3": torus[0] * torus[1] // 12}


@pytest.mark.criterion(5)
def test_every_k3_set_on_6x6_has_three_components():
    g = build_torus((6, 6))
    res = enumerate_solutions(SearchProblem(g, K_QPDS(3)))
    assert res.exhausted and res.solutions
    assert {len(classify(g, s).components) for s in res.solutions} == {3}


# -- 6 ----------------------------------------------------------------------


@pytest.mark.criterion(6)
@pytest.mark.parametrize("hex_type", [1, 2, 3])
def test_parallel_k2_on_10x10(hex_type):
    g = build_torus((10, 10))
    with _timed(1):
        s = k2_parallel(g.spec, hex_type)
        rep = classify(g, s)
    assert rep.h_qpds_nu == 2
    assert len(rep.components) == 10
    assert len({h.hex_type for h in hexagon_types(g, s)}) == 1


@pytest.mark.criterion(6)
@pytest.mark.parametrize("hex_type", [1, 2, 3])
def test_parallel_k2_ten_coset_partition(hex_type):
    g = build_torus((10, 10))
    lat = family_pattern(PatternSpec("k2-parallel", hex_type=hex_type)).lattice
    a, _, d = lat.hnf()
    with _timed(1):
        parts = [k2_parallel(g.spec, hex_type, (i, j)) for i in range(a) for j in range(d)]
        ok = check_partition(g, parts, "k2_qpds")
    assert len(parts) == 10
    covered = sum(len(p) for p in parts)
    assert ok, f"10 translates hold {covered} vertices on a torus of {g.order}"


# -- 7 ----------------------------------------------------------------------


@pytest.mark.criterion(7)
def test_surrounded_motif_on_6x5():
    g = build_torus((6, 5))
    with _timed(300):
        s = motif_solve(PatternSpec("k2-t-linear", t=1), (6, 5))
    assert classify(g, s).h_qpds_nu == 2
    types = [h.axis_type for h in hexagon_types(g, s)]
    assert (types.count(2), types.count(1)) == (1, 2)


@pytest.mark.criterion(7)
@pytest.mark.parametrize("t, torus", [(1, (30, 5)), (2, (50, 5))])
def test_t_linear_tori(t, torus):
    g = build_torus(torus)
    s = construct(PatternSpec("k2-t-linear", t=t), torus)
    assert classify(g, s).h_qpds_nu == 2
    assert classify_k2(g, s) == K2Family("t-linear", (2, 1), t=t)


# -- 8 ----------------------------------------------------------------------

TRIPLE_TABLE = {
    (2, 1): "((1^32^2),(1^2212),(121^22))",
    (1, 3): "((313^21),(3^2131),(3^31^2))",
    (3, 2): "((2^2323),(2^33^2),(2^2323))",
    (2, 3): "((3^2232),(3^32^2),(3^2232))",
    (1, 2): "((2^31^2),(2^2121),(212^21))",
    (3, 1): "((131^23),(1^2313),(1^33^2))",
}


@pytest.mark.criterion(8)
@pytest.mark.parametrize("pair", sorted(TRIPLE_TABLE))
def test_triple_period_table(pair):
    s = construct(PatternSpec("k2-t-linear", t=2, types=pair))
    got = triple_period(build_torus(s.spec), s)
    assert got.matches(TriplePeriod.parse(TRIPLE_TABLE[pair])), got.notation()


@pytest.mark.criterion(8)
@pytest.mark.parametrize("t", [1, 2, 3])
def test_triple_period_formula(t):
    s = construct(PatternSpec("k2-t-linear", t=t))
    got = triple_period(build_torus(s.spec), s)
    want = TriplePeriod(
        expand_word(f"1^{{{t + 1}}}2^{{{t}}}"),
        expand_word(f"1(12)^{{{t}}}"),
        expand_word(f"2^{{-1}}(21)^{{{t}}}"),
    )
    assert got.matches(want), f"{got.notation()} != {want.notation()}"


# -- 9 ----------------------------------------------------------------------


def _words(size):
    return ["".join(w) for w in itertools.product("12", repeat=size) if len(set(w)) == 2]


@pytest.mark.criterion(9)
@pytest.mark.parametrize("size, torus", [(2, (20, 5)), (3, (30, 30)), (4, (40, 20))])
def test_diagonal_period_dimensions(size, torus):
    assert period_dimensions("1" * size) == torus
    minimal = []
    with _timed(60):
        for word in _words(size):
            p = PatternSpec("k2-diagonal", word=word)
            g = build_torus(torus)
            s = construct(p, torus)
            assert classify(g, s).h_qpds_nu == 2, word
            assert classify_k2(g, s).kind == "diagonal", word
            minimal.append(minimal_torus(p))
    assert _lcm_torus(minimal) == torus


# -- 10 ---------------------------------------------------------------------


@pytest.mark.criterion(10)
@pytest.mark.parametrize("torus", small_tori(25), ids=lambda t: f"{t[0]}x{t[1]}")
def test_search_matches_brute_force(torus):
    m, n = torus
    g = build_torus(torus)
    reference = brute_force_all(m, n, PREDICATES)
    for (name, nu), masks in reference.items():
        res = enumerate_solutions(SearchProblem(g, Predicate(name, nu)))
        assert res.exhausted
        assert {s.mask for s in res.solutions} == masks, (name, nu)


# -- 11 ---------------------------------------------------------------------

ROUND_TRIP = [
    (PatternSpec("k2-parallel", hex_type=1), K2Family("parallel", (3,), hex_type=1)),
    (PatternSpec("k2-parallel", hex_type=2), K2Family("parallel", (1,), hex_type=2)),
    (PatternSpec("k2-parallel", hex_type=3), K2Family("parallel", (2,), hex_type=3)),
]
ROUND_TRIP += [
    (PatternSpec("k2-t-linear", t=t, types=pair), K2Family("t-linear", pair, t=t))
    for t in (1, 2, 3)
    for pair in itertools.permutations((1, 2, 3), 2)
]
ROUND_TRIP += [
    (PatternSpec("k2-sandwiched", word=w), K2Family("sandwiched", (2, 3, 1), word=xi))
    for w, xi in [("23", "23"), ("233", "233"), ("323", "233"), ("2333", "2333"), ("22333", "22333"), ("2323", "23")]
]
ROUND_TRIP += [
    (PatternSpec("k2-sandwiched", word="2"), K2Family("t-linear", (2, 1), t=1)),
    (PatternSpec("k2-sandwiched", word="33"), K2Family("t-linear", (3, 1), t=1)),
]
ROUND_TRIP += [
    (PatternSpec("k2-diagonal", axis=axis, word=w), K2Family("diagonal", present, word=xi, axis=axis))
    for axis, present, cases in [
        (3, (1, 2), [("12", "12"), ("211", "112"), ("1122", "1122"), ("1112", "1112")]),
        (1, (2, 3), [("23", "23"), ("332", "233"), ("2233", "2233")]),
        (2, (1, 3), [("13", "13"), ("113", "113"), ("1333", "1333")]),
    ]
    for w, xi in cases
]


@pytest.mark.criterion(11)
@pytest.mark.parametrize("spec, verdict", ROUND_TRIP, ids=lambda x: x.label() if isinstance(x, K2Family) else "")
def test_classification_round_trip(spec, verdict):
    s = k2_family(spec)
    g = build_torus(s.spec)
    assert (s.m, s.n) == minimal_torus(spec)
    assert classify_k2(g, s) == verdict
    if len({h.axis_type for h in hexagon_types(g, s)}) <= 2:
        assert mixed_triples(gamma_graph(g, s)) == []


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
