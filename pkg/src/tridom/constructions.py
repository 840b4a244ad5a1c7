"""Generators for the canonical patterns: perfect codes, SPDSs, the K3-QPDS
and the K2-QPDS families.

The K2 families are built by stacking.  A strip is the orbit of a short
motif under one translation ``w``; a word picks one motif per letter and the
letter's advance moves the next strip.  The period lattice is then
``<w, sum of advances>``.  Motif cells and advances were read off solutions
found by lattice-constrained search (``motif_solve``) and are pinned by
regression tests against it.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

from .analysis import K2Family, classify_k2, necklace
from .errors import DivisibilityViolation, MotifUnavailable, NoMotifFound
from .lattice import ORIGIN, Coord, Isometry, TorusSpec, VertexSet, build_torus, point_group
from .periodic import LatticeBasis, PeriodicPattern, fit_torus

PERFECT_CODE_LATTICE = LatticeBasis(Coord(3, -1), Coord(1, 2))
PERFECT_CODE_MIRROR_LATTICE = LatticeBasis(Coord(3, -2), Coord(1, -3))
K3_LATTICE = LatticeBasis(Coord(4, -2), Coord(2, 2))
K2_PARALLEL_LATTICE = LatticeBasis(Coord(4, -2), Coord(3, 1))

# edge of a K2 whose endpoints share the coordinate x_i
EDGE_OF_SHARED = {1: Coord(0, 1), 2: Coord(1, 0), 3: Coord(1, -1)}
UP_TRIANGLE = (Coord(0, 0), Coord(1, 0), Coord(0, 1))


def _as_spec(spec: TorusSpec | tuple[int, int]) -> TorusSpec:
    return spec if isinstance(spec, TorusSpec) else TorusSpec(*spec)


def _require(spec: TorusSpec, pattern: PeriodicPattern) -> None:
    if not pattern.admits(spec.m, spec.n):
        need = pattern.min_torus()
        raise DivisibilityViolation(
            f"pattern needs {need[0]}|m and {need[1]}|n, got torus {spec.m},{spec.n}", need
        )


def perfect_code(
    spec: TorusSpec | tuple[int, int], mirror: bool = False, offset: tuple[int, int] = ORIGIN
) -> VertexSet:
    spec = _as_spec(spec)
    lat = PERFECT_CODE_MIRROR_LATTICE if mirror else PERFECT_CODE_LATTICE
    pat = PeriodicPattern(lat, frozenset({Coord(*offset)}))
    _require(spec, pat)
    return pat.on_torus(spec.m, spec.n)


def spds(spec: TorusSpec | tuple[int, int], kind: str = "isolated", offset: tuple[int, int] = ORIGIN, axis: int = 2) -> VertexSet:
    """Sparse perfect dominating sets.

    ``isolated`` is the even-even sublattice.  ``lines`` takes every third
    line on which ``x_axis`` is constant; ``axis=2`` gives rows (m-cycles).
    """
    spec = _as_spec(spec)
    o = Coord(*offset)
    if kind == "isolated":
        pat = PeriodicPattern(LatticeBasis(Coord(2, 0), Coord(0, 2)), frozenset({o}))
    elif kind == "lines":
        step = {1: (Coord(3, 0), Coord(0, 1)), 2: (Coord(1, 0), Coord(0, 3)), 3: (Coord(1, -1), Coord(3, 0))}
        if axis not in step:
            raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
        pat = PeriodicPattern(LatticeBasis(*step[axis]), frozenset({o}))
    else:
        raise ValueError(f"unknown SPDS kind {kind!r}")
    _require(spec, pat)
    return pat.on_torus(spec.m, spec.n)


def k3_qpds(spec: TorusSpec | tuple[int, int], offset: tuple[int, int] = ORIGIN) -> VertexSet:
    spec = _as_spec(spec)
    o = Coord(*offset)
    pat = PeriodicPattern(K3_LATTICE, frozenset(o + c for c in UP_TRIANGLE))
    _require(spec, pat)
    return pat.on_torus(spec.m, spec.n)


def k2_parallel(spec: TorusSpec | tuple[int, int], hex_type: int = 1, offset: tuple[int, int] = ORIGIN) -> VertexSet:
    spec = _as_spec(spec)
    if hex_type not in EDGE_OF_SHARED:
        raise ValueError(f"hex_type must be 1, 2 or 3, got {hex_type}")
    pat = family_pattern(PatternSpec("k2-parallel", offset=Coord(*offset), hex_type=hex_type))
    _require(spec, pat)
    return pat.on_torus(spec.m, spec.n)


def _parallel(hex_type: int) -> PeriodicPattern:
    # the base lattice carries edges (1, 0); other edge directions use its image
    from .analysis import AXIS_OF_SHARED

    base = PeriodicPattern(K2_PARALLEL_LATTICE, frozenset({ORIGIN, EDGE_OF_SHARED[2]}))
    return base.transform(_iso_for({AXIS_OF_SHARED[2]: AXIS_OF_SHARED[hex_type]}))


# ---------------------------------------------------------------------------
# stacked K2 families


@dataclass(frozen=True)
class Motif:
    cells: tuple[Coord, ...]
    advance: Coord


@dataclass(frozen=True)
class Stack:
    """Letters of a word placed strip by strip along the translation ``strip``."""

    strip: Coord
    motifs: Mapping[str, Motif]

    def pattern(self, word: str) -> PeriodicPattern:
        if not word:
            raise ValueError("empty word")
        pos, cells = ORIGIN, set()
        for letter in word:
            mot = self.motifs[letter]
            cells.update(pos + c for c in mot.cells)
            pos = pos + mot.advance
        return PeriodicPattern(LatticeBasis(self.strip, pos), frozenset(cells))

    def window(self, word: str, repeats: int, start: int = 0) -> set[Coord]:
        """Finite piece of the stack: ``len(word)`` strips, each ``repeats`` motifs long."""
        pos, out = ORIGIN, set()
        for letter in word:
            mot = self.motifs[letter]
            for k in range(start, start + repeats):
                shift = pos + self.strip.scale(k)
                out.update(shift + c for c in mot.cells)
            pos = pos + mot.advance
        return out


def _cells(*pairs: tuple[tuple[int, int], tuple[int, int]]) -> tuple[Coord, ...]:
    return tuple(Coord(*c) for pair in pairs for c in pair)


# minority 2 with majority 1, read along x1 inside strips of height 5
T_LINEAR_STACK = Stack(
    Coord(0, 5),
    {
        "1": Motif(_cells(((0, 0), (1, 0))), Coord(2, 2)),
        "2": Motif(_cells(((0, 0), (1, -1))), Coord(2, 1)),
    },
)

# one letter per slab: the X row followed by two rows of type 1
SANDWICH_STACK = Stack(
    Coord(6, 0),
    {
        "2": Motif(_cells(((0, 0), (1, -1)), ((2, 1), (3, 1)), ((4, 3), (5, 3))), Coord(0, 5)),
        "3": Motif(_cells(((1, -1), (1, 0)), ((3, 1), (4, 1)), ((5, 3), (6, 3))), Coord(1, 5)),
    },
)

# lines of constant type running down-right, types 1 and 2
DIAGONAL_STACK = Stack(
    Coord(4, -2),
    {
        "1": Motif(_cells(((0, 0), (1, 0))), Coord(3, 1)),
        "2": Motif(_cells(((-1, 1), (0, 0))), Coord(1, 2)),
    },
)


def t_linear_word(t: int) -> str:
    return "1" + "12" * t


def type_permutation(iso: Isometry) -> dict[int, int]:
    """Action of a point map on axis type labels."""
    from .analysis import AXIS_OF_SHARED, shared_type

    out = {}
    for shared, edge in EDGE_OF_SHARED.items():
        image = shared_type(ORIGIN, iso.linear(edge))
        out[AXIS_OF_SHARED[shared]] = AXIS_OF_SHARED[image]
    return out


def _iso_for(mapping: Mapping[int, int]) -> Isometry:
    for iso in point_group():
        perm = type_permutation(iso)
        if all(perm[a] == b for a, b in mapping.items()):
            return iso
    raise ValueError(f"no point map realizes {dict(mapping)}")


FAMILIES = (
    "perfect-code",
    "spds-isolated",
    "spds-lines",
    "k3-qpds",
    "k2-parallel",
    "k2-t-linear",
    "k2-sandwiched",
    "k2-diagonal",
)


@dataclass(frozen=True)
class PatternSpec:
    """A named pattern with its parameters.

    ``types`` is ``(minority, majority)`` for t-linear patterns and
    ``axis`` the absent type of a diagonal pattern; words use type digits.
    """

    family: str
    offset: Coord = ORIGIN
    mirror: bool = False
    axis: int | None = None
    hex_type: int | None = None
    t: int | None = None
    types: tuple[int, int] | None = None
    word: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "offset", Coord(*self.offset))
        if self.types is not None:
            object.__setattr__(self, "types", tuple(int(x) for x in self.types))
        f = self.family
        if f not in FAMILIES:
            raise ValueError(f"unknown family {f!r}")
        if f == "spds-lines" and self.axis not in (None, 1, 2, 3):
            raise ValueError("spds-lines axis must be 1, 2 or 3")
        if f == "k2-parallel" and self.hex_type not in (1, 2, 3):
            raise ValueError("k2-parallel needs hex_type 1, 2 or 3")
        if f == "k2-t-linear":
            if self.t is None or self.t < 1:
                raise ValueError("t-linear patterns need t >= 1")
            ts = self.types or (2, 1)
            if len(ts) != 2 or ts[0] == ts[1] or not set(ts) <= {1, 2, 3}:
                raise ValueError(f"types must be two distinct labels, got {ts}")
            object.__setattr__(self, "types", ts)
        if f == "k2-sandwiched":
            if not self.word or not set(self.word) <= {"2", "3"}:
                raise ValueError("sandwich word must be a nonempty word over 2 and 3")
        if f == "k2-diagonal":
            axis = 3 if self.axis is None else self.axis
            if axis not in (1, 2, 3):
                raise ValueError("diagonal axis must be 1, 2 or 3")
            others = {str(x) for x in (1, 2, 3) if x != axis}
            if not self.word or not set(self.word) <= others or len(set(self.word)) < 2:
                raise ValueError(f"diagonal word must use both of {sorted(others)}")
            object.__setattr__(self, "axis", axis)

    def params(self) -> dict:
        out: dict = {}
        for key in ("mirror", "axis", "hex_type", "t", "types", "word"):
            val = getattr(self, key)
            if val is None or (key == "mirror" and not val):
                continue
            out[key] = list(val) if key == "types" else val
        return out

    def to_dict(self) -> dict:
        return {"family": self.family, "params": self.params(), "offset": list(self.offset)}


def family_pattern(p: PatternSpec) -> PeriodicPattern:
    """The infinite periodic set described by ``p`` (offset applied)."""
    f = p.family
    if f == "perfect-code":
        lat = PERFECT_CODE_MIRROR_LATTICE if p.mirror else PERFECT_CODE_LATTICE
        pat = PeriodicPattern(lat, frozenset({ORIGIN}))
    elif f == "spds-isolated":
        pat = PeriodicPattern(LatticeBasis(Coord(2, 0), Coord(0, 2)), frozenset({ORIGIN}))
    elif f == "spds-lines":
        axis = p.axis or 2
        step = {1: (Coord(3, 0), Coord(0, 1)), 2: (Coord(1, 0), Coord(0, 3)), 3: (Coord(1, -1), Coord(3, 0))}
        pat = PeriodicPattern(LatticeBasis(*step[axis]), frozenset({ORIGIN}))
    elif f == "k3-qpds":
        pat = PeriodicPattern(K3_LATTICE, frozenset(UP_TRIANGLE))
    elif f == "k2-parallel":
        pat = _parallel(p.hex_type)  # type: ignore[arg-type]
    elif f == "k2-t-linear":
        base = T_LINEAR_STACK.pattern(t_linear_word(p.t))  # type: ignore[arg-type]
        i, j = p.types  # type: ignore[misc]
        pat = base.transform(_iso_for({2: i, 1: j}))
    elif f == "k2-sandwiched":
        pat = SANDWICH_STACK.pattern(p.word)  # type: ignore[arg-type]
    else:
        iso = _iso_for({3: p.axis})  # type: ignore[dict-item]
        back = {str(v): str(k) for k, v in type_permutation(iso).items()}
        pat = DIAGONAL_STACK.pattern("".join(back[c] for c in p.word)).transform(iso)  # type: ignore[union-attr]
    return pat.translate(*p.offset)


def minimal_torus(p: PatternSpec) -> tuple[int, int]:
    """Least torus carrying the pattern, raised to sides of at least 3."""
    return fit_torus(*family_pattern(p).min_torus())


def stated_torus(p: PatternSpec) -> list[tuple[int, int]]:
    """Torus sides promised by the closed-form tiling conditions.

    t-linear: ``(10 + 20 t, 5)`` and, for ``t = 1``, also ``(6, 50)``;
    sandwiched: six columns by five rows per letter; diagonal: the word
    length rule of ``period_dimensions``.  Only stated for the base
    orientations (types (2, 1), sandwich majority 1, absent type 3).
    """
    from .analysis import period_dimensions

    if p.family == "k2-t-linear" and p.types == (2, 1):
        out = [(10 + 20 * p.t, 5)]  # type: ignore[operator]
        if p.t == 1:
            out.append((6, 50))
        return out
    if p.family == "k2-sandwiched":
        return [(6, 5 * len(p.word))]  # type: ignore[arg-type]
    if p.family == "k2-diagonal" and p.axis == 3:
        return [period_dimensions(p.word)]  # type: ignore[arg-type]
    return []


def expected_verdict(p: PatternSpec) -> K2Family:
    """What ``classify_k2`` reports for a K2 family.

    A sandwich over a single letter ``x`` is the ``(x, 1)``-surrounded
    pattern and reports as 1-linear.
    """
    f = p.family
    if f == "k2-parallel":
        from .analysis import AXIS_OF_SHARED

        return K2Family("parallel", (AXIS_OF_SHARED[p.hex_type],), hex_type=p.hex_type)  # type: ignore[index]
    if f == "k2-t-linear":
        return K2Family("t-linear", p.types, t=p.t)  # type: ignore[arg-type]
    if f == "k2-sandwiched":
        letters = sorted(set(p.word))  # type: ignore[arg-type]
        if len(letters) == 1:
            return K2Family("t-linear", (int(letters[0]), 1), t=1)
        return K2Family("sandwiched", (2, 3, 1), word=necklace(_primitive(p.word)))  # type: ignore[arg-type]
    if f == "k2-diagonal":
        present = tuple(x for x in (1, 2, 3) if x != p.axis)
        return K2Family("diagonal", present, word=necklace(_primitive(p.word)), axis=p.axis)  # type: ignore[arg-type]
    raise ValueError(f"{f} is not a K2 family")


def _primitive(word: str) -> str:
    for k in range(1, len(word) + 1):
        if len(word) % k == 0 and word[:k] * (len(word) // k) == word:
            return word[:k]
    return word


def construct(p: PatternSpec, spec: TorusSpec | tuple[int, int] | None = None) -> VertexSet:
    """Realize ``p`` on ``spec`` (default: its minimal torus)."""
    spec = _as_spec(spec) if spec is not None else TorusSpec(*minimal_torus(p))
    pat = family_pattern(p)
    _require(spec, pat)
    return pat.on_torus(spec.m, spec.n)


def k2_family(pattern: PatternSpec, spec: TorusSpec | tuple[int, int] | None = None) -> VertexSet:
    if not pattern.family.startswith("k2-"):
        raise ValueError(f"{pattern.family} is not a K2 family")
    return construct(pattern, spec)


def k2_window(p: PatternSpec, repeats: int) -> set[Coord]:
    """A finite piece of a stacked K2 family for words that need not close up.

    Only base orientations are stacked; the word is used once, in order.
    """
    if p.family == "k2-t-linear":
        return T_LINEAR_STACK.window(t_linear_word(p.t), repeats)  # type: ignore[arg-type]
    if p.family == "k2-sandwiched":
        return SANDWICH_STACK.window(p.word, repeats)  # type: ignore[arg-type]
    if p.family == "k2-diagonal" and p.axis == 3:
        return DIAGONAL_STACK.window(p.word, repeats)  # type: ignore[arg-type]
    raise ValueError("windows are generated for t-linear (2,1), sandwiched and diagonal axis-3 patterns")


def window_defects(cells: Iterable[tuple[int, int]], margin: int = 3) -> list[Coord]:
    """Interior vertices where a finite piece fails the K2 quasi-perfect rules.

    A vertex is interior when each of the six 60-degree wedges around it
    holds a member within hex distance ``margin``; this follows sheared
    pieces whose bounding box is mostly empty.  Outside vertices must see
    one or two members forming a single edge; members must lie in
    two-vertex components.
    """
    from .lattice import OFFSETS, adjacent_inf, embed, hex_norm

    pts = {Coord(*c) for c in cells}
    if not pts:
        return []
    ball = [
        (Coord(a, b), _wedge(embed((a, b))))
        for a in range(-margin, margin + 1)
        for b in range(-margin, margin + 1)
        if 0 < hex_norm((a, b)) <= margin
    ]
    xs = [c[0] for c in pts]
    ys = [c[1] for c in pts]
    bad = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            c = Coord(x, y)
            if len({w for d, w in ball if c + d in pts}) < 6:
                continue
            inside = [c + o for o in OFFSETS if c + o in pts]
            if c in pts:
                if len(inside) != 1:
                    bad.append(c)
            elif not (len(inside) == 1 or (len(inside) == 2 and adjacent_inf(*inside))):
                bad.append(c)
    return bad


def _wedge(p: tuple[float, float]) -> int:
    # half-open wedges starting at angle 0; the tolerance keeps unit steps on their own wedge
    return int((math.atan2(p[1], p[0]) + 1e-9) % (2 * math.pi) // (math.pi / 3)) % 6


# ---------------------------------------------------------------------------
# motif search


_MOTIFS: dict[tuple, VertexSet] = {}
_MOTIF_LOCK = threading.Lock()


def motif_solve(
    p: PatternSpec,
    spec: TorusSpec | tuple[int, int] | None = None,
    lattice: LatticeBasis | None = None,
    time_budget: float = 300.0,
) -> VertexSet:
    """Find a set of the family by search with the family's lattice imposed.

    The first solution (in search order) whose classification matches the
    family is returned and cached; it need not coincide with ``construct``
    output but must agree with it up to translation.
    """
    from .search import K_QPDS, SearchProblem, enumerate_solutions

    if not p.family.startswith("k2-"):
        raise MotifUnavailable(f"motif search covers K2 families, not {p.family}")
    base = replace(p, offset=ORIGIN)
    lat = lattice or family_pattern(base).lattice
    spec = _as_spec(spec) if spec is not None else TorusSpec(*fit_torus(*lat.min_torus()))
    key = (base, spec.m, spec.n, lat.hnf())
    with _MOTIF_LOCK:
        if key in _MOTIFS:
            return _MOTIFS[key]
    if not lat.divides_torus(spec.m, spec.n):
        raise DivisibilityViolation(f"lattice {lat.hnf()} does not descend to {spec}", lat.min_torus())
    want = expected_verdict(base)
    g = build_torus(spec)

    def accept(s: VertexSet) -> bool:
        return classify_k2(g, s) == want

    res = enumerate_solutions(
        SearchProblem(g, K_QPDS(2), imposed_symmetry=lat, limit=1, accept=accept, time_budget=time_budget)
    )
    if not res.solutions:
        raise NoMotifFound(f"no {want.label()} set on {spec} with lattice {lat.hnf()}")
    found = res.solutions[0]
    with _MOTIF_LOCK:
        _MOTIFS.setdefault(key, found)
        return _MOTIFS[key]


def clear_motif_cache() -> None:
    with _MOTIF_LOCK:
        _MOTIFS.clear()
