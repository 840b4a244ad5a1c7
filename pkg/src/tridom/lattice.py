"""Triangular-lattice coordinates, toroidal quotients and isometries.

Vertices are stored by their first two coordinates ``(x1, x2)``; the third
coordinate is always ``-x1 - x2``.  The torus ``Delta_{m,n}`` reduces ``x1``
mod ``m`` and ``x2`` mod ``n`` independently, so its fundamental domain is
``[0, m) x [0, n)`` and vertex ``(i, j)`` has id ``i * n + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, NamedTuple

from .errors import IsometryNotApplicable, SpecTooSmall


class Coord(NamedTuple):
    """A vertex of the infinite lattice in its first two coordinates."""

    x1: int
    x2: int

    @property
    def x3(self) -> int:
        return -self.x1 - self.x2

    def triple(self) -> tuple[int, int, int]:
        return (self.x1, self.x2, self.x3)

    def __add__(self, other: tuple[int, int]) -> "Coord":  # type: ignore[override]
        return Coord(self.x1 + other[0], self.x2 + other[1])

    def __sub__(self, other: tuple[int, int]) -> "Coord":
        return Coord(self.x1 - other[0], self.x2 - other[1])

    def __neg__(self) -> "Coord":
        return Coord(-self.x1, -self.x2)

    def scale(self, k: int) -> "Coord":
        return Coord(k * self.x1, k * self.x2)


ORIGIN = Coord(0, 0)

# Ordered counter-clockwise starting from the positive x1 direction.
OFFSETS: tuple[Coord, ...] = (
    Coord(1, 0),
    Coord(0, 1),
    Coord(-1, 1),
    Coord(-1, 0),
    Coord(0, -1),
    Coord(1, -1),
)
_OFFSET_SET = frozenset(OFFSETS)


def neighbors_inf(c: tuple[int, int]) -> frozenset[Coord]:
    """The six lattice neighbours of ``c``."""
    x1, x2 = c
    return frozenset(Coord(x1 + a, x2 + b) for a, b in OFFSETS)


def adjacent_inf(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return (b[0] - a[0], b[1] - a[1]) in _OFFSET_SET


def hex_norm(c: tuple[int, int]) -> int:
    """Graph distance from the origin in the infinite lattice."""
    x1, x2 = c
    return max(abs(x1), abs(x2), abs(x1 + x2))


def embed(c: tuple[float, float]) -> tuple[float, float]:
    """Planar position with unit edges and a 60 degree angle between axes."""
    return (c[0] + 0.5 * c[1], c[1] * 0.8660254037844386)


@dataclass(frozen=True)
class TorusSpec:
    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 3 or self.n < 3:
            raise SpecTooSmall(f"torus needs m, n >= 3, got ({self.m}, {self.n})")

    @property
    def order(self) -> int:
        return self.m * self.n

    def __str__(self) -> str:
        return f"{self.m},{self.n}"


class TorusGraph:
    """The quotient ``Delta_{m,n}``; immutable after construction.

    ``neighbors[v]`` is a sorted tuple of the distinct neighbour ids of ``v``.
    """

    def __init__(self, spec: TorusSpec):
        self.spec = spec
        self.m = spec.m
        self.n = spec.n
        m, n = self.m, self.n
        nbrs = []
        offs = []
        for i in range(m):
            for j in range(n):
                ids = {((i + o.x1) % m) * n + (j + o.x2) % n: o for o in OFFSETS}
                ids.pop(i * n + j, None)
                nbrs.append(tuple(sorted(ids)))
                offs.append(ids)
        self.neighbors: tuple[tuple[int, ...], ...] = tuple(nbrs)
        self.neighbor_sets: tuple[frozenset[int], ...] = tuple(frozenset(x) for x in nbrs)
        # offset of each edge as seen from its tail; unique because m, n >= 3
        self.offset: tuple[dict[int, Coord], ...] = tuple(offs)

    def __repr__(self) -> str:
        return f"TorusGraph({self.m}, {self.n})"

    @property
    def order(self) -> int:
        return self.m * self.n

    def vertices(self) -> range:
        return range(self.m * self.n)

    def vid(self, c: tuple[int, int]) -> int:
        return (c[0] % self.m) * self.n + c[1] % self.n

    def coord(self, v: int) -> Coord:
        return Coord(*divmod(v, self.n))

    def edges(self) -> Iterator[tuple[int, int]]:
        for u, nb in enumerate(self.neighbors):
            for w in nb:
                if u < w:
                    yield (u, w)

    def num_edges(self) -> int:
        return sum(len(nb) for nb in self.neighbors) // 2

    def adjacent(self, u: int, w: int) -> bool:
        return w in self.neighbor_sets[u]

    def lift_adjacent(self, v: int, a: int, b: int) -> bool:
        """True iff neighbours ``a``, ``b`` of ``v`` stay adjacent when the
        star of ``v`` is lifted to the infinite lattice."""
        oa, ob = self.offset[v][a], self.offset[v][b]
        return (ob[0] - oa[0], ob[1] - oa[1]) in _OFFSET_SET

    def translate(self, v: int, a: int, b: int) -> int:
        i, j = divmod(v, self.n)
        return ((i + a) % self.m) * self.n + (j + b) % self.n

    def translation_table(self, a: int, b: int) -> tuple[int, ...]:
        return tuple(self.translate(v, a, b) for v in range(self.order))

    def faces(self) -> Iterator[tuple[int, int, int]]:
        """All ``2mn`` triangular faces: an up and a down triangle per vertex."""
        for i in range(self.m):
            for j in range(self.n):
                yield (self.vid((i, j)), self.vid((i + 1, j)), self.vid((i, j + 1)))
                yield (self.vid((i, j)), self.vid((i + 1, j)), self.vid((i + 1, j - 1)))

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.vertices())
        g.add_edges_from(self.edges())
        return g


@lru_cache(maxsize=64)
def _build(m: int, n: int) -> TorusGraph:
    return TorusGraph(TorusSpec(m, n))


def build_torus(spec: TorusSpec | tuple[int, int]) -> TorusGraph:
    """Return the (cached, shared) torus graph for ``spec``."""
    if isinstance(spec, TorusSpec):
        return _build(spec.m, spec.n)
    m, n = spec
    TorusSpec(m, n)
    return _build(m, n)


def project(c: tuple[int, int], spec: TorusSpec | TorusGraph) -> int:
    """Natural projection of an infinite-lattice coordinate onto a torus id."""
    m, n = (spec.m, spec.n)
    return (c[0] % m) * n + c[1] % n


# ---------------------------------------------------------------------------
# Isometries
# ---------------------------------------------------------------------------

_ROT = (0, -1, 1, 1)  # (a, b) -> (-b, a + b)
_REF = (1, 0, -1, -1)  # (a, b) -> (a, -a - b)
_ID = (1, 0, 0, 1)


def _matmul(p: tuple[int, int, int, int], q: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
    a, b, c, d = p
    e, f, g, h = q
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


@dataclass(frozen=True)
class Isometry:
    """Affine map ``x -> M x + t`` on ``(x1, x2)`` with ``M`` a point-group matrix.

    ``matrix`` is ``(a, b, c, d)`` meaning ``x1' = a x1 + b x2``,
    ``x2' = c x1 + d x2``.
    """

    matrix: tuple[int, int, int, int] = _ID
    shift: tuple[int, int] = (0, 0)
    kind: str = "composite"

    @classmethod
    def translation(cls, a: int, b: int) -> "Isometry":
        return cls(_ID, (a, b), "translation")

    @classmethod
    def rotation60(cls, k: int = 1) -> "Isometry":
        mat = _ID
        for _ in range(k % 6):
            mat = _matmul(_ROT, mat)
        return cls(mat, (0, 0), "rotation")

    @classmethod
    def reflect_x1(cls) -> "Isometry":
        return cls(_REF, (0, 0), "reflection")

    @property
    def is_translation(self) -> bool:
        return self.matrix == _ID

    def __call__(self, c: tuple[int, int]) -> Coord:
        a, b, cc, d = self.matrix
        x1, x2 = c
        return Coord(a * x1 + b * x2 + self.shift[0], cc * x1 + d * x2 + self.shift[1])

    def linear(self, c: tuple[int, int]) -> Coord:
        a, b, cc, d = self.matrix
        return Coord(a * c[0] + b * c[1], cc * c[0] + d * c[1])

    def then(self, other: "Isometry") -> "Isometry":
        """The composite map ``other . self``."""
        mat = _matmul(other.matrix, self.matrix)
        t = other.linear(self.shift) + other.shift
        return Isometry(mat, (t.x1, t.x2), "composite")

    def descends_to(self, m: int, n: int) -> bool:
        """True iff the map is well defined on ``Delta_{m,n}``."""
        a, b, c, d = self.matrix
        # images of (m, 0) and (0, n) must lie in mZ x nZ
        return (c * m) % n == 0 and (b * n) % m == 0


def point_group() -> tuple[Isometry, ...]:
    """The twelve point maps fixing the origin (rotations, then reflections)."""
    rots = [Isometry.rotation60(k) for k in range(6)]
    refl = Isometry.reflect_x1()
    return tuple(rots) + tuple(Isometry(_matmul(r.matrix, refl.matrix), (0, 0), "composite") for r in rots)


def _check_iso(iso: Isometry, g: TorusGraph) -> None:
    if iso.is_translation:
        return
    if g.m != g.n:
        raise IsometryNotApplicable(
            f"point map {iso.matrix} does not descend to Delta_{{{g.m},{g.n}}}"
        )


def image_ids(iso: Isometry, ids: Iterable[int], g: TorusGraph) -> list[int]:
    _check_iso(iso, g)
    n = g.n
    return [g.vid(iso(divmod(v, n))) for v in ids]


# ---------------------------------------------------------------------------
# Vertex sets on a torus
# ---------------------------------------------------------------------------


class VertexSet:
    """An immutable subset of ``V(Delta_{m,n})``.

    Membership is kept both as a frozenset of vertex ids and as an integer
    bitmask (bit ``v`` set iff ``v`` in S).  Equality and hashing use the
    torus shape plus the member ids.
    """

    __slots__ = ("m", "n", "ids", "_mask")

    def __init__(self, m: int, n: int, ids: Iterable[int] = ()):
        self.m = m
        self.n = n
        self.ids: frozenset[int] = frozenset(ids)
        total = m * n
        for v in self.ids:
            if not 0 <= v < total:
                raise ValueError(f"vertex id {v} out of range for {m}x{n} torus")
        self._mask: int | None = None

    @classmethod
    def from_coords(cls, spec: TorusSpec | TorusGraph, coords: Iterable[tuple[int, int]]) -> "VertexSet":
        m, n = spec.m, spec.n
        return cls(m, n, ((c[0] % m) * n + c[1] % n for c in coords))

    @classmethod
    def from_mask(cls, m: int, n: int, mask: int) -> "VertexSet":
        ids = [v for v in range(m * n) if (mask >> v) & 1]
        return cls(m, n, ids)

    @classmethod
    def full(cls, m: int, n: int) -> "VertexSet":
        return cls(m, n, range(m * n))

    @property
    def spec(self) -> TorusSpec:
        return TorusSpec(self.m, self.n)

    @property
    def mask(self) -> int:
        if self._mask is None:
            mask = 0
            for v in self.ids:
                mask |= 1 << v
            self._mask = mask
        return self._mask

    def bits(self) -> list[bool]:
        return [v in self.ids for v in range(self.m * self.n)]

    def sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.ids))

    def coords(self) -> list[Coord]:
        return [Coord(*divmod(v, self.n)) for v in self.sorted()]

    def translate(self, a: int, b: int) -> "VertexSet":
        m, n = self.m, self.n
        return VertexSet(m, n, (((v // n + a) % m) * n + (v % n + b) % n for v in self.ids))

    def __contains__(self, v: object) -> bool:
        return v in self.ids

    def __iter__(self) -> Iterator[int]:
        return iter(self.sorted())

    def __len__(self) -> int:
        return len(self.ids)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexSet):
            return NotImplemented
        return (self.m, self.n, self.ids) == (other.m, other.n, other.ids)

    def __hash__(self) -> int:
        return hash((self.m, self.n, self.ids))

    def __or__(self, other: "VertexSet") -> "VertexSet":
        return VertexSet(self.m, self.n, self.ids | other.ids)

    def __repr__(self) -> str:
        return f"VertexSet({self.m}, {self.n}, {list(self.coords())})"


def apply_isometry(iso: Isometry, s: VertexSet, g: TorusGraph | None = None) -> VertexSet:
    if g is None:
        g = build_torus((s.m, s.n))
    return VertexSet(s.m, s.n, image_ids(iso, s.ids, g))


def _least_translate(ids: list[int], m: int, n: int) -> tuple[int, ...]:
    # The least sorted image contains id 0, so only translations sending a
    # member to the origin need to be tried.
    best: tuple[int, ...] | None = None
    coords = [divmod(v, n) for v in ids]
    for i0, j0 in coords:
        image = tuple(sorted(((i - i0) % m) * n + (j - j0) % n for i, j in coords))
        if best is None or image < best:
            best = image
    return best if best is not None else ()


def canonical_form(s: VertexSet, g: TorusGraph | None = None, group: str = "translations") -> VertexSet:
    """Lexicographically least image of ``s`` (as a sorted id tuple) over a group.

    ``group`` is ``"translations"`` or ``"full"`` (translations composed with
    the twelve point maps; requires ``m == n``).
    """
    if g is None:
        g = build_torus((s.m, s.n))
    if group not in ("translations", "full"):
        raise ValueError(f"unknown symmetry group {group!r}")
    if group == "full" and g.m != g.n:
        raise IsometryNotApplicable("the full point group needs m == n")
    maps = point_group() if group == "full" else (Isometry(),)
    best: tuple[int, ...] | None = None
    for iso in maps:
        img = image_ids(iso, s.ids, g) if not iso.is_translation else list(s.ids)
        cand = _least_translate(img, g.m, g.n)
        if best is None or cand < best:
            best = cand
    return VertexSet(s.m, s.n, best or ())
