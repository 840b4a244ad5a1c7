"""Translation sublattices of the triangular lattice and periodic vertex sets.

A ``PeriodicPattern`` is a sublattice ``L`` plus a set of coset
representatives; it is the infinite set ``reps + L``.  It descends to
``Delta_{m,n}`` exactly when ``(m, 0)`` and ``(0, n)`` lie in ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable

from .errors import DivisibilityViolation
from .lattice import Coord, Isometry, VertexSet, build_torus


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@dataclass(frozen=True)
class LatticeBasis:
    """Generators ``u``, ``v`` of a full-rank translation sublattice."""

    u: Coord
    v: Coord

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", Coord(*self.u))
        object.__setattr__(self, "v", Coord(*self.v))
        if self.det == 0:
            raise ValueError("degenerate lattice basis")

    @property
    def det(self) -> int:
        return self.u[0] * self.v[1] - self.u[1] * self.v[0]

    @property
    def index(self) -> int:
        return abs(self.det)

    def contains(self, w: tuple[int, int]) -> bool:
        d = self.det
        a = w[0] * self.v[1] - w[1] * self.v[0]
        b = self.u[0] * w[1] - self.u[1] * w[0]
        return a % d == 0 and b % d == 0

    def divides_torus(self, m: int, n: int) -> bool:
        """True iff ``mZ x nZ`` lies inside the lattice (patterns descend)."""
        return self.contains((m, 0)) and self.contains((0, n))

    def min_torus(self) -> tuple[int, int]:
        """Least ``(m, n)`` with ``(m, 0)`` and ``(0, n)`` in the lattice."""
        a, b, d = self.hnf()
        # (0, j d) lies in L iff a | j b
        return a, d * (a // gcd(a, b))

    def hnf(self) -> tuple[int, int, int]:
        """Hermite normal form ``(a, b, d)``: ``L = <(a, 0), (b, d)>``, ``0 <= b < a``."""
        return _hnf([self.u, self.v])

    def normalized(self) -> "LatticeBasis":
        a, b, d = self.hnf()
        return LatticeBasis(Coord(a, 0), Coord(b, d))

    def reduce(self, c: tuple[int, int]) -> Coord:
        """Canonical coset representative of ``c`` in the box ``[0, a) x [0, d)``."""
        a, b, d = self.hnf()
        k, y = divmod(c[1], d)
        return Coord((c[0] - k * b) % a, y)

    def image(self, iso: Isometry) -> "LatticeBasis":
        return LatticeBasis(iso.linear(self.u), iso.linear(self.v)).normalized()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticeBasis):
            return NotImplemented
        return self.hnf() == other.hnf()

    def __hash__(self) -> int:
        return hash(self.hnf())


def _hnf(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    rows = [list(v) for v in vectors if v[0] or v[1]]
    # Euclid on the second coordinate leaves one row with x2 = d > 0.
    piv: list[int] | None = None
    flat: list[list[int]] = []
    for r in rows:
        if r[1] == 0:
            flat.append(r)
            continue
        if piv is None:
            piv = r
            continue
        while r[1]:
            q = piv[1] // r[1]
            piv = [piv[0] - q * r[0], piv[1] - q * r[1]]
            piv, r = r, piv
        flat.append(r)
    if piv is None:
        raise ValueError("vectors do not span a full-rank lattice")
    if piv[1] < 0:
        piv = [-piv[0], -piv[1]]
    a = 0
    for r in flat:
        a = gcd(a, r[0])
    if a == 0:
        raise ValueError("vectors do not span a full-rank lattice")
    return a, piv[0] % a, piv[1]


def lattice_from_vectors(vectors: Iterable[tuple[int, int]]) -> LatticeBasis:
    a, b, d = _hnf(vectors)
    return LatticeBasis(Coord(a, 0), Coord(b, d))


def sublattices(index: int) -> list[LatticeBasis]:
    """All sublattices of the given index, in Hermite normal form order."""
    out = []
    for a in range(1, index + 1):
        if index % a:
            continue
        d = index // a
        out.extend(LatticeBasis(Coord(a, 0), Coord(b, d)) for b in range(a))
    return out


def torus_lattice(m: int, n: int) -> LatticeBasis:
    return LatticeBasis(Coord(m, 0), Coord(0, n))


def period_lattice(s: VertexSet) -> LatticeBasis:
    """All translations of the lift of ``s`` onto itself."""
    m, n = s.m, s.n
    vecs: list[tuple[int, int]] = [(m, 0), (0, n)]
    ids = s.sorted()
    if ids:
        x0, y0 = divmod(ids[0], n)
        for v in ids[1:]:
            x, y = divmod(v, n)
            a, b = x - x0, y - y0
            if s.translate(a, b) == s:
                vecs.append((a, b))
    return lattice_from_vectors(vecs)


@dataclass(frozen=True)
class PeriodicPattern:
    """The vertex set ``reps + lattice`` of the infinite lattice."""

    lattice: LatticeBasis
    reps: frozenset[Coord]

    def __post_init__(self) -> None:
        lat = self.lattice.normalized()
        object.__setattr__(self, "lattice", lat)
        object.__setattr__(self, "reps", frozenset(lat.reduce(r) for r in self.reps))

    @classmethod
    def from_torus_set(cls, s: VertexSet) -> "PeriodicPattern":
        lat = period_lattice(s)
        return cls(lat, frozenset(lat.reduce(c) for c in s.coords()))

    def __contains__(self, c: object) -> bool:
        return self.lattice.reduce(c) in self.reps  # type: ignore[arg-type]

    @property
    def density(self) -> float:
        return len(self.reps) / self.lattice.index

    def min_torus(self) -> tuple[int, int]:
        return self.lattice.min_torus()

    def admits(self, m: int, n: int) -> bool:
        return self.lattice.divides_torus(m, n)

    def on_torus(self, m: int, n: int, offset: tuple[int, int] = (0, 0)) -> VertexSet:
        if not self.admits(m, n):
            raise DivisibilityViolation(
                f"pattern with period lattice {self.lattice.hnf()} does not descend to "
                f"Delta_{{{m},{n}}}; minimal torus {self.min_torus()}",
                self.min_torus(),
            )
        g = build_torus((m, n))
        ox, oy = offset
        ids = [v for v in g.vertices() if self.lattice.reduce((v // n - ox, v % n - oy)) in self.reps]
        return VertexSet(m, n, ids)

    def transform(self, iso: Isometry) -> "PeriodicPattern":
        lat = self.lattice.image(iso)
        return PeriodicPattern(lat, frozenset(iso(r) for r in self.reps))

    def translate(self, a: int, b: int) -> "PeriodicPattern":
        return PeriodicPattern(self.lattice, frozenset(r + (a, b) for r in self.reps))

    def coarsen(self, lattice: LatticeBasis) -> "PeriodicPattern":
        """The same set described over a sublattice of the period lattice."""
        if not all(self.lattice.contains(w) for w in (lattice.u, lattice.v)):
            raise ValueError("target is not a sublattice of the period lattice")
        a, b, d = lattice.hnf()
        box = [Coord(x, y) for x in range(a) for y in range(d)]
        return PeriodicPattern(lattice, frozenset(c for c in box if c in self))

    def canonical(self) -> "PeriodicPattern":
        """Least translate (by sorted representatives) of the pattern."""
        best = None
        for r in self.reps:
            cand = self.translate(-r[0], -r[1])
            key = tuple(sorted(cand.reps))
            if best is None or key < best[0]:
                best = (key, cand)
        return best[1] if best else self

    def to_dict(self) -> dict:
        a, b, d = self.lattice.hnf()
        return {"lattice": [[a, 0], [b, d]], "reps": sorted([list(r) for r in self.reps])}


def common_torus(*lattices: LatticeBasis) -> tuple[int, int]:
    m = n = 1
    for lat in lattices:
        a, b = lat.min_torus()
        m, n = _lcm(m, a), _lcm(n, b)
    return m, n


def fit_torus(m: int, n: int) -> tuple[int, int]:
    """Least multiples of ``m`` and ``n`` that are at least 3."""
    return m * -(-3 // m) if m < 3 else m, n * -(-3 // n) if n < 3 else n
