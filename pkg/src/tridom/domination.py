"""Domination predicates and the structural statistics quoted about them.

Everything here is a pure function of a torus graph and a vertex set.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import networkx as nx

from .errors import EmptySet, NotAHole, NotAPerfectCode, SingletonSet
from .lattice import TorusGraph, VertexSet, build_torus

INF = math.inf

REPORT_VERSION = 1


@dataclass(frozen=True)
class ComponentInfo:
    """A connected component of ``G[S]``.

    ``shape`` is one of ``K1``, ``K2``, ``K3``, ``PATH``, ``CYCLE``, ``OTHER``;
    ``size`` is the vertex count (the length for paths and cycles).
    """

    vertices: tuple[int, ...]
    shape: str

    @property
    def size(self) -> int:
        return len(self.vertices)

    def label(self) -> str:
        if self.shape in ("PATH", "CYCLE"):
            return f"{self.shape}({self.size})"
        return self.shape


def _shape(g: TorusGraph, verts: Sequence[int]) -> str:
    k = len(verts)
    vs = set(verts)
    degs = [len(g.neighbor_sets[v] & vs) for v in verts]
    n_edges = sum(degs) // 2
    if k == 1:
        return "K1"
    if k == 2:
        return "K2"
    if k == 3 and n_edges == 3:
        a, b, c = verts
        # a 3-cycle wrapping around a short torus is not a triangle of the lattice
        return "K3" if g.lift_adjacent(a, b, c) else "CYCLE"
    if n_edges == k - 1 and max(degs) <= 2:
        return "PATH"
    if n_edges == k and all(d == 2 for d in degs):
        return "CYCLE"
    return "OTHER"


def components(g: TorusGraph, s: VertexSet) -> list[ComponentInfo]:
    """Components of ``G[S]`` ordered by their least vertex id."""
    seen: set[int] = set()
    out = []
    for v in sorted(s.ids):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in g.neighbors[u]:
                if w in s.ids and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        out.append(ComponentInfo(tuple(comp), _shape(g, comp)))
    return out


def dominator_counts(g: TorusGraph, s: VertexSet) -> dict[int, int]:
    """``d_v = |N(v) & S|`` for every vertex outside ``S``."""
    ids = s.ids
    return {v: sum(1 for w in g.neighbors[v] if w in ids) for v in g.vertices() if v not in ids}


def is_separated(g: TorusGraph, s: VertexSet) -> bool:
    """True iff every outside vertex sees a single clique of ``S``.

    The test is made on the lifted star of each vertex, so it also holds for
    the periodic lift of ``S`` to the infinite lattice.  For sets whose
    components are cliques this is the condition that distinct components
    lie at distance at least 3.
    """
    ids = s.ids
    for v in g.vertices():
        if v in ids:
            continue
        inside = [w for w in g.neighbors[v] if w in ids]
        for i in range(len(inside)):
            for j in range(i + 1, len(inside)):
                if not g.lift_adjacent(v, inside[i], inside[j]):
                    return False
    return True


def _component_labels(g: TorusGraph, comps: list[ComponentInfo]) -> list[int]:
    label = [-1] * g.order
    for k, c in enumerate(comps):
        for v in c.vertices:
            label[v] = k
    return label


def _voronoi_bfs(g: TorusGraph, comps: list[ComponentInfo]) -> tuple[list[int], list[int]]:
    owner = _component_labels(g, comps)
    dist = [0 if o >= 0 else -1 for o in owner]
    queue = deque(v for v in g.vertices() if owner[v] >= 0)
    while queue:
        u = queue.popleft()
        for w in g.neighbors[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                owner[w] = owner[u]
                queue.append(w)
    return dist, owner


def min_component_distance(g: TorusGraph, s: VertexSet) -> float:
    """Least graph distance between vertices of distinct components of ``G[S]``.

    Multi-source BFS from all of ``S`` labels each vertex with its nearest
    component; the answer is the least ``d(u) + d(w) + 1`` over edges whose
    endpoints carry different labels.  Returns ``inf`` for one component.
    """
    if not s.ids:
        raise EmptySet("distance between components of an empty set")
    comps = components(g, s)
    if len(comps) < 2:
        return INF
    dist, owner = _voronoi_bfs(g, comps)
    best = INF
    for u, w in g.edges():
        if owner[u] != owner[w]:
            best = min(best, dist[u] + dist[w] + 1)
    return best


@dataclass(frozen=True)
class DominationReport:
    m: int
    n: int
    members: tuple[int, ...]
    counts: dict[int, int]
    components: tuple[ComponentInfo, ...]
    delta: float
    is_pds: bool
    is_proper: bool
    is_perfect_code: bool
    is_qpds: bool
    is_spds: bool
    h_qpds_nu: int | None
    separated: bool = False
    shape_census: dict[str, int] = field(default_factory=dict)

    def flags(self) -> dict[str, object]:
        return {
            "is_pds": self.is_pds,
            "is_proper": self.is_proper,
            "is_perfect_code": self.is_perfect_code,
            "is_qpds": self.is_qpds,
            "is_spds": self.is_spds,
            "h_qpds_nu": self.h_qpds_nu,
            "separated": self.separated,
        }

    def to_dict(self) -> dict:
        """Stable JSON-ready form; ``counts`` is indexed by vertex id with
        ``null`` for members of ``S``."""
        counts = [self.counts.get(v) for v in range(self.m * self.n)]
        return {
            "torus": [self.m, self.n],
            "size": len(self.members),
            "vertices": [list(divmod(v, self.n)) for v in self.members],
            "counts": counts,
            "components": [
                {"shape": c.label(), "vertices": [list(divmod(v, self.n)) for v in c.vertices]}
                for c in self.components
            ],
            "component_count": len(self.components),
            "shape_census": dict(sorted(self.shape_census.items())),
            "delta": None if self.delta == INF else int(self.delta),
            "flags": self.flags(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def classify(g: TorusGraph, s: VertexSet) -> DominationReport:
    counts = dominator_counts(g, s)
    comps = components(g, s)
    values = set(counts.values())
    nonempty = bool(s.ids)
    is_pds = values <= {1}
    is_qpds = values <= {1, 2}
    is_spds = values <= {2}
    shapes = {c.shape for c in comps}
    census: dict[str, int] = {}
    for c in comps:
        census[c.label()] = census.get(c.label(), 0) + 1
    is_perfect_code = nonempty and is_pds and shapes == {"K1"}
    separated = nonempty and is_separated(g, s)
    nu = None
    if nonempty and is_qpds and separated and len(shapes) == 1:
        nu = {"K1": 1, "K2": 2, "K3": 3}.get(next(iter(shapes)))
    delta = min_component_distance(g, s) if nonempty else INF
    return DominationReport(
        m=g.m,
        n=g.n,
        members=s.sorted(),
        counts=counts,
        components=tuple(comps),
        delta=delta,
        is_pds=is_pds,
        is_proper=len(s) != g.order,
        is_perfect_code=is_perfect_code,
        is_qpds=is_qpds,
        is_spds=is_spds,
        h_qpds_nu=nu,
        separated=separated,
        shape_census=census,
    )


def boundary_hole_length(g: TorusGraph, s: VertexSet, comp: ComponentInfo) -> int:
    """Length of the induced cycle of ``G - S`` bordering ``comp``.

    The boundary is the outer neighbourhood of the component; it must avoid
    ``S`` and induce a single chordless cycle, otherwise ``NotAHole``.
    """
    cset = set(comp.vertices)
    ring = set()
    for v in comp.vertices:
        ring.update(g.neighbors[v])
    ring -= cset
    if ring & s.ids:
        raise NotAHole("component boundary meets another component")
    if len(ring) < 4:
        raise NotAHole("boundary too short to be a hole")
    for v in ring:
        if len(g.neighbor_sets[v] & ring) != 2:
            raise NotAHole(f"boundary vertex {g.coord(v)} has a chord or a gap")
    # 2-regular: connected iff a walk from one vertex covers all of it
    start = next(iter(ring))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.neighbor_sets[u] & ring:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != len(ring):
        raise NotAHole("boundary splits into several cycles")
    return len(ring)


def _require_perfect_code(g: TorusGraph, s: VertexSet) -> None:
    rep = classify(g, s)
    if not rep.is_perfect_code:
        raise NotAPerfectCode("input is not a 1-perfect code")


def z3_triangles(g: TorusGraph, s: VertexSet) -> list[tuple[int, int, int]]:
    """Faces of ``G - S`` sharing no edge with any 6-hole around a code vertex."""
    _require_perfect_code(g, s)
    hole_edges: set[frozenset[int]] = set()
    for x in s.ids:
        nb = g.neighbors[x]
        for a in nb:
            for b in nb:
                if a < b and g.adjacent(a, b):
                    hole_edges.add(frozenset((a, b)))
    out = []
    seen = set()
    for face in g.faces():
        key = frozenset(face)
        if len(key) != 3 or key in seen:
            continue
        seen.add(key)
        if key & s.ids:
            continue
        a, b, c = face
        if {frozenset((a, b)), frozenset((b, c)), frozenset((a, c))} & hole_edges:
            continue
        out.append(tuple(sorted(face)))
    out.sort()
    return out


def _resolve_predicate(predicate: str | Callable[[DominationReport], bool]) -> Callable[[DominationReport], bool]:
    if callable(predicate):
        return predicate
    table: dict[str, Callable[[DominationReport], bool]] = {
        "pds": lambda r: r.is_pds and r.is_proper,
        "perfect_code": lambda r: r.is_perfect_code,
        "spds": lambda r: r.is_spds and r.is_proper,
        "qpds": lambda r: r.is_qpds and r.is_proper,
        "k1_qpds": lambda r: r.h_qpds_nu == 1,
        "k2_qpds": lambda r: r.h_qpds_nu == 2,
        "k3_qpds": lambda r: r.h_qpds_nu == 3,
    }
    key = predicate.lower().replace("-", "_")
    if key not in table:
        raise ValueError(f"unknown predicate {predicate!r}")
    return table[key]


def check_partition(
    g: TorusGraph,
    parts: Iterable[VertexSet],
    predicate: str | Callable[[DominationReport], bool],
) -> bool:
    """True iff ``parts`` are pairwise disjoint, cover ``V`` and all satisfy ``predicate``."""
    pred = _resolve_predicate(predicate)
    covered: set[int] = set()
    total = 0
    for p in parts:
        if covered & p.ids:
            return False
        covered |= p.ids
        total += len(p)
        if not pred(classify(g, p)):
            return False
    return total == g.order and len(covered) == g.order


def bfs_distances(g: TorusGraph, source: int) -> list[int]:
    dist = [-1] * g.order
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for w in g.neighbors[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def min_distance_graph(g: TorusGraph, s: VertexSet) -> nx.Graph:
    """Graph on ``S`` joining the pairs at the least pairwise distance."""
    if len(s) < 2:
        raise SingletonSet("need at least two code vertices")
    _require_perfect_code(g, s)
    members = s.sorted()
    dists = {u: bfs_distances(g, u) for u in members}
    best = min(dists[u][w] for u in members for w in members if u < w)
    out = nx.Graph()
    out.add_nodes_from(members)
    out.add_edges_from((u, w) for u in members for w in members if u < w and dists[u][w] == best)
    out.graph["distance"] = best
    return out


def verify(m: int, n: int, coords: Iterable[tuple[int, int]]) -> DominationReport:
    """Convenience: classify a coordinate list on ``Delta_{m,n}``."""
    g = build_torus((m, n))
    return classify(g, VertexSet.from_coords(g, coords))
