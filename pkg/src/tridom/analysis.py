"""Structure of K2 quasi-perfect dominating sets: hexagon types, the
auxiliary graph Gamma(S), type tables, triple periods and the family
classifier.

Two labellings of hexagon types are used.  ``hex_type`` is the index of the
coordinate shared by the two vertices of a component.  ``axis_type`` names
the lattice axis the component's edge lies on, where the ``x_i``-axis is the
line through the origin on which ``x_{i+1}`` vanishes (indices mod 3).  Family
parameters (t-linear types, sandwich and diagonal words, triple periods) are
stated in axis labels; ``Parallel`` keeps the shared-coordinate label.

All geometry is computed in the periodic lift of ``S``, so small tori whose
quotient identifies distinct lifted hexagons are handled correctly.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from math import gcd
from typing import Sequence

import networkx as nx

from .domination import ComponentInfo, classify, components
from .errors import (
    EmptyWord,
    NotK2Qpds,
    NoLowType,
    NotSandwiched,
    NotTwoTypes,
    NoTableLayout,
    TooFewComponents,
)
from .lattice import OFFSETS, ORIGIN, Coord, TorusGraph, VertexSet, embed
from .periodic import period_lattice

SECTORS = ("up-right", "up", "up-left", "down-left", "down", "down-right")
UP, DOWN = 1, 4
# descending reading directions of a triple period
DIAGONAL, VERTICAL, ANTI_DIAGONAL = 5, 4, 3

AXIS_OF_SHARED = {1: 3, 2: 1, 3: 2}
SHARED_OF_AXIS = {v: k for k, v in AXIS_OF_SHARED.items()}


def shared_type(a: tuple[int, int], b: tuple[int, int]) -> int:
    """Index of the coordinate shared by two adjacent lattice points."""
    d = (b[0] - a[0], b[1] - a[1])
    if d[0] == 0:
        return 1
    if d[1] == 0:
        return 2
    if d[0] + d[1] == 0:
        return 3
    raise ValueError(f"{a} and {b} are not adjacent")


@dataclass(frozen=True)
class HexagonInfo:
    component: ComponentInfo
    hex_type: int
    anchor: Coord

    @property
    def axis_type(self) -> int:
        return AXIS_OF_SHARED[self.hex_type]

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.component.vertices),
            "hex_type": self.hex_type,
            "axis_type": self.axis_type,
            "anchor": list(self.anchor),
        }


def _require_k2(g: TorusGraph, s: VertexSet) -> None:
    if classify(g, s).h_qpds_nu != 2:
        raise NotK2Qpds("set is not a separated K2 quasi-perfect dominating set")


def _hexagons(g: TorusGraph, comps: Sequence[ComponentInfo]) -> list[HexagonInfo]:
    out = []
    for c in comps:
        a, b = c.vertices
        out.append(HexagonInfo(c, shared_type(ORIGIN, g.offset[a][b]), g.coord(a)))
    return out


def hexagon_types(g: TorusGraph, s: VertexSet) -> list[HexagonInfo]:
    """One entry per component, ordered by anchor."""
    _require_k2(g, s)
    return _hexagons(g, components(g, s))


# ---------------------------------------------------------------------------
# lifted geometry


@dataclass(frozen=True)
class Link:
    """A lifted component ``target`` displaced by ``disp`` at distance ``dist``."""

    target: int
    disp: Coord
    dist: int


class _Lift:
    """Components with lifted shapes and their neighbours within distance 3."""

    def __init__(self, g: TorusGraph, s: VertexSet, radius: int = 3):
        self.g = g
        self.s = s
        self.comps = components(g, s)
        self.anchors = [g.coord(c.vertices[0]) for c in self.comps]
        self.shapes: list[dict[int, Coord]] = []
        owner: dict[int, tuple[int, Coord]] = {}
        for k, c in enumerate(self.comps):
            pos = {c.vertices[0]: ORIGIN}
            queue = deque([c.vertices[0]])
            while queue:
                u = queue.popleft()
                for w, off in g.offset[u].items():
                    if w in s.ids and w not in pos:
                        pos[w] = pos[u] + off
                        queue.append(w)
            self.shapes.append(pos)
            for v, p in pos.items():
                owner[v] = (k, p)
        self.links: list[list[Link]] = [self._ball(k, owner, radius) for k in range(len(self.comps))]

    def _ball(self, k: int, owner: dict[int, tuple[int, Coord]], radius: int) -> list[Link]:
        g, base = self.g, self.anchors[k]
        seen = {p: 0 for p in self.shapes[k].values()}
        frontier = list(seen)
        found: dict[tuple[int, Coord], int] = {}
        for d in range(1, radius + 1):
            nxt = []
            for p in frontier:
                for off in OFFSETS:
                    q = p + off
                    if q in seen:
                        continue
                    seen[q] = d
                    nxt.append(q)
                    hit = owner.get(g.vid(base + q))
                    if hit is not None:
                        j, rel = hit
                        key = (j, q - rel)
                        if key != (k, ORIGIN) and key not in found:
                            found[key] = d
            frontier = nxt
        return [Link(j, disp, d) for (j, disp), d in sorted(found.items())]

    def centroid(self, k: int) -> tuple[float, float]:
        pts = list(self.shapes[k].values())
        return (sum(p[0] for p in pts) / len(pts), sum(p[1] for p in pts) / len(pts))

    def gamma_links(self, k: int) -> list[Link]:
        return [ln for ln in self.links[k] if ln.dist == 3]

    def sector(self, k: int, ln: Link) -> int:
        ck, cj = self.centroid(k), self.centroid(ln.target)
        x, y = embed((ln.disp[0] + cj[0] - ck[0], ln.disp[1] + cj[1] - ck[1]))
        angle = math.degrees(math.atan2(y, x)) % 360.0
        sec = int(angle // 60.0)
        if min(angle - 60.0 * sec, 60.0 * (sec + 1) - angle) < 1e-9:
            raise NoTableLayout("Gamma neighbour lies on a sector boundary")
        return sec % 6


# ---------------------------------------------------------------------------
# Gamma(S) on the torus


@dataclass(frozen=True)
class AuxGraph:
    """Gamma(S): components joined when their distance is exactly 3."""

    nodes: tuple[HexagonInfo | ComponentInfo, ...]
    edges: tuple[tuple[int, int], ...]

    def to_networkx(self) -> nx.Graph:
        gr = nx.Graph()
        gr.add_nodes_from(range(len(self.nodes)))
        gr.add_edges_from(self.edges)
        return gr

    def degrees(self) -> list[int]:
        deg = [0] * len(self.nodes)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def node_type(self, k: int) -> int | None:
        node = self.nodes[k]
        return node.axis_type if isinstance(node, HexagonInfo) else None

    def to_dict(self) -> dict:
        nodes = []
        for node in self.nodes:
            if isinstance(node, HexagonInfo):
                nodes.append(node.to_dict())
            else:
                nodes.append({"vertices": list(node.vertices), "shape": node.label()})
        return {"nodes": nodes, "edges": [list(e) for e in self.edges]}


def gamma_graph(g: TorusGraph, s: VertexSet) -> AuxGraph:
    lift = _Lift(g, s)
    if len(lift.comps) < 2:
        raise TooFewComponents("Gamma(S) needs at least two components")
    best: dict[tuple[int, int], int] = {}
    for k, links in enumerate(lift.links):
        for ln in links:
            if ln.target != k:
                key = (min(k, ln.target), max(k, ln.target))
                best[key] = min(best.get(key, 99), ln.dist)
    edges = tuple(sorted(e for e, d in best.items() if d == 3))
    if all(c.shape == "K2" for c in lift.comps):
        nodes: tuple = tuple(_hexagons(g, lift.comps))
    else:
        nodes = tuple(lift.comps)
    return AuxGraph(nodes, edges)


def mixed_triples(aux: AuxGraph) -> list[tuple[int, int, int]]:
    """Triangles of Gamma(S) whose three hexagons have three distinct types."""
    out = []
    adj = [set() for _ in aux.nodes]
    for a, b in aux.edges:
        adj[a].add(b)
        adj[b].add(a)
    for a, b in aux.edges:
        for c in adj[a] & adj[b]:
            if c > b:
                types = {aux.node_type(a), aux.node_type(b), aux.node_type(c)}
                if None not in types and len(types) == 3:
                    out.append((a, b, c))
    return sorted(out)


# ---------------------------------------------------------------------------
# type tables


@dataclass(frozen=True)
class TypeTable:
    """Gamma(S) of the lift laid out with one neighbour per 60 degree sector.

    ``steps[k][sector]`` is ``(node, displacement)``: walking from node ``k``
    in that direction reaches the lift of ``node`` translated by the
    displacement.  Types are axis labels.
    """

    m: int
    n: int
    anchors: tuple[Coord, ...]
    types: tuple[int, ...]
    steps: tuple[tuple[tuple[int, Coord], ...], ...]

    def step(self, k: int, sector: int) -> int:
        return self.steps[k][sector][0]

    def walk(self, k: int, sector: int, length: int) -> list[int]:
        """Types of ``length`` successive nodes starting at ``k``."""
        out = []
        for _ in range(length):
            out.append(self.types[k])
            k = self.step(k, sector)
        return out

    def grid(self, rows: int, cols: int, start: int = 0) -> list[list[int]]:
        """Zig-zag layout: even columns sit half a row above odd ones."""
        out = []
        row_start = start
        for _ in range(rows):
            line, k = [], row_start
            for c in range(cols):
                line.append(self.types[k])
                k = self.step(k, 5 if c % 2 == 0 else 0)
            out.append(line)
            row_start = self.step(row_start, DOWN)
        return out

    def render(self, rows: int | None = None, cols: int | None = None, start: int = 0) -> str:
        """Monospace table; ``^`` marks the raised half-rows."""
        rows = rows or min(len(self.types), 10)
        cols = cols or min(2 * len(self.types), 20)
        grid = self.grid(rows, cols, start)
        lines = []
        for line in grid:
            lines.append(" ".join(("^" if c % 2 == 0 else "_") + str(t) for c, t in enumerate(line)))
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "torus": [self.m, self.n],
            "nodes": [
                {
                    "anchor": list(a),
                    "type": t,
                    "steps": {SECTORS[d]: [j, list(disp)] for d, (j, disp) in enumerate(st)},
                }
                for a, t, st in zip(self.anchors, self.types, self.steps)
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _table(lift: _Lift) -> TypeTable:
    g = lift.g
    hexes = _hexagons(g, lift.comps)
    steps = []
    for k in range(len(lift.comps)):
        slots: list[tuple[int, Coord] | None] = [None] * 6
        for ln in lift.gamma_links(k):
            sec = lift.sector(k, ln)
            if slots[sec] is not None:
                raise NoTableLayout(f"two Gamma neighbours of node {k} in sector {SECTORS[sec]}")
            slots[sec] = (ln.target, ln.disp)
        if any(x is None for x in slots):
            raise NoTableLayout(f"node {k} lacks a Gamma neighbour in some sector")
        steps.append(tuple(slots))  # type: ignore[arg-type]
    return TypeTable(
        g.m,
        g.n,
        tuple(lift.anchors),
        tuple(h.axis_type for h in hexes),
        tuple(steps),
    )


def type_table(g: TorusGraph, s: VertexSet) -> TypeTable:
    _require_k2(g, s)
    return _table(_Lift(g, s))


# ---------------------------------------------------------------------------
# words


def primitive_period(seq: Sequence) -> int:
    """Least ``p`` with ``seq[i] == seq[i + p]`` throughout."""
    n = len(seq)
    for p in range(1, n + 1):
        if all(seq[i] == seq[i + p] for i in range(n - p)):
            return p
    return n


def least_rotation(word: str) -> str:
    if not word:
        return word
    return min(word[i:] + word[:i] for i in range(len(word)))


def necklace(word: str, reflect: bool = True) -> str:
    """Canonical cyclic word; with ``reflect`` also up to reversal."""
    best = least_rotation(word)
    if reflect:
        best = min(best, least_rotation(word[::-1]))
    return best


def compress(word: str) -> str:
    """Run-length notation, e.g. ``11122`` -> ``1^{3}2^{2}``."""
    out = []
    i = 0
    while i < len(word):
        j = i
        while j < len(word) and word[j] == word[i]:
            j += 1
        out.append(word[i] if j - i == 1 else f"{word[i]}^{{{j - i}}}")
        i = j
    return "".join(out)


def expand_word(text: str) -> str:
    """Expand exponent notation such as ``1^{3}2^2``, ``1(12)^3`` or ``2^{-1}(21)^2``.

    Exponents are a single digit or a braced integer; ``-1`` inverts and the
    result is freely reduced.  A letter left inverted is an error.
    """
    pos = 0

    def parse_seq() -> list[tuple[str, int]]:
        nonlocal pos
        out: list[tuple[str, int]] = []
        while pos < len(text) and text[pos] != ")":
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            if ch == "(":
                pos += 1
                atom = parse_seq()
                if pos >= len(text) or text[pos] != ")":
                    raise ValueError(f"unbalanced parentheses in {text!r}")
                pos += 1
            elif ch.isalnum():
                atom = [(ch, 1)]
                pos += 1
            else:
                raise ValueError(f"unexpected {ch!r} in {text!r}")
            exp = 1
            if pos < len(text) and text[pos] == "^":
                pos += 1
                if pos < len(text) and text[pos] == "{":
                    end = text.index("}", pos)
                    exp = int(text[pos + 1 : end])
                    pos = end + 1
                else:
                    sign = 1
                    if pos < len(text) and text[pos] == "-":
                        sign, pos = -1, pos + 1
                    exp = sign * int(text[pos])
                    pos += 1
            if exp < 0:
                atom = [(c, -e) for c, e in reversed(atom)]
                exp = -exp
            for _ in range(exp):
                for letter in atom:
                    if out and out[-1] == (letter[0], -letter[1]):
                        out.pop()
                    else:
                        out.append(letter)
        return out

    letters = parse_seq()
    if pos != len(text):
        raise ValueError(f"unbalanced parentheses in {text!r}")
    if any(e < 0 for _, e in letters):
        raise ValueError(f"{text!r} does not reduce to a positive word")
    return "".join(c for c, _ in letters)


# ---------------------------------------------------------------------------
# triple periods


@dataclass(frozen=True)
class TriplePeriod:
    """Primitive periods read downward along the three table directions."""

    diag: str
    vert: str
    anti: str

    def __post_init__(self) -> None:
        for w in self.words():
            if not w or primitive_period(w + w) != len(w):
                raise ValueError(f"{w!r} is not a primitive period")

    def words(self) -> tuple[str, str, str]:
        return (self.diag, self.vert, self.anti)

    def canonical(self) -> "TriplePeriod":
        return TriplePeriod(*(least_rotation(w) for w in self.words()))

    def matches(self, other: "TriplePeriod") -> bool:
        """Equality up to the reading position on each line."""
        return self.canonical() == other.canonical()

    @classmethod
    def parse(cls, text: str) -> "TriplePeriod":
        """Parse ``((w1),(w2),(w3))`` in exponent notation."""
        body = text.strip()
        if body.startswith("((") and body.endswith("))"):
            body = body[1:-1]
        parts, depth, cur = [], 0, []
        for ch in body:
            if ch == "," and depth == 0:
                parts.append("".join(cur))
                cur = []
                continue
            depth += ch == "("
            depth -= ch == ")"
            cur.append(ch)
        parts.append("".join(cur))
        if len(parts) != 3:
            raise ValueError(f"expected three words in {text!r}")
        words = []
        for p in parts:
            p = p.strip()
            if p.startswith("(") and p.endswith(")") and expand_word(p[1:-1]):
                p = p[1:-1]
            words.append(expand_word(p))
        return cls(*words)

    def notation(self) -> str:
        return "(" + ",".join(f"({compress(w)})" for w in self.words()) + ")"

    def to_dict(self) -> dict:
        return {"diag": self.diag, "vert": self.vert, "anti": self.anti, "notation": self.notation()}


def _read(table: TypeTable, start: int, sector: int) -> str:
    seq = table.walk(start, sector, 2 * len(table.types) + 2)
    return "".join(str(t) for t in seq[: primitive_period(seq)])


def low_nodes(table: TypeTable) -> list[int]:
    """Nodes whose upper neighbour carries the same type."""
    return [k for k in range(len(table.types)) if table.types[table.step(k, UP)] == table.types[k]]


def triple_period(g: TorusGraph, s: VertexSet, low_type_anchor: tuple[int, int] | None = None) -> TriplePeriod:
    _require_k2(g, s)
    lift = _Lift(g, s)
    table = _table(lift)
    if len(set(table.types)) != 2:
        raise NotTwoTypes(f"pattern has types {sorted(set(table.types))}")
    lows = low_nodes(table)
    if not lows:
        raise NoLowType("no node has a vertical successor of its own type")
    if low_type_anchor is None:
        start = min(lows, key=lambda k: table.anchors[k])
    else:
        want = Coord(low_type_anchor[0] % g.m, low_type_anchor[1] % g.n)
        hits = [k for k in lows if table.anchors[k] == want]
        if not hits:
            raise NoLowType(f"{tuple(low_type_anchor)} is not the anchor of a low node")
        start = hits[0]
    return TriplePeriod(*(_read(table, start, d) for d in (DIAGONAL, VERTICAL, ANTI_DIAGONAL)))


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class K2Family:
    """Verdict of ``classify_k2``.

    ``kind`` is ``parallel``, ``t-linear``, ``sandwiched``, ``diagonal`` or
    ``mixed``.  ``types`` is ``(minority, majority)`` for t-linear patterns;
    ``axis`` is the absent type of a diagonal pattern.
    """

    kind: str
    types: tuple[int, ...] = ()
    t: int | None = None
    word: str | None = None
    axis: int | None = None
    hex_type: int | None = None

    def label(self) -> str:
        if self.kind == "parallel":
            return f"Parallel({self.hex_type})"
        if self.kind == "t-linear":
            return f"TLinear({self.t},({self.types[0]},{self.types[1]}))"
        if self.kind == "sandwiched":
            return f"Sandwiched({self.word})"
        if self.kind == "diagonal":
            return f"Diagonal({self.axis},{compress(self.word or '')})"
        return "Mixed"

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind, "label": self.label(), "types": list(self.types)}
        for key in ("t", "word", "axis", "hex_type"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


def _runs(lift: _Lift, types: Sequence[int], which: int) -> list[tuple[dict[int, Coord], bool, set[int]]]:
    """Lifted Gamma-components of one type.

    Each run is ``(positions, infinite, sectors)`` where ``sectors`` holds
    the directions of the Gamma edges used inside the run.
    """
    seen: set[int] = set()
    out = []
    for k in range(len(types)):
        if types[k] != which or k in seen:
            continue
        pos = {k: ORIGIN}
        infinite = False
        sectors: set[int] = set()
        queue = deque([k])
        while queue:
            u = queue.popleft()
            for ln in lift.gamma_links(u):
                if types[ln.target] != which:
                    continue
                sectors.add(lift.sector(u, ln))
                p = pos[u] + ln.disp
                if ln.target in pos:
                    if pos[ln.target] != p:
                        infinite = True
                else:
                    pos[ln.target] = p
                    queue.append(ln.target)
        seen.update(pos)
        out.append((pos, infinite, sectors))
    return out


def _row_sequence(lift: _Lift, types: Sequence[int], w: Coord) -> list[int] | None:
    """Types of the lines ``c + Z w`` of hexagons, in transverse order.

    Returns ``None`` if two hexagons on one line have different types.
    """
    lat = period_lattice(lift.s)
    if not lat.contains(w):
        return None

    def cross(c: tuple[int, int]) -> int:
        return w[0] * c[1] - w[1] * c[0]

    period = abs(gcd(cross(lat.u), cross(lat.v)))
    if period == 0:
        return None
    rows: dict[int, int] = {}
    for k, anchor in enumerate(lift.anchors):
        pts = list(lift.shapes[k].values())
        # doubled centroid keeps the key integral for two-vertex components
        key = (2 * len(pts) * cross(anchor) + 2 * sum(cross(p) for p in pts)) // len(pts) % (2 * period)
        if rows.setdefault(key, types[k]) != types[k]:
            return None
    return [rows[key] for key in sorted(rows)]


ROW_VECTORS = (Coord(6, 0), Coord(0, 6), Coord(6, -6))


def _sandwich(lift: _Lift, types: Sequence[int]) -> tuple[str, int] | None:
    for w in ROW_VECTORS:
        seq = _row_sequence(lift, types, w)
        if not seq or len(seq) % 3:
            continue
        for shift in range(3):
            rot = seq[shift:] + seq[:shift]
            j = rot[1]
            if all(rot[i + 1] == rot[i + 2] == j != rot[i] for i in range(0, len(rot), 3)):
                xi = "".join(str(rot[i]) for i in range(0, len(rot), 3))
                xi = xi[: primitive_period(xi + xi)] if len(set(xi)) > 1 else xi[0]
                return necklace(xi), j
    return None


def classify_k2(g: TorusGraph, s: VertexSet) -> K2Family:
    _require_k2(g, s)
    lift = _Lift(g, s)
    hexes = _hexagons(g, lift.comps)
    types = [h.axis_type for h in hexes]
    present = sorted(set(types))
    if len(present) == 1:
        return K2Family("parallel", (present[0],), hex_type=hexes[0].hex_type)
    if len(present) == 2:
        by_count = sorted(present, key=lambda t: (types.count(t), t))
        for minority in by_count:
            majority = next(t for t in present if t != minority)
            runs = _runs(lift, types, minority)
            sizes = {len(pos) for pos, _, _ in runs}
            if any(inf for _, inf, _ in runs) or len(sizes) != 1:
                continue
            axes = {sec % 3 for _, _, secs in runs for sec in secs}
            if len(axes) <= 1:
                return K2Family("t-linear", (minority, majority), t=sizes.pop())
    found = _sandwich(lift, types)
    if found is not None and len(present) == 3:
        xi, j = found
        return K2Family("sandwiched", tuple(sorted(int(c) for c in set(xi))) + (j,), word=xi)
    if len(present) == 2:
        diag = _diagonal(lift, types)
        if diag is not None:
            absent = ({1, 2, 3} - set(present)).pop()
            return K2Family("diagonal", tuple(present), word=diag, axis=absent)
    return K2Family("mixed", tuple(present))


def _diagonal(lift: _Lift, types: Sequence[int]) -> str | None:
    """Word of line types when the table splits into constant-type lines along one axis."""
    table = _table(lift)
    for axis in range(3):
        if all(types[table.step(k, axis)] == types[k] for k in range(len(types))):
            seq = table.walk(0, axis + 1, 2 * len(types) + 2)
            return necklace("".join(str(t) for t in seq[: primitive_period(seq)]))
    return None


def sandwich_bisequence(g: TorusGraph, s: VertexSet) -> str:
    """Necklace of the row word; a constant word means every row is surrounded."""
    _require_k2(g, s)
    lift = _Lift(g, s)
    types = [h.axis_type for h in _hexagons(g, lift.comps)]
    found = _sandwich(lift, types) if len(lift.comps) >= 3 else None
    if found is None:
        raise NotSandwiched(f"pattern is {classify_k2(g, s).label()}")
    return found[0]


def period_dimensions(eta: str | Sequence) -> tuple[int, int]:
    """Least torus sides on which the diagonal pattern with word ``eta`` closes up."""
    size = len(eta)
    if size == 0:
        raise EmptyWord("eta must be nonempty")
    if size == 2:
        return (20, 5)
    if size % 2 == 0:
        return (10 * size, 5 * size)
    return (10 * size, 10 * size)
