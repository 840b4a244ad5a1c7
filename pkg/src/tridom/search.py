"""Exhaustive, pruned enumeration of domination patterns on a torus.

The search assigns vertices in/out of ``S`` depth first.  Every vertex
carries a count constraint on its neighbours inside ``S``: outside vertices
need a count in the predicate's target set (``{1}``, ``{2}`` or ``{1, 2}``),
members need a count in the predicate's *member degree* set (``{0}`` for
independent sets, ``{nu - 1}`` for ``K_nu`` components, ``{2}`` for cycles).
Bounds ``[in, in + undecided]`` on each count are propagated to force
neighbours in or out.  With an imposed translation lattice, the decision
variables are the orbits of that lattice and a solution is a union of orbits.
"""

from __future__ import annotations

import json
import re
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .domination import DominationReport, classify
from .errors import BudgetExceeded
from .lattice import TorusGraph, VertexSet, build_torus, canonical_form
from .periodic import LatticeBasis

DEFAULT_NODE_BUDGET = 10**8
DEFAULT_TIME_BUDGET = 300.0

_ALL = None  # unconstrained member degree


@dataclass(frozen=True)
class Predicate:
    """A domination predicate.

    ``name`` is one of ``pds``, ``perfect_code``, ``spds``, ``spds_isolated``,
    ``spds_cycles``, ``qpds`` or ``k_qpds`` (with ``nu``).
    """

    name: str
    nu: int | None = None

    @property
    def targets(self) -> frozenset[int]:
        if self.name in ("pds", "perfect_code"):
            return frozenset({1})
        if self.name.startswith("spds"):
            return frozenset({2})
        return frozenset({1, 2})

    @property
    def member_degrees(self) -> frozenset[int] | None:
        if self.name in ("perfect_code", "spds_isolated"):
            return frozenset({0})
        if self.name == "spds_cycles":
            return frozenset({2})
        if self.name == "k_qpds":
            return frozenset({self.nu - 1})
        return _ALL

    @property
    def label(self) -> str:
        if self.name == "k_qpds":
            return f"k{self.nu}-qpds"
        return self.name.replace("_", "-")

    def holds(self, rep: DominationReport) -> bool:
        if not rep.is_proper or not rep.members:
            return False
        shapes = {c.shape for c in rep.components}
        if self.name == "pds":
            return rep.is_pds
        if self.name == "perfect_code":
            return rep.is_perfect_code
        if self.name == "spds":
            return rep.is_spds
        if self.name == "spds_isolated":
            return rep.is_spds and shapes == {"K1"}
        if self.name == "spds_cycles":
            return rep.is_spds and shapes == {"CYCLE"}
        if self.name == "qpds":
            return rep.is_qpds
        return rep.h_qpds_nu == self.nu

    @classmethod
    def parse(cls, text: str) -> "Predicate":
        key = text.strip().lower().replace("-", "_")
        m = re.fullmatch(r"k_?qpds\((\d)\)|k(\d)_qpds", key)
        if m:
            nu = int(m.group(1) or m.group(2))
            if nu not in (1, 2, 3):
                raise ValueError(f"nu must be 1, 2 or 3, got {nu}")
            return cls("k_qpds", nu)
        if key in ("pds", "perfect_code", "spds", "spds_isolated", "spds_cycles", "qpds"):
            return cls(key)
        raise ValueError(f"unknown predicate {text!r}")


PDS = Predicate("pds")
PERFECT_CODE = Predicate("perfect_code")
SPDS = Predicate("spds")
SPDS_ISOLATED = Predicate("spds_isolated")
SPDS_CYCLES = Predicate("spds_cycles")
QPDS = Predicate("qpds")


def K_QPDS(nu: int) -> Predicate:
    return Predicate("k_qpds", nu)


@dataclass
class SearchProblem:
    graph: TorusGraph
    predicate: Predicate
    imposed_symmetry: LatticeBasis | None = None
    limit: int | None = None
    canonicalize: bool = False
    group: str = "translations"
    proper: bool = True
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float = DEFAULT_TIME_BUDGET
    # post filter on verified solutions (used for family signatures)
    accept: Callable[[VertexSet], bool] | None = None
    # vertices forced into / out of S before the search starts
    fixed_in: Sequence[int] = ()
    fixed_out: Sequence[int] = ()


@dataclass
class SearchResult:
    solutions: list[VertexSet]
    total_count: int
    exhausted: bool
    nodes_expanded: int
    elapsed: float
    predicate: str = ""
    torus: tuple[int, int] = (0, 0)
    budget: tuple[int, float] = (0, 0.0)
    stop_reason: str = "exhausted"

    def to_dict(self, timings: bool = False) -> dict:
        out = {
            "predicate": self.predicate,
            "torus": list(self.torus),
            "total_count": self.total_count,
            "exhausted": self.exhausted,
            "nodes_expanded": self.nodes_expanded,
            "budget": {"nodes": self.budget[0], "seconds": self.budget[1]},
            "stop_reason": self.stop_reason,
            "solutions": [[list(c) for c in s.coords()] for s in self.solutions],
        }
        if timings:
            out["elapsed"] = round(self.elapsed, 6)
        return out


def _orbits(g: TorusGraph, basis: LatticeBasis | None) -> tuple[list[int], list[list[int]]]:
    n_v = g.order
    if basis is None:
        return list(range(n_v)), [[v] for v in range(n_v)]
    orbit_of = [-1] * n_v
    members: list[list[int]] = []
    for v in range(n_v):
        if orbit_of[v] >= 0:
            continue
        k = len(members)
        orb = [v]
        orbit_of[v] = k
        stack = [v]
        while stack:
            x = stack.pop()
            for a, b in (basis.u, basis.v):
                y = g.translate(x, a, b)
                if orbit_of[y] < 0:
                    orbit_of[y] = k
                    orb.append(y)
                    stack.append(y)
        orb.sort()
        members.append(orb)
    return orbit_of, members


class _Stop(Exception):
    pass


class _Engine:
    """Orbit-level backtracking with count-bound propagation."""

    def __init__(self, p: SearchProblem):
        self.p = p
        g = p.graph
        self.g = g
        self.orbit_of, self.orbits = _orbits(g, p.imposed_symmetry)
        k = len(self.orbits)
        self.k = k
        self.rep = [o[0] for o in self.orbits]
        # neighbour orbits of each representative, with multiplicity
        nbr: list[dict[int, int]] = []
        for r in self.rep:
            d: dict[int, int] = {}
            for w in g.neighbors[r]:
                o = self.orbit_of[w]
                d[o] = d.get(o, 0) + 1
            nbr.append(d)
        self.nbr = [tuple(sorted(d.items())) for d in nbr]
        rev: list[list[tuple[int, int]]] = [[] for _ in range(k)]
        for r, d in enumerate(nbr):
            for o, mult in d.items():
                rev[o].append((r, mult))
        self.rev = [tuple(x) for x in rev]
        self.deg = [sum(d.values()) for d in nbr]
        pred = p.predicate
        self.targets = pred.targets
        self.tmin, self.tmax = min(self.targets), max(self.targets)
        md = pred.member_degrees
        self.mdeg = md
        self.mmin = min(md) if md is not None else 0
        self.mmax = max(md) if md is not None else 99
        # outside vertices must see one clique; K3 members likewise
        self.sep = pred.name == "k_qpds"
        self.triangle = self.sep and pred.nu == 3
        self.state = [-1] * k
        self.cnt_in = [0] * k
        self.cnt_und = list(self.deg)
        self.trail: list[int] = []
        self.nodes = 0
        self.start = 0.0
        self.raw: list[VertexSet] = []
        self.n_in = 0

    # -- state changes -------------------------------------------------
    def _set(self, o: int, val: int) -> None:
        self.state[o] = val
        self.trail.append(o)
        if val:
            self.n_in += 1
        ci, cu = self.cnt_in, self.cnt_und
        for r, mult in self.rev[o]:
            cu[r] -= mult
            if val:
                ci[r] += mult

    def _undo(self, mark: int) -> None:
        trail, state = self.trail, self.state
        ci, cu = self.cnt_in, self.cnt_und
        while len(trail) > mark:
            o = trail.pop()
            val = state[o]
            state[o] = -1
            if val:
                self.n_in -= 1
            for r, mult in self.rev[o]:
                cu[r] += mult
                if val:
                    ci[r] -= mult

    def _ok(self, val: int, lo: int, hi: int) -> bool:
        if val:
            md = self.mdeg
            if md is None:
                return True
            return any(lo <= d <= hi for d in md)
        return any(lo <= t <= hi for t in self.targets)

    def _assign(self, o: int, val: int) -> bool:
        """Set orbit ``o`` and propagate; False on conflict."""
        queue = [(o, val)]
        state = self.state
        while queue:
            o, val = queue.pop()
            cur = state[o]
            if cur >= 0:
                if cur != val:
                    return False
                continue
            lo = self.cnt_in[o]
            if not self._ok(val, lo, lo + self.cnt_und[o]):
                return False
            self._set(o, val)
            # the touched orbit itself and every orbit whose count changed
            check = [o] + [r for r, _ in self.rev[o]]
            for r in check:
                lo = self.cnt_in[r]
                und = self.cnt_und[r]
                hi = lo + und
                sr = state[r]
                if sr < 0:
                    can_out = self._ok(0, lo, hi)
                    can_in = self._ok(1, lo, hi)
                    if not can_out and not can_in:
                        return False
                    if not can_out:
                        queue.append((r, 1))
                    elif not can_in:
                        queue.append((r, 0))
                    continue
                if sr:
                    if self.mdeg is None:
                        continue
                    amin, amax = self.mmin, self.mmax
                else:
                    amin, amax = self.tmin, self.tmax
                if lo > amax or hi < amin:
                    return False
                if und:
                    if lo == amax:
                        for w, _ in self.nbr[r]:
                            if state[w] < 0:
                                queue.append((w, 0))
                    elif hi == amin:
                        for w, _ in self.nbr[r]:
                            if state[w] < 0:
                                queue.append((w, 1))
                if self.sep and (sr == 0 or self.triangle) and not self._clique_ok(r, queue):
                    return False
        return True

    def _clique_ok(self, r: int, queue: list) -> bool:
        g, state, orbit_of = self.g, self.state, self.orbit_of
        v = self.rep[r]
        ins = [w for w in g.neighbors[v] if state[orbit_of[w]] == 1]
        if not ins:
            return True
        for i in range(len(ins)):
            for j in range(i + 1, len(ins)):
                if not g.lift_adjacent(v, ins[i], ins[j]):
                    return False
        for w in g.neighbors[v]:
            if state[orbit_of[w]] < 0 and not all(g.lift_adjacent(v, a, w) for a in ins):
                queue.append((orbit_of[w], 0))
        return True

    # -- branching -----------------------------------------------------
    def _pick(self) -> int:
        state, ci, cu = self.state, self.cnt_in, self.cnt_und
        best = -1
        best_key = None
        for r in range(self.k):
            sr = state[r]
            if sr < 0 or cu[r] == 0:
                continue
            need = (self.mmin if sr else self.tmin) - ci[r]
            if need <= 0:
                continue
            key = cu[r] - need
            if best_key is None or key < best_key:
                best_key = key
                best = r
                if key == 0:
                    break
        if best >= 0:
            for w, _ in self.nbr[best]:
                if state[w] < 0:
                    return w
        frontier = -1
        first = -1
        for r in range(self.k):
            if state[r] >= 0:
                continue
            if first < 0:
                first = r
            if self.cnt_und[r] < self.deg[r]:
                frontier = r
                break
        return frontier if frontier >= 0 else first

    def _budget(self) -> None:
        self.nodes += 1
        if self.nodes > self.p.node_budget:
            raise _Stop("node budget")
        if (self.nodes & 1023) == 0 and time.perf_counter() - self.start > self.p.time_budget:
            raise _Stop("time budget")

    def _leaf(self) -> None:
        ids = [v for o in range(self.k) if self.state[o] == 1 for v in self.orbits[o]]
        s = VertexSet(self.g.m, self.g.n, ids)
        if self.p.proper and len(s) == self.g.order:
            return
        rep = classify(self.g, s)
        ok = self.p.predicate.holds(rep) if self.p.proper else _holds_improper(self.p.predicate, rep)
        if not ok:
            return
        if self.p.accept is not None and not self.p.accept(s):
            return
        self.raw.append(s)
        if self.p.limit is not None and not self.p.canonicalize and len(self.raw) >= self.p.limit:
            raise _Stop("limit")

    def _dfs(self) -> None:
        self._budget()
        o = self._pick()
        if o < 0:
            self._leaf()
            return
        for val in (1, 0):
            mark = len(self.trail)
            if self._assign(o, val):
                self._dfs()
            self._undo(mark)

    def run(self) -> tuple[list[VertexSet], bool, str]:
        self.start = time.perf_counter()
        mark = len(self.trail)
        ok = True
        for v in self.p.fixed_in:
            ok = ok and self._assign(self.orbit_of[v], 1)
        for v in self.p.fixed_out:
            ok = ok and self._assign(self.orbit_of[v], 0)
        # isolated orbits (no constraint touches them) still need a pass
        for o in range(self.k):
            if not ok:
                break
            lo, hi = self.cnt_in[o], self.cnt_in[o] + self.cnt_und[o]
            if self.state[o] < 0 and not self._ok(0, lo, hi):
                ok = self._assign(o, 1)
        reason = "exhausted"
        try:
            if ok:
                self._dfs()
        except _Stop as stop:
            reason = str(stop)
        self._undo(mark)
        return self.raw, reason == "exhausted", reason


def _holds_improper(pred: Predicate, rep: DominationReport) -> bool:
    if not rep.members:
        return False
    if rep.is_proper:
        return pred.holds(rep)
    # S = V: every count constraint is vacuous; member-degree rules still apply
    shapes = {c.shape for c in rep.components}
    if pred.name in ("pds", "spds", "qpds"):
        return True
    if pred.name == "spds_cycles":
        return shapes == {"CYCLE"}
    return False


def enumerate_solutions(p: SearchProblem) -> SearchResult:
    """Enumerate every solution of ``p`` (or orbit representatives).

    Raises ``BudgetExceeded`` (carrying the partial result) when the node or
    time budget runs out; hitting ``limit`` just returns ``exhausted=False``.
    """
    t0 = time.perf_counter()
    engine = _Engine(p)
    raw, exhausted, reason = engine.run()
    sols = raw
    if p.canonicalize:
        forms: dict[tuple[int, ...], VertexSet] = {}
        for s in raw:
            c = canonical_form(s, p.graph, p.group)
            forms.setdefault(c.sorted(), c)
        sols = [forms[k] for k in sorted(forms)]
        if p.limit is not None and len(sols) > p.limit:
            sols = sols[: p.limit]
            exhausted = False
            reason = "limit"
    result = SearchResult(
        solutions=sols,
        total_count=len(sols),
        exhausted=exhausted,
        nodes_expanded=engine.nodes,
        elapsed=time.perf_counter() - t0,
        predicate=p.predicate.label,
        torus=(p.graph.m, p.graph.n),
        budget=(p.node_budget, p.time_budget),
        stop_reason=reason,
    )
    if reason in ("node budget", "time budget"):
        raise BudgetExceeded(f"search stopped: {reason}", result)
    return result


# ``enumerate`` is the public name; keep the builtin reachable inside this module.
enumerate_ = enumerate_solutions


@dataclass(frozen=True)
class Verdict:
    """Tri-state existence answer: ``found`` is True, False or None (unknown)."""

    found: bool | None
    witness: VertexSet | None = None
    nodes: int = 0

    def symbol(self) -> str:
        return {True: "Y", False: "n", None: "?"}[self.found]

    def word(self) -> str:
        return {True: "yes", False: "no", None: "unknown"}[self.found]

    def __iter__(self):
        yield self.found
        yield self.witness


def exists(p: SearchProblem) -> Verdict:
    """Short-circuit search for one solution."""
    q = SearchProblem(**{**p.__dict__, "limit": 1, "canonicalize": False})
    try:
        res = enumerate_solutions(q)
    except BudgetExceeded as exc:
        return Verdict(None, None, exc.result.nodes_expanded if exc.result else 0)
    if res.solutions:
        return Verdict(True, res.solutions[0], res.nodes_expanded)
    return Verdict(False, None, res.nodes_expanded)


@dataclass
class ExistenceTable:
    predicate: str
    m_values: list[int]
    n_values: list[int]
    cells: dict[tuple[int, int], Verdict] = field(default_factory=dict)

    def yes_cells(self) -> list[tuple[int, int]]:
        return sorted(k for k, v in self.cells.items() if v.found is True)

    def to_dict(self) -> dict:
        return {
            "predicate": self.predicate,
            "m": self.m_values,
            "n": self.n_values,
            "grid": [[self.cells[(m, n)].word() for n in self.n_values] for m in self.m_values],
            "witnesses": {
                f"{m},{n}": [list(c) for c in v.witness.coords()]
                for (m, n), v in sorted(self.cells.items())
                if v.witness is not None
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def render(self) -> str:
        """Aligned monospace grid: rows are ``m``, columns are ``n``."""
        w = max(len(str(x)) for x in self.m_values + self.n_values) + 1
        w0 = max(3, max(len(str(m)) for m in self.m_values))
        head = "m\\n".rjust(w0) + "".join(str(n).rjust(w) for n in self.n_values)
        lines = [head]
        for m in self.m_values:
            lines.append(str(m).rjust(w0) + "".join(self.cells[(m, n)].symbol().rjust(w) for n in self.n_values))
        return "\n".join(lines)


def existence_table(
    predicate: Predicate | str,
    m_range: Iterable[int],
    n_range: Iterable[int],
    node_budget: int = DEFAULT_NODE_BUDGET,
    time_budget: float = DEFAULT_TIME_BUDGET,
) -> ExistenceTable:
    pred = Predicate.parse(predicate) if isinstance(predicate, str) else predicate
    ms, ns = list(m_range), list(n_range)
    if not ms or not ns:
        raise ValueError("ranges must be nonempty")
    table = ExistenceTable(pred.label, ms, ns)
    for m in ms:
        for n in ns:
            g = build_torus((m, n))
            table.cells[(m, n)] = exists(
                SearchProblem(g, pred, node_budget=node_budget, time_budget=time_budget)
            )
    return table
