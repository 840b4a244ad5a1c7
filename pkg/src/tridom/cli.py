"""Command-line front end.

Every command prints one JSON envelope ``{version, command, input, result}``
(or text / SVG with ``--format``).  Exit status: 0 on success, 1 on domain
or usage errors, 2 when a search budget runs out.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import __version__
from .analysis import (
    classify_k2,
    gamma_graph,
    hexagon_types,
    mixed_triples,
    triple_period,
    type_table,
)
from .constructions import FAMILIES, PatternSpec, construct, minimal_torus
from .document import PatternDocument
from .domination import classify
from .errors import BudgetExceeded, DocumentError, DomainError
from .lattice import TorusSpec, VertexSet, build_torus
from .periodic import LatticeBasis
from .search import (
    DEFAULT_NODE_BUDGET,
    DEFAULT_TIME_BUDGET,
    Predicate,
    SearchProblem,
    enumerate_solutions,
    existence_table,
)
from .svg import SvgStyle, render_svg

ENVELOPE_VERSION = 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


def _torus(text: str) -> tuple[int, int]:
    try:
        m, n = (int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected m,n, got {text!r}") from None
    return m, n


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers a,b, got {text!r}") from None
    return a, b


def _budget(text: str) -> tuple[int, float]:
    try:
        nodes, secs = text.split(",")
        return int(float(nodes)), float(secs)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected nodes,seconds, got {text!r}") from None


def parse_range(text: str) -> list[int]:
    """``3..6``, ``3,5,7`` or mixtures such as ``3..9,14``."""
    out: list[int] = []
    for part in text.replace(" ", "").split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return sorted(set(out))


def _range_arg(text: str) -> list[int]:
    try:
        return parse_range(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad range {text!r}") from None


def _lattice(text: str) -> LatticeBasis:
    try:
        nums = [int(x) for x in text.replace(";", ",").replace(" ", "").split(",")]
        if len(nums) != 4:
            raise ValueError
        return LatticeBasis((nums[0], nums[1]), (nums[2], nums[3]))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected u1,u2;v1,v2 with nonzero determinant, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--torus", type=_torus, help="torus sides m,n")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "text", "svg"), default="json")
    common.add_argument("--budget", type=_budget, help="search budget nodes,seconds")
    common.add_argument("--seedfile", help="pattern document to read")
    common.add_argument("--threads", type=int, default=1, help="worker count; results do not depend on it")

    parser = _Parser(prog="tridom", description="Dominating sets on triangular-lattice tori.")
    parser.add_argument("--version", action="version", version=f"tridom {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", parents=[common], help="build a named pattern")
    p.add_argument("family", nargs="?", choices=FAMILIES)
    p.add_argument("--hex-type", type=int)
    p.add_argument("--t", type=int)
    p.add_argument("--types", type=_pair)
    p.add_argument("--word")
    p.add_argument("--axis", type=int)
    p.add_argument("--mirror", action="store_true")
    p.add_argument("--offset", type=_pair, default=(0, 0))

    for name, text in (
        ("verify", "report domination statistics of a set"),
        ("classify", "classify a set, with K2 family analysis"),
        ("render", "draw a set as SVG"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--input", help="file with a pattern document or a JSON envelope ('-' for stdin)")
        if name == "render":
            p.add_argument("--labels", action="store_true", help="print hexagon types")
            p.add_argument("--gamma", action="store_true", help="draw Gamma(S)")

    p = sub.add_parser("search", parents=[common], help="enumerate sets satisfying a predicate")
    p.add_argument("--predicate", required=True)
    p.add_argument("--limit", type=int)
    p.add_argument("--canonicalize", action="store_true")
    p.add_argument("--group", choices=("translations", "full"), default="translations")
    p.add_argument("--lattice", type=_lattice, help="impose translations u1,u2;v1,v2")

    p = sub.add_parser("table", parents=[common], help="existence grid over ranges of m and n")
    p.add_argument("--predicate", required=True)
    p.add_argument("--m", type=_range_arg, required=True)
    p.add_argument("--n", type=_range_arg, required=True)
    return parser


# ---------------------------------------------------------------------------
# inputs


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _set_from_text(text: str, torus: tuple[int, int] | None) -> tuple[VertexSet, dict]:
    """A set from a JSON envelope (as printed by ``construct``) or a document."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            env = json.loads(text)
            res = env["result"]
            m, n = torus or tuple(res["torus"])
            coords = [tuple(c) for c in res["vertices"]]
        except (ValueError, KeyError, TypeError) as exc:
            raise DocumentError(f"unreadable JSON input: {exc}") from None
        return VertexSet.from_coords(TorusSpec(m, n), coords), {"source": "json"}
    doc = PatternDocument.parse(text)
    if doc.pattern is not None:
        spec = TorusSpec(*(torus or minimal_torus(doc.pattern)))
        return construct(doc.pattern, spec), {"source": "document", "pattern": doc.pattern.to_dict()}
    if torus is None:
        raise UsageError("--torus is required for an explicit vertex list")
    return VertexSet.from_coords(TorusSpec(*torus), doc.vertices), {"source": "document"}


def _input_set(args: argparse.Namespace) -> tuple[VertexSet, dict]:
    path = getattr(args, "input", None) or args.seedfile
    if path is None:
        if sys.stdin is None or sys.stdin.isatty():
            raise UsageError("give --seedfile or --input, or pipe a document on stdin")
        path = "-"
    return _set_from_text(_read_text(path), args.torus)


# ---------------------------------------------------------------------------
# commands


def _report_summary(g, s: VertexSet) -> dict:
    rep = classify(g, s)
    d = rep.to_dict()
    return {k: d[k] for k in ("torus", "size", "vertices", "component_count", "shape_census", "delta", "flags")}


def _cmd_construct(args: argparse.Namespace) -> tuple[dict, dict, tuple]:
    if args.seedfile:
        doc = PatternDocument.parse(_read_text(args.seedfile))
        if doc.pattern is None:
            raise UsageError("--seedfile for construct must name a family")
        spec = doc.pattern
    elif args.family:
        try:
            spec = PatternSpec(
                args.family,
                offset=args.offset,
                mirror=args.mirror,
                axis=args.axis,
                hex_type=args.hex_type,
                t=args.t,
                types=args.types,
                word=args.word,
            )
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        raise UsageError("construct needs a family or --seedfile")
    torus = args.torus or minimal_torus(spec)
    g = build_torus(TorusSpec(*torus))
    s = construct(spec, g.spec)
    inp = {"pattern": spec.to_dict(), "torus": list(torus)}
    result = {"pattern": spec.to_dict(), **_report_summary(g, s)}
    return inp, result, (g, s)


def _cmd_verify(args: argparse.Namespace) -> tuple[dict, dict, tuple]:
    s, inp = _input_set(args)
    g = build_torus(s.spec)
    rep = classify(g, s)
    inp["torus"] = [s.m, s.n]
    return inp, rep.to_dict(), (g, s)


def _cmd_classify(args: argparse.Namespace) -> tuple[dict, dict, tuple]:
    s, inp = _input_set(args)
    g = build_torus(s.spec)
    inp["torus"] = [s.m, s.n]
    result = _report_summary(g, s)
    if result["flags"]["h_qpds_nu"] == 2:
        hexes = hexagon_types(g, s)
        census: dict[str, int] = {}
        for h in hexes:
            census[str(h.axis_type)] = census.get(str(h.axis_type), 0) + 1
        k2: dict = {"type_census": dict(sorted(census.items())), "verdict": classify_k2(g, s).to_dict()}
        if len(hexes) >= 2:
            aux = gamma_graph(g, s)
            triples = mixed_triples(aux)
            k2["gamma"] = {"nodes": len(aux.nodes), "edges": len(aux.edges), "degrees": sorted(set(aux.degrees()))}
            k2["mixed_triples"] = [list(t) for t in triples]
            k2["counterexample_flag"] = len(triples) >= 2
        if len(census) == 2:
            try:
                k2["triple_period"] = triple_period(g, s).to_dict()
            except DomainError as exc:
                k2["triple_period"] = {"unavailable": str(exc)}
        try:
            k2["type_table"] = type_table(g, s).render()
        except DomainError as exc:
            k2["type_table"] = None
            k2["type_table_error"] = str(exc)
        result["k2"] = k2
    return inp, result, (g, s)


def _budget_kwargs(args: argparse.Namespace) -> dict:
    nodes, secs = args.budget or (DEFAULT_NODE_BUDGET, DEFAULT_TIME_BUDGET)
    return {"node_budget": nodes, "time_budget": secs}


def _cmd_search(args: argparse.Namespace) -> tuple[dict, dict, tuple]:
    if args.torus is None:
        raise UsageError("search needs --torus")
    try:
        pred = Predicate.parse(args.predicate)
    except ValueError as exc:
        raise UsageError(f"argument --predicate: {exc}") from None
    g = build_torus(TorusSpec(*args.torus))
    prob = SearchProblem(
        g,
        pred,
        imposed_symmetry=args.lattice,
        limit=args.limit,
        canonicalize=args.canonicalize,
        group=args.group,
        **_budget_kwargs(args),
    )
    inp = {
        "predicate": pred.label,
        "torus": list(args.torus),
        "limit": args.limit,
        "canonicalize": args.canonicalize,
        "group": args.group,
        "lattice": None if args.lattice is None else [list(args.lattice.u), list(args.lattice.v)],
        "budget": [prob.node_budget, prob.time_budget],
        "threads": args.threads,
    }
    res = enumerate_solutions(prob)
    return inp, res.to_dict(), (g, None)


def _cmd_table(args: argparse.Namespace) -> tuple[dict, dict, tuple]:
    try:
        pred = Predicate.parse(args.predicate)
    except ValueError as exc:
        raise UsageError(f"argument --predicate: {exc}") from None
    kw = _budget_kwargs(args)
    table = existence_table(pred, args.m, args.n, **kw)
    inp = {"predicate": pred.label, "m": args.m, "n": args.n, "budget": [kw["node_budget"], kw["time_budget"]]}
    out = table.to_dict()
    out["text"] = table.render()
    return inp, out, (None, table)


COMMANDS = {
    "construct": _cmd_construct,
    "verify": _cmd_verify,
    "classify": _cmd_classify,
    "render": _cmd_verify,
    "search": _cmd_search,
    "table": _cmd_table,
}


def _text(command: str, result: dict) -> str:
    if command == "table":
        return result["text"] + "\n"
    if command == "search":
        lines = [
            f"predicate {result['predicate']} on {result['torus'][0]},{result['torus'][1]}",
            f"solutions {result['total_count']} exhausted {str(result['exhausted']).lower()}",
        ]
        lines += [" ".join(f"{c[0]},{c[1]}" for c in sol) for sol in result["solutions"]]
        return "\n".join(lines) + "\n"
    lines = [f"torus {result['torus'][0]},{result['torus'][1]}  size {result['size']}"]
    lines.append("flags " + " ".join(f"{k}={_flag(v)}" for k, v in result["flags"].items()))
    lines.append(f"components {result['component_count']}  delta {result['delta']}")
    k2 = result.get("k2")
    if k2:
        lines.append(f"family {k2['verdict']['label']}")
        tp = k2.get("triple_period")
        if tp and "notation" in tp:
            lines.append(f"triple period {tp['notation']}")
        if k2.get("type_table"):
            lines.append(k2["type_table"])
    return "\n".join(lines) + "\n"


def _flag(v) -> str:
    if v is None:
        return "-"
    return str(v).lower() if isinstance(v, bool) else str(v)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _envelope(command: str, inp: dict, result: dict) -> str:
    env = {"version": ENVELOPE_VERSION, "command": command, "input": inp, "result": result}
    return json.dumps(env, sort_keys=True) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        sys.stderr.write(f"tridom: error: {exc}\n")
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    command = args.command
    try:
        inp, result, (g, payload) = COMMANDS[command](args)
    except UsageError as exc:
        sys.stderr.write(f"tridom {command}: error: {exc}\n")
        return 1
    except BudgetExceeded as exc:
        partial = exc.result.to_dict() if exc.result is not None else {}
        partial["error"] = str(exc)
        _emit(_envelope(command, {"torus": list(args.torus) if args.torus else None}, partial), args.out)
        sys.stderr.write(f"tridom {command}: {exc}\n")
        return 2
    except (DomainError, OSError) as exc:
        sys.stderr.write(f"tridom {command}: error: {exc}\n")
        return 1

    fmt = "svg" if command == "render" else args.format
    if fmt == "svg":
        if not isinstance(payload, VertexSet):
            sys.stderr.write(f"tridom {command}: error: --format svg needs a vertex set\n")
            return 1
        style = SvgStyle(labels=getattr(args, "labels", False), gamma=getattr(args, "gamma", False))
        _emit(render_svg(g, payload, style), args.out)
    elif fmt == "text":
        _emit(_text(command, result), args.out)
    else:
        _emit(_envelope(command, inp, result), args.out)
    if command == "table" and any(cell == "unknown" for row in result["grid"] for cell in row):
        return 2
    return 0


run = main


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    sys.exit(main())
