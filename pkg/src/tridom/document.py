"""Plain-text pattern documents.

A document is a sequence of lines, each one of::

    family <name>
    param <key> <value>
    offset <x1> <x2>
    v <x1> <x2>

Blank lines and ``#`` comments are ignored.  A document names either a
family (with parameters and an offset) or an explicit vertex list.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constructions import FAMILIES, PatternSpec
from .errors import DocumentError
from .lattice import ORIGIN, Coord

_INT_PARAMS = ("axis", "hex_type", "t")


@dataclass(frozen=True)
class PatternDocument:
    pattern: PatternSpec | None = None
    vertices: tuple[Coord, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if (self.pattern is None) == (not self.vertices):
            if self.pattern is None:
                raise DocumentError("document has neither a family nor vertices")
            raise DocumentError("document mixes a family with explicit vertices")

    @classmethod
    def parse(cls, text: str) -> "PatternDocument":
        family = None
        params: dict = {}
        offset = ORIGIN
        verts: list[Coord] = []
        for num, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            head, *rest = line.split()
            try:
                if head == "family" and len(rest) == 1:
                    if family is not None:
                        raise DocumentError(f"line {num}: second family line")
                    family = rest[0]
                elif head == "param" and len(rest) == 2:
                    params[rest[0]] = _param_value(rest[0], rest[1])
                elif head == "offset" and len(rest) == 2:
                    offset = Coord(int(rest[0]), int(rest[1]))
                elif head == "v" and len(rest) == 2:
                    verts.append(Coord(int(rest[0]), int(rest[1])))
                else:
                    raise DocumentError(f"line {num}: cannot read {raw.strip()!r}")
            except ValueError as exc:
                raise DocumentError(f"line {num}: {exc}") from None
        if family is None:
            if params or offset != ORIGIN:
                raise DocumentError("param/offset lines need a family line")
            return cls(vertices=tuple(verts))
        if family not in FAMILIES:
            raise DocumentError(f"unknown family {family!r}")
        try:
            return cls(pattern=PatternSpec(family, offset=offset, **params), vertices=tuple(verts))
        except (TypeError, ValueError) as exc:
            raise DocumentError(str(exc)) from None

    def serialize(self) -> str:
        if self.pattern is None:
            return "".join(f"v {c[0]} {c[1]}\n" for c in self.vertices)
        lines = [f"family {self.pattern.family}"]
        for key, val in self.pattern.params().items():
            if key == "types":
                val = ",".join(str(x) for x in val)
            elif key == "mirror":
                val = "true" if val else "false"
            lines.append(f"param {key} {val}")
        lines.append(f"offset {self.pattern.offset[0]} {self.pattern.offset[1]}")
        return "\n".join(lines) + "\n"


def _param_value(key: str, text: str):
    if key in _INT_PARAMS:
        return int(text)
    if key == "types":
        return tuple(int(x) for x in text.split(","))
    if key == "mirror":
        if text not in ("true", "false"):
            raise ValueError(f"mirror must be true or false, got {text!r}")
        return text == "true"
    if key == "word":
        return text
    raise ValueError(f"unknown parameter {key!r}")
