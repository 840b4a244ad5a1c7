"""SVG drawings of a vertex set on the fundamental domain of a torus.

Coordinates use the embedding ``e1 = (1, 0)``, ``e2 = (1/2, sqrt(3)/2)`` with
the ``x2`` axis pointing up.  Every number is printed with four decimals so
the output is byte-stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .lattice import OFFSETS, TorusGraph, VertexSet, embed

_TYPE_COLORS = {1: "#c0392b", 2: "#2471a3", 3: "#229954"}


@dataclass(frozen=True)
class SvgStyle:
    scale: float = 24.0
    margin: float = 16.0
    radius: float = 4.5
    labels: bool = False
    gamma: bool = False


def _f(x: float) -> str:
    out = f"{x:.4f}"
    return "0.0000" if out == "-0.0000" else out


def render_svg(g: TorusGraph, s: VertexSet, style: SvgStyle | None = None) -> str:
    """Grid edges between non-members, member disks, optional type labels
    and Gamma(S) segments between hexagon centres."""
    st = style or SvgStyle()
    m, n = g.m, g.n
    corners = [embed(c) for c in ((0, 0), (m - 1, 0), (0, n - 1), (m - 1, n - 1))]
    xmin = min(p[0] for p in corners)
    xmax = max(p[0] for p in corners)
    ymax = max(p[1] for p in corners)
    width = (xmax - xmin) * st.scale + 2 * st.margin
    height = ymax * st.scale + 2 * st.margin

    def pt(c: tuple[float, float]) -> tuple[str, str]:
        x, y = embed(c)
        return _f((x - xmin) * st.scale + st.margin), _f((ymax - y) * st.scale + st.margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        f"<title>{escape(f'{len(s)} vertices on the {m}x{n} torus')}</title>",
        '<g stroke="#7f8c8d" stroke-width="1">',
    ]
    for i in range(m):
        for j in range(n):
            for a, b in OFFSETS[:3]:
                k, l = i + a, j + b
                if not (0 <= k < m and 0 <= l < n):
                    continue
                if g.vid((i, j)) in s.ids or g.vid((k, l)) in s.ids:
                    continue
                x1, y1 = pt((i, j))
                x2, y2 = pt((k, l))
                out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
    out.append("</g>")

    hexes = []
    if (st.labels or st.gamma) and len(s):
        from .analysis import _Lift, _hexagons

        lift = _Lift(g, s)
        if all(c.shape == "K2" for c in lift.comps):
            hexes = _hexagons(g, lift.comps)
        if st.gamma:
            out.append('<g stroke="#d68910" stroke-width="1.5" stroke-dasharray="4 3">')
            for k in range(len(lift.comps)):
                ck = lift.centroid(k)
                base = lift.anchors[k]
                for ln in lift.gamma_links(k):
                    cj = lift.centroid(ln.target)
                    a = (base[0] + ck[0], base[1] + ck[1])
                    b = (base[0] + ln.disp[0] + cj[0], base[1] + ln.disp[1] + cj[1])
                    if (ln.target, ln.disp) < (k, (0, 0)):
                        continue
                    x1, y1 = pt(a)
                    x2, y2 = pt(b)
                    out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
            out.append("</g>")

    out.append('<g fill="#1b2631">')
    for v in sorted(s.ids):
        x, y = pt(g.coord(v))
        out.append(f'<circle cx="{x}" cy="{y}" r="{_f(st.radius)}"/>')
    out.append("</g>")

    if st.labels and hexes:
        out.append('<g font-family="monospace" font-size="11" text-anchor="middle">')
        for h in hexes:
            a, b = h.component.vertices
            off = g.offset[a][b]
            c = (h.anchor[0] + off[0] / 2, h.anchor[1] + off[1] / 2)
            x, y = pt(c)
            color = _TYPE_COLORS[h.axis_type]
            out.append(f'<text x="{x}" y="{_f(float(y) - 7.0)}" fill="{color}">{h.axis_type}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def svg_size(doc: str) -> tuple[float, float]:
    head = doc.split(">", 1)[0]
    w = float(head.split('width="', 1)[1].split('"', 1)[0])
    h = float(head.split('height="', 1)[1].split('"', 1)[0])
    return w, h

