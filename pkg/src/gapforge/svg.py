"""SVG rendering of the (alpha, beta) regime diagram."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .asymptotics import RegimeDiagram

WIDTH, HEIGHT = 640, 520
LEFT, TOP, PLOT = 60, 20, 420

# drawing order: later layers on top
REGION_STYLE = [
    ("function_converges", "#dce9f5", 1.0, "function eigenvalues converge"),
    ("forms_diverge_functions_vanish", "#c8c8c8", 1.0,
     "forms diverge, functions tend to 0"),
    ("all_diverge", "#6e6e6e", 1.0, "all eigenvalues diverge"),
    ("rescaled_function_diverges", "#2b4c7e", 0.45, "rescaled function eigenvalue diverges"),
    ("rescaled_form_diverges", "#a0522d", 0.35, "rescaled form eigenvalue diverges"),
]
LINE_DASH = {"solid": "", "thin": "", "dashed": "6,4", "dotted": "2,3"}
LINE_WIDTH = {"solid": 1.6, "thin": 0.6, "dashed": 1.4, "dotted": 1.4}


def _n(x: float) -> str:
    return format(x, ".6g")


def render_regimes(d: RegimeDiagram, point: tuple[float, float] | None = None) -> str:
    a0, a1 = d.alpha_range
    b0, b1 = d.beta_range

    def xy(a: float, b: float) -> str:
        x = LEFT + (a - a0) / (a1 - a0) * PLOT
        y = TOP + (b1 - b) / (b1 - b0) * PLOT
        return f"{_n(x)},{_n(y)}"

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
           f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="11">',
           f'<title>Parameter regions, n = {d.n}</title>',
           f'<rect x="{LEFT}" y="{TOP}" width="{PLOT}" height="{PLOT}" fill="white" stroke="none"/>']
    for name, colour, opacity, _ in REGION_STYLE:
        for poly in d.polygons.get(name, []):
            pts = " ".join(xy(a, b) for a, b in poly)
            out.append(f'<polygon class="{name}" points="{pts}" fill="{colour}" '
                       f'fill-opacity="{opacity}" stroke="none"/>')
    for line in d.lines:
        dash = LINE_DASH[line.style]
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        pts = " ".join(xy(a, b) for a, b in line.points)
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" '
                   f'stroke-width="{LINE_WIDTH[line.style]}"{extra}>'
                   f'<title>{escape(line.name)}</title></polyline>')
    out.append(f'<rect x="{LEFT}" y="{TOP}" width="{PLOT}" height="{PLOT}" '
               f'fill="none" stroke="black"/>')

    # axes
    for i in range(7):
        a = a0 + (a1 - a0) * i / 6
        b = b0 + (b1 - b0) * i / 6
        x, y = xy(a, b0).split(",")
        out.append(f'<text x="{x}" y="{_n(TOP + PLOT + 14)}" text-anchor="middle">{_n(a)}</text>')
        x, y = xy(a0, b).split(",")
        out.append(f'<text x="{_n(LEFT - 6)}" y="{y}" text-anchor="end" '
                   f'dominant-baseline="middle">{_n(b)}</text>')
    out.append(f'<text x="{_n(LEFT + PLOT / 2)}" y="{_n(TOP + PLOT + 32)}" '
               f'text-anchor="middle">alpha</text>')
    out.append(f'<text x="18" y="{_n(TOP + PLOT / 2)}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_n(TOP + PLOT / 2)})">beta</text>')

    if point is not None:
        x, y = xy(*point).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="3.5" fill="red" stroke="black"/>')

    # legend
    lx, ly = LEFT + PLOT + 12, TOP + 4
    for name, colour, opacity, label in REGION_STYLE:
        if not d.polygons.get(name):
            continue
        out.append(f'<rect x="{lx}" y="{ly}" width="12" height="12" fill="{colour}" '
                   f'fill-opacity="{opacity}" stroke="black" stroke-width="0.5"/>')
        out.append(_wrapped(lx + 16, ly + 10, label))
        ly += 34
    for style, label in (("dashed", "rescaled divergence boundary"),
                         ("dotted", "volume constant")):
        dash = LINE_DASH[style]
        out.append(f'<line x1="{lx}" y1="{ly + 6}" x2="{lx + 12}" y2="{ly + 6}" '
                   f'stroke="black" stroke-dasharray="{dash}"/>')
        out.append(_wrapped(lx + 16, ly + 10, label))
        ly += 34
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _wrapped(x: float, y: float, text: str, width: int = 20) -> str:
    words, lines, cur = text.split(), [], ""
    for w in words:
        if cur and len(cur) + 1 + len(w) > width:
            lines.append(cur)
            cur = w
        else:
            cur = f"{cur} {w}".strip()
    lines.append(cur)
    spans = "".join(f'<tspan x="{x}" dy="{0 if i == 0 else 12}">{escape(s)}</tspan>'
                    for i, s in enumerate(lines))
    return f'<text x="{x}" y="{y}">{spans}</text>'
