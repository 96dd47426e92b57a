"""SVG drawing of a compiled layout: traps, hubs, CZ edges and shuttle moves."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .frontend import Circuit, interaction_graph
from .schedule import Layout, Schedule

SIZE = 600
MARGIN = 40


def _star(cx: float, cy: float, r: float) -> str:
    pts = []
    for k in range(10):
        rad = r if k % 2 == 0 else r * 0.45
        ang = -math.pi / 2 + k * math.pi / 5
        pts.append(f"{cx + rad * math.cos(ang):.2f},{cy + rad * math.sin(ang):.2f}")
    return " ".join(pts)


def render_svg(layout: Layout, circuit: Circuit, schedule: Schedule | None = None, title: str = "") -> str:
    """Home traps as circles, hubs as stars, CZ pairs within ``r_b`` solid and
    longer ones dashed, one blockade disk, a dotted ``d_min`` circle and an
    arrow per shuttle."""
    span = SIZE - 2 * MARGIN

    def xy(p) -> tuple[float, float]:
        return MARGIN + float(p[0]) * span, MARGIN + (1.0 - float(p[1])) * span

    pos = layout.positions
    n = layout.num_qubits
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" "
        "markerHeight=\"6\" orient=\"auto\"><path d=\"M0,0 L10,5 L0,10 z\" fill=\"#c0392b\"/></marker></defs>",
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{span}" height="{span}" fill="none" stroke="#ccc"/>',
    ]
    if title:
        out.append(f'<text x="{MARGIN}" y="{MARGIN - 12}" font-size="14">{escape(title)}</text>')

    if n:
        cx, cy = xy(pos[0])
        out.append(
            f'<circle class="blockade" cx="{cx:.2f}" cy="{cy:.2f}" r="{layout.r_b * span:.2f}" '
            'fill="#3498db" fill-opacity="0.08" stroke="#3498db" stroke-opacity="0.4"/>'
        )
        out.append(
            f'<circle class="dmin" cx="{cx:.2f}" cy="{cy:.2f}" r="{layout.d_min * span:.2f}" '
            'fill="none" stroke="#555" stroke-dasharray="2,3"/>'
        )

    g = interaction_graph(circuit)
    for i, j in g.edges:
        (x1, y1), (x2, y2) = xy(pos[i]), xy(pos[j])
        d = float(np.hypot(*(pos[i] - pos[j])))
        if d <= layout.r_b + 1e-12:
            cls, dash = "cz-near", ""
        else:
            cls, dash = "cz-far", ' stroke-dasharray="6,4"'
        width = 1.0 + math.log1p(g.weight(i, j))
        out.append(
            f'<line class="{cls}" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="#2c3e50" stroke-opacity="0.6" stroke-width="{width:.2f}"{dash}/>'
        )

    if schedule is not None:
        for o in schedule.ops():
            if o.kind != "shuttle":
                continue
            (x1, y1), (x2, y2) = xy(pos[o.src]), xy(pos[o.dst])
            out.append(
                f'<line class="shuttle" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                'stroke="#c0392b" stroke-width="1.2" marker-end="url(#arrow)"/>'
            )

    for q in range(n):
        x, y = xy(pos[q])
        out.append(f'<circle class="home" cx="{x:.2f}" cy="{y:.2f}" r="7" fill="#2980b9"/>')
        out.append(f'<text x="{x + 9:.2f}" y="{y - 9:.2f}" font-size="11">{q}</text>')
    for k in range(len(layout.hubs)):
        x, y = xy(pos[n + k])
        out.append(f'<polygon class="hub" points="{_star(x, y, 9)}" fill="#f39c12" stroke="#7f5200"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
