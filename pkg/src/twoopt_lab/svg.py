"""Deterministic SVG drawings of tour pairs, edge classes and dual arborescences."""
from __future__ import annotations

import enum
from xml.sax.saxutils import escape

from .harness import PipelineContext

VIEW = 1000
MARGIN = 40

STYLE = """
.t { stroke: #c0392b; stroke-width: 3; fill: none; }
.s { stroke: #2c6fbb; stroke-width: 2; fill: none; }
.s1 { stroke: #2c6fbb; stroke-width: 2; }
.s2 { stroke: #2c6fbb; stroke-width: 2; stroke-dasharray: 2 5; }
.s3 { stroke: #2c6fbb; stroke-width: 2; stroke-dasharray: 10 6; }
.prime { stroke: #27ae60; stroke-width: 4; }
.pt { fill: #222; }
.new { fill: #2c6fbb; }
.dual { stroke: #16a085; stroke-width: 2; }
.dualpt { fill: #16a085; }
text { font: 12px sans-serif; }
""".strip()


class Stage(str, enum.Enum):
    TOURS = "tours"
    PARTITION = "partition"
    ARBORESCENCE = "arborescence"


class _Frame:
    def __init__(self, pts):
        xs = [float(p.x) for p in pts]
        ys = [float(p.y) for p in pts]
        self.x0, self.y0 = min(xs), min(ys)
        span = max(max(xs) - self.x0, max(ys) - self.y0) or 1.0
        self.k = (VIEW - 2 * MARGIN) / span

    def __call__(self, x, y) -> tuple[str, str]:
        sx = MARGIN + (float(x) - self.x0) * self.k
        sy = VIEW - MARGIN - (float(y) - self.y0) * self.k
        return f"{sx:.2f}", f"{sy:.2f}"


def _line(frame, p, q, cls) -> str:
    x1, y1 = frame(p.x, p.y)
    x2, y2 = frame(q.x, q.y)
    return f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>'


def render_svg(stage: Stage | str, ctx: PipelineContext, title: str = "") -> str:
    stage = Stage(stage)
    if ctx.pair is not None:
        inst, t, s = ctx.pair.v_prime, ctx.pair.t_prime, ctx.pair.s_prime
    else:
        inst, t, s = ctx.instance, ctx.t, ctx.s
    pts = inst.points
    frame = _Frame(pts)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{VIEW}" height="{VIEW}" '
        f'viewBox="0 0 {VIEW} {VIEW}">',
        f"<style>{STYLE}</style>",
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")

    out.append('<g id="optimal">')
    out += [_line(frame, pts[a], pts[b], "t") for a, b in t.edges()]
    out.append("</g>")

    part = ctx.partition if stage is not Stage.TOURS else None
    out.append('<g id="local">')
    if part is None:
        out += [_line(frame, pts[a], pts[b], "s") for a, b in s.edges()]
    else:
        cls = {e: "s1" for e in part.s1} | {e: "s2" for e in part.s2} | {e: "s3" for e in part.s3}
        highlight = set(part.s1_prime) if stage is Stage.PARTITION else set()
        for a, b in s.edges():
            c = cls[(a, b)] + (" prime" if (a, b) in highlight else "")
            out.append(_line(frame, pts[a], pts[b], c))
    out.append("</g>")

    out.append('<g id="points">')
    for i, p in enumerate(pts):
        x, y = frame(p.x, p.y)
        c = "pt" if i < ctx.instance.n else "pt new"
        out.append(f'<circle class="{c}" cx="{x}" cy="{y}" r="4"><title>P{i + 1}</title></circle>')
    out.append("</g>")

    if stage is Stage.ARBORESCENCE and ctx.arborescences:
        # overlay the first arborescence, normally the one for S1'
        sa = ctx.arborescences[0]
        rt = sa.regions
        centers = {r.id: rt.anchor_point(r.id) for r in rt.regions}
        out.append(f'<g id="dual" data-set="{escape(sa.name)}">')
        for e in sa.arborescence.edges:
            (x1, y1), (x2, y2) = frame(*centers[e.tail]), frame(*centers[e.head])
            out.append(f'<line class="dual" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        for rid in sorted(centers):
            x, y = frame(*centers[rid])
            out.append(f'<circle class="dualpt" cx="{x}" cy="{y}" r="6"/>')
            out.append(f'<text x="{x}" y="{y}" dx="8" dy="-8">D{rid + 1}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
