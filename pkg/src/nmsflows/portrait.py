"""
SVG phase portraits of surface model flows.

The picture is a fundamental domain of the surface: the horizontal axis is
the height ``h`` in ``[0, 1)`` (left and right edges identified through the
deck map, with a flip for the Moebius-band handle). The lower half shows the
repeller annulus, the upper half the attractor annulus, each drawn with the
normalized transverse coordinate ``y * 2**h`` in ``[-1, 1]``. The middle line
and the top/bottom edges are the boundary circles that the gluing identifies.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

from .gluing import HandleKind, ModelFlow
from .simulator import ATTRACTOR, REPELLER, ChartPoint, Trajectory

SIZE = 400.0
MARGIN = 40.0
COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf", "#bcbd22"]


def _vertical(p: ChartPoint) -> float:
    rho = p.y[0] * 2.0 ** p.h
    if p.chart == REPELLER:
        return 0.25 + 0.25 * rho
    return 0.75 - 0.25 * rho


def _xy(h: float, v: float) -> tuple[float, float]:
    return MARGIN + h * SIZE, MARGIN + (1.0 - v) * SIZE


def _segments(traj: Trajectory) -> list[list[tuple[float, float]]]:
    segments: list[list[tuple[float, float]]] = []
    prev = None
    for _, p in traj.samples:
        point = _xy(p.h, _vertical(p))
        if prev is None or prev.chart != p.chart or abs(prev.h - p.h) > 0.5:
            segments.append([])
        segments[-1].append(point)
        prev = p
    return segments


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def render_svg(f: ModelFlow, trajectories: list[Trajectory]) -> str:
    """SVG text for a 2-dimensional model flow and sampled trajectories."""
    if f.dim != 2:
        raise ValueError("SVG portraits are only available for surface flows (dim = 2)")
    width = SIZE + 2 * MARGIN
    flip = f.handle is HandleKind.NONORIENTABLE
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(width)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(width)}">',
        f"<title>{escape(str(f))}</title>",
        f'<rect class="domain" x="{_fmt(MARGIN)}" y="{_fmt(MARGIN)}" width="{_fmt(SIZE)}" '
        f'height="{_fmt(SIZE)}" fill="none" stroke="black"/>',
    ]
    # boundary circles identified by the gluing
    for v, label in ((0.0, "dV_R circle 2"), (0.5, "dV_R circle 1 | dV_A circle 1"), (1.0, "dV_A circle 2")):
        x0, y0 = _xy(0.0, v)
        x1, _ = _xy(1.0, v)
        out.append(
            f'<line class="boundary" x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" y2="{_fmt(y0)}" '
            f'stroke="gray" stroke-dasharray="4 3"><title>{escape(label)}</title></line>'
        )
    # side edges: h = 0 and h = 1 are identified by the deck map
    ident = "flip" if flip else "preserve"
    for h, marker in ((0.0, "left"), (1.0, "right")):
        x, y_top = _xy(h, 1.0)
        _, y_bot = _xy(h, 0.0)
        arrow_tip = y_top + 0.4 * SIZE if (flip and marker == "right") else y_top + 0.6 * SIZE
        arrow_tail = y_top + 0.6 * SIZE if (flip and marker == "right") else y_top + 0.4 * SIZE
        out.append(
            f'<line class="edge" data-identification="{ident}" x1="{_fmt(x)}" y1="{_fmt(y_top)}" '
            f'x2="{_fmt(x)}" y2="{_fmt(y_bot)}" stroke="black"/>'
        )
        out.append(
            f'<line class="edge-arrow" x1="{_fmt(x)}" y1="{_fmt(arrow_tail)}" x2="{_fmt(x)}" '
            f'y2="{_fmt(arrow_tip)}" stroke="black" stroke-width="3"/>'
        )
    for orbit, v in (("R", 0.25), ("A", 0.75)):
        x0, y0 = _xy(0.0, v)
        x1, _ = _xy(1.0, v)
        out.append(
            f'<path class="periodic-orbit" data-orbit="{orbit}" d="M {_fmt(x0)} {_fmt(y0)} H {_fmt(x1)}" '
            f'stroke="black" stroke-width="2.5" fill="none"/>'
        )
    for i, traj in enumerate(trajectories):
        first = traj.samples[0][1]
        last = traj.samples[-1][1]
        color = COLORS[i % len(COLORS)]
        out.append(
            f'<g class="trajectory" data-seed="{i}" data-axis="{str(first.radius == 0.0).lower()}" '
            f'data-initial-chart="{first.chart}" data-initial-radius="{first.radius:.12g}" '
            f'data-final-chart="{last.chart}" data-final-radius="{last.radius:.12g}" '
            f'data-transits="{len(traj.transits)}" stroke="{color}" fill="none">'
        )
        for seg in _segments(traj):
            pts = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in seg)
            out.append(f'<polyline points="{pts}"/>')
        out.append("</g>")
    x, y = _xy(0.0, 0.0)
    out.append(
        f'<text x="{_fmt(x)}" y="{_fmt(y + 25)}" font-size="12">{escape(str(f))}; '
        f'lower half: repeller handle, upper half: attractor handle</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


__all__ = ["render_svg", "ATTRACTOR", "REPELLER"]
