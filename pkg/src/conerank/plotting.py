"""Scatter export: structured plot JSON plus a static SVG.

Points are shaded light-to-dark with higher ranks lighter; the cone shows as
a translucent wedge anchored at the lower-left of the data box, with the
dual generators drawn as arrows.
"""

from __future__ import annotations

import math
from pathlib import Path


def _shade(rank: int, lo: int, hi: int) -> str:
    """Grayscale hex, light for high ranks."""
    if hi == lo:
        t = 0.5
    else:
        t = (rank - lo) / (hi - lo)
    level = int(round(40 + 180 * t))
    return f"#{level:02x}{level:02x}{level:02x}"


def plot_data(rank_payload: dict, axes: tuple[int, int] = (0, 1)) -> dict:
    """2D scatter description from a rank payload (axis pair for d > 2)."""
    ax, ay = axes
    pts = []
    ranks = rank_payload["ranks"]
    lo, hi = min(ranks.values()), max(ranks.values())
    for pid in sorted(rank_payload["points"]):
        coords = rank_payload["points"][pid]["coords"]
        pts.append(
            {
                "id": pid,
                "x": coords[ax],
                "y": coords[ay],
                "rank": ranks[pid],
                "color": _shade(ranks[pid], lo, hi),
            }
        )
    xs = [p["x"] for p in pts]
    ys = [p["y"] for p in pts]
    cone = rank_payload["cone"]
    return {
        "axes": [ax, ay],
        "points": pts,
        "cone": {
            "rays": [[r[ax], r[ay]] for r in cone["rays"]],
            "dual_rays": [[r[ax], r[ay]] for r in cone["dual_rays"]],
        },
        "bounds": {
            "xmin": min(xs),
            "xmax": max(xs),
            "ymin": min(ys),
            "ymax": max(ys),
        },
        "rank_range": [lo, hi],
    }


def _norm(v) -> tuple[float, float]:
    n = math.hypot(v[0], v[1])
    return (v[0] / n, v[1] / n) if n else (0.0, 0.0)


def render_svg(data: dict, width: int = 480, height: int = 480) -> str:
    b = data["bounds"]
    span_x = (b["xmax"] - b["xmin"]) or 1.0
    span_y = (b["ymax"] - b["ymin"]) or 1.0
    pad = 0.12

    def sx(x: float) -> float:
        return width * (pad + (1 - 2 * pad) * (x - b["xmin"]) / span_x)

    def sy(y: float) -> float:
        return height * (1 - pad - (1 - 2 * pad) * (y - b["ymin"]) / span_y)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    # cone wedge anchored at the lower-left data corner
    anchor = (b["xmin"], b["ymin"])
    arm = 0.3 * max(span_x, span_y)
    rays = [r for r in data["cone"]["rays"] if r[0] or r[1]]
    if len(rays) >= 2:
        tips = [
            (anchor[0] + arm * u[0], anchor[1] + arm * u[1])
            for u in (_norm(r) for r in rays)
        ]
        path = f'M {sx(anchor[0]):.2f} {sy(anchor[1]):.2f} ' + " ".join(
            f"L {sx(t[0]):.2f} {sy(t[1]):.2f}" for t in tips
        ) + " Z"
        parts.append(f'<path d="{path}" fill="#4f81bd" fill-opacity="0.15" stroke="#4f81bd"/>')
    for r in data["cone"]["dual_rays"]:
        u = _norm(r)
        tip = (anchor[0] + 0.8 * arm * u[0], anchor[1] + 0.8 * arm * u[1])
        parts.append(
            f'<line x1="{sx(anchor[0]):.2f}" y1="{sy(anchor[1]):.2f}" '
            f'x2="{sx(tip[0]):.2f}" y2="{sy(tip[1]):.2f}" '
            f'stroke="#c0504d" stroke-dasharray="4 3"/>'
        )
    for p in data["points"]:
        parts.append(
            f'<circle cx="{sx(p["x"]):.2f}" cy="{sy(p["y"]):.2f}" r="6" '
            f'fill="{p["color"]}" stroke="black" stroke-width="0.8">'
            f'<title>{p["id"]}: rank {p["rank"]}</title></circle>'
        )
        parts.append(
            f'<text x="{sx(p["x"]) + 8:.2f}" y="{sy(p["y"]) - 6:.2f}" '
            f'font-size="10" font-family="sans-serif">{p["id"]}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_plot(rank_payload: dict, path: str | Path, axes: tuple[int, int] = (0, 1)) -> dict:
    """Write the SVG next to returning the structured description."""
    data = plot_data(rank_payload, axes)
    Path(path).write_text(render_svg(data))
    return data
