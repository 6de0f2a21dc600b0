"""SVG rendering of a plan report: lattice, footprints, choices, gaps.

The drawing is data-complete but deliberately plain: squares as a lattice,
antenna squares highlighted, their footprints shaded, uncovered squares
hatched, cells outlined.  All coordinates are formatted with fixed precision
so the document is byte-stable.
"""

from __future__ import annotations

from typing import Mapping

from .coverage import footprint
from .grid import InternalGrid

_CANVAS = 900.0
_MARGIN = 20.0


def _f(v: float) -> str:
    return f"{v:.2f}"


def render_svg(report: dict, grids: Mapping[tuple[int, int], InternalGrid]) -> str:
    """Render the report against the grids it was planned on."""
    if not grids:
        raise ValueError("no grids to render")
    xmin = min(g.bounds.xmin for g in grids.values())
    ymin = min(g.bounds.ymin for g in grids.values())
    xmax = max(g.bounds.xmax for g in grids.values())
    ymax = max(g.bounds.ymax for g in grids.values())
    span = max(xmax - xmin, ymax - ymin)
    scale = _CANVAS / span
    width = (xmax - xmin) * scale + 2 * _MARGIN
    height = (ymax - ymin) * scale + 2 * _MARGIN

    def sx(x: float) -> float:
        return _MARGIN + (x - xmin) * scale

    def sy(y: float) -> float:
        # map y grows north; SVG y grows down
        return _MARGIN + (ymax - y) * scale

    def rect(bounds, css: str, extra: str = "") -> str:
        return (
            f'<rect class="{css}" x="{_f(sx(bounds.xmin))}" y="{_f(sy(bounds.ymax))}" '
            f'width="{_f(bounds.width * scale)}" height="{_f(bounds.height * scale)}"{extra}/>'
        )

    coverage_by_cell = {tuple(c["cell"]): c for c in report["coverage"]["cells"]}
    placement_by_cell = {tuple(c["cell"]): c["placement"] for c in report["cells"]}

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        "<defs>",
        '<pattern id="hatch" width="6" height="6" patternUnits="userSpaceOnUse">',
        '<path d="M0,6 l6,-6" stroke="#b5651d" stroke-width="1"/>',
        "</pattern>",
        "</defs>",
        "<style>",
        ".square { fill: #ffffff; stroke: #c8c8c8; stroke-width: 0.5; }",
        ".covered { fill: #cfe8cf; stroke: none; }",
        ".uncovered { fill: url(#hatch); stroke: none; }",
        ".chosen { fill: #2e8b57; stroke: #145214; stroke-width: 1.5; }",
        ".cell-border { fill: none; stroke: #333333; stroke-width: 1.5; }",
        "</style>",
    ]

    for cell_id in sorted(grids):
        grid = grids[cell_id]
        cov = coverage_by_cell[cell_id]
        chosen = {tuple(s["position"]) for s in placement_by_cell[cell_id]["squares"]}
        covered = set()
        for pos in chosen:
            covered |= footprint(grid.square(*pos), grid).covered
        uncovered = {tuple(p) for p in cov["uncovered"]}
        for sq in grid.squares:
            parts.append(rect(sq.bounds, "square"))
        for sq in grid.squares:
            if sq.position in covered and sq.position not in chosen:
                parts.append(rect(sq.bounds, "covered"))
            elif sq.position in uncovered:
                parts.append(rect(sq.bounds, "uncovered"))
        for sq in grid.squares:
            if sq.position in chosen:
                parts.append(rect(sq.bounds, "chosen"))
        parts.append(rect(grid.bounds, "cell-border"))

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
