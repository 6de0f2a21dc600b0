"""External cell grid over a raster frame, and per-cell internal square grids.

Conventions used throughout the package:

* map coordinates are meters, x increasing east, y increasing north;
* grid indices are (row, col) with row 0 at the north edge;
* square positions inside a cell are 1-based (x, y) with x the row counted
  from the top and y the column counted from the left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .raster import ElevationRaster


class GridError(ValueError):
    """Invalid grid construction parameters."""


@dataclass(frozen=True)
class Rect:
    """Axis-aligned rectangle in map coordinates."""

    xmin: float
    ymin: float
    xmax: float
    ymax: float

    @property
    def width(self) -> float:
        return self.xmax - self.xmin

    @property
    def height(self) -> float:
        return self.ymax - self.ymin

    @property
    def area(self) -> float:
        return self.width * self.height

    def center(self) -> tuple[float, float]:
        return ((self.xmin + self.xmax) / 2.0, (self.ymin + self.ymax) / 2.0)

    def contains_point(self, px: float, py: float) -> bool:
        # half-open so tiled rects claim each point exactly once
        return self.xmin <= px < self.xmax and self.ymin <= py < self.ymax


@dataclass(frozen=True)
class SquareId:
    """One square of a cell's internal grid.

    `position` is (x, y): row from the top and column from the left, both
    1-based.  `n` is the side of the internal grid the square belongs to.
    """

    cell_id: tuple[int, int]
    position: tuple[int, int]
    bounds: Rect
    n: int


@dataclass(frozen=True)
class InternalGrid:
    """An n x n grid of equal squares tiling one cell."""

    cell_id: tuple[int, int]
    n: int
    square_side_m: float
    bounds: Rect
    squares: tuple[SquareId, ...]  # row-major: (1,1), (1,2), ...

    def square(self, x: int, y: int) -> SquareId:
        if not (1 <= x <= self.n and 1 <= y <= self.n):
            raise GridError(f"square position ({x}, {y}) outside 1..{self.n}")
        return self.squares[(x - 1) * self.n + (y - 1)]

    def positions(self) -> list[tuple[int, int]]:
        return [sq.position for sq in self.squares]

    def square_containing(self, px: float, py: float) -> SquareId | None:
        """The square whose half-open bounds contain the point, if any."""
        if not self.bounds.contains_point(px, py):
            # points on the cell's own max edges belong to the last row/col
            if not (
                self.bounds.xmin <= px <= self.bounds.xmax
                and self.bounds.ymin <= py <= self.bounds.ymax
            ):
                return None
        w = self.bounds.width / self.n
        h = self.bounds.height / self.n
        y = min(int((px - self.bounds.xmin) / w) + 1, self.n)
        x = min(int((self.bounds.ymax - py) / h) + 1, self.n)
        return self.square(max(x, 1), max(y, 1))


@dataclass(frozen=True)
class Cell:
    """One cell of the external grid.  Edge cells may be clipped."""

    cell_id: tuple[int, int]
    bounds: Rect
    side_m: float  # nominal side; bounds are authoritative for clipped cells
    partial: bool


@dataclass(frozen=True)
class ExternalGrid:
    cells: tuple[tuple[Cell, ...], ...]  # [row][col], row 0 at the north edge
    cell_side_m: float
    bounds: Rect

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_cols(self) -> int:
        return len(self.cells[0]) if self.cells else 0

    def cell(self, row: int, col: int) -> Cell:
        return self.cells[row][col]

    def iter_cells(self):
        for row in self.cells:
            yield from row


def build_external_grid(raster: ElevationRaster, cell_side_m: float) -> ExternalGrid:
    """Tile the raster frame with cells of the given side, clipping at the edges."""
    if cell_side_m <= 0:
        raise GridError(f"cell side must be positive, got {cell_side_m}")
    width, height = raster.width_m, raster.height_m
    if cell_side_m > width or cell_side_m > height:
        raise GridError(
            f"cell side {cell_side_m} exceeds raster extent {width} x {height}"
        )
    x0, y0 = raster.origin_x, raster.origin_y
    bounds = Rect(x0, y0, x0 + width, y0 + height)
    n_cols = math.ceil(width / cell_side_m - 1e-9)
    n_rows = math.ceil(height / cell_side_m - 1e-9)
    rows = []
    for r in range(n_rows):
        ymax = bounds.ymax - r * cell_side_m
        ymin = max(bounds.ymin, ymax - cell_side_m)
        row = []
        for c in range(n_cols):
            xmin = x0 + c * cell_side_m
            xmax = min(bounds.xmax, xmin + cell_side_m)
            cb = Rect(xmin, ymin, xmax, ymax)
            partial = (cb.width < cell_side_m - 1e-9) or (cb.height < cell_side_m - 1e-9)
            row.append(Cell(cell_id=(r, c), bounds=cb, side_m=cell_side_m, partial=partial))
        rows.append(tuple(row))
    return ExternalGrid(cells=tuple(rows), cell_side_m=cell_side_m, bounds=bounds)


def square_side_for_radius(antenna_radius_m: float) -> float:
    """Square side such that a 3x3 block of squares fits in the antenna circle.

    The 3x3 block centered on the antenna square has half-diagonal
    3 * side * sqrt(2) / 2; equating it to the radius gives
    side = 2 r / (3 sqrt(2)).
    """
    if antenna_radius_m <= 0:
        raise GridError(f"antenna radius must be positive, got {antenna_radius_m}")
    return 2.0 * antenna_radius_m / (3.0 * math.sqrt(2.0))


def build_internal_grid(
    cell: Cell,
    antenna_radius_m: float | None = None,
    square_side_override: float | None = None,
) -> InternalGrid:
    """Divide a cell into the largest n x n grid of squares no smaller than
    the side derived from the antenna radius (or the explicit override).

    The squares tile the cell's actual bounds exactly, so for clipped cells
    they are slightly rectangular in effect; bounds stay authoritative.
    """
    if square_side_override is not None:
        if square_side_override <= 0:
            raise GridError(f"square side must be positive, got {square_side_override}")
        side = square_side_override
    elif antenna_radius_m is not None:
        side = square_side_for_radius(antenna_radius_m)
    else:
        raise GridError("either an antenna radius or a square side is required")
    n = max(1, int(math.floor(cell.side_m / side + 1e-9)))
    b = cell.bounds
    # precomputed edge arrays make neighbours share edges exactly
    xs = [b.xmin + b.width * k / n for k in range(n)] + [b.xmax]
    ys = [b.ymax - b.height * k / n for k in range(n)] + [b.ymin]
    squares = []
    for x in range(1, n + 1):  # row from top
        for y in range(1, n + 1):  # col from left
            sq = Rect(xs[y - 1], ys[x], xs[y], ys[x - 1])
            squares.append(SquareId(cell_id=cell.cell_id, position=(x, y), bounds=sq, n=n))
    return InternalGrid(
        cell_id=cell.cell_id,
        n=n,
        square_side_m=side,
        bounds=b,
        squares=tuple(squares),
    )


def square_class_position(square: SquareId) -> tuple[tuple[int, int], int]:
    """The square's (x, y) position together with its grid side n."""
    return square.position, square.n
