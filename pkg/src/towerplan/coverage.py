"""Antenna footprints over internal grids and coverage accounting.

An antenna placed on a square reaches the square itself plus its eight
neighbours (the 3 x 3 block), clipped at the cell border.  Coverage for a
cell is the union of its antennas' footprints; nothing carries across cells.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .grid import GridError, InternalGrid, SquareId


@dataclass(frozen=True)
class Footprint:
    center: tuple[int, int]
    covered: frozenset  # of (x, y) positions


def footprint(center: SquareId, grid: InternalGrid) -> Footprint:
    """The 3 x 3 block around the center square, clipped to the grid."""
    x, y = center.position
    n = grid.n
    if center.cell_id != grid.cell_id:
        raise GridError(f"square {center.position} belongs to cell {center.cell_id}, not {grid.cell_id}")
    if not (1 <= x <= n and 1 <= y <= n):
        raise GridError(f"square position ({x}, {y}) outside 1..{n}")
    covered = frozenset(
        (i, j)
        for i in range(x - 1, x + 2)
        for j in range(y - 1, y + 2)
        if 1 <= i <= n and 1 <= j <= n
    )
    return Footprint(center=(x, y), covered=covered)


@dataclass(frozen=True)
class CellCoverage:
    cell_id: tuple[int, int]
    antennas: tuple[tuple[int, int], ...]
    covered: frozenset
    uncovered: tuple[tuple[int, int], ...]  # row-major
    total: int

    @property
    def fraction(self) -> Fraction:
        return Fraction(len(self.covered), self.total)

    @property
    def complete(self) -> bool:
        return not self.uncovered


@dataclass(frozen=True)
class CoverageReport:
    cells: tuple[CellCoverage, ...]

    @property
    def antenna_count(self) -> int:
        return sum(len(c.antennas) for c in self.cells)

    @property
    def complete(self) -> bool:
        return all(c.complete for c in self.cells)


def cell_coverage(grid: InternalGrid, antenna_positions) -> CellCoverage:
    """Union of footprints for antennas placed at the given positions."""
    positions = tuple(antenna_positions)
    covered = frozenset()
    for pos in positions:
        covered |= footprint(grid.square(*pos), grid).covered
    uncovered = tuple(pos for pos in grid.positions() if pos not in covered)
    return CellCoverage(
        cell_id=grid.cell_id,
        antennas=positions,
        covered=covered,
        uncovered=uncovered,
        total=grid.n * grid.n,
    )


def coverage(placed) -> CoverageReport:
    """Coverage over each (grid, antenna positions) pair, in the given order."""
    return CoverageReport(cells=tuple(cell_coverage(g, p) for g, p in placed))
