"""Show antenna footprints and the dual-antenna fallback.

An antenna covers its own square plus the eight neighbours, clipped at
the cell border.  When no square scores above the placement threshold,
two border squares are chosen to maximize their joint footprint; the
demo reproduces that choice on a 3 x 3 cell and draws both layouts.
"""

from towerplan.coverage import cell_coverage, footprint
from towerplan.grid import Cell, Rect, build_internal_grid
from towerplan.scoring import ScoredSquare, classify, goodness, select_placement


def _grid(n: int):
    cell = Cell(cell_id=(0, 0), bounds=Rect(0.0, 0.0, 300.0 * n, 300.0 * n),
                side_m=300.0 * n, partial=False)
    return build_internal_grid(cell, square_side_override=300.0)


def _draw(grid, antennas) -> None:
    cov = cell_coverage(grid, antennas)
    for x in range(1, grid.n + 1):
        row = []
        for y in range(1, grid.n + 1):
            if (x, y) in antennas:
                row.append("A")
            elif (x, y) in cov.covered:
                row.append("+")
            else:
                row.append(".")
        print("  " + " ".join(row))
    print(f"  covered {len(cov.covered)}/{cov.total} ({float(cov.fraction):.0%})\n")


def main() -> None:
    grid = _grid(5)
    print("single antenna at the center of a 5 x 5 cell:")
    _draw(grid, [(3, 3)])

    print("corner and edge antennas reach fewer squares:")
    corner = footprint(grid.square(1, 1), grid)
    edge = footprint(grid.square(1, 3), grid)
    print(f"  corner (1, 1) covers {len(corner.covered)}, edge (1, 3) covers {len(edge.covered)}\n")

    n = 3
    small = _grid(n)
    scored = {}
    for sq in small.squares:
        priority = classify(sq.position, n)
        scored[sq.position] = ScoredSquare(square=sq, priority=priority,
                                           score=goodness(priority, 40))
    placement = select_placement(small, scored, threshold=200.0)
    pair = [sq.position for sq in placement.squares]
    print(f"3 x 3 cell with nothing above threshold 200: mode={placement.mode}, "
          f"antennas at {pair[0]} and {pair[1]}:")
    _draw(small, pair)


if __name__ == "__main__":
    main()
