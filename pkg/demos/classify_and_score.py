"""Classify a cell's squares and walk through one goodness calculation.

Border squares rank SECOND, interior squares FIRST; the class points plus
the terrain suitability percentage give each square its goodness.  The
demo draws the class map as ASCII and breaks down the score of a square
that mixes sea, road, and empty terrain.
"""

from towerplan.grid import Cell, Rect, build_internal_grid
from towerplan.scoring import (
    CLASS_SCORES,
    PriorityClass,
    SuitabilityTable,
    classify,
    goodness,
)


def main() -> None:
    n = 5
    cell = Cell(cell_id=(0, 0), bounds=Rect(0.0, 0.0, 2000.0, 2000.0),
                side_m=2000.0, partial=False)
    grid = build_internal_grid(cell, square_side_override=2000.0 / n)

    print(f"class map for an {n} x {n} cell (B = border/SECOND, i = interior/FIRST):")
    for x in range(1, n + 1):
        row = "".join(
            " B" if classify((x, y), n) is PriorityClass.SECOND else " i"
            for y in range(1, n + 1)
        )
        print(f"  {row}")
    border = sum(1 for sq in grid.squares
                 if classify(sq.position, n) is PriorityClass.SECOND)
    print(f"  {border} border squares = 4n - 4 = {4 * n - 4}\n")

    table = SuitabilityTable.default()
    print("goodness of a border square that is 3/8 sea and carries a road:")
    sea_part = 0.375 * table.entries[4]
    road_part = table.line_weight * table.entries[2]
    empty_part = (1.0 - 0.375 - table.line_weight) * table.empty_terrain
    pct = round(sea_part + road_part + empty_part)
    print(f"  sea   0.375 x {table.entries[4]} = {sea_part}")
    print(f"  road  {table.line_weight} x {table.entries[2]} = {road_part}")
    print(f"  empty {1.0 - 0.375 - table.line_weight:.3f} x {table.empty_terrain:g} "
          f"= {empty_part:.2f}")
    print(f"  suitability = {pct}")
    score = goodness(PriorityClass.SECOND, pct)
    print(f"  goodness = {CLASS_SCORES[PriorityClass.SECOND]} (class) + {pct} = {score.total}")
    best = goodness(PriorityClass.FIRST, 50)
    print(f"\nan interior square fully on sea scores {best.total}, so it wins the cell")


if __name__ == "__main__":
    main()
