"""External cell tiling and internal square grids."""

import math
import random

import pytest

from towerplan.grid import (
    GridError,
    Rect,
    build_external_grid,
    build_internal_grid,
    square_class_position,
    square_side_for_radius,
)
from towerplan.raster import parse_raster


def _raster(ncols, nrows, cellsize=100, x0=0, y0=0):
    head = [
        f"ncols {ncols}",
        f"nrows {nrows}",
        f"xllcorner {x0}",
        f"yllcorner {y0}",
        f"cellsize {cellsize}",
        "NODATA_value -9999",
    ]
    rows = [" ".join("0" for _ in range(ncols)) for _ in range(nrows)]
    return parse_raster("\n".join(head + rows) + "\n")


def test_rect_basics():
    r = Rect(0, 0, 4, 2)
    assert r.width == 4 and r.height == 2 and r.area == 8
    assert r.center() == (2.0, 1.0)
    assert r.contains_point(0, 0) and not r.contains_point(4, 1)


def test_single_cell_grid():
    g = build_external_grid(_raster(10, 10, 200), 2000)
    assert g.n_rows == 1 and g.n_cols == 1
    cell = g.cell(0, 0)
    assert cell.bounds == Rect(0, 0, 2000, 2000)
    assert not cell.partial


def test_row_of_cells_indexed_from_north():
    g = build_external_grid(_raster(30, 10, 100), 1000)
    assert (g.n_rows, g.n_cols) == (1, 3)
    assert [c.cell_id for c in g.iter_cells()] == [(0, 0), (0, 1), (0, 2)]
    assert g.cell(0, 2).bounds.xmax == 3000.0


def test_two_rows_row_zero_on_top():
    g = build_external_grid(_raster(10, 20, 100), 1000)
    assert (g.n_rows, g.n_cols) == (2, 1)
    top, bottom = g.cell(0, 0), g.cell(1, 0)
    assert top.bounds.ymax == 2000.0 and top.bounds.ymin == 1000.0
    assert bottom.bounds.ymax == 1000.0 and bottom.bounds.ymin == 0.0


def test_clipped_edge_cells_flagged_partial():
    # 2500 m frame, 1000 m cells -> third column is 500 m wide
    g = build_external_grid(_raster(25, 10, 100), 1000)
    assert g.n_cols == 3
    last = g.cell(0, 2)
    assert last.partial
    assert last.bounds.width == pytest.approx(500.0)
    assert not g.cell(0, 0).partial
    # widths tile the frame exactly
    assert sum(c.bounds.width for c in g.iter_cells()) == pytest.approx(2500.0)


def test_grid_rejects_bad_cell_side():
    r = _raster(10, 10, 100)
    with pytest.raises(GridError):
        build_external_grid(r, 0)
    with pytest.raises(GridError):
        build_external_grid(r, -5)
    with pytest.raises(GridError):
        build_external_grid(r, 5000)  # larger than the 1000 m frame


def test_square_side_from_radius_is_block_half_diagonal():
    side = square_side_for_radius(850.0)
    # inverse identity: the 3x3 block's half-diagonal equals the radius
    assert 3 * side * math.sqrt(2) / 2 == pytest.approx(850.0, rel=1e-12)
    with pytest.raises(GridError):
        square_side_for_radius(0)


def test_internal_grid_square_count_from_radius():
    cell = build_external_grid(_raster(10, 10, 200), 2000).cell(0, 0)
    # side = 2*850/(3*sqrt(2)) = 400.69... -> floor(2000/400.69) = 4
    g = build_internal_grid(cell, antenna_radius_m=850.0)
    assert g.n == 4
    # explicit side wins over the radius
    g5 = build_internal_grid(cell, antenna_radius_m=850.0, square_side_override=400.0)
    assert g5.n == 5


def test_internal_grid_requires_some_sizing():
    cell = build_external_grid(_raster(10, 10, 200), 2000).cell(0, 0)
    with pytest.raises(GridError):
        build_internal_grid(cell)
    with pytest.raises(GridError):
        build_internal_grid(cell, square_side_override=-1)


def test_internal_grid_never_empty():
    # cell smaller than one square still yields a 1x1 grid
    g = build_external_grid(_raster(25, 10, 100), 1000)
    small = g.cell(0, 2)  # 500 m wide
    ig = build_internal_grid(small, square_side_override=800.0)
    assert ig.n == 1
    assert ig.squares[0].bounds == small.bounds


def test_squares_are_row_major_one_based_top_left_first():
    cell = build_external_grid(_raster(10, 10, 200), 2000).cell(0, 0)
    g = build_internal_grid(cell, square_side_override=400.0)
    assert g.positions()[:6] == [(1, 1), (1, 2), (1, 3), (1, 4), (1, 5), (2, 1)]
    first = g.square(1, 1)
    assert first.bounds.xmin == cell.bounds.xmin
    assert first.bounds.ymax == cell.bounds.ymax  # top row hugs the north edge
    last = g.square(5, 5)
    assert last.bounds.xmax == cell.bounds.xmax
    assert last.bounds.ymin == cell.bounds.ymin


def test_squares_tile_cell_exactly():
    cell = build_external_grid(_raster(30, 10, 100), 1000).cell(0, 1)
    g = build_internal_grid(cell, square_side_override=200.0)
    assert g.n == 5
    # neighbours share edges exactly (same float, not just close)
    for x in range(1, 6):
        for y in range(1, 5):
            assert g.square(x, y).bounds.xmax == g.square(x, y + 1).bounds.xmin
    for x in range(1, 5):
        for y in range(1, 6):
            assert g.square(x, y).bounds.ymin == g.square(x + 1, y).bounds.ymax
    total = sum(sq.bounds.area for sq in g.squares)
    assert total == pytest.approx(cell.bounds.area, rel=1e-12)


def test_square_containing_matches_bounds():
    cell = build_external_grid(_raster(10, 10, 200), 2000).cell(0, 0)
    g = build_internal_grid(cell, square_side_override=400.0)
    rng = random.Random(20260819)
    for _ in range(200):
        px = rng.uniform(0, 2000)
        py = rng.uniform(0, 2000)
        sq = g.square_containing(px, py)
        assert sq is not None
        assert sq.bounds.xmin <= px and sq.bounds.ymin <= py
        assert px < sq.bounds.xmax or sq.position[1] == g.n
        assert py > sq.bounds.ymin or sq.position[0] == g.n
    # max edges belong to the last row/col; outside points match nothing
    assert g.square_containing(2000, 2000).position == (1, 5)
    assert g.square_containing(0, 0).position == (5, 1)
    assert g.square_containing(-1, 500) is None
    assert g.square_containing(500, 2001) is None


def test_square_lookup_validates_position():
    cell = build_external_grid(_raster(10, 10, 200), 2000).cell(0, 0)
    g = build_internal_grid(cell, square_side_override=400.0)
    with pytest.raises(GridError):
        g.square(0, 3)
    with pytest.raises(GridError):
        g.square(3, 6)


def test_square_class_position_reports_n():
    cell = build_external_grid(_raster(10, 10, 200), 2000).cell(0, 0)
    g = build_internal_grid(cell, square_side_override=400.0)
    pos, n = square_class_position(g.square(3, 4))
    assert pos == (3, 4) and n == 5


def test_partial_cell_squares_follow_actual_bounds():
    g = build_external_grid(_raster(25, 10, 100), 1000)
    partial = g.cell(0, 2)  # 500 m wide, 1000 m tall
    ig = build_internal_grid(partial, square_side_override=200.0)
    assert ig.n == 5  # count comes from the nominal side
    sq = ig.square(1, 1)
    assert sq.bounds.width == pytest.approx(100.0)  # 500/5, not 200
    assert sq.bounds.height == pytest.approx(200.0)
