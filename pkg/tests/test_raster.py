"""ASCII grid parsing, canonical writing, and window sampling."""

import math

import numpy as np
import pytest

from towerplan.raster import (
    ElevationRaster,
    RasterHeaderError,
    RasterParseError,
    RasterRowError,
    RasterValueError,
    ingest_raster,
    mean_elevation,
    parse_raster,
    save_raster,
    write_raster,
)


def _grid_text(rows, ncols=None, header=None):
    ncols = ncols if ncols is not None else len(rows[0].split())
    head = header or [
        f"ncols {ncols}",
        f"nrows {len(rows)}",
        "xllcorner 0",
        "yllcorner 0",
        "cellsize 1",
        "NODATA_value -9999",
    ]
    return "\n".join(head + rows) + "\n"


def test_parse_small_grid():
    r = parse_raster(_grid_text(["1 2 3", "4 5 6"]))
    assert r.ncols == 3 and r.nrows == 2
    assert r.values.shape == (2, 3)
    assert r.values[0, 2] == 3.0  # row 0 is the first (northernmost) file row
    assert r.values[1, 0] == 4.0
    assert r.width_m == 3.0 and r.height_m == 2.0


def test_header_parses_offsets_and_nodata():
    text = _grid_text(
        ["7 8", "9 10"],
        header=[
            "ncols 2",
            "nrows 2",
            "xllcorner 100.5",
            "yllcorner -40",
            "cellsize 2.5",
            "NODATA_value -1",
        ],
    )
    r = parse_raster(text)
    assert r.origin_x == 100.5 and r.origin_y == -40.0
    assert r.cell_size_m == 2.5 and r.nodata == -1.0
    assert r.is_nodata(-1.0) and not r.is_nodata(7.0)


@pytest.mark.parametrize(
    "lineno,mutate",
    [
        (1, lambda h: h.__setitem__(0, "cols 3")),          # wrong key
        (1, lambda h: h.__setitem__(0, "ncols three")),     # non-integer
        (1, lambda h: h.__setitem__(0, "ncols 0")),         # nonpositive
        (2, lambda h: h.__setitem__(1, "nrows -2")),
        (3, lambda h: h.__setitem__(2, "xllcorner east")),
        (5, lambda h: h.__setitem__(4, "cellsize 0")),
        (5, lambda h: h.__setitem__(4, "cellsize -10")),
        (6, lambda h: h.__setitem__(5, "NODATA_value")),    # missing value
    ],
)
def test_header_errors_carry_line_numbers(lineno, mutate):
    header = [
        "ncols 3",
        "nrows 2",
        "xllcorner 0",
        "yllcorner 0",
        "cellsize 1",
        "NODATA_value -9999",
    ]
    mutate(header)
    with pytest.raises(RasterHeaderError) as err:
        parse_raster(_grid_text(["1 2 3", "4 5 6"], ncols=3, header=header))
    assert err.value.line == lineno


def test_truncated_header():
    with pytest.raises(RasterHeaderError):
        parse_raster("ncols 3\nnrows 2\n")


def test_row_length_mismatch_names_line():
    with pytest.raises(RasterRowError) as err:
        parse_raster(_grid_text(["1 2 3", "4 5"], ncols=3))
    assert err.value.line == 8  # 6 header lines + 2nd data row


def test_missing_rows():
    with pytest.raises(RasterRowError):
        parse_raster(_grid_text(["1 2 3"], ncols=3, header=None).replace("nrows 1", "nrows 2"))


def test_extra_rows():
    text = _grid_text(["1 2 3", "4 5 6", "7 8 9"]).replace("nrows 3", "nrows 2")
    with pytest.raises(RasterRowError) as err:
        parse_raster(text)
    assert err.value.line == 9


def test_non_numeric_value_names_line():
    with pytest.raises(RasterValueError) as err:
        parse_raster(_grid_text(["1 2 3", "4 x 6"]))
    assert err.value.line == 8
    assert "'x'" in str(err.value)


def test_parse_errors_are_value_errors():
    assert issubclass(RasterHeaderError, RasterParseError)
    assert issubclass(RasterRowError, RasterParseError)
    assert issubclass(RasterValueError, RasterParseError)
    assert issubclass(RasterParseError, ValueError)


def test_trailing_blank_lines_tolerated():
    r = parse_raster(_grid_text(["1 2", "3 4"]) + "\n\n")
    assert r.values[1, 1] == 4.0


def test_write_round_trip_is_byte_stable():
    text = _grid_text(["1 2.5 3", "4 5 -9999"])
    r = parse_raster(text)
    out = write_raster(r)
    assert parse_raster(out).values.tolist() == r.values.tolist()
    assert write_raster(parse_raster(out)) == out


def test_save_and_ingest(tmp_path):
    r = parse_raster(_grid_text(["1 2", "3 4"]))
    p = tmp_path / "g.asc"
    save_raster(r, p)
    again = ingest_raster(p)
    assert np.array_equal(again.values, r.values)
    assert again.cell_size_m == r.cell_size_m


def test_cone_argmax_lands_on_peak_cell():
    # peak at file cell (50, 50); oracle: flat argmax index 50*100 + 50 = 5050
    rows = []
    for i in range(100):
        rows.append(
            " ".join(str(1000.0 - math.hypot(i - 50, j - 50)) for j in range(100))
        )
    r = parse_raster(_grid_text(rows, ncols=100))
    assert int(np.argmax(r.values)) == 5050


def _four_by_four():
    # values[i][j] = 10*i + j, cellsize 1, origin (0, 0); row 0 at y in [3, 4)
    rows = [" ".join(str(10 * i + j) for j in range(4)) for i in range(4)]
    return parse_raster(_grid_text(rows))


def test_mean_elevation_window():
    r = _four_by_four()
    # window x in [0,2), y in [2,4) -> rows 0..1, cols 0..1 -> mean of {0,1,10,11}
    assert mean_elevation(r, 0, 2, 2, 4) == pytest.approx(5.5)
    # full frame
    assert mean_elevation(r, 0, 0, 4, 4) == pytest.approx(np.mean(r.values))


def test_mean_elevation_half_open_edges():
    r = _four_by_four()
    # col centers at 0.5, 1.5, 2.5, 3.5: xmax=1.5 excludes the center at 1.5
    assert mean_elevation(r, 0, 0, 1.5, 4) == pytest.approx(np.mean(r.values[:, :1]))
    # ymax exactly on a row center (y=1.5, row i=2) excludes that row,
    # leaving only the y=0.5 centers (bottom file row)
    assert mean_elevation(r, 0, 0.5, 4, 1.5) == pytest.approx(np.mean(r.values[3:4, :]))


def test_mean_elevation_skips_nodata():
    text = _grid_text(["1 -9999", "-9999 4"])
    r = parse_raster(text)
    assert mean_elevation(r, 0, 0, 2, 2) == pytest.approx(2.5)
    # all-nodata window
    assert mean_elevation(r, 1, 1, 2, 2) is None


def test_mean_elevation_outside_frame():
    r = _four_by_four()
    assert mean_elevation(r, 10, 10, 12, 12) is None


def test_values_are_float64():
    r = parse_raster(_grid_text(["1 2", "3 4"]))
    assert r.values.dtype == np.float64
    assert isinstance(r, ElevationRaster)
