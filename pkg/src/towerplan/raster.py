"""ESRI ASCII grid elevation rasters: parsing, canonical serialization, sampling.

The on-disk format is the plain-text ASCII grid: six header lines (ncols,
nrows, xllcorner, yllcorner, cellsize, NODATA_value) followed by nrows rows of
ncols whitespace-separated numbers, northernmost row first.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


class RasterParseError(ValueError):
    """A raster file could not be parsed.  Carries the 1-based line number."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class RasterHeaderError(RasterParseError):
    """Header line missing, mislabeled, or holding an unusable value."""


class RasterRowError(RasterParseError):
    """Data row count or row length does not match the header."""


class RasterValueError(RasterParseError):
    """A data token is not numeric."""


_HEADER_KEYS = ("ncols", "nrows", "xllcorner", "yllcorner", "cellsize", "NODATA_value")


@dataclass(frozen=True)
class ElevationRaster:
    """A parsed elevation grid.

    `values` is a float64 array of shape (nrows, ncols) with row 0 the
    northernmost row, exactly as the rows appear in the file.  `origin_x` and
    `origin_y` are the coordinates of the lower-left corner.
    """

    ncols: int
    nrows: int
    origin_x: float
    origin_y: float
    cell_size_m: float
    nodata: float
    values: np.ndarray

    @property
    def width_m(self) -> float:
        return self.ncols * self.cell_size_m

    @property
    def height_m(self) -> float:
        return self.nrows * self.cell_size_m

    def is_nodata(self, v: float) -> bool:
        return v == self.nodata


def _parse_header_line(lineno: int, line: str, expected_key: str) -> str:
    parts = line.split()
    if len(parts) != 2:
        raise RasterHeaderError(lineno, f"expected '{expected_key} <value>', got {line.strip()!r}")
    key, value = parts
    if key.lower() != expected_key.lower():
        raise RasterHeaderError(lineno, f"expected header key {expected_key!r}, got {key!r}")
    return value


def parse_raster(text: str) -> ElevationRaster:
    """Parse ASCII grid text.  Raises a RasterParseError subclass on bad input."""
    lines = text.splitlines()
    if len(lines) < len(_HEADER_KEYS):
        raise RasterHeaderError(len(lines) + 1, "incomplete header: six header lines required")

    raw: dict[str, str] = {}
    for i, key in enumerate(_HEADER_KEYS):
        raw[key] = _parse_header_line(i + 1, lines[i], key)

    def _int(key: str, lineno: int) -> int:
        try:
            v = int(raw[key])
        except ValueError:
            raise RasterHeaderError(lineno, f"{key} must be an integer, got {raw[key]!r}") from None
        if v <= 0:
            raise RasterHeaderError(lineno, f"{key} must be positive, got {v}")
        return v

    def _float(key: str, lineno: int) -> float:
        try:
            return float(raw[key])
        except ValueError:
            raise RasterHeaderError(lineno, f"{key} must be numeric, got {raw[key]!r}") from None

    ncols = _int("ncols", 1)
    nrows = _int("nrows", 2)
    origin_x = _float("xllcorner", 3)
    origin_y = _float("yllcorner", 4)
    cell_size = _float("cellsize", 5)
    if cell_size <= 0:
        raise RasterHeaderError(5, f"cellsize must be positive, got {cell_size}")
    nodata = _float("NODATA_value", 6)

    values = np.empty((nrows, ncols), dtype=np.float64)
    row = 0
    for offset, line in enumerate(lines[len(_HEADER_KEYS):]):
        lineno = len(_HEADER_KEYS) + offset + 1
        tokens = line.split()
        if not tokens:
            # blank lines are tolerated only after the last data row
            continue
        if row >= nrows:
            raise RasterRowError(lineno, f"expected {nrows} data rows, found extra data")
        if len(tokens) != ncols:
            raise RasterRowError(lineno, f"expected {ncols} values in row {row + 1}, got {len(tokens)}")
        for j, tok in enumerate(tokens):
            try:
                values[row, j] = float(tok)
            except ValueError:
                raise RasterValueError(lineno, f"non-numeric value {tok!r} in column {j + 1}") from None
        row += 1
    if row != nrows:
        raise RasterRowError(len(lines) + 1, f"expected {nrows} data rows, found {row}")

    return ElevationRaster(
        ncols=ncols,
        nrows=nrows,
        origin_x=origin_x,
        origin_y=origin_y,
        cell_size_m=cell_size,
        nodata=nodata,
        values=values,
    )


def _fmt(v: float) -> str:
    # integers print without a trailing .0 so round-trips stay byte-stable
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def write_raster(raster: ElevationRaster) -> str:
    """Serialize to canonical ASCII grid text (single spaces, '\\n' line ends)."""
    out = [
        f"ncols {raster.ncols}",
        f"nrows {raster.nrows}",
        f"xllcorner {_fmt(raster.origin_x)}",
        f"yllcorner {_fmt(raster.origin_y)}",
        f"cellsize {_fmt(raster.cell_size_m)}",
        f"NODATA_value {_fmt(raster.nodata)}",
    ]
    for row in raster.values:
        out.append(" ".join(_fmt(v) for v in row))
    return "\n".join(out) + "\n"


def ingest_raster(path: str | Path) -> ElevationRaster:
    """Read and parse an ASCII grid file."""
    return parse_raster(Path(path).read_text())


def save_raster(raster: ElevationRaster, path: str | Path) -> None:
    Path(path).write_text(write_raster(raster))


def mean_elevation(raster: ElevationRaster, xmin: float, ymin: float, xmax: float, ymax: float) -> float | None:
    """Mean of non-nodata samples whose centers fall in [xmin,xmax) x [ymin,ymax).

    Returns None when the window catches no usable sample.  Sample centers
    never sit on the raster's outer max edges, so half-open windows tiled over
    the raster account for every sample exactly once.
    """
    cs = raster.cell_size_m
    # center coords: x = origin_x + (j + 0.5) cs ; y = origin_y + (nrows - i - 0.5) cs
    j_lo = int(np.ceil((xmin - raster.origin_x) / cs - 0.5))
    j_hi = int(np.ceil((xmax - raster.origin_x) / cs - 0.5))  # exclusive
    # y decreases with row index, so [ymin, ymax) maps to strict/inclusive
    # conditions that both land on floor(..) + 1
    i_lo = int(np.floor(raster.nrows - (ymax - raster.origin_y) / cs - 0.5)) + 1  # from top, inclusive
    i_hi = int(np.floor(raster.nrows - (ymin - raster.origin_y) / cs - 0.5)) + 1  # exclusive
    j_lo, j_hi = max(j_lo, 0), min(j_hi, raster.ncols)
    i_lo, i_hi = max(i_lo, 0), min(i_hi, raster.nrows)
    if j_lo >= j_hi or i_lo >= i_hi:
        return None
    window = raster.values[i_lo:i_hi, j_lo:j_hi]
    usable = window[window != raster.nodata]
    if usable.size == 0:
        return None
    return float(usable.mean())
