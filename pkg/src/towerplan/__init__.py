"""Antenna placement planning over gridded terrain.

The package splits the problem into small layers: ASCII elevation rasters
(`raster`), the external cell grid and per-cell square grids (`grid`), coded
object tables with pairwise spatial relations (`spatialdb`), frequent-itemset
and rule mining on those tables (`miner`), square classification and goodness
scoring (`scoring`), antenna footprint accounting (`coverage`), and the
deterministic end-to-end pipeline (`pipeline`, `render`, `cli`).
"""

__version__ = "0.1.0"
