"""Coded object tables per square: attributes, pairwise relations, transactions.

Objects carry coded attributes (type, size, shape) plus population and
employment levels.  Within a square each object is related to its nearest
neighbour through a direction code, a topological position code, and a binned
distance; a square's records then flatten into transactions for rule mining.
"""

from __future__ import annotations

import json
import logging
import math
import re
from dataclasses import dataclass, replace
from pathlib import Path

from shapely.geometry import LineString, Point, Polygon, box
from shapely.geometry.base import BaseGeometry

from .grid import InternalGrid, SquareId

logger = logging.getLogger(__name__)


class ObjectError(ValueError):
    """An object record fails validation."""


class DirectionUndefinedError(ValueError):
    """Direction between coincident centroids is undefined."""


TYPE_CODES = {
    1: "town",
    2: "road",
    3: "river",
    4: "sea",
    5: "lake",
    6: "mine",
    7: "forest",
    8: "bridge",
    9: "highway",
    10: "peak",
    11: "trough",
}

SIZE_CODES = {1: "large", 2: "medium", 3: "small"}

SHAPE_CODES = {1: "point", 2: "line", 3: "polygon"}

LEVELS = ("high", "medium", "low")

DIRECTION_CODES = {
    "A": "north of",
    "B": "south of",
    "C": "east of",
    "D": "west of",
    "E": "north east of",
    "F": "north west of",
    "G": "south east of",
    "H": "south west of",
}

# 45-degree sectors clockwise from north; boundaries fall to the clockwise side
_SECTOR_ORDER = ("A", "E", "C", "G", "B", "H", "D", "F")

DIRECTION_OPPOSITE = {"A": "B", "B": "A", "C": "D", "D": "C", "E": "H", "H": "E", "F": "G", "G": "F"}

POSITION_CODES = {
    "I": "overlap",
    "II": "meet",
    "III": "covers",
    "IV": "covered by",
    "V": "disjoint",
}

POSITION_DUAL = {"I": "I", "II": "II", "III": "IV", "IV": "III", "V": "V"}

# separations below this count as touching
MEET_TOLERANCE_M = 1e-6

DEFAULT_DISTANCE_BINS_M = (1000.0, 10000.0, 50000.0)

_SHAPE_GEOMS = {1: Point, 2: LineString, 3: Polygon}

_GEOMETRY_KINDS = {"point": 1, "polyline": 2, "polygon": 3}

# item tag order fixes the canonical sort of transaction items
ITEM_TAGS = ("type", "size", "shape", "dir", "pos", "dist", "pop", "emp")
_TAG_RANK = {t: i for i, t in enumerate(ITEM_TAGS)}


@dataclass(frozen=True)
class SpatialObject:
    """A mapped object with coded attributes and a shapely geometry."""

    object_id: str
    type_code: int
    size_code: int
    shape_code: int
    geometry: BaseGeometry
    population: str
    employment: str

    def __post_init__(self):
        if not self.object_id:
            raise ObjectError("object id must be non-empty")
        if self.type_code not in TYPE_CODES:
            raise ObjectError(f"object {self.object_id}: unknown type code {self.type_code}")
        if self.size_code not in SIZE_CODES:
            raise ObjectError(f"object {self.object_id}: unknown size code {self.size_code}")
        if self.shape_code not in SHAPE_CODES:
            raise ObjectError(f"object {self.object_id}: unknown shape code {self.shape_code}")
        if self.population not in LEVELS:
            raise ObjectError(f"object {self.object_id}: population must be one of {LEVELS}")
        if self.employment not in LEVELS:
            raise ObjectError(f"object {self.object_id}: employment must be one of {LEVELS}")
        # geometry/shape consistency is checked at load time only: clipping a
        # replica may legitimately degrade a polygon to a thinner geometry


def _check_geometry_kind(obj: SpatialObject) -> None:
    expected = _SHAPE_GEOMS[obj.shape_code]
    if not isinstance(obj.geometry, expected):
        raise ObjectError(
            f"object {obj.object_id}: shape code {obj.shape_code} requires "
            f"{expected.__name__}, got {type(obj.geometry).__name__}"
        )
    if obj.geometry.is_empty:
        raise ObjectError(f"object {obj.object_id}: empty geometry")
    if not obj.geometry.is_valid:
        raise ObjectError(f"object {obj.object_id}: invalid geometry")


def _geometry_from_json(object_id: str, node) -> BaseGeometry:
    if not isinstance(node, dict) or "kind" not in node or "coords" not in node:
        raise ObjectError(f"object {object_id}: geometry needs 'kind' and 'coords'")
    kind = node["kind"]
    coords = node["coords"]
    if kind not in _GEOMETRY_KINDS:
        raise ObjectError(f"object {object_id}: unknown geometry kind {kind!r}")
    try:
        if kind == "point":
            return Point(coords)
        if kind == "polyline":
            return LineString(coords)
        return Polygon(coords)
    except Exception as exc:
        raise ObjectError(f"object {object_id}: bad coordinates: {exc}") from None


def object_from_json(rec: dict) -> SpatialObject:
    for field in ("id", "type", "size", "shape", "geometry", "population", "employment"):
        if field not in rec:
            raise ObjectError(f"object record missing field {field!r}: {rec!r}")
    obj = SpatialObject(
        object_id=str(rec["id"]),
        type_code=rec["type"],
        size_code=rec["size"],
        shape_code=rec["shape"],
        geometry=_geometry_from_json(str(rec["id"]), rec["geometry"]),
        population=rec["population"],
        employment=rec["employment"],
    )
    _check_geometry_kind(obj)
    if _GEOMETRY_KINDS[rec["geometry"]["kind"]] != obj.shape_code:
        raise ObjectError(
            f"object {obj.object_id}: geometry kind {rec['geometry']['kind']!r} "
            f"disagrees with shape code {obj.shape_code}"
        )
    return obj


def load_objects(path: str | Path) -> list[SpatialObject]:
    """Load an object list from a JSON array file, checking id uniqueness."""
    data = json.loads(Path(path).read_text())
    if not isinstance(data, list):
        raise ObjectError("object file must hold a JSON array")
    objects = [object_from_json(rec) for rec in data]
    seen = set()
    for obj in objects:
        if obj.object_id in seen:
            raise ObjectError(f"duplicate object id {obj.object_id!r}")
        seen.add(obj.object_id)
    return objects


def _object_order(object_id: str):
    # natural order so "O10" sorts after "O2"
    m = re.fullmatch(r"([A-Za-z]*)(\d+)", object_id)
    if m:
        return (0, m.group(1), int(m.group(2)))
    return (1, object_id, 0)


def compute_direction(a: SpatialObject, b: SpatialObject) -> str:
    """Direction code of a relative to b, from centroid bearing.

    Code A means "a is north of b".  Sectors are 45 degrees wide, half-open,
    with boundary bearings assigned clockwise (a bearing of exactly NE is E).
    """
    ca, cb = a.geometry.centroid, b.geometry.centroid
    dx, dy = ca.x - cb.x, ca.y - cb.y
    if dx == 0.0 and dy == 0.0:
        raise DirectionUndefinedError(
            f"objects {a.object_id} and {b.object_id} have coincident centroids"
        )
    bearing = math.degrees(math.atan2(dx, dy))  # clockwise from north
    sector = int(math.floor(((bearing + 22.5) % 360.0) / 45.0))
    return _SECTOR_ORDER[sector]


def compute_position(a: SpatialObject, b: SpatialObject) -> str:
    """Topological position code of a relative to b.

    Precedence is fixed: covers, covered-by, meet, overlap, disjoint, so every
    geometry pair lands on exactly one code.  Equal geometries code as covers
    both ways, the one sanctioned break of code duality.
    """
    ga, gb = a.geometry, b.geometry
    if ga.covers(gb):
        return "III"
    if gb.covers(ga):
        return "IV"
    interiors_cross = ga.relate_pattern(gb, "T********")
    if not interiors_cross and ga.distance(gb) < MEET_TOLERANCE_M:
        return "II"
    if interiors_cross:
        return "I"
    return "V"


def distance_bin(meters: float, bins: tuple[float, ...] = DEFAULT_DISTANCE_BINS_M) -> str:
    """Label for a separation distance against an ascending threshold ladder."""
    if any(b <= 0 for b in bins) or list(bins) != sorted(bins) or len(set(bins)) != len(bins):
        raise ValueError(f"distance bins must be positive and strictly ascending, got {bins}")

    def _km(v: float) -> str:
        return f"{v / 1000.0:g}km"

    for threshold in bins:
        if meters < threshold:
            return f"<{_km(threshold)}"
    return f">={_km(bins[-1])}"


def compute_distance(
    a: SpatialObject, b: SpatialObject, bins: tuple[float, ...] = DEFAULT_DISTANCE_BINS_M
) -> tuple[float, str]:
    """Minimum separation in meters between the two geometries, plus its bin."""
    meters = a.geometry.distance(b.geometry)
    return meters, distance_bin(meters, bins)


def assign_objects(
    objects: list[SpatialObject], grid: InternalGrid
) -> dict[tuple[int, int], list[SpatialObject]]:
    """Clip objects into the grid's squares.

    Returns a map from square position to replicas clipped to that square's
    bounds (every position is present, possibly with an empty list).  Objects
    that miss the cell entirely are dropped with a warning.
    """
    out: dict[tuple[int, int], list[SpatialObject]] = {pos: [] for pos in grid.positions()}
    for obj in objects:
        hit = False
        for sq in grid.squares:
            sq_box = box(sq.bounds.xmin, sq.bounds.ymin, sq.bounds.xmax, sq.bounds.ymax)
            if not obj.geometry.intersects(sq_box):
                continue
            clipped = obj.geometry.intersection(sq_box)
            if clipped.is_empty:
                continue
            out[sq.position].append(replace(obj, geometry=clipped))
            hit = True
        if not hit:
            logger.warning(
                "object %s lies outside cell %s and was omitted", obj.object_id, grid.cell_id
            )
    return out


@dataclass(frozen=True)
class SquareRecord:
    """One object's row in a square's coded table.

    Relations point at the record's nearest neighbour within the square; all
    three are None when the object is alone.  The geometry is the clipped
    replica living in the square.
    """

    object_id: str
    type_code: int
    size_code: int
    shape_code: int
    direction: tuple[str, str] | None  # (code, neighbour id)
    position: tuple[str, str] | None
    distance: tuple[str, float, str] | None  # (neighbour id, meters, bin)
    population: str
    employment: str
    geometry: BaseGeometry


def build_square_database(
    square: SquareId,
    objects: list[SpatialObject],
    bins: tuple[float, ...] = DEFAULT_DISTANCE_BINS_M,
) -> list[SquareRecord]:
    """Relate each object in the square to its nearest neighbour.

    Nearest is by minimum geometry separation, ties broken by neighbour id, so
    the table is a deterministic function of the object set.  An empty square
    yields an empty table; a lone object gets null relations.
    """
    ordered = sorted(objects, key=lambda o: _object_order(o.object_id))
    records = []
    for obj in ordered:
        others = [o for o in ordered if o.object_id != obj.object_id]
        direction = position = distance = None
        if others:
            nearest = min(
                others,
                key=lambda o: (obj.geometry.distance(o.geometry), _object_order(o.object_id)),
            )
            try:
                direction = (compute_direction(obj, nearest), nearest.object_id)
            except DirectionUndefinedError:
                logger.warning(
                    "objects %s and %s have coincident centroids in square %s; "
                    "direction omitted",
                    obj.object_id,
                    nearest.object_id,
                    square.position,
                )
            position = (compute_position(obj, nearest), nearest.object_id)
            meters, label = compute_distance(obj, nearest, bins)
            distance = (nearest.object_id, meters, label)
        records.append(
            SquareRecord(
                object_id=obj.object_id,
                type_code=obj.type_code,
                size_code=obj.size_code,
                shape_code=obj.shape_code,
                direction=direction,
                position=position,
                distance=distance,
                population=obj.population,
                employment=obj.employment,
                geometry=obj.geometry,
            )
        )
    return records


# Transaction items are (tag, value) pairs; values are codes or small tuples.
Item = tuple
Transaction = frozenset


def encode_transactions(records: list[SquareRecord]) -> list[Transaction]:
    """One transaction per record; null relations contribute no item."""
    out = []
    for rec in records:
        items = [
            ("type", rec.type_code),
            ("size", rec.size_code),
            ("shape", rec.shape_code),
            ("pop", rec.population),
            ("emp", rec.employment),
        ]
        if rec.direction is not None:
            items.append(("dir", rec.direction))
        if rec.position is not None:
            items.append(("pos", (rec.position[0], rec.position[1])))
        if rec.distance is not None:
            items.append(("dist", (rec.distance[0], rec.distance[2])))
        out.append(frozenset(items))
    return out


def item_sort_key(item: Item):
    """Total order over transaction items: tag rank, then value."""
    tag, value = item
    if isinstance(value, tuple):
        flat = tuple(str(v) for v in value)
    else:
        flat = (f"{value:04d}",) if isinstance(value, int) else (str(value),)
    return (_TAG_RANK.get(tag, len(ITEM_TAGS)), tag, flat)
