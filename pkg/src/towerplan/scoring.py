"""Square classification, terrain suitability, goodness totals, placement.

A square is FIRST class (interior) or SECOND class (border); the class is
worth 100 or 50 points.  Suitability grades the square's terrain mix on a
0..100 percent scale from a per-type table.  Goodness is the plain sum, and
placement picks the best square, falling back to a pair of border squares
when no single square clears the threshold.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Mapping

from .coverage import footprint
from .grid import InternalGrid, SquareId
from .miner import AssociationRule, _itemset_key
from .spatialdb import TYPE_CODES, SquareRecord, item_sort_key

logger = logging.getLogger(__name__)


class ScoringError(ValueError):
    """Invalid scoring inputs."""


class PriorityClass(Enum):
    FIRST = "FIRST"
    SECOND = "SECOND"


CLASS_SCORES = {PriorityClass.FIRST: 100, PriorityClass.SECOND: 50}

DEFAULT_SUITABILITY = {
    1: 20,   # town: dense development resists placement
    2: 60,   # road: easy access
    3: 40,   # river
    4: 50,   # sea
    5: 40,   # lake
    6: 30,   # mine
    7: 55,   # forest
    8: 35,   # bridge
    9: 60,   # highway
    10: 90,  # peak: best propagation
    11: 10,  # trough: worst propagation
}

DEFAULT_EMPTY_TERRAIN = 50.0


def classify(position: tuple[int, int], n: int) -> PriorityClass:
    """FIRST for interior squares, SECOND for squares touching the border."""
    x, y = position
    if n < 1:
        raise ScoringError(f"grid side must be at least 1, got {n}")
    if not (1 <= x <= n and 1 <= y <= n):
        raise ScoringError(f"position ({x}, {y}) outside 1..{n}")
    if x == 1 or x == n or y == 1 or y == n:
        return PriorityClass.SECOND
    return PriorityClass.FIRST


def class_score(cls: PriorityClass) -> int:
    return CLASS_SCORES[cls]


@dataclass(frozen=True)
class SuitabilityTable:
    """Per-type suitability percentages plus weights for thin geometries.

    Polygons weigh in by their area fraction of the square; points and lines
    have no area, so they carry small fixed weights instead.
    """

    entries: Mapping[int, float]
    empty_terrain: float = DEFAULT_EMPTY_TERRAIN
    point_weight: float = 0.05
    line_weight: float = 0.1

    def __post_init__(self):
        missing = sorted(set(TYPE_CODES) - set(self.entries))
        if missing:
            raise ScoringError(f"suitability table missing type codes {missing}")
        unknown = sorted(set(self.entries) - set(TYPE_CODES))
        if unknown:
            raise ScoringError(f"suitability table has unknown type codes {unknown}")
        for code, value in self.entries.items():
            if not 0 <= value <= 100:
                raise ScoringError(f"suitability for type {code} must be in 0..100, got {value}")
        if not 0 <= self.empty_terrain <= 100:
            raise ScoringError(f"empty-terrain suitability must be in 0..100, got {self.empty_terrain}")

    @classmethod
    def default(cls) -> "SuitabilityTable":
        return cls(entries=dict(DEFAULT_SUITABILITY))

    @classmethod
    def from_config(cls, overrides: Mapping | None) -> "SuitabilityTable":
        entries = dict(DEFAULT_SUITABILITY)
        empty = DEFAULT_EMPTY_TERRAIN
        if overrides:
            for key, value in overrides.items():
                if key == "empty":
                    empty = float(value)
                    continue
                try:
                    code = int(key)
                except (TypeError, ValueError):
                    raise ScoringError(f"suitability override key {key!r} is not a type code") from None
                entries[code] = float(value)
        return cls(entries=entries, empty_terrain=empty)


def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def _dominant_rule_type(rules: list[AssociationRule]) -> int | None:
    counts: dict[int, int] = {}
    for rule in rules:
        for tag, value in rule.antecedent | rule.consequent:
            if tag == "type":
                counts[value] = counts.get(value, 0) + 1
    if not counts:
        return None
    return min(counts, key=lambda c: (-counts[c], c))


def suitability(
    square: SquareId,
    records: list[SquareRecord],
    rules: list[AssociationRule],
    table: SuitabilityTable,
) -> int:
    """Weighted suitability percent of the square, rounded half-up to an int.

    Polygon records weigh by clipped area fraction; point and line records by
    the table's fixed weights.  Leftover weight goes to empty terrain; weight
    overflow normalizes instead.  The mined rules only cross-check which type
    dominates; on disagreement the area verdict stands and a warning is
    logged.
    """
    if not records:
        return _round_half_up(table.empty_terrain)
    area = square.bounds.area
    if area <= 0:
        raise ScoringError(f"square {square.position} has no area")
    weighted = []
    for rec in records:
        if rec.shape_code == 1:
            w = table.point_weight
        elif rec.shape_code == 2:
            w = table.line_weight
        else:
            w = min(rec.geometry.area / area, 1.0)
        weighted.append((w, float(table.entries[rec.type_code]), rec.type_code))
    total_w = sum(w for w, _, _ in weighted)
    if total_w > 1.0:
        value = sum(w * s for w, s, _ in weighted) / total_w
    else:
        value = sum(w * s for w, s, _ in weighted) + (1.0 - total_w) * table.empty_terrain

    by_weight = max(weighted, key=lambda t: (t[0], -t[2]))[2] if weighted else None
    by_rules = _dominant_rule_type(rules)
    if by_rules is not None and by_weight is not None and by_rules != by_weight:
        logger.warning(
            "square %s: rules favour type %s but terrain weight favours type %s; "
            "using the terrain verdict",
            square.position,
            by_rules,
            by_weight,
        )
    return max(0, min(100, _round_half_up(value)))


@dataclass(frozen=True)
class GoodnessScore:
    class_component: int
    suitability_component: int

    @property
    def total(self) -> int:
        return self.class_component + self.suitability_component


def goodness(priority: PriorityClass, suitability_pct: int) -> GoodnessScore:
    """Class points plus suitability percent; both end up on one 0..200 scale."""
    if not 0 <= suitability_pct <= 100:
        raise ScoringError(f"suitability percent must be in 0..100, got {suitability_pct}")
    return GoodnessScore(class_component=class_score(priority), suitability_component=suitability_pct)


@dataclass(frozen=True)
class ScoredSquare:
    square: SquareId
    priority: PriorityClass
    score: GoodnessScore


@dataclass(frozen=True)
class RulesDigest:
    rule_count: int
    top_rules: tuple[AssociationRule, ...]


@dataclass(frozen=True)
class Placement:
    cell_id: tuple[int, int]
    mode: str  # "single" or "dual"
    squares: tuple[SquareId, ...]
    scores: tuple[GoodnessScore, ...]
    digests: tuple[RulesDigest, ...]


def _rule_digest(rules: list[AssociationRule] | None, top: int = 3) -> RulesDigest:
    rules = rules or []
    ordered = sorted(
        rules,
        key=lambda r: (
            -r.confidence,
            -r.support,
            _itemset_key(r.antecedent | r.consequent, item_sort_key),
            _itemset_key(r.antecedent, item_sort_key),
        ),
    )
    return RulesDigest(rule_count=len(rules), top_rules=tuple(ordered[:top]))


def _dist2_to_center(square: SquareId, grid: InternalGrid) -> float:
    sx, sy = square.bounds.center()
    cx, cy = grid.bounds.center()
    return (sx - cx) ** 2 + (sy - cy) ** 2


def select_placement(
    grid: InternalGrid,
    scored: Mapping[tuple[int, int], ScoredSquare],
    threshold: float,
    rules_by_square: Mapping[tuple[int, int], list[AssociationRule]] | None = None,
) -> Placement:
    """Pick the antenna square(s) for a cell.

    The best single square wins when its goodness clears the threshold; ties
    break toward the cell center, then by position.  Otherwise two border
    squares are chosen to maximize joint footprint size, then joint goodness,
    then lowest positions.  With fewer than two border squares the single
    best square stands despite the threshold.
    """
    if not scored:
        raise ScoringError(f"no scored squares for cell {grid.cell_id}")
    rules_by_square = rules_by_square or {}

    def _digest(pos):
        return _rule_digest(rules_by_square.get(pos))

    best = min(
        scored.values(),
        key=lambda s: (-s.score.total, _dist2_to_center(s.square, grid), s.square.position),
    )
    if best.score.total >= threshold:
        return Placement(
            cell_id=grid.cell_id,
            mode="single",
            squares=(best.square,),
            scores=(best.score,),
            digests=(_digest(best.square.position),),
        )

    border = sorted(
        (s for s in scored.values() if s.priority is PriorityClass.SECOND),
        key=lambda s: s.square.position,
    )
    if len(border) < 2:
        logger.warning(
            "cell %s: no single square clears threshold %s and fewer than two "
            "border squares exist; placing the best single square",
            grid.cell_id,
            threshold,
        )
        return Placement(
            cell_id=grid.cell_id,
            mode="single",
            squares=(best.square,),
            scores=(best.score,),
            digests=(_digest(best.square.position),),
        )

    def _pair_key(pair):
        a, b = pair
        union = footprint(a.square, grid).covered | footprint(b.square, grid).covered
        return (
            -len(union),
            -(a.score.total + b.score.total),
            (a.square.position, b.square.position),
        )

    a, b = min(combinations(border, 2), key=_pair_key)
    return Placement(
        cell_id=grid.cell_id,
        mode="dual",
        squares=(a.square, b.square),
        scores=(a.score, b.score),
        digests=(_digest(a.square.position), _digest(b.square.position)),
    )
