"""End-to-end planning: config handling, per-cell workers, report assembly.

The report is a deterministic JSON document: cells are processed in row-major
order (optionally on a thread pool, merged back in order), every list in the
document has a fixed sort, and serialization always uses sorted keys, so a
re-run on identical inputs yields identical bytes.
"""

from __future__ import annotations

import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from shapely.geometry import box

from . import __version__
from .coverage import cell_coverage
from .grid import Cell, ExternalGrid, InternalGrid, build_external_grid, build_internal_grid
from .miner import AssociationRule, apriori, generate_rules
from .raster import ElevationRaster, ingest_raster, mean_elevation
from .scoring import (
    PriorityClass,
    ScoredSquare,
    SuitabilityTable,
    classify,
    goodness,
    select_placement,
    suitability,
)
from .spatialdb import (
    DEFAULT_DISTANCE_BINS_M,
    SpatialObject,
    assign_objects,
    build_square_database,
    encode_transactions,
    item_sort_key,
    load_objects,
)

logger = logging.getLogger(__name__)

DEFAULT_MINSUP = 0.5
DEFAULT_MINCONF = 0.8
DEFAULT_THRESHOLD = 100.0


class ConfigError(ValueError):
    """Invalid planning configuration."""


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name for the CLI."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"{stage}: {message}")


@dataclass(frozen=True)
class PlanConfig:
    raster_path: Path
    objects_path: Path | None
    cell_side_m: float
    antenna_radius_m: float | None = None
    square_side_override: float | None = None
    minsup: float = DEFAULT_MINSUP
    minconf: float = DEFAULT_MINCONF
    threshold: float = DEFAULT_THRESHOLD
    suitability_table: SuitabilityTable = None  # type: ignore[assignment]
    distance_bins_m: tuple = DEFAULT_DISTANCE_BINS_M
    jobs: int | None = None

    def __post_init__(self):
        if self.suitability_table is None:
            object.__setattr__(self, "suitability_table", SuitabilityTable.default())
        if self.cell_side_m <= 0:
            raise ConfigError(f"cell_side_m must be positive, got {self.cell_side_m}")
        if self.antenna_radius_m is None and self.square_side_override is None:
            raise ConfigError("one of antenna_radius_m or square_side_override is required")
        for name in ("antenna_radius_m", "square_side_override", "threshold"):
            value = getattr(self, name)
            if value is not None and value <= 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        for name in ("minsup", "minconf"):
            value = getattr(self, name)
            if not 0 < value <= 1:
                raise ConfigError(f"{name} must be in (0, 1], got {value}")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError(f"jobs must be at least 1, got {self.jobs}")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "PlanConfig":
        """Load config JSON; relative input paths resolve against the file."""
        path = Path(path)
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"config {path}: expected a JSON object")
        return cls.from_mapping(raw, base_dir=path.parent, **overrides)

    @classmethod
    def from_mapping(cls, raw: dict, base_dir: Path | None = None, **overrides) -> "PlanConfig":
        base_dir = base_dir or Path.cwd()
        merged = dict(raw)
        for key, value in overrides.items():
            if value is not None:
                merged[key] = value

        def _path(key: str) -> Path | None:
            value = merged.get(key)
            if value is None:
                return None
            p = Path(value)
            return p if p.is_absolute() else base_dir / p

        raster_path = _path("raster")
        if raster_path is None:
            raise ConfigError("config requires a 'raster' path")
        known = {
            "raster", "objects", "cell_side_m", "antenna_radius_m", "square_side_override",
            "minsup", "minconf", "threshold", "suitability", "distance_bins_m", "jobs",
        }
        unknown = sorted(set(merged) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {unknown}")
        if "cell_side_m" not in merged:
            raise ConfigError("config requires 'cell_side_m'")
        bins = merged.get("distance_bins_m")
        return cls(
            raster_path=raster_path,
            objects_path=_path("objects"),
            cell_side_m=float(merged["cell_side_m"]),
            antenna_radius_m=(
                float(merged["antenna_radius_m"]) if merged.get("antenna_radius_m") is not None else None
            ),
            square_side_override=(
                float(merged["square_side_override"])
                if merged.get("square_side_override") is not None
                else None
            ),
            minsup=float(merged.get("minsup", DEFAULT_MINSUP)),
            minconf=float(merged.get("minconf", DEFAULT_MINCONF)),
            threshold=float(merged.get("threshold", DEFAULT_THRESHOLD)),
            suitability_table=SuitabilityTable.from_config(merged.get("suitability")),
            distance_bins_m=tuple(float(b) for b in bins) if bins else DEFAULT_DISTANCE_BINS_M,
            jobs=int(merged["jobs"]) if merged.get("jobs") is not None else None,
        )

    def effective_jobs(self) -> int:
        if self.jobs is not None:
            return self.jobs
        env = os.environ.get("TOWERPLAN_JOBS")
        if env:
            try:
                jobs = int(env)
            except ValueError:
                raise ConfigError(f"TOWERPLAN_JOBS must be an integer, got {env!r}") from None
            if jobs < 1:
                raise ConfigError(f"TOWERPLAN_JOBS must be at least 1, got {jobs}")
            return jobs
        return 1


def _num(value: float):
    """Render whole floats as JSON integers so the echo is tidy and stable."""
    if isinstance(value, float) and value.is_integer():
        return int(value)
    return value


def _config_echo(cfg: PlanConfig) -> dict:
    # paths, output locations, and job counts stay out of the echo: they must
    # not influence report bytes
    table = cfg.suitability_table
    suit = {str(code): _num(float(v)) for code, v in table.entries.items()}
    suit["empty"] = _num(float(table.empty_terrain))
    return {
        "cell_side_m": _num(cfg.cell_side_m),
        "antenna_radius_m": _num(cfg.antenna_radius_m) if cfg.antenna_radius_m is not None else None,
        "square_side_override": (
            _num(cfg.square_side_override) if cfg.square_side_override is not None else None
        ),
        "minsup": _num(cfg.minsup),
        "minconf": _num(cfg.minconf),
        "threshold": _num(cfg.threshold),
        "suitability": suit,
        "distance_bins_m": [_num(b) for b in cfg.distance_bins_m],
    }


def _item_json(item):
    tag, value = item
    return [tag, list(value) if isinstance(value, tuple) else value]


def rule_to_json(rule: AssociationRule, transactions: int) -> dict:
    """Rule as JSON: decimal support/confidence plus exact counts."""
    joint = rule.support * transactions
    antecedent = rule.support / rule.confidence * transactions
    return {
        "antecedent": [_item_json(i) for i in sorted(rule.antecedent, key=item_sort_key)],
        "consequent": [_item_json(i) for i in sorted(rule.consequent, key=item_sort_key)],
        "support": float(rule.support),
        "confidence": float(rule.confidence),
        "counts": {
            "transactions": transactions,
            "antecedent": int(antecedent),
            "joint": int(joint),
        },
    }


def _rect_json(rect) -> list:
    return [_num(rect.xmin), _num(rect.ymin), _num(rect.xmax), _num(rect.ymax)]


@dataclass(frozen=True)
class _CellResult:
    cell_json: dict
    classification_json: dict
    mining_json: dict
    coverage_json: dict
    grid: InternalGrid
    complete: bool


def _plan_cell(cell: Cell, objects: list[SpatialObject], cfg: PlanConfig, raster: ElevationRaster) -> _CellResult:
    grid = build_internal_grid(cell, cfg.antenna_radius_m, cfg.square_side_override)
    cell_box = box(cell.bounds.xmin, cell.bounds.ymin, cell.bounds.xmax, cell.bounds.ymax)
    subset = [o for o in objects if o.geometry.intersects(cell_box)]
    assigned = assign_objects(subset, grid)

    scored: dict[tuple[int, int], ScoredSquare] = {}
    rules_by_square: dict[tuple[int, int], list[AssociationRule]] = {}
    tx_counts: dict[tuple[int, int], int] = {}
    squares_json = []
    first, second = [], []
    mining_squares = []

    for sq in grid.squares:
        records = build_square_database(sq, assigned[sq.position], cfg.distance_bins_m)
        transactions = encode_transactions(records)
        if len(transactions) >= 2:
            frequent = apriori(transactions, cfg.minsup, key=item_sort_key)
            rules = generate_rules(frequent, cfg.minconf, key=item_sort_key)
        else:
            # a lone record supports every itemset it contains; rules from it
            # would be vacuous, so such squares mine to nothing
            rules = []
        priority = classify(sq.position, grid.n)
        suit = suitability(sq, records, rules, cfg.suitability_table)
        score = goodness(priority, suit)
        scored[sq.position] = ScoredSquare(square=sq, priority=priority, score=score)
        rules_by_square[sq.position] = rules
        tx_counts[sq.position] = len(transactions)
        (first if priority is PriorityClass.FIRST else second).append(list(sq.position))
        elevation = mean_elevation(
            raster, sq.bounds.xmin, sq.bounds.ymin, sq.bounds.xmax, sq.bounds.ymax
        )
        squares_json.append(
            {
                "position": list(sq.position),
                "priority": priority.value,
                "class_score": score.class_component,
                "suitability": score.suitability_component,
                "goodness": score.total,
                "elevation_m": elevation,
                "objects": [r.object_id for r in records],
                "transactions": len(transactions),
                "rule_count": len(rules),
            }
        )
        if transactions:
            mining_squares.append(
                {
                    "square": list(sq.position),
                    "transactions": len(transactions),
                    "rules": [rule_to_json(r, len(transactions)) for r in rules],
                }
            )

    placement = select_placement(grid, scored, cfg.threshold, rules_by_square)
    placement_json = {
        "mode": placement.mode,
        "squares": [
            {
                "position": list(sq.position),
                "class_score": score.class_component,
                "suitability": score.suitability_component,
                "goodness": score.total,
                "rules": {
                    "count": digest.rule_count,
                    "top": [
                        rule_to_json(r, tx_counts[sq.position]) for r in digest.top_rules
                    ],
                },
            }
            for sq, score, digest in zip(placement.squares, placement.scores, placement.digests)
        ],
    }

    cov = cell_coverage(grid, [sq.position for sq in placement.squares])
    coverage_json = {
        "cell": list(cell.cell_id),
        "antennas": [list(p) for p in cov.antennas],
        "covered": len(cov.covered),
        "total": cov.total,
        "fraction": float(cov.fraction),
        "uncovered": [list(p) for p in cov.uncovered],
    }

    return _CellResult(
        cell_json={
            "cell": list(cell.cell_id),
            "bounds": _rect_json(cell.bounds),
            "partial": cell.partial,
            "squares": squares_json,
            "placement": placement_json,
        },
        classification_json={
            "cell": list(cell.cell_id),
            "n": grid.n,
            "first": first,
            "second": second,
        },
        mining_json={"cell": list(cell.cell_id), "squares": mining_squares},
        coverage_json=coverage_json,
        grid=grid,
        complete=cov.complete,
    )


def plan_with_grids(cfg: PlanConfig) -> tuple[dict, dict[tuple[int, int], InternalGrid]]:
    """Run the full pipeline; returns the report plus each cell's grid.

    The grids carry the geometry the SVG renderer needs and are not part of
    the report document.
    """
    try:
        raster = ingest_raster(cfg.raster_path)
    except OSError as exc:
        raise StageError("raster", str(exc)) from exc
    except ValueError as exc:
        raise StageError("raster", f"{cfg.raster_path}: {exc}") from exc

    objects: list[SpatialObject] = []
    if cfg.objects_path is not None:
        try:
            objects = load_objects(cfg.objects_path)
        except OSError as exc:
            raise StageError("objects", str(exc)) from exc
        except ValueError as exc:
            raise StageError("objects", f"{cfg.objects_path}: {exc}") from exc

    try:
        external = build_external_grid(raster, cfg.cell_side_m)
    except ValueError as exc:
        raise StageError("grid", str(exc)) from exc

    frame = box(external.bounds.xmin, external.bounds.ymin, external.bounds.xmax, external.bounds.ymax)
    kept = []
    for obj in objects:
        if obj.geometry.intersects(frame):
            kept.append(obj)
        else:
            logger.warning("object %s lies outside the planning area; ignored", obj.object_id)

    cells = list(external.iter_cells())
    jobs = cfg.effective_jobs()
    try:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(lambda c: _plan_cell(c, kept, cfg, raster), cells))
        else:
            results = [_plan_cell(c, kept, cfg, raster) for c in cells]
    except StageError:
        raise
    except ValueError as exc:
        raise StageError("scoring", str(exc)) from exc

    report = {
        "tool": {"name": "towerplan", "version": __version__},
        "config": _config_echo(cfg),
        "grid": {
            "rows": external.n_rows,
            "cols": external.n_cols,
            "cell_side_m": _num(cfg.cell_side_m),
            "squares_per_cell_side": results[0].grid.n if results else 0,
            "bounds": _rect_json(external.bounds),
        },
        "cells": [r.cell_json for r in results],
        "classification": [r.classification_json for r in results],
        "mining": [r.mining_json for r in results],
        "coverage": {
            "antenna_count": sum(len(r.coverage_json["antennas"]) for r in results),
            "complete": all(r.complete for r in results),
            "cells": [r.coverage_json for r in results],
        },
    }
    grids = {r.grid.cell_id: r.grid for r in results}
    return report, grids


def plan(cfg: PlanConfig) -> dict:
    """Run the full pipeline and return the report document."""
    report, _ = plan_with_grids(cfg)
    return report


def report_to_json(doc: dict) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def mine_document(report: dict) -> dict:
    """The mining sub-document of a plan report (the `mine` subcommand output)."""
    return {"tool": report["tool"], "config": report["config"], "mining": report["mining"]}


def classify_document(report: dict) -> dict:
    """The classification sub-document (the `classify` subcommand output)."""
    return {
        "tool": report["tool"],
        "config": report["config"],
        "classification": report["classification"],
    }
