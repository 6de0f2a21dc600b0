"""Command-line entry points: plan, mine, classify, render.

All subcommands share one flag set and one config resolution path, so `mine`
and `classify` outputs are verbatim sub-documents of the `plan` report for
the same inputs.  Exit codes: 0 success, 1 coverage shortfall under
--fail-on-uncovered, 2 usage or pipeline error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .pipeline import (
    ConfigError,
    PlanConfig,
    StageError,
    classify_document,
    mine_document,
    plan_with_grids,
    report_to_json,
)
from .render import render_svg


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--raster", help="elevation raster (ASCII grid)")
    shared.add_argument("--objects", help="object list JSON")
    shared.add_argument("--config", help="config JSON; flags override its values")
    shared.add_argument("--out", help="output path (defaults to stdout)")
    shared.add_argument("--svg", help="also write an SVG rendering here")
    shared.add_argument("--minsup", type=float, help="minimum rule support in (0, 1]")
    shared.add_argument("--minconf", type=float, help="minimum rule confidence in (0, 1]")
    shared.add_argument("--threshold", type=float, help="goodness needed for single placement")
    shared.add_argument(
        "--fail-on-uncovered",
        action="store_true",
        help="exit 1 when any cell is not fully covered",
    )
    shared.add_argument("--jobs", type=int, help="worker threads (or env TOWERPLAN_JOBS)")

    parser = argparse.ArgumentParser(
        prog="towerplan",
        description="Plan antenna placements over a gridded terrain model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("plan", parents=[shared], help="full pipeline: placement report")
    sub.add_parser("mine", parents=[shared], help="per-square association rules only")
    sub.add_parser("classify", parents=[shared], help="square priority map only")
    sub.add_parser("render", parents=[shared], help="SVG rendering of the plan")
    return parser


def _resolve_config(args) -> PlanConfig:
    overrides = {
        "raster": args.raster,
        "objects": args.objects,
        "minsup": args.minsup,
        "minconf": args.minconf,
        "threshold": args.threshold,
        "jobs": args.jobs,
    }
    if args.config:
        return PlanConfig.from_file(args.config, **overrides)
    return PlanConfig.from_mapping({}, base_dir=Path.cwd(), **overrides)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2

    try:
        report, grids = plan_with_grids(cfg)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print(f"error: config: {exc}", file=sys.stderr)
        return 2

    try:
        if args.command == "plan":
            _write(report_to_json(report), args.out)
            if args.svg:
                Path(args.svg).write_text(render_svg(report, grids))
        elif args.command == "mine":
            _write(report_to_json(mine_document(report)), args.out)
        elif args.command == "classify":
            _write(report_to_json(classify_document(report)), args.out)
        elif args.command == "render":
            svg = render_svg(report, grids)
            _write(svg, args.svg or args.out)
    except OSError as exc:
        print(f"error: io: {exc}", file=sys.stderr)
        return 2

    if args.fail_on_uncovered and not report["coverage"]["complete"]:
        uncovered = sum(len(c["uncovered"]) for c in report["coverage"]["cells"])
        print(f"error: coverage: {uncovered} squares uncovered", file=sys.stderr)
        return 1
    return 0


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
