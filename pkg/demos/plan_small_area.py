"""Plan antenna placements for a small area and print the key results.

Runs the full pipeline on the bundled single-cell area: terrain raster in,
placement report out.  Shows the chosen square, its score breakdown, and
the coverage the placement achieves.
"""

from pathlib import Path

from towerplan.pipeline import PlanConfig, plan

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def main() -> None:
    config = PlanConfig.from_file(FIXTURES / "worked" / "config.json")
    report = plan(config)

    grid = report["grid"]
    print(f"area: {grid['rows']} x {grid['cols']} cell(s) of "
          f"{grid['cell_side_m']:g} m, {grid['squares_per_cell_side']} squares per side")

    for cell in report["cells"]:
        placement = cell["placement"]
        print(f"\ncell {tuple(cell['cell'])}: mode={placement['mode']}")
        for square in placement["squares"]:
            print(f"  antenna at {tuple(square['position'])}: "
                  f"class {square['class_score']} + suitability {square['suitability']} "
                  f"= goodness {square['goodness']}")
        ranked = sorted(cell["squares"], key=lambda s: -s["goodness"])
        print("  runners-up:")
        for square in ranked[1:4]:
            print(f"    {tuple(square['position'])}: goodness {square['goodness']} "
                  f"({square['priority']})")

    for cov in report["coverage"]["cells"]:
        print(f"\ncoverage in cell {tuple(cov['cell'])}: "
              f"{cov['covered']}/{cov['total']} squares ({cov['fraction']:.0%})")
        print(f"  uncovered: {[tuple(p) for p in cov['uncovered'][:6]]}"
              + (" ..." if len(cov["uncovered"]) > 6 else ""))


if __name__ == "__main__":
    main()
