"""Mine association rules from one square's spatial database.

Builds the coded object table for the busiest square of the bundled area
(a sea polygon and a road meet there), encodes it into transactions, and
mines exact-arithmetic rules two ways to show the oracle agreeing with
the level-wise miner.
"""

from pathlib import Path

from towerplan.grid import Cell, Rect, build_internal_grid
from towerplan.miner import apriori, brute_force_frequent, generate_rules
from towerplan.spatialdb import (
    assign_objects,
    build_square_database,
    encode_transactions,
    item_sort_key,
    load_objects,
)

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"


def _item(text_item) -> str:
    tag, value = text_item
    return f"{tag}={value}"


def main() -> None:
    objects = load_objects(FIXTURES / "worked" / "objects.json")
    cell = Cell(cell_id=(0, 0), bounds=Rect(0.0, 0.0, 2000.0, 2000.0),
                side_m=2000.0, partial=False)
    grid = build_internal_grid(cell, square_side_override=400.0)
    assigned = assign_objects(objects, grid)

    position = max(assigned, key=lambda p: len(assigned[p]))
    records = build_square_database(grid.square(*position), assigned[position])
    print(f"square {position} holds {len(records)} object(s):")
    for rec in records:
        print(f"  {rec.object_id}: type={rec.type_code} size={rec.size_code} "
              f"shape={rec.shape_code} dir={rec.direction} pos={rec.position}")

    transactions = encode_transactions(records)
    frequent = apriori(transactions, minsup=0.5, key=item_sort_key)
    oracle = brute_force_frequent(transactions, minsup=0.5, key=item_sort_key)
    assert frequent == oracle, "miner disagrees with the exhaustive oracle"
    print(f"\n{len(frequent)} frequent itemsets at minsup 0.5 "
          "(oracle-checked, exact rationals)")

    rules = generate_rules(frequent, minconf=0.8, key=item_sort_key)
    print(f"{len(rules)} rules at minconf 0.8; a few single-antecedent ones:")
    shown = 0
    for rule in rules:
        if len(rule.antecedent) == 1 and len(rule.consequent) == 1 and shown < 5:
            a = _item(next(iter(rule.antecedent)))
            c = _item(next(iter(rule.consequent)))
            print(f"  {a} => {c}  (support {rule.support}, confidence {rule.confidence})")
            shown += 1


if __name__ == "__main__":
    main()
