"""Frequent-itemset mining and association rule generation.

Support and confidence are exact `Fraction` values, never floats, so
thresholds like 0.5 compare without rounding slop.  `apriori` is the
level-wise algorithm with candidate join and subset pruning;
`brute_force_frequent` is a deliberately separate exhaustive enumerator kept
as a cross-check and never used by the pipeline.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

# exhaustive enumeration is 2^n; refuse universes past this size
MAX_BRUTE_FORCE_ITEMS = 20


class MinerError(ValueError):
    """Invalid mining parameters or inputs."""


@dataclass(frozen=True)
class ItemsetSupport:
    items: frozenset
    support: Fraction


@dataclass(frozen=True)
class AssociationRule:
    antecedent: frozenset
    consequent: frozenset
    support: Fraction
    confidence: Fraction


def _identity(item):
    return item


def _as_fraction(x, name: str) -> Fraction:
    # floats go through their decimal string so 0.5 means exactly 1/2
    if isinstance(x, Fraction):
        f = x
    elif isinstance(x, int):
        f = Fraction(x)
    elif isinstance(x, float):
        f = Fraction(str(x))
    else:
        raise MinerError(f"{name} must be a number, got {type(x).__name__}")
    if not 0 < f <= 1:
        raise MinerError(f"{name} must be in (0, 1], got {x}")
    return f


def _itemset_key(items, keyf):
    ordered = sorted(items, key=keyf)
    return (len(ordered), tuple(keyf(i) for i in ordered))


def support(items, transactions) -> Fraction:
    """Fraction of transactions containing the itemset."""
    if not transactions:
        raise MinerError("support is undefined over an empty transaction list")
    target = frozenset(items)
    count = sum(1 for t in transactions if target <= frozenset(t))
    return Fraction(count, len(transactions))


def apriori(transactions, minsup, key=None) -> list[ItemsetSupport]:
    """All itemsets with support >= minsup, level-wise.

    Candidates at level k join two frequent (k-1)-sets sharing a (k-2)-prefix
    in the canonical item order, then drop unless every (k-1)-subset is
    frequent.  Output is sorted by size then canonical item order, so equal
    inputs give byte-equal downstream reports.
    """
    if not transactions:
        raise MinerError("apriori requires a non-empty transaction list")
    ms = _as_fraction(minsup, "minsup")
    keyf = key or _identity
    tx = [frozenset(t) for t in transactions]
    n = len(tx)

    counts: dict = {}
    for t in tx:
        for item in t:
            counts[item] = counts.get(item, 0) + 1

    found: dict[frozenset, int] = {}
    level = []
    for item, c in counts.items():
        if Fraction(c, n) >= ms:
            found[frozenset((item,))] = c
            level.append((item,))
    level.sort(key=lambda tup: tuple(keyf(i) for i in tup))

    while level:
        candidates = []
        for i in range(len(level)):
            for j in range(i + 1, len(level)):
                a, b = level[i], level[j]
                if a[:-1] != b[:-1]:
                    break  # sorted level: shared prefixes are contiguous
                cand = a + (b[-1],)
                if all(
                    frozenset(cand[:m] + cand[m + 1:]) in found for m in range(len(cand))
                ):
                    candidates.append(cand)
        level = []
        for cand in candidates:
            cs = frozenset(cand)
            c = sum(1 for t in tx if cs <= t)
            if Fraction(c, n) >= ms:
                found[cs] = c
                level.append(cand)
        level.sort(key=lambda tup: tuple(keyf(i) for i in tup))

    out = [ItemsetSupport(items=s, support=Fraction(c, n)) for s, c in found.items()]
    out.sort(key=lambda fs: _itemset_key(fs.items, keyf))
    return out


def brute_force_frequent(transactions, minsup, key=None) -> list[ItemsetSupport]:
    """Exhaustive frequent-itemset enumeration over every non-empty subset.

    Independent of `apriori` by construction: transactions become per-item
    bitmaps and each subset's cover is the AND of one item's bitmap with the
    cover of the subset minus that item.  Refuses item universes larger than
    MAX_BRUTE_FORCE_ITEMS.
    """
    if not transactions:
        raise MinerError("frequent itemsets are undefined over an empty transaction list")
    ms = _as_fraction(minsup, "minsup")
    keyf = key or _identity
    universe = sorted({item for t in transactions for item in t}, key=keyf)
    u = len(universe)
    if u > MAX_BRUTE_FORCE_ITEMS:
        raise MinerError(
            f"item universe of {u} exceeds the exhaustive-enumeration cap "
            f"of {MAX_BRUTE_FORCE_ITEMS}"
        )
    n = len(transactions)
    item_bits = []
    for item in universe:
        bits = 0
        for pos, t in enumerate(transactions):
            if item in t:
                bits |= 1 << pos
        item_bits.append(bits)

    full = (1 << n) - 1
    cover = [full] * (1 << u)  # cover[mask] = transactions containing every item in mask
    out = []
    for mask in range(1, 1 << u):
        low = mask & -mask
        cover[mask] = cover[mask ^ low] & item_bits[low.bit_length() - 1]
        c = cover[mask].bit_count()
        if Fraction(c, n) >= ms:
            items = frozenset(universe[i] for i in range(u) if mask >> i & 1)
            out.append(ItemsetSupport(items=items, support=Fraction(c, n)))
    out.sort(key=lambda fs: _itemset_key(fs.items, keyf))
    return out


def generate_rules(frequent, minconf, key=None) -> list[AssociationRule]:
    """Rules A -> C with confidence >= minconf from the frequent itemsets.

    Every non-empty proper subset of each frequent itemset is tried as the
    antecedent; confidence is support(A u C) / support(A), exact.  The
    frequent collection must be downward closed (apriori output is) or the
    antecedent lookup fails.
    """
    mc = _as_fraction(minconf, "minconf")
    keyf = key or _identity
    sup = {fs.items: fs.support for fs in frequent}
    rules = []
    for fs in frequent:
        whole = fs.items
        if len(whole) < 2:
            continue
        ordered = sorted(whole, key=keyf)
        for r in range(1, len(ordered)):
            for combo in combinations(ordered, r):
                antecedent = frozenset(combo)
                if antecedent not in sup:
                    raise MinerError(
                        f"frequent collection is not downward closed: missing {sorted(antecedent, key=keyf)!r}"
                    )
                confidence = fs.support / sup[antecedent]
                if confidence >= mc:
                    rules.append(
                        AssociationRule(
                            antecedent=antecedent,
                            consequent=whole - antecedent,
                            support=fs.support,
                            confidence=confidence,
                        )
                    )
    rules.sort(
        key=lambda r: (
            _itemset_key(r.antecedent | r.consequent, keyf),
            len(r.antecedent),
            _itemset_key(r.antecedent, keyf),
        )
    )
    return rules
