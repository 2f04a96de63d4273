"""First-principles oracles for the test suite.

Everything here recomputes expected results by direct enumeration over the
definitions, sharing no algorithmic machinery with the package: subset
enumeration for optima, permutation search for domain witnesses, and
segment-partition enumeration for connected assignments.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

from knapvote import Instance


def subset_value(instance: Instance, kind: str, subset: Sequence[int]):
    """Objective value of a subset, by definition. kind: ib|diverse|fair."""
    rows = instance.utilities
    if kind == "ib":
        return sum(sum(row[j] for j in subset) for row in rows)
    if kind == "diverse":
        return sum(max((row[j] for j in subset), default=0) for row in rows)
    if kind != "fair":
        raise ValueError(kind)
    prod = 1
    for row in rows:
        prod *= 1 + sum(row[j] for j in subset)
    return prod


def best_subset(instance: Instance, kind: str):
    """(value, cost, subset) with max value, then min cost, then lex subset."""
    best = None
    for r in range(instance.num_items + 1):
        for combo in itertools.combinations(range(instance.num_items), r):
            cost = sum(instance.costs[j] for j in combo)
            if cost > instance.budget:
                continue
            key = (-subset_value(instance, kind, combo), cost, combo)
            if best is None or key < best:
                best = key
    assert best is not None  # the empty set is always feasible (budget >= 0)
    return -best[0], best[1], best[2]


def _unimodal(seq: Sequence[int]) -> bool:
    i = 0
    while i + 1 < len(seq) and seq[i + 1] >= seq[i]:
        i += 1
    while i + 1 < len(seq) and seq[i + 1] <= seq[i]:
        i += 1
    return i == len(seq) - 1


def sp_witness_by_search(instance: Instance) -> Optional[tuple[int, ...]]:
    """Some item order making every voter's utilities unimodal, if one exists."""
    for perm in itertools.permutations(range(instance.num_items)):
        if all(_unimodal([row[j] for j in perm]) for row in instance.utilities):
            return perm
    return None


def _contiguous(positions: list[int]) -> bool:
    return not positions or positions[-1] - positions[0] == len(positions) - 1


def sc_witness_by_search(instance: Instance) -> Optional[tuple[int, ...]]:
    """Some voter order making every weak-preference block contiguous."""
    m = instance.num_items
    rows = instance.utilities
    for perm in itertools.permutations(range(instance.num_voters)):
        ok = True
        for a in range(m):
            for b in range(m):
                if a == b:
                    continue
                pos = [p for p, i in enumerate(perm) if rows[i][b] >= rows[i][a]]
                if not _contiguous(pos):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return perm
    return None


def connected_optimum(
    instance: Instance, subset: Sequence[int], voter_order: Sequence[int]
) -> Optional[int]:
    """Best total utility over surjective connected assignments of the ordered
    voters to the subset, or None when no such assignment exists."""
    n = instance.num_voters
    k = len(subset)
    if k == 0 or k > n:
        return None
    best = None
    for perm in itertools.permutations(subset):
        for cuts in itertools.combinations(range(1, n), k - 1):
            bounds = (0,) + cuts + (n,)
            total = 0
            for t in range(k):
                for p in range(bounds[t], bounds[t + 1]):
                    total += instance.utilities[voter_order[p]][perm[t]]
            if best is None or total > best:
                best = total
    return best


def best_ordered_subset(instance: Instance, voter_order: Sequence[int]):
    """(value, cost, subset) for the connected-assignment objective, maximizing
    the assigned utility over all feasible subsets of at most n items."""
    best = None
    for r in range(1, min(instance.num_items, instance.num_voters) + 1):
        for combo in itertools.combinations(range(instance.num_items), r):
            cost = sum(instance.costs[j] for j in combo)
            if cost > instance.budget:
                continue
            val = connected_optimum(instance, combo, voter_order)
            if val is None:
                continue
            key = (-val, cost, combo)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return -best[0], best[1], best[2]


# ---------------------------------------------------------------------------
# decision oracles for the source problems behind the reduction generators


def knapsack_yes(values, weights, value_target, weight_budget) -> bool:
    """Some item subset has total value >= target within the weight budget."""
    n = len(values)
    for r in range(n + 1):
        for combo in itertools.combinations(range(n), r):
            if (
                sum(weights[j] for j in combo) <= weight_budget
                and sum(values[j] for j in combo) >= value_target
            ):
                return True
    return False


def partition_yes(entries) -> bool:
    """Some subset of the entries sums to exactly half the total."""
    total = sum(entries)
    if total % 2:
        return False
    half = total // 2
    n = len(entries)
    return any(
        sum(entries[j] for j in combo) == half
        for r in range(n + 1)
        for combo in itertools.combinations(range(n), r)
    )


def exact_partition_yes(entries, k: int) -> bool:
    """Some subset of exactly k entries sums to half the total."""
    total = sum(entries)
    if total % 2 or k > len(entries):
        return False
    half = total // 2
    return any(
        sum(entries[j] for j in combo) == half
        for combo in itertools.combinations(range(len(entries)), k)
    )


def disjoint_sets_yes(sets, k: int) -> bool:
    """Some k of the sets (by index) are pairwise disjoint."""
    if k > len(sets):
        return False
    for combo in itertools.combinations(range(len(sets)), k):
        union = set()
        size_sum = 0
        for i in combo:
            union.update(sets[i])
            size_sum += len(sets[i])
        if len(union) == size_sum:
            return True
    return False


def dominating_set_yes(num_vertices: int, edges, k: int) -> bool:
    """Some vertex set of size <= k whose closed neighborhoods cover the graph."""
    closed = [{v} for v in range(num_vertices)]
    for u, v in edges:
        closed[u].add(v)
        closed[v].add(u)
    for r in range(min(k, num_vertices) + 1):
        for combo in itertools.combinations(range(num_vertices), r):
            covered = set()
            for v in combo:
                covered |= closed[v]
            if len(covered) == num_vertices:
                return True
    return False


def multicolored_clique_yes(num_vertices: int, edges, coloring, k: int) -> bool:
    """Some clique containing exactly one vertex of each of the k colors."""
    by_color: list[list[int]] = [[] for _ in range(k)]
    for v in range(num_vertices):
        by_color[coloring[v]].append(v)
    if any(not cls for cls in by_color):
        return False
    adjacent = {(min(u, v), max(u, v)) for u, v in edges}
    for pick in itertools.product(*by_color):
        if all(
            (min(a, b), max(a, b)) in adjacent
            for a, b in itertools.combinations(pick, 2)
        ):
            return True
    return False


def x3c_yes(universe_size: int, sets) -> bool:
    """Some universe_size/3 of the 3-element sets exactly cover the universe."""
    k = universe_size // 3
    for combo in itertools.combinations(range(len(sets)), k):
        elems = [e for i in combo for e in sets[i]]
        if len(set(elems)) == universe_size:
            return True
    return False
