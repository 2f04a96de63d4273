"""Exact and approximate solvers for the three knapsack objectives.

Every solver returns a :class:`~knapvote.core.Solution` and never mutates the
instance. Exact solvers report, among all value-optimal knapsacks, one of
minimum total cost. Resource caps live in :class:`SolveOptions`; a computation
that would exceed them raises :class:`~knapvote.core.GuardrailError` before
doing the work.

Solver map:

- :func:`brute_force` - any objective, exhaustive, capped by item count.
- :func:`solve_ib_dp` - additive objective, table over achieved value.
- :func:`solve_diverse_sp_dp` - diverse objective on a single-peaked profile.
- :func:`solve_ordered_diverse_dp` - diverse objective relative to a fixed
  voter order (exact for single-crossing orders, a lower bound otherwise).
- :func:`solve_diverse_sc`, :func:`solve_diverse_fpt` - single-crossing
  recognition front end, and the try-all-voter-orders variant.
- :func:`solve_fair_xp_dp` - Nash welfare, table over exact per-voter totals.
- :func:`solve_greedy` - partial-enumeration density greedy; factor (1 - 1/e)
  for the diverse objective and for the logarithm of the fair objective.
- :func:`solve_auto` - picks the best applicable method, falling back to the
  greedy when every exact route trips a guardrail.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (
    GuardrailError,
    Instance,
    Objective,
    Solution,
    ValidationError,
    _coerce_objective,
    evaluate,
    make_solution,
    require_valid,
)
from .domains import (
    _check_permutation,
    recognize_single_crossing,
    recognize_single_peaked,
    verify_single_peaked,
)


@dataclass(frozen=True)
class SolveOptions:
    """Resource caps shared by all solvers.

    max_bruteforce_items: refuse exhaustive search beyond this many items.
    max_dp_cells: refuse any table whose cell count would exceed this.
    max_fpt_voters: refuse the all-voter-orders solver beyond this many voters.
    greedy_seed_size: enumerated seed cardinality for the density greedy.
    """

    max_bruteforce_items: int = 25
    max_dp_cells: int = 100_000_000
    max_fpt_voters: int = 8
    greedy_seed_size: int = 3

    def __post_init__(self) -> None:
        for name in (
            "max_bruteforce_items",
            "max_dp_cells",
            "max_fpt_voters",
            "greedy_seed_size",
        ):
            if getattr(self, name) < 1:
                raise ValidationError(f"{name} must be positive")


DEFAULT_OPTIONS = SolveOptions()


def _better(a: tuple, b: tuple) -> bool:
    """Solution ranking: higher score, then lower cost, then smaller index set."""
    if a[0] != b[0]:
        return a[0] > b[0]
    if a[1] != b[1]:
        return a[1] < b[1]
    return a[2] < b[2]


def _collapse_voters(instance: Instance) -> tuple[list[tuple[int, ...]], list[int]]:
    """Distinct voter rows with multiplicities (objectives are row-separable)."""
    rows: list[tuple[int, ...]] = []
    mults: list[int] = []
    index: dict[tuple[int, ...], int] = {}
    for row in instance.utilities:
        k = index.get(row)
        if k is None:
            index[row] = len(rows)
            rows.append(row)
            mults.append(1)
        else:
            mults[k] += 1
    return rows, mults


# ---------------------------------------------------------------------------
# exhaustive search


def brute_force(
    instance: Instance, kind: Objective | str, options: Optional[SolveOptions] = None
) -> Solution:
    """Exact optimum by depth-first search over feasible subsets."""
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    kind = _coerce_objective(kind)
    m = instance.num_items
    if m > opts.max_bruteforce_items:
        raise GuardrailError(
            f"brute force over {m} items exceeds the cap of {opts.max_bruteforce_items}"
        )
    rows, mults = _collapse_voters(instance)
    k = len(rows)
    costs = instance.costs
    budget = instance.budget
    nz = [
        [(i, rows[i][j]) for i in range(k) if rows[i][j] > 0] for j in range(m)
    ]
    colsum = [sum(mults[i] * rows[i][j] for i in range(k)) for j in range(m)]

    sel: list[int] = []
    best: Optional[tuple] = None
    ib_value = 0
    cur_max = [0] * k
    sums = [0] * k

    def leaf(cost: int) -> None:
        nonlocal best
        if kind is Objective.IB:
            score: int = ib_value
        elif kind is Objective.DIVERSE:
            score = sum(mu * v for mu, v in zip(mults, cur_max))
        else:
            score = math.prod(
                (s + 1) ** mu if mu > 1 else s + 1 for s, mu in zip(sums, mults)
            )
        cand = (score, cost, tuple(sel))
        if best is None or _better(cand, best):
            best = cand

    def rec(j: int, cost: int) -> None:
        nonlocal ib_value
        if j == m:
            leaf(cost)
            return
        cj = costs[j]
        if cost + cj <= budget:
            sel.append(j)
            if kind is Objective.IB:
                ib_value += colsum[j]
                rec(j + 1, cost + cj)
                ib_value -= colsum[j]
            elif kind is Objective.DIVERSE:
                undo = []
                for i, u in nz[j]:
                    if u > cur_max[i]:
                        undo.append((i, cur_max[i]))
                        cur_max[i] = u
                rec(j + 1, cost + cj)
                for i, old in undo:
                    cur_max[i] = old
            else:
                for i, u in nz[j]:
                    sums[i] += u
                rec(j + 1, cost + cj)
                for i, u in nz[j]:
                    sums[i] -= u
            sel.pop()
        rec(j + 1, cost)

    rec(0, 0)
    assert best is not None  # the empty knapsack is always feasible
    return make_solution(instance, kind, best[2], "bruteforce")


# ---------------------------------------------------------------------------
# additive objective


def solve_ib_dp(instance: Instance, options: Optional[SolveOptions] = None) -> Solution:
    """Exact additive-objective optimum via a min-cost-per-value table.

    Row j, column x holds the cheapest subset of the first j items whose
    summed per-item utility totals reach at least x.
    """
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    m = instance.num_items
    uhat = instance.total_utility()
    cells = m * (uhat + 1)
    if cells > opts.max_dp_cells:
        raise GuardrailError(
            f"value table needs {cells} cells, over the cap of {opts.max_dp_cells}"
        )
    w = [instance.column_sum(j) for j in range(m)]
    costs = instance.costs
    inf = sum(costs) + 1
    prev = [0] + [inf] * uhat
    keep: list[bytearray] = []
    for j in range(m):
        cur = prev.copy()
        kb = bytearray(uhat + 1)
        cj = costs[j]
        wj = w[j]
        for x in range(1, uhat + 1):
            v = prev[x - wj if x > wj else 0] + cj
            if v < cur[x]:
                cur[x] = v
                kb[x] = 1
        keep.append(kb)
        prev = cur
    # inf only exceeds real costs, not necessarily the budget, so clamp
    affordable = min(instance.budget, inf - 1)
    xstar = 0
    for x in range(uhat, -1, -1):
        if prev[x] <= affordable:
            xstar = x
            break
    sel = []
    x = xstar
    for j in range(m - 1, -1, -1):
        if x > 0 and keep[j][x]:
            sel.append(j)
            x = x - w[j] if x > w[j] else 0
    return make_solution(instance, Objective.IB, sel, "ib-dp")


# ---------------------------------------------------------------------------
# diverse objective, single-peaked profiles


def solve_diverse_sp_dp(
    instance: Instance,
    order: Sequence[int],
    options: Optional[SolveOptions] = None,
) -> Solution:
    """Exact diverse optimum when the profile is single-peaked under ``order``.

    Along a single-peaked item order, adding an item to a set of items that all
    sit earlier in the order raises each voter's best utility by a quantity
    that depends only on the new item and the latest previous one, which makes
    a last-item recurrence exact.
    """
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    order = _check_permutation(order, instance.num_items, "items")
    if not verify_single_peaked(instance, order):
        raise ValidationError("profile is not single-peaked under the given item order")
    m = instance.num_items
    n = instance.num_voters
    ubound = instance.total_utility()
    cells = m * (ubound + 1)
    if cells > opts.max_dp_cells:
        raise GuardrailError(
            f"value table needs {cells} cells, over the cap of {opts.max_dp_cells}"
        )
    col = [[instance.utilities[i][order[p]] for i in range(n)] for p in range(m)]
    cost2 = [instance.costs[order[p]] for p in range(m)]
    colsum = [sum(c) for c in col]
    # gain[p][q]: diverse value added by the item at position p on top of a set
    # whose latest position is q
    gain = [[0] * m for _ in range(m)]
    for p in range(m):
        for q in range(p):
            gain[p][q] = sum(
                cp - cq for cp, cq in zip(col[p], col[q]) if cp > cq
            )
    inf = sum(instance.costs) + 1
    table = [[inf] * (ubound + 1) for _ in range(m)]
    par = [[-2] * (ubound + 1) for _ in range(m)]
    for p in range(m):
        cp = cost2[p]
        row = table[p]
        prow = par[p]
        for x in range(ubound + 1):
            best = inf
            bq = -2
            if colsum[p] >= x:
                best = cp
                bq = -1
            for q in range(p):
                xx = x - gain[p][q]
                v = cp + table[q][xx if xx > 0 else 0]
                if v < best:
                    best = v
                    bq = q
            row[x] = best
            prow[x] = bq
    affordable = min(instance.budget, inf - 1)
    xstar = 0
    start = -1
    for x in range(ubound, 0, -1):
        cand = min(
            ((table[p][x], p) for p in range(m) if table[p][x] <= affordable),
            default=None,
        )
        if cand is not None:
            xstar = x
            start = cand[1]
            break
    positions = []
    if xstar > 0:
        p, x = start, xstar
        while True:
            positions.append(p)
            q = par[p][x]
            if q == -1:
                break
            x = x - gain[p][q]
            if x < 0:
                x = 0
            p = q
    return make_solution(
        instance, Objective.DIVERSE, sorted(order[p] for p in positions), "sp-dp"
    )


# ---------------------------------------------------------------------------
# diverse objective, fixed voter order


def ordered_diverse_table(
    instance: Instance,
    voter_order: Sequence[int],
    options: Optional[SolveOptions] = None,
) -> np.ndarray:
    """Min-cost table for covering a voter order with item segments.

    Entry [t][x] is the cheapest way to split the first t+1 voters (in the
    given order) into consecutive segments, pick one item per segment, and
    collect at least x total utility, each voter counting their segment's item.
    The last row lower-bounds the budgeted diverse optimum for every order and
    matches it when the order is single-crossing.
    """
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    voter_order = _check_permutation(voter_order, instance.num_voters, "voters")
    n = instance.num_voters
    m = instance.num_items
    ubound = instance.total_utility()
    cells = n * (ubound + 1) * m
    if cells > opts.max_dp_cells:
        raise GuardrailError(
            f"order table needs {cells} cells of work, over the cap of {opts.max_dp_cells}"
        )
    costs = instance.costs
    inf = sum(costs) + 1
    dt: object = np.int64 if inf + max(costs) < 2**62 else object
    # prefix[a][t]: item a's utility summed over the first t+1 ordered voters
    prefix = [[0] * n for _ in range(m)]
    for a in range(m):
        acc = 0
        for t in range(n):
            acc += instance.utilities[voter_order[t]][a]
            prefix[a][t] = acc
    table = np.full((n, ubound + 1), inf, dtype=dt)
    width = ubound + 1
    for i in range(n):
        row = table[i]
        for a in range(m):
            pa = min(prefix[a][i], ubound) + 1
            np.minimum(row[:pa], costs[a], out=row[:pa])
        for t in range(i):
            prow = table[t]
            for a in range(m):
                delta = prefix[a][i] - prefix[a][t]
                ca = costs[a]
                if delta == 0:
                    np.minimum(row, prow + ca, out=row)
                    continue
                sh = np.empty(width, dtype=dt)
                d = min(delta, width)
                sh[:d] = prow[0]
                if d < width:
                    sh[d:] = prow[: width - d]
                np.minimum(row, sh + ca, out=row)
    return table


def _table_answer(table: np.ndarray, budget: int) -> tuple[int, int]:
    """Largest reachable x within budget and its cost (0, 0 when only the
    empty knapsack fits)."""
    last = table[-1]
    hits = np.nonzero(last <= budget)[0]
    if len(hits) == 0:
        return 0, 0
    x = int(hits.max())
    if x == 0:
        return 0, 0
    return x, int(last[x])


def _reconstruct_ordered(
    instance: Instance,
    voter_order: Sequence[int],
    table: np.ndarray,
    xstar: int,
) -> list[int]:
    n = instance.num_voters
    m = instance.num_items
    costs = instance.costs
    prefix = [[0] * n for _ in range(m)]
    for a in range(m):
        acc = 0
        for t in range(n):
            acc += instance.utilities[voter_order[t]][a]
            prefix[a][t] = acc
    items: set[int] = set()
    i = n - 1
    x = xstar
    while True:
        target = int(table[i][x])
        base = next(
            (a for a in range(m) if costs[a] == target and prefix[a][i] >= x), None
        )
        if base is not None:
            items.add(base)
            break
        step = None
        for a in range(m):
            ca = costs[a]
            for t in range(i):
                delta = prefix[a][i] - prefix[a][t]
                xx = x - delta if x > delta else 0
                if int(table[t][xx]) + ca == target:
                    step = (a, t, xx)
                    break
            if step is not None:
                break
        # the table was built from exactly these transitions
        a, i, x = step  # type: ignore[misc]
        items.add(a)
    return sorted(items)


def _solve_with_voter_order(
    instance: Instance,
    voter_order: Sequence[int],
    method: str,
    opts: SolveOptions,
) -> Solution:
    table = ordered_diverse_table(instance, voter_order, opts)
    xstar, _ = _table_answer(table, min(instance.budget, sum(instance.costs)))
    sel = [] if xstar == 0 else _reconstruct_ordered(instance, voter_order, table, xstar)
    return make_solution(instance, Objective.DIVERSE, sel, method)


def solve_ordered_diverse_dp(
    instance: Instance,
    voter_order: Sequence[int],
    options: Optional[SolveOptions] = None,
) -> Solution:
    """Best knapsack reachable through segments of the given voter order.

    Exact for the diverse objective when the order is single-crossing;
    otherwise the reported value can fall below the true optimum (never above
    the evaluated value of the returned knapsack, which is always feasible).
    """
    opts = options or DEFAULT_OPTIONS
    return _solve_with_voter_order(instance, voter_order, "ordered-dp", opts)


def solve_diverse_sc(
    instance: Instance, options: Optional[SolveOptions] = None
) -> Solution:
    """Exact diverse optimum for single-crossing profiles (recognizes the order)."""
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    order = recognize_single_crossing(instance)
    if order is None:
        raise ValidationError("utility profile is not single-crossing")
    return _solve_with_voter_order(instance, order, "sc-dp", opts)


def solve_diverse_fpt(
    instance: Instance, options: Optional[SolveOptions] = None
) -> Solution:
    """Exact diverse optimum by trying every voter order (use for few voters).

    Some voter order always realizes the optimum (sort voters by a best item
    of theirs in an optimal knapsack), so the maximum over all orders is exact.
    """
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    n = instance.num_voters
    if n > opts.max_fpt_voters:
        raise GuardrailError(
            f"all-orders search over {n} voters exceeds the cap of {opts.max_fpt_voters}"
        )
    best: Optional[tuple[int, int, tuple[int, ...]]] = None
    afford = min(instance.budget, sum(instance.costs))
    for perm in itertools.permutations(range(n)):
        table = ordered_diverse_table(instance, perm, opts)
        x, cost = _table_answer(table, afford)
        if best is not None and (x, -cost) < (best[0], -best[1]):
            continue
        sel = (
            ()
            if x == 0
            else tuple(_reconstruct_ordered(instance, perm, table, x))
        )
        cand = (x, cost, sel)
        if best is None or _better(cand, best):
            best = cand
    assert best is not None
    return make_solution(instance, Objective.DIVERSE, best[2], "fpt")


# ---------------------------------------------------------------------------
# fair objective


def solve_fair_xp_dp(
    instance: Instance, options: Optional[SolveOptions] = None
) -> Solution:
    """Exact Nash-welfare optimum via tables over per-voter utility vectors.

    Layer j maps each reachable vector of per-voter totals (over the first j
    items) to its minimum cost; the product is maximized over the final layer.
    State count is bounded by the product of (1 + each voter's total utility),
    which the guardrail checks up front in exact integer arithmetic.
    """
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    n = instance.num_voters
    m = instance.num_items
    bound = m
    for row in instance.utilities:
        bound *= 1 + sum(row)
    if bound > opts.max_dp_cells:
        raise GuardrailError(
            f"per-voter vector table needs up to {bound} cells, over the cap of"
            f" {opts.max_dp_cells}"
        )
    cols = [tuple(row[j] for row in instance.utilities) for j in range(m)]
    costs = instance.costs
    layers: list[dict[tuple[int, ...], int]] = [{(0,) * n: 0}]
    dp = layers[0]
    for j in range(m):
        new = dict(dp)
        cj = costs[j]
        col = cols[j]
        for z, c in dp.items():
            z2 = tuple(a + b for a, b in zip(z, col))
            c2 = c + cj
            old = new.get(z2)
            if old is None or c2 < old:
                new[z2] = c2
        layers.append(new)
        dp = new
    best: Optional[tuple[int, int, tuple[int, ...]]] = None
    for z, c in dp.items():
        if c > instance.budget:
            continue
        p = math.prod(v + 1 for v in z)
        if (
            best is None
            or p > best[0]
            or (p == best[0] and (c < best[1] or (c == best[1] and z < best[2])))
        ):
            best = (p, c, z)
    assert best is not None
    sel = []
    z, c = best[2], best[1]
    for j in range(m - 1, -1, -1):
        if layers[j].get(z) == c:
            continue
        sel.append(j)
        z = tuple(a - b for a, b in zip(z, cols[j]))
        c -= costs[j]
    return make_solution(instance, Objective.FAIR, sel, "xp-dp")


# ---------------------------------------------------------------------------
# density greedy with partial enumeration


def _fair_product(sums: list[int]) -> int:
    return math.prod(s + 1 for s in sums)


def solve_greedy(
    instance: Instance, kind: Objective | str, options: Optional[SolveOptions] = None
) -> Solution:
    """Partial-enumeration greedy: try every feasible seed of the configured
    size, extend each by the best marginal gain per unit cost, and keep the
    best candidate overall (all smaller feasible subsets compete as-is).

    Guarantees a (1 - 1/e) factor for the diverse objective and for the
    logarithm of the fair objective. Density comparisons for the fair
    objective are done in exact integer arithmetic, never through floats.
    """
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    kind = _coerce_objective(kind)
    m = instance.num_items
    n = instance.num_voters
    costs = instance.costs
    budget = instance.budget
    utilities = instance.utilities
    s = min(opts.greedy_seed_size, m)

    best: Optional[tuple] = None

    def consider(sel: tuple[int, ...], cost: int) -> None:
        nonlocal best
        cand = (evaluate(instance, kind, sel).score, cost, tuple(sorted(sel)))
        if best is None or _better(cand, best):
            best = cand

    for size in range(s):
        for seed in itertools.combinations(range(m), size):
            c = sum(costs[j] for j in seed)
            if c <= budget:
                consider(seed, c)

    for seed in itertools.combinations(range(m), s):
        cost = sum(costs[j] for j in seed)
        if cost > budget:
            continue
        chosen = set(seed)
        if kind is Objective.DIVERSE:
            state = [max((utilities[i][j] for j in seed), default=0) for i in range(n)]
        else:
            state = [sum(utilities[i][j] for j in seed) for i in range(n)]
        while True:
            pick = None  # (item, gain) or (item, new fair product)
            prod = _fair_product(state) if kind is Objective.FAIR else 0
            for j in range(m):
                if j in chosen or cost + costs[j] > budget:
                    continue
                if kind is Objective.IB:
                    g = instance.column_sum(j)
                elif kind is Objective.DIVERSE:
                    g = sum(
                        utilities[i][j] - state[i]
                        for i in range(n)
                        if utilities[i][j] > state[i]
                    )
                else:
                    g = _fair_product([sv + utilities[i][j] for i, sv in enumerate(state)])
                    if g <= prod:
                        continue
                if kind is Objective.FAIR:
                    if pick is not None:
                        pj, gj = pick
                        # denser iff g/prod^(1/c_j) beats the incumbent; compare
                        # g^c_pj * prod^c_j vs gj^c_j * prod^c_pj exactly
                        if not (
                            g ** costs[pj] * prod ** costs[j]
                            > gj ** costs[j] * prod ** costs[pj]
                        ):
                            continue
                    pick = (j, g)
                else:
                    if g <= 0:
                        continue
                    if pick is not None:
                        pj, gj = pick
                        if not g * costs[pj] > gj * costs[j]:
                            continue
                    pick = (j, g)
            if pick is None:
                break
            j = pick[0]
            chosen.add(j)
            cost += costs[j]
            if kind is Objective.DIVERSE:
                state = [max(sv, utilities[i][j]) for i, sv in enumerate(state)]
            else:
                state = [sv + utilities[i][j] for i, sv in enumerate(state)]
        consider(tuple(sorted(chosen)), cost)

    assert best is not None  # the empty seed is always considered
    return make_solution(instance, kind, best[2], "greedy")


# ---------------------------------------------------------------------------
# dispatcher


def _as_approximate(solution: Solution) -> Solution:
    return dataclasses.replace(solution, method="greedy-approximate")


def solve_auto(
    instance: Instance, kind: Objective | str, options: Optional[SolveOptions] = None
) -> Solution:
    """Solve with the cheapest applicable exact method, or fall back.

    Additive: value table, then brute force. Diverse: single-peaked table if a
    peak order is recognized, else single-crossing, else all voter orders when
    few voters, else brute force. Fair: per-voter vector table, then brute
    force. When everything trips a guardrail the density greedy runs and the
    result is tagged "greedy-approximate"; this function never fails on a
    valid instance.
    """
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    kind = _coerce_objective(kind)
    m = instance.num_items

    def brute_ok() -> bool:
        return m <= opts.max_bruteforce_items

    if kind is Objective.IB:
        try:
            return solve_ib_dp(instance, opts)
        except GuardrailError:
            pass
        if brute_ok():
            return brute_force(instance, kind, opts)
        return _as_approximate(solve_greedy(instance, kind, opts))

    if kind is Objective.DIVERSE:
        try:
            order = recognize_single_peaked(instance)
        except GuardrailError:
            order = None
        if order is not None:
            try:
                return solve_diverse_sp_dp(instance, order, opts)
            except GuardrailError:
                pass
        try:
            vorder = recognize_single_crossing(instance)
        except GuardrailError:
            vorder = None
        if vorder is not None:
            try:
                return _solve_with_voter_order(instance, vorder, "sc-dp", opts)
            except GuardrailError:
                pass
        if instance.num_voters <= opts.max_fpt_voters:
            try:
                return solve_diverse_fpt(instance, opts)
            except GuardrailError:
                pass
        if brute_ok():
            return brute_force(instance, kind, opts)
        return _as_approximate(solve_greedy(instance, kind, opts))

    try:
        return solve_fair_xp_dp(instance, opts)
    except GuardrailError:
        pass
    if brute_ok():
        return brute_force(instance, kind, opts)
    return _as_approximate(solve_greedy(instance, kind, opts))


# ---------------------------------------------------------------------------
# connected assignments along a voter order


def is_connected_assignment(
    voter_order: Sequence[int], assignment: Sequence[int]
) -> bool:
    """True iff each item's assigned voters sit consecutively in the order.

    ``assignment[p]`` is the item serving the voter at position p of the
    order; both sequences cover all voters.
    """
    n = len(assignment)
    _check_permutation(voter_order, n, "voters")
    seen_pos: dict[int, list[int]] = {}
    for pos, item in enumerate(assignment):
        seen_pos.setdefault(item, []).append(pos)
    for positions in seen_pos.values():
        if positions[-1] - positions[0] + 1 != len(positions):
            return False
    return True


def best_connected_assignment(
    instance: Instance,
    selected: Sequence[int],
    voter_order: Sequence[int],
    options: Optional[SolveOptions] = None,
) -> tuple[int, tuple[int, ...]]:
    """Best total utility over assignments of voters to the selected items in
    which each item serves one consecutive run of the ordered voters and every
    item serves someone.

    Returns (total utility, assignment indexed by position in the order).
    States are (position, current item, set of finished items), capped by
    max_dp_cells.
    """
    opts = options or DEFAULT_OPTIONS
    require_valid(instance)
    n = instance.num_voters
    order = _check_permutation(voter_order, n, "voters")
    items = list(dict.fromkeys(selected))
    if not items:
        raise ValidationError("at least one selected item is required")
    for j in items:
        if not 0 <= j < instance.num_items:
            raise ValidationError(f"bad item index {j!r}")
    k = len(items)
    if n < k:
        raise ValidationError("fewer voters than items to serve")
    cells = n * k * (1 << k)
    if cells > opts.max_dp_cells:
        raise GuardrailError(
            f"assignment table needs {cells} cells, over the cap of {opts.max_dp_cells}"
        )
    util = [[instance.utilities[order[t]][items[a]] for a in range(k)] for t in range(n)]
    # dp maps (current item, used mask) -> (value, parent key at previous position)
    dp: dict[tuple[int, int], tuple[int, Optional[tuple[int, int]]]] = {}
    for a in range(k):
        dp[(a, 1 << a)] = (util[0][a], None)
    trace = [dp]
    for t in range(1, n):
        nxt: dict[tuple[int, int], tuple[int, Optional[tuple[int, int]]]] = {}
        for (a, mask), (val, _) in dp.items():
            stay = val + util[t][a]
            cur = nxt.get((a, mask))
            if cur is None or stay > cur[0]:
                nxt[(a, mask)] = (stay, (a, mask))
            for b in range(k):
                if mask & (1 << b):
                    continue
                key = (b, mask | (1 << b))
                val2 = val + util[t][b]
                cur = nxt.get(key)
                if cur is None or val2 > cur[0]:
                    nxt[key] = (val2, (a, mask))
        dp = nxt
        trace.append(dp)
    full = (1 << k) - 1
    finals = sorted(key for key in dp if key[1] == full)
    if not finals:
        raise ValidationError("no connected assignment uses every selected item")
    bestkey = max(finals, key=lambda key: (dp[key][0], -key[0]))
    assignment = [0] * n
    key: Optional[tuple[int, int]] = bestkey
    for t in range(n - 1, -1, -1):
        assert key is not None
        assignment[t] = items[key[0]]
        key = trace[t][key][1]
    return dp[bestkey][0], tuple(assignment)
