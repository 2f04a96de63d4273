"""Instances, objectives, and exact evaluation for multiagent knapsack problems.

An instance consists of m items with positive integer costs, n voters with
nonnegative integer utilities for each item, and a budget. A knapsack is a set
of item indices whose total cost stays within the budget. Three objectives are
supported:

- "ib" (individually best): the sum over selected items of every voter's
  utility for that item. Modular.
- "diverse": each voter counts only their single best selected item
  (max over the empty knapsack is 0). Monotone submodular.
- "fair": Nash welfare, the product over voters of (1 + the voter's total
  utility from the selection). The empty product is 1. Computed exactly over
  arbitrary-precision integers; a float log is carried for display only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """An instance, order, selection, or argument violates a contract."""


class GuardrailError(RuntimeError):
    """A computation would exceed a configured resource cap."""


class Objective(str, Enum):
    IB = "ib"
    DIVERSE = "diverse"
    FAIR = "fair"


def _coerce_objective(kind: Objective | str) -> Objective:
    if isinstance(kind, Objective):
        return kind
    try:
        return Objective(kind)
    except ValueError:
        raise ValidationError(f"unknown objective {kind!r}") from None


@dataclass(frozen=True)
class Instance:
    """A multiagent knapsack instance.

    Invariants (see :func:`validate_instance`): at least one voter and one
    item, a rectangular n x m utility matrix of nonnegative integers, integer
    costs >= 1, budget >= 0, and pairwise distinct item names.
    """

    item_names: tuple[str, ...]
    costs: tuple[int, ...]
    utilities: tuple[tuple[int, ...], ...]
    budget: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "item_names", tuple(self.item_names))
        object.__setattr__(self, "costs", tuple(self.costs))
        object.__setattr__(
            self, "utilities", tuple(tuple(row) for row in self.utilities)
        )

    @property
    def num_voters(self) -> int:
        return len(self.utilities)

    @property
    def num_items(self) -> int:
        return len(self.item_names)

    def total_utility(self) -> int:
        """Sum of all utility entries; the value axis bound for the DP tables."""
        return sum(sum(row) for row in self.utilities)

    def column_sum(self, j: int) -> int:
        """Total utility all voters assign to item j."""
        return sum(row[j] for row in self.utilities)


def _is_int(x: object) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate_instance(instance: Instance) -> list[str]:
    """Check every instance invariant; return a list of violations (empty = ok).

    Each violation message names the offending item or voter index.
    """
    out: list[str] = []
    m = len(instance.item_names)
    n = len(instance.utilities)
    if m == 0:
        out.append("instance must have at least one item")
    if n == 0:
        out.append("instance must have at least one voter")
    if len(instance.costs) != m:
        out.append(
            f"costs has length {len(instance.costs)}, expected {m} (one per item)"
        )
    else:
        for j, c in enumerate(instance.costs):
            if not _is_int(c) or c < 1:
                out.append(f"cost must be an integer >= 1 at item {j}")
    seen: dict[str, int] = {}
    for j, name in enumerate(instance.item_names):
        if not isinstance(name, str) or not name:
            out.append(f"item name at index {j} must be a nonempty string")
        elif name in seen:
            out.append(f"duplicate item name {name!r} at indices {seen[name]} and {j}")
        else:
            seen[name] = j
    for i, row in enumerate(instance.utilities):
        if len(row) != m:
            out.append(
                f"ragged utility matrix: row for voter {i} has length {len(row)},"
                f" expected {m}"
            )
            continue
        for j, u in enumerate(row):
            if not _is_int(u) or u < 0:
                out.append(
                    f"utility must be a nonnegative integer at voter {i}, item {j}"
                )
    if not _is_int(instance.budget) or instance.budget < 0:
        out.append("budget must be an integer >= 0")
    return out


def require_valid(instance: Instance) -> None:
    problems = validate_instance(instance)
    if problems:
        raise ValidationError("; ".join(problems))


def clean_selection(selected: Iterable[int], num_items: int) -> tuple[int, ...]:
    """Normalize a selection to a strictly increasing tuple of item indices."""
    sel = sorted(selected)
    for j in sel:
        if not _is_int(j) or j < 0 or j >= num_items:
            raise ValidationError(f"bad item index {j!r}")
    for a, b in zip(sel, sel[1:]):
        if a == b:
            raise ValidationError(f"duplicate item index {a}")
    return tuple(sel)


def log_of_int(p: int) -> float:
    """Natural log of a positive integer of arbitrary size (display/ranking only)."""
    if p <= 0:
        raise ValidationError("log requires a positive integer")
    shift = max(0, p.bit_length() - 64)
    if shift == 0:
        return math.log(p)
    return math.log(p >> shift) + shift * math.log(2.0)


@dataclass(frozen=True)
class ObjectiveValue:
    """Exact value of an objective on a knapsack.

    For "ib" and "diverse", ``ib_or_div_value`` holds the integer objective.
    For "fair", ``fair_product`` holds the exact Nash product and ``fair_log``
    its float logarithm (display only; never used in comparisons).
    """

    kind: Objective
    ib_or_div_value: int | None = None
    fair_product: int | None = None
    fair_log: float | None = None

    @property
    def score(self) -> int:
        """The exact integer used for all comparisons."""
        if self.kind is Objective.FAIR:
            assert self.fair_product is not None
            return self.fair_product
        assert self.ib_or_div_value is not None
        return self.ib_or_div_value


def per_voter_utilities(instance: Instance, selected: Sequence[int]) -> tuple[int, ...]:
    """Each voter's total utility over the selected items."""
    return tuple(sum(row[j] for j in selected) for row in instance.utilities)


def total_cost(instance: Instance, selected: Sequence[int]) -> int:
    return sum(instance.costs[j] for j in selected)


def is_feasible(instance: Instance, selected: Iterable[int]) -> bool:
    """True iff the selection is a well-formed index set within budget."""
    sel = clean_selection(selected, instance.num_items)
    return total_cost(instance, sel) <= instance.budget


def evaluate(
    instance: Instance, kind: Objective | str, selected: Iterable[int]
) -> ObjectiveValue:
    """Evaluate one objective on a selection (feasibility is not checked here).

    Empty-selection conventions: ib and diverse evaluate to 0, fair to 1.
    """
    kind = _coerce_objective(kind)
    sel = clean_selection(selected, instance.num_items)
    if kind is Objective.IB:
        return ObjectiveValue(
            kind, ib_or_div_value=sum(instance.column_sum(j) for j in sel)
        )
    if kind is Objective.DIVERSE:
        val = sum(max((row[j] for j in sel), default=0) for row in instance.utilities)
        return ObjectiveValue(kind, ib_or_div_value=val)
    prod = 1
    for row in instance.utilities:
        prod *= 1 + sum(row[j] for j in sel)
    return ObjectiveValue(kind, fair_product=prod, fair_log=log_of_int(prod))


@dataclass(frozen=True)
class Solution:
    """A solver result: the chosen knapsack plus consistent bookkeeping."""

    knapsack: tuple[int, ...]
    value: ObjectiveValue
    total_cost: int
    per_voter_utility: tuple[int, ...]
    method: str


def make_solution(
    instance: Instance,
    kind: Objective | str,
    selected: Iterable[int],
    method: str,
) -> Solution:
    """Build a Solution by re-evaluating everything from the selection."""
    sel = clean_selection(selected, instance.num_items)
    return Solution(
        knapsack=sel,
        value=evaluate(instance, kind, sel),
        total_cost=total_cost(instance, sel),
        per_voter_utility=per_voter_utilities(instance, sel),
        method=method,
    )
