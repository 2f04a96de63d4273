"""Budgeted selection with voter utilities.

A selection of items must fit a budget; voters assign integer utilities to
items. Three objectives are supported: total utility summed over voters,
coverage (each voter counts their single best selected item), and a
multiplicative fairness score (the exact product of one-plus-utility over
voters). The package bundles exact dynamic programs for structured
preference profiles, a parameterized search, a guaranteed greedy
approximation, hardness-instance generators, and a JSON command line.
"""

from .core import (
    GuardrailError,
    Instance,
    Objective,
    ObjectiveValue,
    Solution,
    ValidationError,
    evaluate,
    is_feasible,
    log_of_int,
    make_solution,
    per_voter_utilities,
    total_cost,
    validate_instance,
)
from .documents import (
    emit_evaluation,
    emit_instance,
    emit_reduction_metadata,
    emit_solution,
    parse_instance,
    parse_order,
)
from .domains import (
    recognize_single_crossing,
    recognize_single_peaked,
    verify_single_crossing,
    verify_single_peaked,
)
from .reductions import (
    ReductionOutput,
    SetSystem,
    SourceGraph,
    from_dominating_set,
    from_ersp,
    from_exact_partition,
    from_knapsack,
    from_multicolored_clique,
    from_partition,
    from_x3c,
    verify_reduction,
)
from .solvers import (
    DEFAULT_OPTIONS,
    SolveOptions,
    best_connected_assignment,
    brute_force,
    is_connected_assignment,
    ordered_diverse_table,
    solve_auto,
    solve_diverse_fpt,
    solve_diverse_sc,
    solve_diverse_sp_dp,
    solve_fair_xp_dp,
    solve_greedy,
    solve_ib_dp,
    solve_ordered_diverse_dp,
)

__version__ = "0.1.0"

__all__ = [
    "GuardrailError",
    "Instance",
    "Objective",
    "ObjectiveValue",
    "Solution",
    "ValidationError",
    "evaluate",
    "is_feasible",
    "log_of_int",
    "make_solution",
    "per_voter_utilities",
    "total_cost",
    "validate_instance",
    "emit_evaluation",
    "emit_instance",
    "emit_reduction_metadata",
    "emit_solution",
    "parse_instance",
    "parse_order",
    "recognize_single_crossing",
    "recognize_single_peaked",
    "verify_single_crossing",
    "verify_single_peaked",
    "ReductionOutput",
    "SetSystem",
    "SourceGraph",
    "from_dominating_set",
    "from_ersp",
    "from_exact_partition",
    "from_knapsack",
    "from_multicolored_clique",
    "from_partition",
    "from_x3c",
    "verify_reduction",
    "DEFAULT_OPTIONS",
    "SolveOptions",
    "best_connected_assignment",
    "brute_force",
    "is_connected_assignment",
    "ordered_diverse_table",
    "solve_auto",
    "solve_diverse_fpt",
    "solve_diverse_sc",
    "solve_diverse_sp_dp",
    "solve_fair_xp_dp",
    "solve_greedy",
    "solve_ib_dp",
    "solve_ordered_diverse_dp",
    "__version__",
]
