"""Command-line interface.

Subcommands:
  solve         pick a solver (or let auto dispatch) and print a solution
  check-domain  recognize or verify a structured-preference order
  generate      build a solver instance from a source problem description
  evaluate      score a user-supplied selection of items

Exit codes: 0 success, 2 parse or validation error, 3 resource guardrail,
4 decision answered "no" (threshold unmet, or no witness order exists).
All input and output documents are JSON; see the README for the schemas.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from typing import Any, Optional

from .core import (
    GuardrailError,
    Objective,
    ValidationError,
    evaluate,
    per_voter_utilities,
    total_cost,
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
    SetSystem,
    SourceGraph,
    from_dominating_set,
    from_ersp,
    from_exact_partition,
    from_knapsack,
    from_multicolored_clique,
    from_partition,
    from_x3c,
)
from .solvers import (
    DEFAULT_OPTIONS,
    SolveOptions,
    brute_force,
    solve_auto,
    solve_diverse_fpt,
    solve_diverse_sc,
    solve_diverse_sp_dp,
    solve_fair_xp_dp,
    solve_greedy,
    solve_ib_dp,
)

_OBJECTIVES = {"ib": Objective.IB, "diverse": Objective.DIVERSE, "fair": Objective.FAIR}


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror or e}")


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise ValidationError(f"cannot write {path}: {e.strerror or e}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knapvote",
        description="Budgeted selection with voter utilities: exact solvers, "
        "structured-domain recognition, and hardness-instance generators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance and print the solution")
    p.add_argument("--objective", required=True, choices=sorted(_OBJECTIVES))
    p.add_argument(
        "--method",
        default="auto",
        choices=["auto", "bruteforce", "ib-dp", "sp-dp", "sc-dp", "fpt", "xp-dp", "greedy"],
    )
    p.add_argument(
        "--threshold",
        metavar="D",
        help="decision mode: decimal value the solution must reach (exit 4 if not)",
    )
    p.add_argument("--max-cells", type=int, metavar="N", help="table-size guardrail")
    p.add_argument(
        "--max-fpt-voters", type=int, metavar="N", help="voter cap for the fpt method"
    )
    p.add_argument("file")

    p = sub.add_parser("check-domain", help="find or verify a witness order")
    p.add_argument("--kind", required=True, choices=["sp", "sc"])
    p.add_argument(
        "--order",
        metavar="FILE",
        help="verify this order (a JSON array) instead of searching for one",
    )
    p.add_argument("file")

    p = sub.add_parser("generate", help="build an instance from a source problem")
    p.add_argument(
        "--reduction",
        required=True,
        choices=[
            "knapsack",
            "partition",
            "exact-partition",
            "ersp",
            "dominating-set",
            "multicolored-clique",
            "x3c",
        ],
    )
    p.add_argument("--params", required=True, metavar="FILE")
    p.add_argument("--out", required=True, metavar="FILE")

    p = sub.add_parser("evaluate", help="score a fixed selection of items")
    p.add_argument("--objective", required=True, choices=sorted(_OBJECTIVES))
    p.add_argument(
        "--selection", required=True, metavar="NAMES", help="comma-separated item names"
    )
    p.add_argument("file")

    return parser


def _options_from(args: argparse.Namespace) -> SolveOptions:
    overrides = {}
    if getattr(args, "max_cells", None) is not None:
        overrides["max_dp_cells"] = args.max_cells
    if getattr(args, "max_fpt_voters", None) is not None:
        overrides["max_fpt_voters"] = args.max_fpt_voters
    if not overrides:
        return DEFAULT_OPTIONS
    return dataclasses.replace(DEFAULT_OPTIONS, **overrides)


def _parse_threshold(text: str) -> int:
    body = text[1:] if text.startswith("-") else text
    if not body.isdigit():
        raise ValidationError(f"threshold must be a decimal integer, got {text!r}")
    return int(text)


def _run_solve(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.file))
    objective = _OBJECTIVES[args.objective]
    options = _options_from(args)
    method = args.method

    if method == "auto":
        solution = solve_auto(instance, objective, options)
    elif method == "bruteforce":
        solution = brute_force(instance, objective, options)
    elif method == "greedy":
        solution = solve_greedy(instance, objective, options)
    elif method == "ib-dp":
        if objective is not Objective.IB:
            raise ValidationError("method ib-dp requires --objective ib")
        solution = solve_ib_dp(instance, options)
    elif method == "sp-dp":
        if objective is not Objective.DIVERSE:
            raise ValidationError("method sp-dp requires --objective diverse")
        order = recognize_single_peaked(instance)
        if order is None:
            raise ValidationError("instance is not single-peaked under any item order")
        solution = solve_diverse_sp_dp(instance, order, options)
    elif method == "sc-dp":
        if objective is not Objective.DIVERSE:
            raise ValidationError("method sc-dp requires --objective diverse")
        solution = solve_diverse_sc(instance, options)
    elif method == "fpt":
        if objective is not Objective.DIVERSE:
            raise ValidationError("method fpt requires --objective diverse")
        solution = solve_diverse_fpt(instance, options)
    else:
        if objective is not Objective.FAIR:
            raise ValidationError("method xp-dp requires --objective fair")
        solution = solve_fair_xp_dp(instance, options)

    meets: Optional[bool] = None
    if args.threshold is not None:
        meets = solution.value.score >= _parse_threshold(args.threshold)
    sys.stdout.write(emit_solution(instance, solution, meets_threshold=meets))
    return 0 if meets is not False else 4


def _run_check_domain(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.file))
    if args.order is not None:
        order = parse_order(_read(args.order))
        if args.kind == "sp":
            ok = verify_single_peaked(instance, order)
        else:
            ok = verify_single_crossing(instance, order)
        sys.stdout.write(json.dumps({"kind": args.kind, "valid": ok}, indent=2) + "\n")
        return 0 if ok else 4
    if args.kind == "sp":
        found = recognize_single_peaked(instance)
    else:
        found = recognize_single_crossing(instance)
    doc = {"kind": args.kind, "order": list(found) if found is not None else "none"}
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0 if found is not None else 4


def _require_keys(params: dict, required: set[str], optional: set[str] = frozenset()) -> None:
    unknown = sorted(set(params) - required - optional)
    if unknown:
        raise ValidationError(f"unknown parameter(s): {', '.join(unknown)}")
    missing = sorted(required - set(params))
    if missing:
        raise ValidationError(f"missing parameter(s): {', '.join(missing)}")


def _int_list(value: Any, label: str) -> list[int]:
    if not isinstance(value, list) or not all(
        isinstance(x, int) and not isinstance(x, bool) for x in value
    ):
        raise ValidationError(f"{label} must be an array of integers")
    return value


def _as_int(value: Any, label: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValidationError(f"{label} must be an integer")
    return value


def _build_reduction(name: str, params: Any):
    if not isinstance(params, dict):
        raise ValidationError("parameter file must hold a JSON object")
    if name == "knapsack":
        _require_keys(params, {"values", "weights", "value_target", "weight_budget"})
        return from_knapsack(
            _int_list(params["values"], "values"),
            _int_list(params["weights"], "weights"),
            _as_int(params["value_target"], "value_target"),
            _as_int(params["weight_budget"], "weight_budget"),
        )
    if name == "partition":
        _require_keys(params, {"entries"})
        return from_partition(_int_list(params["entries"], "entries"))
    if name == "exact-partition":
        _require_keys(params, {"entries", "k"})
        return from_exact_partition(
            _int_list(params["entries"], "entries"), _as_int(params["k"], "k")
        )
    if name == "ersp":
        _require_keys(params, {"universe_size", "sets", "d", "k"})
        return from_ersp(
            _as_int(params["universe_size"], "universe_size"),
            _parse_sets(params),
            _as_int(params["d"], "d"),
            _as_int(params["k"], "k"),
        )
    if name == "dominating-set":
        _require_keys(params, {"num_vertices", "edges", "k"})
        graph = _parse_graph(params, colored=False)
        return from_dominating_set(graph, _as_int(params["k"], "k"))
    if name == "multicolored-clique":
        _require_keys(params, {"num_vertices", "edges", "coloring", "k"})
        graph = _parse_graph(params, colored=True)
        return from_multicolored_clique(graph, _as_int(params["k"], "k"))
    _require_keys(params, {"universe_size", "sets"})
    return from_x3c(_parse_sets(params))


def _parse_sets(params: dict) -> SetSystem:
    sets = params["sets"]
    if not isinstance(sets, list):
        raise ValidationError("sets must be an array of arrays")
    return SetSystem(
        universe_size=_as_int(params["universe_size"], "universe_size"),
        sets=tuple(tuple(_int_list(s, f"sets[{i}]")) for i, s in enumerate(sets)),
    )


def _parse_graph(params: dict, colored: bool) -> SourceGraph:
    edges = params["edges"]
    if not isinstance(edges, list):
        raise ValidationError("edges must be an array of two-element arrays")
    parsed = []
    for i, e in enumerate(edges):
        pair = _int_list(e, f"edges[{i}]")
        if len(pair) != 2:
            raise ValidationError(f"edges[{i}] must have exactly two endpoints")
        parsed.append((pair[0], pair[1]))
    coloring = None
    if colored:
        coloring = tuple(_int_list(params["coloring"], "coloring"))
    return SourceGraph(
        num_vertices=_as_int(params["num_vertices"], "num_vertices"),
        edges=tuple(parsed),
        coloring=coloring,
    )


def _run_generate(args: argparse.Namespace) -> int:
    try:
        params = json.loads(_read(args.params))
    except json.JSONDecodeError as e:
        raise ValidationError(f"invalid JSON in {args.params}: {e.msg}")
    reduction = _build_reduction(args.reduction, params)
    _write(args.out, emit_instance(reduction.instance))
    sys.stdout.write(emit_reduction_metadata(reduction))
    return 0


def _run_evaluate(args: argparse.Namespace) -> int:
    instance = parse_instance(_read(args.file))
    objective = _OBJECTIVES[args.objective]
    names = [s for s in args.selection.split(",") if s]
    index_of = {name: j for j, name in enumerate(instance.item_names)}
    selected = []
    for name in names:
        if name not in index_of:
            raise ValidationError(f"unknown item name {name!r}")
        selected.append(index_of[name])
    if len(set(selected)) != len(selected):
        raise ValidationError("selection repeats an item")
    value = evaluate(instance, objective, selected)
    cost = total_cost(instance, selected)
    sys.stdout.write(
        emit_evaluation(
            instance,
            objective.value,
            sorted(selected),
            value.score,
            cost,
            per_voter_utilities(instance, selected),
            cost <= instance.budget,
        )
    )
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    runner = {
        "solve": _run_solve,
        "check-domain": _run_check_domain,
        "generate": _run_generate,
        "evaluate": _run_evaluate,
    }[args.command]
    try:
        return runner(args)
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except GuardrailError as e:
        print(f"guardrail: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
