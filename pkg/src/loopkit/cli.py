"""Command-line interface.

Exit codes: 0 success, 2 user error (bad arguments, parse errors, caps),
1 internal inconsistency (the cross-checked routes disagreed, which means
a bug, never bad input).  ``--json`` switches every report to a stable
machine-readable form; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import enumeration, prover
from .conjecture import (ConjectureReport, GoalReport, InconsistentLemma1,
                         InconsistentLemma2, Variety, check_conjecture,
                         check_goals, is_aim, variety_membership)
from .perms import CapExceeded, DEFAULT_CLOSURE_CAP
from .structure import render_structure_text, structure_json, structure_report
from .tables import LoopTable, ParseError, builtin_table, parse_loop_table

USER_ERRORS = (ParseError, ValueError, CapExceeded, OSError,
               prover.EmptyOrderingList, prover.AdapterFailure)
INTERNAL_ERRORS = (InconsistentLemma1, InconsistentLemma2)


def _bool(b: bool) -> str:
    return "true" if b else "false"


def _load_table(args) -> LoopTable:
    if args.file is not None:
        return parse_loop_table(Path(args.file).read_text())
    name, *rest = args.fixture
    if len(rest) > 1:
        raise ValueError("fixture takes at most one integer parameter")
    param = int(rest[0]) if rest else None
    return builtin_table(name, param)


def _add_input_flags(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="loop table file in the canonical format")
    src.add_argument("--fixture", nargs="+", metavar=("NAME", "K"),
                     help="builtin fixture name, plus parameter where needed")
    p.add_argument("--json", action="store_true", help="machine-readable output")


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def cmd_analyze(args) -> int:
    L = _load_table(args)
    report = structure_report(L, cap=args.closure_cap)
    aim_group = is_aim(L, "group", cap=args.closure_cap)
    aim_ident = is_aim(L, "identities")
    text = render_structure_text(report)
    text += f"\nAIM (inner mapping group abelian): {_bool(aim_group)}"
    text += f"\nAIM (identity schemas): {_bool(aim_ident)}"
    payload = structure_json(report)
    payload["aim"] = {"group": aim_group, "identities": aim_ident}
    if aim_group != aim_ident:
        print(text, file=sys.stderr)
        raise InconsistentLemma1("the two AIM detection methods disagree")
    _emit(args, text, payload)
    return 0


def _goal_lines(goals: GoalReport) -> str:
    lines = []
    wit = goals.witness_labels()
    for g in ("aK1", "aK2", "aK3", "Ka", "aa1", "aa2", "aa3", "Kk"):
        if goals.holds[g]:
            lines.append(f"{g}: true")
        else:
            lines.append(f"{g}: false  witness: ({','.join(map(str, wit[g]))})")
    return "\n".join(lines)


def cmd_goals(args) -> int:
    L = _load_table(args)
    goals = check_goals(L)
    payload = {
        "goals": dict(goals.holds),
        "witnesses": {g: list(w) for g, w in goals.witness_labels().items()},
    }
    _emit(args, _goal_lines(goals), payload)
    return 0


def cmd_variety(args) -> int:
    L = _load_table(args)
    v = Variety.from_name(args.name)
    member = variety_membership(L, v, cap=args.closure_cap)
    _emit(args, f"{v.value}: {_bool(member)}", {"variety": v.value, "member": member})
    return 0


def _conjecture_text(r: ConjectureReport) -> str:
    cls = r.nilpotency_class
    lines = [
        f"AIM (inner mapping group abelian): {_bool(r.is_aim)}",
        f"AIM (identity schemas): {_bool(r.aim_via_identities)}",
        _goal_lines(r.goals),
        f"N normal: {_bool(r.n_normal)}",
        f"Q/N abelian group (quotient oracle): {_bool(r.q_mod_n_abelian_group)}",
        f"Q/N abelian group (goal route): {_bool(r.goal_route_q_mod_n)}",
        f"Q/Z group (quotient oracle): {_bool(r.q_mod_z_group)}",
        f"Q/Z group (goal route): {_bool(r.goal_route_q_mod_z)}",
        f"class: {cls}" if cls is not None else "class: not nilpotent",
        f"consistent with conjecture: {_bool(r.consistent_with_conjecture)}",
    ]
    return "\n".join(lines)


def cmd_conjecture(args) -> int:
    L = _load_table(args)
    r = check_conjecture(L, cap=args.closure_cap)
    payload = {
        "aim": {"group": r.is_aim, "identities": r.aim_via_identities},
        "goals": dict(r.goals.holds),
        "witnesses": {g: list(w) for g, w in r.goals.witness_labels().items()},
        "n_normal": r.n_normal,
        "q_mod_n_abelian_group": r.q_mod_n_abelian_group,
        "q_mod_n_goal_route": r.goal_route_q_mod_n,
        "q_mod_z_group": r.q_mod_z_group,
        "q_mod_z_goal_route": r.goal_route_q_mod_z,
        "nilpotency_class": r.nilpotency_class,
        "consistent_with_conjecture": r.consistent_with_conjecture,
    }
    _emit(args, _conjecture_text(r), payload)
    return 0


def cmd_enumerate(args) -> int:
    filters = tuple(f for part in args.filter for f in part.split(",") if f)
    if args.count:
        print(enumeration.count_loops(args.order, filters, workers=args.threads))
        return 0
    if args.first:
        L = enumeration.first_loop(args.order, filters)
        if L is None:
            print("no match", file=sys.stderr)
            return 1
        sys.stdout.write(L.render())
        return 0
    first = True
    for L in enumeration.loop_tables(args.order, filters):
        if not first:
            sys.stdout.write("\n")
        sys.stdout.write(L.render())
        first = False
    return 0


def cmd_export(args) -> int:
    goals = prover.DEFAULT_GOALS
    if args.goals is not None:
        if args.goals == "all":
            goals = tuple(prover.GOAL_CLAUSES)
        else:
            goals = tuple(g for g in args.goals.split(",") if g)
    aux = ()
    if args.aux is not None:
        if args.aux != "left-inner-inverse":
            raise ValueError(f"unknown auxiliary assumption {args.aux!r}")
        aux = (prover.AUX_LEFT_INNER_INVERSE,)
    problem = prover.ProverProblem(variety=args.variety, aux_assumptions=aux,
                                   goals=goals)
    text = prover.render_problem(problem)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    return 0


def _read_orderings(path: str) -> tuple[str, ...]:
    out = []
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return tuple(out)


def _build_adapter(spec: str, orderings) -> prover.ProverAdapter:
    kind, _, rest = spec.partition(":")
    if kind == "mock":
        if not rest:
            raise ValueError("mock adapter needs a script path: mock:SCRIPT")
        return prover.MockAdapter.from_script(rest, orderings)
    if kind == "exec":
        if not rest:
            raise ValueError("exec adapter needs a command: exec:CMD")
        if rest.startswith("@"):
            rest = Path(rest[1:]).read_text().strip()
        return prover.ExecAdapter(rest)
    raise ValueError(f"unknown adapter {spec!r} (use mock:SCRIPT or exec:CMD)")


def cmd_p9loop(args) -> int:
    problem = prover.parse_problem(Path(args.input).read_text())
    orderings = _read_orderings(args.orderings)
    adapter = _build_adapter(args.adapter, orderings)
    limits = prover.RunLimits(max_seconds=args.max_seconds,
                              max_iterations=args.max_iterations)
    outcome = prover.p9loop_run(problem, orderings, adapter, limits)
    if args.json:
        payload = {
            "proved": outcome.proved,
            "iteration": outcome.iteration,
            "injected_assumptions": list(outcome.injected_assumptions),
            "iterations": [
                {"index": log.index, "directive": log.directive,
                 "proved": log.proved, "hints": list(log.hints)}
                for log in outcome.iterations
            ],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for log in outcome.iterations:
            status = "proved" if log.proved else "no proof"
            line = f"iteration {log.index}: {log.directive} -> {status}"
            if log.hints:
                line += f" (hints gathered: {len(log.hints)})"
            print(line)
        print(outcome.verdict)
        if outcome.injected_assumptions:
            print("injected assumptions:")
            for c in outcome.injected_assumptions:
                print(f"  {c}")
    return 0


def cmd_fixture(args) -> int:
    L = builtin_table(args.name, args.param)
    sys.stdout.write(L.render())
    return 0


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="loopkit",
                                  description="finite loop theory workbench")
    sub = top.add_subparsers(dest="command", required=True)

    def with_cap(p):
        p.add_argument("--closure-cap", type=int, default=DEFAULT_CLOSURE_CAP,
                       help="element budget for group closures")
        return p

    p = with_cap(sub.add_parser("analyze", help="structural report for one loop"))
    _add_input_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("goals", help="evaluate the eight labeled goals")
    _add_input_flags(p)
    p.set_defaults(func=cmd_goals)

    p = with_cap(sub.add_parser("variety", help="variety membership test"))
    _add_input_flags(p)
    p.add_argument("--name", required=True, help="variety name, e.g. LC or LeftBol")
    p.set_defaults(func=cmd_variety)

    p = with_cap(sub.add_parser("conjecture", help="full structural conjecture report"))
    _add_input_flags(p)
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("enumerate", help="stream or count loops of one order")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--filter", action="append", default=[],
                   help="comma-separated filter ids (repeatable)")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--count", action="store_true")
    mode.add_argument("--first", action="store_true")
    mode.add_argument("--emit", action="store_true")
    p.add_argument("--threads", type=int, default=1,
                   help="worker processes for counting")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("export", help="write a prover problem file")
    p.add_argument("--variety", default=None,
                   help="append this variety's defining equations")
    p.add_argument("--goals", default=None,
                   help="comma-separated goal labels, or 'all'")
    p.add_argument("--aux", default=None,
                   help="named auxiliary assumption (left-inner-inverse)")
    p.add_argument("-o", "--output", required=True, help="output path, '-' for stdout")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("p9loop", help="iterate term orderings over a prover")
    p.add_argument("--input", required=True, help="problem file")
    p.add_argument("--orderings", required=True,
                   help="file with one directive per line")
    p.add_argument("--adapter", required=True, help="mock:SCRIPT or exec:CMD")
    p.add_argument("--max-seconds", type=float, default=None)
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_p9loop)

    p = sub.add_parser("fixture", help="print a builtin table")
    p.add_argument("name")
    p.add_argument("param", nargs="?", type=int, default=None)
    p.set_defaults(func=cmd_fixture)

    return top


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except INTERNAL_ERRORS as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return 1
    except USER_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
