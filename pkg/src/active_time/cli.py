"""Command-line entry point: ``active-time <subcommand>``.

Exit codes: 0 success, 1 I/O or parse error, 2 roundtrip disagreement
(and invalid schedules for ``verify``), 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .generate import random_instance
from .model import Instance, Schedule, StructuralError, dumps, verify_schedule
from .reduction import ReductionOutput, build_reduction
from .sat import Assignment, FormulaError, parse_dimacs, to_balanced
from .solvers import InfeasibleInstanceError, solve_exact, solve_greedy, solve_minimal
from .witness import (
    WitnessError,
    assignment_to_schedule,
    roundtrip_check,
    schedule_to_assignment,
)

EXIT_OK, EXIT_ERROR, EXIT_DISAGREE, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _formula(args):
    f = parse_dimacs(_read(args.cnf))
    return to_balanced(f) if args.balance else f


def cmd_reduce(args) -> int:
    _write(args.out, build_reduction(_formula(args)).to_json())
    return EXIT_OK


def cmd_solve(args) -> int:
    instance = Instance.from_json(_read(args.instance))
    if args.order and args.algo != "minimal":
        raise UsageError("--order only applies to --algo minimal")
    if args.budget is not None and args.algo != "exact":
        raise UsageError("--budget only applies to --algo exact")
    result: dict
    try:
        if args.algo == "exact":
            sol = solve_exact(instance, args.budget)
            reason = "over budget"
        elif args.algo == "greedy":
            sol, reason = solve_greedy(instance), "infeasible with all slots active"
        else:
            order = json.loads(_read(args.order)) if args.order else list(range(instance.horizon))
            sol, reason = solve_minimal(instance, order), "infeasible with all slots active"
    except InfeasibleInstanceError:
        sol, reason = None, "infeasible with all slots active"
    result = sol.to_dict() if sol else {"status": "infeasible", "reason": reason}
    _write(args.out, dumps(result))
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = Instance.from_json(_read(args.instance))
    report = verify_schedule(instance, Schedule.from_json(_read(args.schedule)))
    _write(None, dumps(report.to_dict()))
    return EXIT_OK if report.valid else EXIT_DISAGREE


def cmd_witness_forward(args) -> int:
    out = ReductionOutput.from_json(_read(args.reduction))
    a = Assignment.from_json(_read(args.assignment))
    _write(args.out, assignment_to_schedule(out, a).to_json())
    return EXIT_OK


def cmd_witness_backward(args) -> int:
    out = ReductionOutput.from_json(_read(args.reduction))
    s = Schedule.from_json(_read(args.schedule))
    _write(args.out, schedule_to_assignment(out, s).to_json())
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    report = roundtrip_check(_formula(args))
    _write(args.out, report.to_json())
    return EXIT_OK if report.agree else EXIT_DISAGREE


def cmd_gen(args) -> int:
    inst = random_instance(args.jobs, args.horizon, args.batch, args.seed)
    _write(args.out, inst.to_json())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="active-time", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("reduce", help="compile a DIMACS formula into a scheduling instance")
    p.add_argument("--cnf", required=True)
    p.add_argument("--balance", action="store_true", help="apply the SAT -> Balanced SAT transform first")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="solve an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--algo", choices=("exact", "greedy", "minimal"), required=True)
    p.add_argument("--order", help="JSON list giving the slot order for --algo minimal")
    p.add_argument("--budget", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a schedule against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--schedule", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("witness", help="translate witnesses across the reduction")
    wsub = p.add_subparsers(dest="direction", required=True, parser_class=_Parser)
    w = wsub.add_parser("forward", help="assignment -> schedule")
    w.add_argument("--reduction", required=True)
    w.add_argument("--assignment", required=True)
    w.add_argument("--out", required=True)
    w.set_defaults(func=cmd_witness_forward)
    w = wsub.add_parser("backward", help="schedule -> assignment")
    w.add_argument("--reduction", required=True)
    w.add_argument("--schedule", required=True)
    w.add_argument("--out", default="-")
    w.set_defaults(func=cmd_witness_backward)

    p = sub.add_parser("roundtrip", help="check both sides of the reduction agree")
    p.add_argument("--cnf", required=True)
    p.add_argument("--balance", action="store_true")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("gen", help="seeded random instance")
    p.add_argument("--jobs", type=int, required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--batch", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"active-time: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError, StructuralError, FormulaError, WitnessError) as exc:
        print(f"active-time: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
