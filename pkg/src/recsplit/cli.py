"""Command-line front end.

Subcommands: run a scheme in any of the three modes, dump the compiled
producer IR, run the reversibility + equivalence check suite, or sweep
user-specified ranges. Exit codes: 0 success, 1 check failure, 2 usage
error, 3 deadlock/timeout.
"""

from __future__ import annotations

import argparse
import re
import sys

from . import harness
from .producer import compile_producer, run_sequential
from .revir import RevirError, dump
from .scheme import (
    RecursionScheme,
    SchemeError,
    eval_recursive,
    make_scheme,
    parse_scheme_text,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_DEADLOCK = 3

DEFAULT_PAIRS = (("x", "x+y"), ("x+1", "x*y+1"))


class UsageError(Exception):
    pass


class _ArgumentParser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # admit range values like -5:-1 as option arguments
        self._negative_number_matcher = re.compile(r"^-\d")

    def error(self, message):
        raise UsageError(message)


def _add_scheme_arguments(parser):
    parser.add_argument("--scheme", metavar="FILE", help="scheme file (key = value lines)")
    parser.add_argument("--delta", type=int, help="predecessor displacement, <= -1")
    parser.add_argument("--base", help="base expression over x")
    parser.add_argument("--step", help="step expression over x and y")


def _build_parser():
    parser = _ArgumentParser(
        prog="recsplit",
        description="Split a recursion scheme into a reversible producer and a "
        "classical consumer, and run or check the pieces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="compute y for one input")
    _add_scheme_arguments(run_parser)
    run_parser.add_argument("--input", type=int, required=True, help="input x0, >= 0")
    run_parser.add_argument(
        "--mode",
        choices=("recursive", "sequential", "split"),
        default="split",
        help="evaluation route (default: split)",
    )
    run_parser.add_argument("--timeout", type=float, default=harness.DEFAULT_TIMEOUT)
    run_parser.add_argument("--trace", metavar="PATH", help="write the channel trace as JSONL")
    run_parser.add_argument("--verbose", action="store_true", help="also print residuals")
    run_parser.set_defaults(func=_cmd_run)

    ir_parser = sub.add_parser("emit-ir", help="dump the compiled producer program")
    _add_scheme_arguments(ir_parser)
    ir_parser.set_defaults(func=_cmd_emit_ir)

    check_parser = sub.add_parser("check", help="reversibility checks plus a default sweep")
    _add_scheme_arguments(check_parser)
    check_parser.add_argument("--x-max", type=int, default=50, help="sweep inputs 0..x-max")
    check_parser.add_argument("--preloads", type=int, default=100, help="random preloads per program")
    check_parser.add_argument("--seed", type=int, default=0)
    check_parser.add_argument("--timeout", type=float, default=harness.DEFAULT_TIMEOUT)
    check_parser.set_defaults(func=_cmd_check)

    sweep_parser = sub.add_parser("sweep", help="sweep ranges of inputs and displacements")
    _add_scheme_arguments(sweep_parser)
    sweep_parser.add_argument("--x-range", default="0:50", metavar="LO:HI", help="inclusive input range")
    sweep_parser.add_argument("--delta-range", default="-5:-1", metavar="LO:HI", help="inclusive displacement range")
    sweep_parser.add_argument("--timeout", type=float, default=harness.DEFAULT_TIMEOUT)
    sweep_parser.set_defaults(func=_cmd_sweep)
    return parser


def _scheme_fields(args) -> dict:
    fields = {}
    if args.scheme:
        try:
            with open(args.scheme, encoding="utf-8") as handle:
                text = handle.read()
        except OSError as exc:
            raise UsageError(f"cannot read scheme file: {exc}") from None
        try:
            fields = parse_scheme_text(text)
        except SchemeError as exc:
            raise UsageError(str(exc)) from None
    if args.delta is not None:
        fields["delta"] = str(args.delta)
    if args.base is not None:
        fields["base"] = args.base
    if args.step is not None:
        fields["step"] = args.step
    return fields


def _resolve_scheme(args) -> RecursionScheme:
    fields = _scheme_fields(args)
    missing = [key for key in ("delta", "base", "step") if key not in fields]
    if missing:
        raise UsageError(
            f"missing scheme field(s): {', '.join(missing)} "
            "(give --scheme FILE or --delta/--base/--step)"
        )
    try:
        delta = int(fields["delta"])
    except ValueError:
        raise UsageError(f"delta must be an integer, got {fields['delta']!r}") from None
    try:
        return make_scheme(delta, fields["base"], fields["step"])
    except (SchemeError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def _resolve_pairs_and_deltas(args, default_deltas):
    """For check/sweep: an explicit base/step pair narrows the default set."""
    fields = _scheme_fields(args)
    if "base" in fields and "step" in fields:
        pairs = [(fields["base"], fields["step"])]
    else:
        pairs = list(DEFAULT_PAIRS)
    if "delta" in fields:
        try:
            deltas = [int(fields["delta"])]
        except ValueError:
            raise UsageError(f"delta must be an integer, got {fields['delta']!r}") from None
    elif default_deltas is not None:
        deltas = list(default_deltas)
    else:
        deltas = None
    if deltas is not None and any(delta > -1 for delta in deltas):
        raise UsageError("delta must be <= -1")
    return pairs, deltas


def _parse_span(text, name) -> range:
    try:
        lo_text, hi_text = text.split(":", 1)
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise UsageError(f"{name} must look like LO:HI, got {text!r}") from None
    if lo > hi:
        raise UsageError(f"{name}: {lo} > {hi}")
    return range(lo, hi + 1)


def _cmd_run(args) -> int:
    scheme = _resolve_scheme(args)
    if args.input < 0:
        raise UsageError(f"--input must be non-negative, got {args.input}")
    residuals = None
    if args.mode == "recursive":
        y = eval_recursive(scheme, args.input)
    elif args.mode == "sequential":
        y, residuals = run_sequential(scheme, args.input)
    else:
        report = harness.run_split(scheme, args.input, timeout=args.timeout)
        y = report.y
        residuals = report.residuals
        if args.trace:
            harness.write_trace_jsonl(report.channel_log, args.trace)
    print(f"y = {y}")
    if args.verbose and residuals is not None:
        print(residuals.to_text())
    return EXIT_OK


def _cmd_emit_ir(args) -> int:
    scheme = _resolve_scheme(args)
    print(dump(compile_producer(scheme)))
    return EXIT_OK


def _cmd_check(args) -> int:
    pairs, deltas = _resolve_pairs_and_deltas(args, default_deltas=range(-5, 0))
    if args.x_max < 0:
        raise UsageError(f"--x-max must be non-negative, got {args.x_max}")
    failed = False
    for base_text, step_text in pairs:
        for delta in deltas:
            program = compile_producer(make_scheme(delta, base_text, step_text))
            preloads = harness.random_preloads(program, args.preloads, seed=args.seed + delta)
            report = harness.check_reversibility(program, preloads)
            status = "ok" if report.all_ok else "FAILED"
            print(f"reversibility delta={delta} base={base_text} step={step_text}: "
                  f"{report.summary()} [{status}]")
            for case in report.failures:
                print(f"  {case.label}: {case.problem}")
            failed = failed or not report.all_ok
    sweep_report = harness.sweep(range(0, args.x_max + 1), deltas, pairs, timeout=args.timeout)
    print(f"sweep: {len(sweep_report.cases)} cases, {len(sweep_report.failures)} failures")
    for case in sweep_report.failures:
        detail = case.error if case.error is not None else "; ".join(case.problems)
        print(f"  delta={case.delta} x0={case.x0} base={case.base} step={case.step}: {detail}")
    failed = failed or not sweep_report.all_ok
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def _cmd_sweep(args) -> int:
    pairs, deltas = _resolve_pairs_and_deltas(args, default_deltas=None)
    x_span = _parse_span(args.x_range, "--x-range")
    if deltas is None:
        delta_span = _parse_span(args.delta_range, "--delta-range")
        if len(delta_span) and max(delta_span) > -1:
            raise UsageError("--delta-range must stay at or below -1")
        deltas = list(delta_span)
    if len(x_span) and min(x_span) < 0:
        raise UsageError("--x-range must be non-negative")
    report = harness.sweep(x_span, deltas, pairs, timeout=args.timeout)
    print(report.format_table())
    return EXIT_OK if report.all_ok else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except harness.DeadlockTimeout as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEADLOCK
    except (harness.HarnessError, RevirError, SchemeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED


def main_entry():
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
