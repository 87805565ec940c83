"""Command-line front end.

    c2m-alloc generate [--out DIR] [--seed S] [--count K]
    c2m-alloc solve FILE [--json] [--scale-oq F] [--dump-lp]
    c2m-alloc suite DIR [--json] [--scale-oq F]
    c2m-alloc compare FILE [--json]

Exit status: 0 on success, 1 on input errors, 2 when no gamma > 0 allocation
exists or the LP solver breaks down.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import report
from .model import InstanceFormatError, read_instance, validate_instance
from .simplex_lp import LpError
from .suite import OK, SuiteError, SuiteSpec, solve_instance, solve_suite, summarize, write_suite

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2


class InputError(Exception):
    pass


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="c2m-alloc", description="C2M production planning and gamma-core profit allocation")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write the synthetic six-set instance suite")
    gen.add_argument("--out", default="instances", help="output directory (default: instances)")
    gen.add_argument("--seed", type=int, default=0, help="suite seed (default: 0)")
    gen.add_argument("--count", type=int, default=10, help="instances per set (default: 10)")

    solve = sub.add_parser("solve", help="solve one instance file")
    solve.add_argument("file")
    solve.add_argument("--json", action="store_true", help="emit JSON instead of tables")
    solve.add_argument("--scale-oq", type=_positive_float, default=1.0, metavar="FACTOR", help="multiply order quantities")
    solve.add_argument("--dump-lp", action="store_true", help="print the allocation LPs and pivot log to stderr")

    suite = sub.add_parser("suite", help="solve every instance listed in DIR/manifest.json")
    suite.add_argument("dir")
    suite.add_argument("--json", action="store_true")
    suite.add_argument("--scale-oq", type=_positive_float, default=1.0, metavar="FACTOR")

    comp = sub.add_parser("compare", help="gamma-core allocation next to the Shapley value")
    comp.add_argument("file")
    comp.add_argument("--json", action="store_true")
    return parser


def _load(path: str):
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    try:
        inst = read_instance(data)
    except InstanceFormatError as exc:
        raise InputError(f"{path}: {exc}") from exc
    problems = validate_instance(inst)
    if problems:
        raise InputError(f"{path}: " + "; ".join(map(str, problems)))
    return inst


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def cmd_generate(args, out) -> int:
    spec = SuiteSpec.default(seed=args.seed, count=args.count)
    try:
        files = write_suite(spec, args.out)
    except OSError as exc:
        raise InputError(f"{exc.filename or args.out}: {exc.strerror or exc}") from exc
    print(f"wrote {len(files)} instances and manifest.json to {args.out}", file=out)
    return EXIT_OK


def cmd_solve(args, out) -> int:
    inst = _load(args.file)
    trace = (lambda line: print(line, file=sys.stderr)) if args.dump_lp else None
    o = solve_instance(inst, Path(args.file).stem, 1, args.scale_oq, trace=trace)
    if args.json:
        print(_dump(o.to_dict()), file=out)
    else:
        print(report.results_table([o], title=f"Results of {args.file}"), file=out)
        print(file=out)
        print(report.profits_table([o], title="Post-collaboration profits of the manufacturers"), file=out)
        print(file=out)
        print(report.comparison_table(o.comparison, o.plan.order_values(o.instance.ask_price).tolist()), file=out)
    if o.status != OK:
        print(f"warning: {o.message}", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def cmd_suite(args, out) -> int:
    try:
        outcomes = solve_suite(args.dir, args.scale_oq)
    except SuiteError as exc:
        raise InputError(str(exc)) from exc
    summaries = summarize(outcomes)
    if args.json:
        doc = {
            "scale_oq": args.scale_oq,
            "instances": [
                {
                    "label": o.label,
                    "index": o.index,
                    "status": o.status,
                    "total_profit": o.total_profit,
                    "gamma": None if o.allocation is None else float(o.allocation.gamma),
                    "in_core": bool(o.allocation is not None and o.allocation.in_core),
                    "shortage": o.shortage,
                    "profits": None if o.allocation is None else [float(p) for p in o.allocation.profits],
                }
                for o in outcomes
            ],
            "summary": [s.to_dict() for s in summaries],
        }
        print(_dump(doc), file=out)
        return EXIT_OK
    suffix = "" if args.scale_oq == 1.0 else f" with order quantities x{args.scale_oq:g}"
    for s in summaries:
        rows = [o for o in outcomes if o.label == s.label]
        print(report.results_table(rows, title=f"Results of {s.label}{suffix}"), file=out)
        print(file=out)
        print(report.profits_table(rows, title=f"Post-collaboration profits of the manufacturers in {s.label}"), file=out)
        print(file=out)
    print(report.summary_table(summaries), file=out)
    return EXIT_OK


def cmd_compare(args, out) -> int:
    inst = _load(args.file)
    o = solve_instance(inst, Path(args.file).stem)
    if args.json:
        print(_dump(o.comparison.to_dict()), file=out)
    else:
        print(report.comparison_table(o.comparison, o.plan.order_values(inst.ask_price).tolist()), file=out)
    return EXIT_OK if o.status == OK else EXIT_DEGENERATE


COMMANDS = {"generate": cmd_generate, "solve": cmd_solve, "suite": cmd_suite, "compare": cmd_compare}


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args, out)
    except (InputError, InstanceFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LpError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE


if __name__ == "__main__":
    sys.exit(main())
