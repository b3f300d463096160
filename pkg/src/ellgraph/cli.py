"""Batch command line: evaluate, differentiate, verify, and trace
decorated graphs from files.

Exit codes: 0 success, 1 verification failure, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .graphs import (
    DecoratedGraph,
    GraphParseError,
    graph_to_inline,
    graph_to_json_obj,
    parse_graph_json,
    parse_graph_text,
)
from .integrate import check_anomaly, evaluate, evaluate_traced
from .residual import delta
from .ring import RingElement
from .verify import run_suites


def _load_graph(path: str) -> DecoratedGraph:
    text = Path(path).read_text()
    if path.endswith(".json") or text.lstrip().startswith("{"):
        return parse_graph_json(text)
    return parse_graph_text(text)


def _format_value(value: RingElement, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(value.to_json_obj(), sort_keys=True)
    if fmt == "latex":
        return value.to_latex()
    return value.to_text()


def _cmd_eval(args) -> int:
    for path in args.inputs:
        g = _load_graph(path)
        if args.trace:
            trace = evaluate_traced(g)
            Path(args.trace).write_text("\n".join(trace.to_json_lines()) + "\n")
            value = trace.value
        else:
            value = evaluate(g)
        if args.format == "json":
            print(
                json.dumps(
                    {"path": path, "graph": graph_to_json_obj(g), "value": value.to_json_obj()},
                    sort_keys=True,
                )
            )
        else:
            print(_format_value(value, args.format))
    return 0


def _cmd_delta(args) -> int:
    for path in args.inputs:
        g = _load_graph(path)
        combination = delta(g)
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "path": path,
                        "delta": [
                            {"coeff": str(c), "graph": graph_to_json_obj(t)}
                            for t, c in combination
                        ],
                    },
                    sort_keys=True,
                )
            )
        else:
            print(f"# {path}")
            if combination.is_zero:
                print("0")
            for t, c in combination:
                print(f"({c}) :: {graph_to_inline(t)}")
    return 0


def _cmd_anomaly(args) -> int:
    all_equal = True
    for path in args.inputs:
        g = _load_graph(path)
        report = check_anomaly(g)
        all_equal = all_equal and report.equal
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "path": path,
                        "lhs": report.lhs.to_json_obj(),
                        "rhs": report.rhs.to_json_obj(),
                        "equal": report.equal,
                    },
                    sort_keys=True,
                )
            )
        else:
            print(f"{path}: equal={report.equal} lhs={report.lhs} rhs={report.rhs}")
    return 0 if all_equal else 1


def _cmd_verify(args) -> int:
    report = run_suites(seed=args.seed, max_vertices=args.max_vertices, max_weight=args.max_weight)
    if args.format == "json":
        print(json.dumps(report, sort_keys=True))
    else:
        for name, data in report["suites"].items():
            status = "PASS" if not data["failures"] else "FAIL"
            print(f"{status} {name} ({data['cases']} cases)")
            for msg in data["failures"]:
                print(f"  {msg}")
        print("all suites passed" if report["passed"] else "FAILURES detected")
    return 0 if report["passed"] else 1


def _cmd_trace(args) -> int:
    for path in args.inputs:
        g = _load_graph(path)
        trace = evaluate_traced(g)
        lines = "\n".join(trace.to_json_lines()) + "\n"
        if args.trace:
            Path(args.trace).write_text(lines)
            print(_format_value(trace.value, args.format))
        else:
            sys.stdout.write(lines)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ellgraph",
        description="Exact regularized graph integrals on elliptic curves.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, with_inputs=True):
        if with_inputs:
            p.add_argument("inputs", nargs="+", help="graph files (text or JSON)")
        p.add_argument("--format", choices=("text", "json", "latex"), default="text")
        p.add_argument("--trace", metavar="PATH", default=None, help="write a JSON-lines trace")

    p_eval = sub.add_parser("eval", help="evaluate W for each input graph")
    add_common(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_delta = sub.add_parser("delta", help="apply the anomaly operator to each graph")
    add_common(p_delta)
    p_delta.set_defaults(func=_cmd_delta)

    p_anomaly = sub.add_parser("anomaly", help="check the anomaly identity per graph")
    add_common(p_anomaly)
    p_anomaly.set_defaults(func=_cmd_anomaly)

    p_trace = sub.add_parser("trace", help="evaluate and emit the elimination trace")
    add_common(p_trace)
    p_trace.set_defaults(func=_cmd_trace)

    p_verify = sub.add_parser("verify", help="run the randomized verification suites")
    p_verify.add_argument("--format", choices=("text", "json"), default="text")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--max-vertices", type=int, default=3)
    p_verify.add_argument("--max-weight", type=int, default=8)
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GraphParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
