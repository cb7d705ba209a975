"""Command-line interface.

Exit codes: 0 success, 1 cross-check failure, 2 usage or input error.
Domain errors print a JSON envelope {code, message, context} on stderr so
CI scripts can parse failures; human-readable output goes to stdout.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import engine, formulas, geometry, harness, scattering, snake
from .errors import ClusterKitError, InvalidInput
from .laurent import canonical_string, rational_string, to_json_dict
from .quiver import Quiver, complete_extension, from_json, from_text, to_json_dict as quiver_json


def _load_quiver(path: str) -> Quiver:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InvalidInput(f"cannot read quiver file: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return from_json(text)
    return from_text(text)


def _parse_dvector(text: str, n: int) -> tuple[int, ...]:
    try:
        a = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise InvalidInput(f"bad d-vector {text!r}") from exc
    if len(a) != n:
        raise InvalidInput(f"d-vector has {len(a)} entries, quiver has {n} vertices")
    return a


def _parse_subquiver(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise InvalidInput(f"bad vertex list {text!r}") from exc


def _emit_value(value, fmt: str):
    if fmt == "json":
        print(json.dumps(to_json_dict(value)))
    else:
        print(rational_string(value))


def cmd_expand(args) -> int:
    q = _load_quiver(args.quiver)
    a = _parse_dvector(args.dvector, q.n)
    value = harness.expand_model(q, a, args.model)
    _emit_value(value, args.format)
    return 0


def cmd_count(args) -> int:
    q = _load_quiver(args.quiver)
    a = _parse_dvector(args.dvector, q.n)
    if args.list_witnesses:
        print(json.dumps(harness.list_witnesses(q, a, args.model)))
    else:
        print(harness.witness_count(q, a, args.model))
    return 0


def cmd_decompose(args) -> int:
    q = _load_quiver(args.quiver)
    a = _parse_dvector(args.dvector, q.n)
    plus, neg = geometry.positive_split(q, a)
    for b in geometry.decompose(q, plus):
        print(json.dumps(list(b)))
    for i, e in enumerate(neg):
        if e:
            print(json.dumps({"initial": i + 1, "exponent": e}))
    return 0


def cmd_pipelines(args) -> int:
    q = _load_quiver(args.quiver)
    a = _parse_dvector(args.dvector, q.n)
    plus, _ = geometry.positive_split(q, a)
    ps = geometry.build_pipelines(q, plus)
    for p in ps.pipelines:
        print(json.dumps({"b": list(p.b_vector), "endpoints": list(p.endpoints),
                          "crossings": [list(c) for c in p.crossings]}))
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(geometry.pipelines_svg(ps))
    return 0


def cmd_snake(args) -> int:
    q = _load_quiver(args.quiver)
    a = _parse_dvector(args.dvector, q.n)
    if any(x not in (0, 1) for x in a):
        raise InvalidInput("snake diagrams are drawn per variable: use a 0-1 d-vector")
    support = [i + 1 for i, bit in enumerate(a) if bit]
    comp = complete_extension(q, support)
    d = snake.build_snake(comp.celq)
    matchings = snake.enumerate_matchings(d)
    print(f"tiles: {list(d.tiles)}")
    print(f"matchings: {len(matchings)}")
    if args.svg:
        gamma = matchings[args.matching] if matchings else None
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(snake.snake_svg(d, gamma))
    return 0


def cmd_broken_lines(args) -> int:
    q = _load_quiver(args.quiver)
    support = _parse_subquiver(args.subquiver)
    principal = True if args.principal else None
    lines = scattering.broken_lines(q, support, principal=principal)
    for line in lines:
        print(json.dumps({
            "s": list(line.s),
            "walls": list(line.walls),
            "monomial": canonical_string(line.final_monomial()),
            "bends": [[str(c) for c in pt] for pt in line.bends],
        }))
    theta = scattering.theta_from_broken_lines(q, support)
    print("theta " + rational_string(theta))
    if args.svg:
        plane = tuple(int(x) for x in args.plane.split(","))
        if len(plane) != 2:
            raise InvalidInput("--plane needs two coordinates i,j")
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(scattering.broken_line_svg(lines[args.line], plane))
    return 0


def cmd_crosscheck(args) -> int:
    if args.random:
        rng = random.Random(args.seed)
        q = harness.random_type_a_quiver(args.random, rng)
    else:
        if not args.quiver:
            raise InvalidInput("crosscheck needs --quiver or --random N")
        q = _load_quiver(args.quiver)
    models = args.models.split(",") if args.models else None
    report = harness.crosscheck(q, models, box=args.box, with_timings=args.timings)
    if args.format == "json":
        print(json.dumps(report.to_json_dict()))
    else:
        sys.stdout.write(report.render_text(timings=args.timings))
    return 0 if report.passed else 1


def cmd_enumerate_variables(args) -> int:
    q = _load_quiver(args.quiver)
    table = engine.enumerate_cluster_variables(q, max_seeds=args.max_seeds)
    out = {",".join(map(str, key)): canonical_string(value)
           for key, value in sorted(table.items())}
    print(json.dumps(out))
    return 0


def cmd_report_table(args) -> int:
    q = _load_quiver(args.quiver)
    sys.stdout.write(harness.report_table(q))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clusterkit",
        description="Cluster variables of type-A quivers via five cross-checked "
                    "combinatorial models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_quiver(p, required=True):
        p.add_argument("--quiver", required=required, help="quiver file (text or JSON)")

    p = sub.add_parser("expand", help="expand a cluster monomial")
    add_quiver(p)
    p.add_argument("--model", default="mutation", choices=harness.MODELS)
    p.add_argument("--dvector", required=True)
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("count", help="count or list combinatorial witnesses")
    add_quiver(p)
    p.add_argument("--model", default="gcs", choices=harness.MODELS)
    p.add_argument("--dvector", required=True)
    p.add_argument("--list-witnesses", action="store_true")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("decompose", help="split a d-vector into variable d-vectors")
    add_quiver(p)
    p.add_argument("--dvector", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("pipelines", help="print or draw the pipeline construction")
    add_quiver(p)
    p.add_argument("--dvector", required=True)
    p.add_argument("--svg")
    p.set_defaults(func=cmd_pipelines)

    p = sub.add_parser("snake", help="snake diagram of one cluster variable")
    add_quiver(p)
    p.add_argument("--dvector", required=True)
    p.add_argument("--svg")
    p.add_argument("--matching", type=int, default=0)
    p.set_defaults(func=cmd_snake)

    p = sub.add_parser("broken-lines", help="broken lines of one cluster variable")
    add_quiver(p)
    p.add_argument("--subquiver", required=True, help="path vertices, comma-separated")
    p.add_argument("--principal", action="store_true")
    p.add_argument("--svg")
    p.add_argument("--plane", default="1,2")
    p.add_argument("--line", type=int, default=0)
    p.set_defaults(func=cmd_broken_lines)

    p = sub.add_parser("crosscheck", help="compare all models on all variables")
    add_quiver(p, required=False)
    p.add_argument("--random", type=int, help="random type-A quiver on N vertices")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--models")
    p.add_argument("--box", type=int, default=0,
                   help="also sweep monomial d-vectors in [0,B]^n")
    p.add_argument("--timings", action="store_true")
    p.add_argument("--format", default="text", choices=("text", "json"))
    p.set_defaults(func=cmd_crosscheck)

    p = sub.add_parser("enumerate-variables", help="dump the full variable table")
    add_quiver(p)
    p.add_argument("--max-seeds", type=int, default=100_000)
    p.set_defaults(func=cmd_enumerate_variables)

    p = sub.add_parser("report-table", help="markdown table of all variables")
    add_quiver(p)
    p.set_defaults(func=cmd_report_table)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ClusterKitError as exc:
        envelope = {"code": type(exc).__name__, "message": str(exc),
                    "context": {"command": args.command}}
        print(json.dumps(envelope), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
