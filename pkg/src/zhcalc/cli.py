"""Command-line surface.

Subcommands: ``eval`` (diagram to matrix), ``normalize`` (normal form,
optionally reduced and with the rewrite trace), ``equiv`` (equality of
two diagram documents), ``check-rules`` (soundness sweep over a ruleset),
``circuit`` (evaluate, convert or compare gate lists) and ``render``
(dot/tikz export).

Exit codes: 0 success or EQUAL, 1 DIFFERENT or a failed rule check,
2 usage or format errors.
"""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional

from . import circuits as cc
from . import document as doc
from . import normalform as nfm
from . import render as rd
from . import ring as rg
from . import rules
from . import semantics as sm


def _matrix_text(m: sm.Matrix) -> str:
    cells = m.to_lists()
    if m.rows == 1 and m.cols == 1:
        return f"[{cells[0][0]}]"
    return "[" + ",".join("[" + ",".join(row) + "]" for row in cells) + "]"


def _load(path: str, ring_flag: Optional[str]) -> doc.DiagramDocument:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    override = rg.parse_ring(ring_flag) if ring_flag else None
    return doc.parse(text, override_ring=override)


def _add_ring_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--ring",
        help="interpretation ring: dyadic | int | rt2 | mod:<p> "
        "(default: the document's declared ring)",
    )
    p.add_argument(
        "--sqrt2-star",
        action="store_true",
        help="interpret the star as 1/sqrt(2) (needs the rt2 ring)",
    )


def cmd_eval(args: argparse.Namespace) -> int:
    d = _load(args.file, args.ring)
    m = sm.interpret(d.diagram, d.ring, args.sqrt2_star)
    print(_matrix_text(m))
    return 0


def cmd_normalize(args: argparse.Namespace) -> int:
    d = _load(args.file, args.ring)
    nf, trace = nfm.normalize_with_trace(
        d.diagram, d.ring, args.sqrt2_star, reduce_result=args.reduced
    )
    print(nf.format_compact())
    if args.trace:
        for i, step in enumerate(trace):
            status = "ok" if step.sound else "MISMATCH"
            detail = f" {step.detail}" if step.detail else ""
            print(f"step {i}: {step.op}{detail} [{status}]")
        print(f"trace steps: {len(trace)}")
    return 0


def cmd_equiv(args: argparse.Namespace) -> int:
    d1 = _load(args.file_a, args.ring)
    d2 = _load(args.file_b, args.ring)
    if d1.ring != d2.ring:
        raise doc.DocumentError("documents declare different rings")
    same = nfm.equal(d1.diagram, d2.diagram, d1.ring, args.sqrt2_star)
    print("EQUAL" if same else "DIFFERENT")
    return 0 if same else 1


def cmd_check_rules(args: argparse.Namespace) -> int:
    ring = rg.parse_ring(args.ring) if args.ring else rg.DYADIC_RING
    try:
        labels = [int(tok) for tok in args.labels.split(",") if tok.strip()]
    except ValueError:
        raise rules.RuleError(f"bad label list {args.labels!r}")
    rulesets = (
        ["core", "zh_r", "alt_ortho", "merged", "sqrt2", "derived"]
        if args.ruleset == "all"
        else [args.ruleset]
    )
    failed = 0
    for ruleset in rulesets:
        reports = rules.run_soundness(
            ruleset,
            ring,
            sqrt2_star=args.sqrt2_star,
            max_arity=args.max_arity,
            labels=labels,
            seed=args.seed,
        )
        print(f"ruleset {ruleset}:")
        for rep in reports:
            if rep.instances == 0:
                status = "skipped (needs star or half)"
            elif rep.ok:
                status = "pass"
            else:
                status = f"FAIL at {rep.failures[0]}"
                failed += 1
            print(f"  {rep.name:28s} {rep.instances:4d} instances  {status}")
    return 1 if failed else 0


def cmd_circuit(args: argparse.Namespace) -> int:
    ring = rg.parse_ring(args.ring) if args.ring else rg.ROOT_TWO_RING
    sqrt2 = not args.plain
    with open(args.file, "r", encoding="utf-8") as fh:
        c1 = cc.parse_circuit(fh.read())
    if args.action == "eval":
        d, h_count = cc.circuit_to_diagram(c1, ring, sqrt2)
        if not sqrt2 and h_count:
            print(f"# denotes sqrt(2)^{h_count} times the circuit unitary")
        print(_matrix_text(sm.interpret(d, ring, sqrt2)))
        return 0
    if args.action == "to-diagram":
        d, h_count = cc.circuit_to_diagram(c1, ring, sqrt2)
        if not sqrt2 and h_count:
            print(f"# denotes sqrt(2)^{h_count} times the circuit unitary")
        sys.stdout.write(doc.serialize(doc.DiagramDocument(ring, d)))
        return 0
    # equiv
    with open(args.other, "r", encoding="utf-8") as fh:
        c2 = cc.parse_circuit(fh.read())
    same = cc.circuits_equivalent(c1, c2)
    print("EQUAL" if same else "DIFFERENT")
    return 0 if same else 1


def cmd_render(args: argparse.Namespace) -> int:
    d = _load(args.file, args.ring)
    sys.stdout.write(rd.render(d.diagram, args.format))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zhcalc",
        description="Exact ZH-diagram evaluation, normalization and equality",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate a diagram document to a matrix")
    p.add_argument("file")
    _add_ring_flags(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("normalize", help="bring a diagram to normal form")
    p.add_argument("file")
    p.add_argument("--trace", action="store_true", help="print the step log")
    p.add_argument("--reduced", action="store_true", help="reduce the result")
    _add_ring_flags(p)
    p.set_defaults(func=cmd_normalize)

    p = sub.add_parser("equiv", help="decide equality of two diagrams")
    p.add_argument("file_a")
    p.add_argument("file_b")
    _add_ring_flags(p)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("check-rules", help="run the rule soundness sweep")
    p.add_argument(
        "--ruleset",
        default="core",
        choices=["core", "zh_r", "alt_ortho", "merged", "sqrt2", "derived", "all"],
    )
    p.add_argument("--max-arity", type=int, default=3)
    p.add_argument("--labels", default="-2,-1,0,1,2")
    p.add_argument(
        "--seed",
        type=int,
        default=0,
        help="seed for subsampling oversized parameter grids",
    )
    _add_ring_flags(p)
    p.set_defaults(func=cmd_check_rules)

    p = sub.add_parser("circuit", help="work with gate-list circuits")
    p.add_argument("action", choices=["eval", "to-diagram", "equiv"])
    p.add_argument("file")
    p.add_argument("other", nargs="?", help="second circuit for equiv")
    p.add_argument("--ring", help="ring for eval/to-diagram (default rt2)")
    p.add_argument(
        "--plain",
        action="store_true",
        help="encode H gates without stars (matrix scales by sqrt(2)^h)",
    )
    p.set_defaults(func=cmd_circuit)

    p = sub.add_parser("render", help="export a diagram as dot or tikz")
    p.add_argument("file")
    p.add_argument("--format", default="dot", choices=["dot", "tikz"])
    _add_ring_flags(p)
    p.set_defaults(func=cmd_render)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) == "circuit" and args.action == "equiv":
        if not args.other:
            parser.error("circuit equiv needs two files")
    try:
        return args.func(args)
    except (
        doc.DocumentError,
        rg.RingError,
        cc.CircuitError,
        nfm.SignatureError,
        rules.ParamError,
        rd.RenderError,
        sm.SemanticsError,
        OSError,
    ) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
