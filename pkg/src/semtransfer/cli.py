"""Command-line front end.

Exit status: 0 on success, 1 for usage, parse and compile errors, 2 when a
transfer itself fails (e.g. a rule calls an unregistered external predicate).
"""

from __future__ import annotations

import argparse
import importlib
import sys
from typing import List, Optional

from .bench import run_bench
from .checks import check_rules, has_errors
from .compiler import compile_rules
from .engine import ExternalRegistry, format_trace, run_transfer, transfer_all
from .errors import OracleLimitError, SemTransferError, TransferError
from .oracle import oracle_transfer
from .syntax import format_vit, format_vits, parse_rule_files, parse_sorts, parse_vit


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> tuple:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError("expected LEFT,RIGHT language tags, e.g. de,en")
    return tuple(parts)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semtransfer", description="Semantic transfer over flat labeled representations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_base_args(p, sorts: bool = True) -> None:
        p.add_argument("--rules", nargs="+", action="extend", required=True, metavar="FILE",
                       help="rule files, concatenated in order")
        if sorts:
            p.add_argument("--sorts", metavar="FILE", help="sort hierarchy file")
        p.add_argument("--pair", type=_pair, metavar="LEFT,RIGHT",
                       help="languages of the left and right rule sides (default: FROM,TO)")

    t = sub.add_parser("translate", help="transfer one Vit")
    add_base_args(t)
    t.add_argument("--from", dest="source", required=True, metavar="LANG")
    t.add_argument("--to", dest="target", required=True, metavar="LANG")
    t.add_argument("--input", required=True, metavar="FILE")
    t.add_argument("--all", type=int, metavar="N", help="up to N alternative translations at specificity ties")
    t.add_argument("--trace", metavar="FILE")
    t.add_argument("--out", metavar="FILE", help="output Vit file (default: stdout)")
    t.add_argument("--externals", metavar="MODULE:ATTR",
                   help="an ExternalRegistry to use for external condition predicates")

    c = sub.add_parser("check", help="validate rule files")
    add_base_args(c)

    o = sub.add_parser("oracle", help="enumerate all derivations exhaustively (small inputs only)")
    add_base_args(o)
    o.add_argument("--from", dest="source", required=True, metavar="LANG")
    o.add_argument("--to", dest="target", required=True, metavar="LANG")
    o.add_argument("--input", required=True, metavar="FILE")

    b = sub.add_parser("bench", help="latency benchmark")
    src = b.add_mutually_exclusive_group()
    src.add_argument("--rules", type=int, default=1700, metavar="COUNT", help="synthetic rule count")
    src.add_argument("--rules-file", nargs="+", action="extend", metavar="FILE")
    b.add_argument("--sorts", metavar="FILE")
    b.add_argument("--input-size", type=int, default=15)
    b.add_argument("--runs", type=int, default=500)
    b.add_argument("--seed", type=int, default=0)
    return parser


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_externals(spec: Optional[str]) -> ExternalRegistry:
    if not spec:
        return ExternalRegistry()
    module, _, attr = spec.partition(":")
    reg = getattr(importlib.import_module(module), attr or "REGISTRY")
    if not isinstance(reg, ExternalRegistry):
        raise SemTransferError(f"{spec} is not an ExternalRegistry")
    return reg


def _compile(args):
    rules, classes = parse_rule_files(args.rules)
    hierarchy = parse_sorts(_read(args.sorts), args.sorts) if args.sorts else None
    base = compile_rules(rules, classes, (args.source, args.target), hierarchy, args.pair)
    return base, parse_vit(_read(args.input), args.input)


def cmd_translate(args) -> int:
    try:
        base, vit = _compile(args)
        externals = _load_externals(args.externals)
    except (SemTransferError, OSError, ImportError, AttributeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        result = run_transfer(vit, base, externals)
        outputs = [result.output]
        if args.all and args.all > 1:
            outputs = transfer_all(vit, base, args.all, externals)
    except TransferError as exc:
        print(f"transfer failed: {exc}", file=sys.stderr)
        return 2
    if args.trace:
        _write(args.trace, format_trace(result.trace))
    _write(args.out, format_vits(outputs))
    return 0


def cmd_check(args) -> int:
    try:
        rules, classes = parse_rule_files(args.rules)
        hierarchy = parse_sorts(_read(args.sorts), args.sorts) if args.sorts else None
    except (SemTransferError, OSError) as exc:
        print(f"error: {exc}")
        return 1
    findings = check_rules(rules, classes, hierarchy, args.pair)
    for f in findings:
        print(f)
    errors = sum(f.severity == "error" for f in findings)
    print(f"{len(rules)} rules, {len(classes)} classes: {errors} errors, {len(findings) - errors} warnings")
    return 1 if has_errors(findings) else 0


def cmd_oracle(args) -> int:
    try:
        base, vit = _compile(args)
        result = oracle_transfer(vit, base)
    except (SemTransferError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, OracleLimitError) else 1
    for d in sorted(result.derivations, key=lambda d: d.signature):
        sig = " ".join(f"{base.rules[p].provenance}@{list(pos)}" for p, pos in d.signature) or "(metarule only)"
        print(f"% {'valid' if d.valid else 'INVALID'}: {sig}")
    print(f"% {len(result.outputs)} distinct outputs; most specific cover:")
    if result.most_specific is not None:
        sys.stdout.write(format_vit(result.most_specific))
    return 0


def cmd_bench(args) -> int:
    try:
        report = run_bench(rule_count=args.rules, rules_files=args.rules_file or (), input_size=args.input_size,
                           runs=args.runs, seed=args.seed, sorts_file=args.sorts)
    except (SemTransferError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(report.as_text())
    sys.stdout.write("\n" + report.as_key_values())
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return {"translate": cmd_translate, "check": cmd_check, "oracle": cmd_oracle,
            "bench": cmd_bench}[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
