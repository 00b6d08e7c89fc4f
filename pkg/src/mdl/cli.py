"""Command-line front door for scripts and CI pipelines.

Exit codes are stable and disjoint: 0 success (or a permitted verdict),
1 a forbidden verdict from ``mdl check``, 2 a parse or validation error,
3 a usage error. Every command accepts the expression as an argument or on
standard input, and ``@path`` reads it from a file. ``--json`` outputs are
schema-stable and byte-identical to the HTTP service's responses.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .checker import ActionQuery, QueryError, Verdict, check, default_asset
from .composer import AssetKind, combine
from .documents import (
    canonical_json,
    combine_document,
    decision_document,
    generate_document,
    parse_document,
)
from .expression import ParseError, parse, serialize
from .render import generate_license, render_topsheet
from .sidecar import SidecarError, read_sidecar
from .taxonomy import Capability

__all__ = ["main"]

EXIT_OK = 0
EXIT_FORBIDDEN = 1
EXIT_INVALID = 2
EXIT_USAGE = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves 2
    # for parse/validation failures and uses 3 for usage.
    def error(self, message: str):
        raise _UsageError(message)


def _read_expression(value: str | None) -> str:
    if value is None or value == "-":
        return sys.stdin.read().strip()
    if value.startswith("@"):
        return Path(value[1:]).read_text(encoding="utf-8").strip()
    return value


def _parse_or_exit(text: str):
    try:
        return parse(text).grant
    except ParseError as exc:
        print(exc.caret_diagnostic(), file=sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _cmd_parse(args: argparse.Namespace) -> int:
    grant = _parse_or_exit(_read_expression(args.expression))
    if args.json:
        sys.stdout.write(canonical_json(parse_document(grant)))
    else:
        print(serialize(grant))
    return EXIT_OK


def _cmd_generate(args: argparse.Namespace) -> int:
    grant = _parse_or_exit(_read_expression(args.expression))
    document = generate_license(grant, verbatim_typos=not args.corrected)
    if args.json:
        sys.stdout.write(canonical_json(generate_document(document)))
        return EXIT_OK
    if args.out:
        Path(args.out).write_text(document.text, encoding="utf-8")
        print(document.content_hash)
    else:
        sys.stdout.write(document.text)
        print(document.content_hash, file=sys.stderr)
    return EXIT_OK


def _cmd_check(args: argparse.Namespace) -> int:
    grant = _parse_or_exit(_read_expression(args.expression))
    try:
        capability = Capability(args.action)
    except ValueError:
        raise _UsageError(f"unknown capability token {args.action!r}")
    if args.asset is None:
        asset = default_asset(capability)
    else:
        try:
            asset = AssetKind(args.asset)
        except ValueError:
            raise _UsageError(f"unknown asset kind {args.asset!r}")
    try:
        query = ActionQuery(
            capability=capability,
            asset=asset,
            actor=args.actor,
            target_domain=args.domain,
            involves_sublicense=args.sublicense,
        )
    except QueryError as exc:
        raise _UsageError(str(exc))
    decision = check(grant, query)
    if args.json:
        sys.stdout.write(canonical_json(decision_document(grant, query, decision)))
    else:
        print(f"verdict: {decision.verdict.value}")
        for obligation in decision.obligations:
            print(f"obligation: {obligation.value}")
        for right, capability_ in decision.trace:
            print(f"trace: {right.value} grants {capability_.value}")
        print(f"reason: {decision.reason}")
    return EXIT_OK if decision.verdict is not Verdict.FORBIDDEN else EXIT_FORBIDDEN


def _cmd_combine(args: argparse.Namespace) -> int:
    grants = [_parse_or_exit(_read_expression(e)) for e in args.expressions]
    report = combine(grants)
    if args.json:
        sys.stdout.write(canonical_json(combine_document(report)))
    else:
        print(serialize(report.effective))
        for conflict in report.conflicts:
            print(f"conflict: {conflict.kind}: {conflict.detail}")
    return EXIT_OK


def _cmd_topsheet(args: argparse.Namespace) -> int:
    grant = _parse_or_exit(_read_expression(args.expression))
    if args.format == "json":
        sys.stdout.write(canonical_json(render_topsheet(grant, "structured")))
    elif args.format == "html":
        sys.stdout.write(render_topsheet(grant, "html"))
    else:
        sys.stdout.write(render_topsheet(grant, "markdown"))
    return EXIT_OK


def _cmd_validate_sidecar(args: argparse.Namespace) -> int:
    try:
        data = Path(args.path).read_bytes()
    except OSError as exc:
        raise _UsageError(f"cannot read {args.path}: {exc}")
    try:
        sidecar = read_sidecar(data, strict=args.strict)
    except SidecarError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    print(f"valid: {sidecar.expression}")
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="mdl", description="Montreal Data License toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_expression(p: argparse.ArgumentParser) -> None:
        p.add_argument(
            "expression",
            nargs="?",
            help="MDL expression; '@path' reads a file, omitted or '-' reads stdin",
        )

    p = sub.add_parser("parse", help="validate and canonicalize an expression")
    add_expression(p)
    p.add_argument("--canonical", action="store_true", help="print the canonical form (default)")
    p.add_argument("--json", action="store_true", help="structured dump with grant and closure")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("generate", help="generate the license text for an expression")
    add_expression(p)
    p.add_argument("--corrected", action="store_true", help="use the corrected template wording")
    p.add_argument("--out", metavar="FILE", help="write the text to FILE and print its hash")
    p.add_argument("--json", action="store_true", help="print {text, hash} as JSON")
    p.set_defaults(func=_cmd_generate)

    p = sub.add_parser("check", help="decide whether a proposed act is permitted")
    add_expression(p)
    p.add_argument("--action", required=True, metavar="CAP", help="capability token")
    p.add_argument("--asset", metavar="KIND", help="asset kind (defaults per capability)")
    p.add_argument("--actor", metavar="PARTY", help="acting party identifier")
    p.add_argument("--domain", metavar="FIELD", help="field of use, e.g. military")
    p.add_argument("--sublicense", action="store_true", help="the act involves sub-licensing")
    p.add_argument("--json", action="store_true", help="print the decision document as JSON")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("combine", help="combine two or more source licenses")
    p.add_argument("expressions", nargs="+", help="two or more MDL expressions")
    p.add_argument("--json", action="store_true", help="print the combination report as JSON")
    p.set_defaults(func=_cmd_combine)

    p = sub.add_parser("topsheet", help="render the at-a-glance rights matrix")
    add_expression(p)
    p.add_argument("--format", choices=["md", "html", "json"], default="md")
    p.set_defaults(func=_cmd_topsheet)

    p = sub.add_parser("validate-sidecar", help="validate a sidecar metadata file")
    p.add_argument("path", help="path to the sidecar JSON file")
    p.add_argument("--strict", action="store_true", help="reject unknown top-level fields")
    p.add_argument("--json", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=_cmd_validate_sidecar)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "combine" and len(args.expressions) < 2:
            raise _UsageError("combine requires at least two expressions")
        return args.func(args)
    except _UsageError as exc:
        print(f"mdl: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
