"""Command-line driver.

``bibnet build`` reads records, builds ``A``, optionally aggregates it, projects
to ``B`` and writes a graph file. ``bibnet audit`` prints the conservation
report. Exit codes: 0 success, 1 input error, 2 conservation failure under
``--strict``.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

from bibnet import __version__
from bibnet.aggregation import aggregate_incidence
from bibnet.counting import build_incidence
from bibnet.errors import BibnetError
from bibnet.export import WRITERS
from bibnet.ingest import parse_aggregation_map, read_records
from bibnet.model import ConservationReport, CountingScheme, IncidenceMatrix, Level
from bibnet.projection import audit_network, project

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NOT_CONSERVED = 2

COUNTING = {
    "full": CountingScheme.FULL,
    "fractional": CountingScheme.FRACTIONAL_EQUAL,
    "fractional-custom": CountingScheme.FRACTIONAL_CUSTOM,
}
LEVELS = [level.value for level in Level]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for conservation failure
    def error(self, message: str) -> None:
        raise UsageError(f"{self.prog}: {message}")


def _tolerance(raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {raw!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return value


def _add_pipeline_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, type=Path, help="records file (.csv or .jsonl)")
    p.add_argument("--counting", required=True, choices=sorted(COUNTING))
    p.add_argument(
        "--level",
        choices=LEVELS,
        help="level of the input entities (default: first --from, else author)",
    )
    p.add_argument(
        "--aggregate",
        action="append",
        default=[],
        type=Path,
        metavar="PATH",
        help="entity_id,group_id map; repeatable, applied in order",
    )
    p.add_argument("--from", dest="from_levels", action="append", default=[], choices=LEVELS)
    p.add_argument("--to", dest="to_levels", action="append", default=[], choices=LEVELS)
    p.add_argument("--tolerance", type=_tolerance, default=1e-9)
    p.add_argument(
        "--strict", action="store_true", help="exit 2 if the network does not conserve mass"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bibnet", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    build = sub.add_parser("build", help="build and export the network matrix")
    _add_pipeline_args(build)
    build.add_argument("--format", choices=sorted(WRITERS), default="edgelist")
    build.add_argument("--output", required=True, type=Path)
    build.add_argument("--self-loops", choices=["on", "off"], default="on")
    build.add_argument("--audit", action="store_true", help="print the conservation report")

    audit = sub.add_parser("audit", help="print the conservation report")
    _add_pipeline_args(audit)
    return parser


def _load(args: argparse.Namespace) -> IncidenceMatrix:
    if not (len(args.aggregate) == len(args.from_levels) == len(args.to_levels)):
        raise UsageError("each --aggregate needs exactly one --from and one --to")
    level = args.level or (args.from_levels[0] if args.from_levels else Level.AUTHOR)

    if not args.input.is_file():
        raise BibnetError(f"{args.input}: no such file")
    try:
        records = read_records(args.input, level)
    except BibnetError as exc:
        raise BibnetError(f"{args.input}: {exc}") from None
    A = build_incidence(records, COUNTING[args.counting])

    for path, src, dst in zip(args.aggregate, args.from_levels, args.to_levels):
        if not path.is_file():
            raise BibnetError(f"{path}: no such file")
        try:
            mapping = parse_aggregation_map(path.read_bytes(), src, dst)
            A = aggregate_incidence(A, mapping)
        except BibnetError as exc:
            raise BibnetError(f"{path}: {exc}") from None
    return A


def _verdict(report: ConservationReport, strict: bool) -> int:
    return EXIT_NOT_CONSERVED if strict and not report.conserved else EXIT_OK


def cmd_build(args: argparse.Namespace) -> int:
    A = _load(args)
    B = project(A)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        payload = WRITERS[args.format](B, include_self_loops=args.self_loops == "on")
    for w in caught:
        print(f"bibnet: warning: {w.message}", file=sys.stderr)
    args.output.write_bytes(payload)

    if args.audit or args.strict:
        report = audit_network(B, A, args.tolerance)
        if args.audit:
            sys.stdout.write(report.to_text())
        return _verdict(report, args.strict)
    return EXIT_OK


def cmd_audit(args: argparse.Namespace) -> int:
    A = _load(args)
    report = audit_network(project(A), A, args.tolerance)
    sys.stdout.write(report.to_text())
    return _verdict(report, args.strict)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        handler = cmd_build if args.command == "build" else cmd_audit
        return handler(args)
    except UsageError as exc:
        print(f"{exc}", file=sys.stderr)
        return EXIT_INPUT
    except BibnetError as exc:
        print(f"bibnet: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"bibnet: error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
