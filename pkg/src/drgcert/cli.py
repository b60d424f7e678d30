"""Command-line front end.

Exit codes: 0 success, 2 unreadable or malformed input, 3 disconnected or
otherwise unsupported graph, 4 internal-consistency failure. ``selftest``
exits 1 when any acceptance row fails.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional, Sequence

from .criteria import InternalConsistencyError, full_report
from .fixtures import FixtureError
from .graph import (
    FAMILIES,
    Graph,
    GraphFormatError,
    build_named,
    encode_graph6,
    format_edge_list,
    parse_edge_list,
    parse_graph6,
)
from .prepoly import NotApplicableError
from .spectral import DisconnectedGraphError, ToleranceConfig

EXIT_OK = 0
EXIT_SELFTEST_FAILED = 1
EXIT_FORMAT = 2
EXIT_UNSUPPORTED = 3
EXIT_INTERNAL = 4

ENV_PREFIX = "DRGCERT_"


class UsageError(Exception):
    pass


def sniff_format(text: str) -> str:
    """``edgelist`` when the first non-blank line is a bare integer, else ``graph6``.

    graph6 bytes are all >= 63, so they never contain ASCII digits.
    """
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return "edgelist" if line.isdigit() else "graph6"
    return "graph6"


def parse_graph_text(text: str, fmt: str = "auto", label: str = "") -> Graph:
    if fmt == "auto":
        fmt = sniff_format(text)
    if fmt == "edgelist":
        return parse_edge_list(text, label)
    if fmt == "graph6":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 1:
            raise GraphFormatError(f"expected one graph6 line, found {len(lines)}")
        return parse_graph6(lines[0]).relabel(label)
    raise UsageError(f"unknown format {fmt!r}")


def _read_input(path: str) -> tuple[str, str]:
    if path == "-":
        return sys.stdin.read(), "stdin"
    p = Path(path)
    try:
        return p.read_text(), p.stem
    except OSError as exc:
        raise FixtureError(f"cannot read {path}: {exc.strerror}") from None


def _split_params(params: Optional[Sequence[str]]) -> list[str]:
    out = []
    for tok in params or ():
        out.extend(t for t in tok.replace(",", " ").split() if t)
    return out


def tolerances_from(args) -> ToleranceConfig:
    return ToleranceConfig.from_env(eig_cluster=args.tol_eig, eq_band=args.tol_eq, residual=args.tol_residual)


def _graph_from_args(args) -> Graph:
    if args.family:
        return build_named(args.family, *_split_params(args.params))
    if args.input is None:
        raise UsageError("give --input or --family")
    text, label = _read_input(args.input)
    return parse_graph_text(text, args.format, label)


def _emit(report, output: str) -> None:
    if output == "json":
        sys.stdout.write(report.to_json(indent=2) + "\n")
    else:
        sys.stdout.write(report.to_text())


def cmd_analyze(args) -> int:
    try:
        G = _graph_from_args(args)
    except (GraphFormatError, FixtureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    try:
        report = full_report(G, tolerances_from(args))
    except (DisconnectedGraphError, NotApplicableError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except InternalConsistencyError as exc:
        if exc.report is not None:
            _emit(exc.report, args.output)
        print(f"error: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(report, args.output)
    return EXIT_OK


def _batch_record(item: tuple[int, str, ToleranceConfig]) -> str:
    lineno, line, tol = item
    rec: dict = {"line": lineno}
    try:
        G = parse_graph6(line).relabel(f"line{lineno}")
        rec["report"] = full_report(G, tol).to_dict()
    except GraphFormatError as exc:
        rec["error"] = {"kind": "format", "message": str(exc)}
    except (DisconnectedGraphError, NotApplicableError) as exc:
        rec["error"] = {"kind": "unsupported", "message": str(exc)}
    except InternalConsistencyError as exc:
        rec["error"] = {"kind": "internal", "message": str(exc)}
    return json.dumps(rec, allow_nan=False)


def cmd_batch(args) -> int:
    if args.input is None:
        raise UsageError("batch needs --input (use - for stdin)")
    try:
        text, _ = _read_input(args.input)
    except FixtureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    tol = tolerances_from(args)
    items = [(i, ln.strip(), tol) for i, ln in enumerate(text.splitlines(), start=1) if ln.strip()]
    if args.jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            # map preserves input order whatever the completion order
            records = pool.map(_batch_record, items, chunksize=max(1, len(items) // (4 * args.jobs)))
            for rec in records:
                sys.stdout.write(rec + "\n")
    else:
        for item in items:
            sys.stdout.write(_batch_record(item) + "\n")
    return EXIT_OK


def cmd_generate(args) -> int:
    if not args.family:
        raise UsageError("generate needs --family")
    try:
        G = build_named(args.family, *_split_params(args.params))
    except (FixtureError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    if args.format == "edgelist":
        sys.stdout.write(format_edge_list(G))
    else:
        sys.stdout.write(encode_graph6(G) + "\n")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .acceptance import run_acceptance

    results = run_acceptance(tolerances_from(args), args.fixtures_dir)
    for r in results:
        print(r.line())
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} acceptance criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_SELFTEST_FAILED


def _env(name: str, default=None):
    return os.environ.get(ENV_PREFIX + name, default)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", default=_env("INPUT"), help="graph file, or - for stdin")
    common.add_argument("--format", choices=("auto", "graph6", "edgelist"), default=_env("FORMAT", "auto"))
    common.add_argument("--family", default=_env("FAMILY"), help=f"one of: {', '.join(FAMILIES)}")
    common.add_argument("--params", nargs="*", default=_env("PARAMS", "").split() or None,
                        help="family parameters, e.g. --params 4 or --params 3,5")
    common.add_argument("--output", choices=("json", "text"), default=_env("OUTPUT", "json"))
    common.add_argument("--tol-eig", type=float, default=None, help="eigenvalue clustering threshold")
    common.add_argument("--tol-eq", type=float, default=None, help="equality band for margins")
    common.add_argument("--tol-residual", type=float, default=None, help="residual bound")
    common.add_argument("--jobs", type=int, default=int(_env("JOBS", "1")))

    parser = argparse.ArgumentParser(prog="drgcert",
                                     description="Spectral and combinatorial tests for distance-regularity.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="report on one graph").set_defaults(func=cmd_analyze)
    sub.add_parser("batch", parents=[common], help="one JSON line per graph6 input line").set_defaults(
        func=cmd_batch)
    sub.add_parser("generate", parents=[common], help="print a named graph").set_defaults(func=cmd_generate)
    st = sub.add_parser("selftest", parents=[common], help="run the acceptance suite")
    st.add_argument("--fixtures-dir", default=_env("FIXTURES_DIR"), type=Path)
    st.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1:
        parser.error("--jobs must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except ValueError as exc:  # bad tolerance values from the environment, mostly
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
