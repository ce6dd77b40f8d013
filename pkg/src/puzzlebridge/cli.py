"""Command-line interface: compile, solve, bench and serve.

Exit codes: 0 solved/ok, 1 unsatisfiable, 2 parse error (unreadable input,
s-expression or XML syntax), 3 translation error (unsupported or inconsistent
game/model), 4 resource limit hit.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from .catalog import CATALOG_ROWS, CatalogError, Family, instance_path
from .csp import CspInstance, ModelError, ResourceLimitError, solve
from .ludeme import (
    EmptyInput,
    GameSpec,
    LudemeError,
    UnbalancedDelimiter,
    UnexpectedToken,
    parse_game,
)
from .translate import TranslateError, compile_game, moves_from_solution
from .xcsp import (
    DomainParseError,
    MalformedSlice,
    MixedDomainArray,
    UnsupportedElement,
    XcspError,
    emit_xcsp,
    parse_xcsp,
)

EXIT_SAT = 0
EXIT_UNSAT = 1
EXIT_PARSE = 2
EXIT_TRANSLATE = 3
EXIT_RESOURCE = 4

_SYNTAX_ERRORS = (EmptyInput, UnbalancedDelimiter, UnexpectedToken)
_SEMANTIC_XCSP = (UnsupportedElement, MalformedSlice, DomainParseError, MixedDomainArray)


def _fail(code: int, message: str) -> int:
    print(message, file=sys.stderr)
    return code


def _classify(exc: Exception) -> int:
    """Map pipeline exceptions onto the documented exit codes."""
    if isinstance(exc, _SYNTAX_ERRORS):
        return EXIT_PARSE
    if isinstance(exc, _SEMANTIC_XCSP):
        return EXIT_TRANSLATE
    if isinstance(exc, (LudemeError, TranslateError, ModelError, CatalogError)):
        return EXIT_TRANSLATE
    if isinstance(exc, XcspError):  # malformed XML document
        return EXIT_PARSE
    raise exc


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _load_instance(path: Path) -> tuple[CspInstance, Optional[GameSpec]]:
    text = _read(path)
    if path.suffix.lower() == ".xml":
        return parse_xcsp(text), None
    spec = parse_game(text)
    return compile_game(spec), spec


# ---------------------------------------------------------------------------
# compile


def run_compile(args: argparse.Namespace) -> int:
    path = Path(args.input)
    try:
        text = _read(path)
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {path}: {exc}")
    try:
        document = emit_xcsp(compile_game(parse_game(text)))
    except Exception as exc:  # noqa: BLE001 - classified below
        return _fail(_classify(exc), f"{path}: {exc}")
    if args.output:
        try:
            Path(args.output).write_text(document, encoding="utf-8")
        except OSError as exc:
            return _fail(EXIT_PARSE, f"cannot write {args.output}: {exc}")
    else:
        sys.stdout.write(document)
    return EXIT_SAT


# ---------------------------------------------------------------------------
# solve


def run_solve(args: argparse.Namespace) -> int:
    path = Path(args.input)
    try:
        instance, spec = _load_instance(path)
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {path}: {exc}")
    except Exception as exc:  # noqa: BLE001 - classified below
        return _fail(_classify(exc), f"{path}: {exc}")

    if args.moves and spec is None:
        return _fail(EXIT_TRANSLATE, "--moves requires a .lud input")

    if args.count:
        mode, limit = "count", None
    elif args.all:
        mode, limit = "all", None
    elif args.limit is not None:
        mode, limit = "all", args.limit
    else:
        mode, limit = "first", None

    try:
        report = solve(instance, mode=mode, limit=limit, time_limit=args.time_limit)
    except ResourceLimitError as exc:
        return _fail(EXIT_RESOURCE, f"resource limit: {exc}")

    if args.count:
        print(report.count)
        return EXIT_SAT if report.count else EXIT_UNSAT
    if not report.solutions:
        print("UNSAT")
        return EXIT_UNSAT
    for solution in report.solutions:
        print(" ".join(str(v) for v in solution.values))
        if args.moves:
            sys.stdout.write(moves_from_solution(spec, solution.values).to_text())
    return EXIT_SAT


# ---------------------------------------------------------------------------
# bench


@dataclass
class BenchRow:
    game: str
    size: str
    translate_s: float
    variables: int
    domain: int
    constraints: int
    solve_s: float
    status: str = "ok"


def _bench_row(family: Family, size: int, repeats: int, time_limit: float) -> BenchRow:
    label = BenchRow(family.display, f"{size}x{size}", 0.0, 0, 0, 0, 0.0)
    try:
        text = _read(instance_path(family, size))
        translate_times = []
        for _ in range(repeats):
            started = time.perf_counter()
            spec = parse_game(text)
            instance = compile_game(spec)
            emit_xcsp(instance)
            translate_times.append(time.perf_counter() - started)
        solve_times = []
        for _ in range(repeats):
            started = time.perf_counter()
            report = solve(instance, mode="first", time_limit=time_limit)
            solve_times.append(time.perf_counter() - started)
        label.translate_s = min(translate_times)
        label.solve_s = min(solve_times)
        label.variables = len(instance.variables)
        label.domain = len(instance.variables[0].domain)
        label.constraints = sum(
            1 for c in instance.constraints if type(c).__name__ != "Instantiation"
        )
        if not report.solutions:
            label.status = "unsat"
    except ResourceLimitError as exc:
        label.status = f"resource limit: {exc.kind}"
    except Exception as exc:  # noqa: BLE001 - row marked, run continues
        label.status = f"error: {exc}"
    return label


def run_bench(args: argparse.Namespace) -> int:
    if args.families:
        wanted = []
        for token in args.families.split(","):
            try:
                wanted.append(Family(token.strip()))
            except ValueError:
                return _fail(EXIT_PARSE, f"unknown family {token.strip()!r}")
        rows = [(f, s) for f, s in CATALOG_ROWS if f in wanted]
    else:
        rows = list(CATALOG_ROWS)

    bench = [_bench_row(family, size, args.repeats, args.time_limit) for family, size in rows]
    _print_bench(bench, args.format)
    if bench and all(row.status.startswith(("error", "resource")) for row in bench):
        return EXIT_TRANSLATE
    return EXIT_SAT


def _print_bench(rows: list[BenchRow], fmt: str) -> None:
    if fmt == "json":
        print(json.dumps([asdict(r) for r in rows], indent=2))
        return
    if fmt == "csv":
        writer = csv.writer(sys.stdout)
        writer.writerow(
            ["game", "size", "translate_s", "variables", "domain", "constraints", "solve_s", "status"]
        )
        for r in rows:
            writer.writerow(
                [r.game, r.size, f"{r.translate_s:.3f}", r.variables, r.domain, r.constraints, f"{r.solve_s:.3f}", r.status]
            )
        return
    header = f"{'Game':<14}{'Size':<10}{'Translate(s)':>13}{'Vars':>7}{'Domain':>8}{'Constraints':>13}{'Solve(s)':>10}"
    print(header)
    print("-" * len(header))
    for r in rows:
        line = (
            f"{r.game:<14}{r.size:<10}{r.translate_s:>13.3f}{r.variables:>7}"
            f"{r.domain:>8}{r.constraints:>13}{r.solve_s:>10.3f}"
        )
        if r.status != "ok":
            line += f"  [{r.status}]"
        print(line)


# ---------------------------------------------------------------------------
# serve


def run_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(static_dir=args.static), host=args.host, port=args.port)
    return EXIT_SAT


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="puzzlebridge",
        description="Compile, solve and serve ludemic deduction puzzles.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="translate a .lud file to an XCSP3 document")
    p.add_argument("input", help="path to a .lud file")
    p.add_argument("-o", "--output", help="output .xml path (default: stdout)")
    p.set_defaults(func=run_compile)

    p = sub.add_parser("solve", help="solve a .lud or .xml instance")
    p.add_argument("input", help="path to a .lud or .xml file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--all", action="store_true", help="enumerate all solutions")
    mode.add_argument("--count", action="store_true", help="print only the solution count")
    mode.add_argument("--limit", type=int, help="enumerate at most N solutions")
    p.add_argument("--moves", action="store_true", help="print the Add move list per solution")
    p.add_argument(
        "--time-limit", type=float, default=60.0, help="solver budget in seconds (default 60)"
    )
    p.set_defaults(func=run_solve)

    p = sub.add_parser("bench", help="translate and solve every bundled catalog row")
    p.add_argument("--families", help="comma-separated family filter (e.g. sudoku,latin)")
    p.add_argument("--repeats", type=int, default=1, help="times are minima over N runs")
    p.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p.add_argument(
        "--time-limit", type=float, default=60.0, help="per-instance solver budget (default 60)"
    )
    p.set_defaults(func=run_bench)

    p = sub.add_parser("serve", help="run the assist service over HTTP")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static", metavar="DIR", default=None,
                   help="also serve a static frontend bundle under /app")
    p.set_defaults(func=run_serve)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
