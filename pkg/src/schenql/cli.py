"""Command line front end: run queries, emit SQL, suggest, serve, REPL.

Exit codes: 0 success, 1 query error (syntax or semantic, diagnostic on
stderr), 2 environment error (missing or unreadable data directory,
malformed corpus). The data directory defaults to $SCHENQL_DATA.

The json output format is the same document the HTTP query endpoint
returns, produced by the same serialization helpers, so scripts can
switch between the CLI and the service without a second parser.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from .analyzer import lower
from .corpus import Corpus, load_corpus
from .errors import CorpusError, SchenqlError
from .evaluator import evaluate
from .oracle import oracle_evaluate
from .parser import parse, suggest
from .results import Result
from .service import _page_result, label_for
from .sql import emit, schema_sql


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CorpusError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SchenqlError as err:
        _print_diag(err)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schenql")
    sub = parser.add_subparsers(dest="command", required=True)

    q = sub.add_parser("query", help="run a query against a corpus")
    _data_arg(q)
    q.add_argument("--query", required=True)
    q.add_argument("--format", choices=("json", "table"), default="table")
    q.add_argument(
        "--oracle",
        action="store_true",
        help="also run the reference evaluator and fail on any disagreement",
    )
    q.set_defaults(func=_cmd_query)

    e = sub.add_parser("emit-sql", help="print the SQL translation of a query")
    e.add_argument("--query", required=True)
    e.add_argument("--schema", action="store_true", help="print the DDL first")
    e.set_defaults(func=_cmd_emit_sql)

    s = sub.add_parser("suggest", help="print next-token suggestions for a prefix")
    s.add_argument("--prefix", default="")
    s.set_defaults(func=_cmd_suggest)

    v = sub.add_parser("serve", help="serve the HTTP API")
    _data_arg(v)
    v.add_argument("--port", type=int, default=8000)
    v.add_argument("--host", default="127.0.0.1")
    v.set_defaults(func=_cmd_serve)

    r = sub.add_parser("repl", help="interactive query loop with tab completion")
    _data_arg(r)
    r.set_defaults(func=_cmd_repl)
    return parser


def _data_arg(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--data",
        default=os.environ.get("SCHENQL_DATA"),
        help="corpus directory (default: $SCHENQL_DATA)",
    )


def _load(args: argparse.Namespace) -> Corpus:
    if not args.data:
        raise CorpusError("no data directory: pass --data or set SCHENQL_DATA")
    return load_corpus(args.data)


def _cmd_query(args: argparse.Namespace) -> int:
    corpus = _load(args)
    t0 = time.perf_counter()
    query = parse(args.query)
    t1 = time.perf_counter()
    plan = lower(query, corpus)
    t2 = time.perf_counter()
    result = evaluate(plan, corpus)
    t3 = time.perf_counter()
    if args.oracle:
        expected = oracle_evaluate(query, corpus)
        if result != expected:
            print("evaluator mismatch:", file=sys.stderr)
            print(f"  evaluate: {result}", file=sys.stderr)
            print(f"  oracle:   {expected}", file=sys.stderr)
            return 1
    for w in plan.warnings:
        print(f"warning: {w.message}", file=sys.stderr)
    if args.format == "json":
        doc = {
            "result": _page_result(corpus, result, 1, max(result.total(), 1)),
            "diagnostics": [w.to_dict() for w in plan.warnings],
            "timing": {
                "parse_ms": (t1 - t0) * 1000.0,
                "lower_ms": (t2 - t1) * 1000.0,
                "evaluate_ms": (t3 - t2) * 1000.0,
            },
        }
        print(json.dumps(doc, indent=2))
    else:
        _print_table(corpus, result)
    return 0


def _cmd_emit_sql(args: argparse.Namespace) -> int:
    plan = lower(parse(args.query))
    if args.schema:
        print(schema_sql())
        print()
    q = emit(plan)
    print(q.statement)
    print(f"parameters: {json.dumps(q.params)}")
    return 0


def _cmd_suggest(args: argparse.Namespace) -> int:
    res = suggest(args.prefix)
    if res.diagnostic is not None:
        _print_diag(res.diagnostic)
    for s in res.suggestions:
        print(f"{s.token}\t{s.category}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    corpus = _load(args)
    for w in corpus.warnings:
        print(f"warning: {w}", file=sys.stderr)
    uvicorn.run(create_app(corpus), host=args.host, port=args.port, log_level="warning")
    return 0


def _cmd_repl(args: argparse.Namespace) -> int:
    corpus = _load(args)
    _install_completer()
    print(f"loaded {corpus.entity_count()} entities; empty line or ^D exits")
    while True:
        try:
            line = input("schenql> ")
        except EOFError:
            print()
            return 0
        except KeyboardInterrupt:
            print()
            continue
        line = line.strip()
        if not line:
            return 0
        try:
            query = parse(line)
            plan = lower(query, corpus)
            result = evaluate(plan, corpus)
        except SchenqlError as err:
            _print_diag(err, line)
            continue
        for w in plan.warnings:
            print(f"warning: {w.message}", file=sys.stderr)
        _print_table(corpus, result)


def _install_completer() -> None:
    try:
        import readline
    except ImportError:
        return

    # completing whole lines (empty delimiter set) lets multi-word
    # suggestions like AND NOT replace cleanly
    def complete(text: str, state: int) -> str | None:
        cut = text.rfind(" ") + 1
        base, frag = text[:cut], text[cut:].upper()
        options = [
            base + s.token + " "
            for s in suggest(base).suggestions
            if s.token.upper().startswith(frag)
        ]
        return options[state] if state < len(options) else None

    readline.set_completer_delims("")
    readline.set_completer(complete)
    readline.parse_and_bind("tab: complete")


def _print_diag(err: SchenqlError, text: str | None = None) -> None:
    loc = ""
    if err.span is not None:
        loc = f" at {err.span[0]}..{err.span[1]}"
    print(f"{err.code}: {err.message}{loc}", file=sys.stderr)
    if text is not None and err.span is not None:
        start, end = err.span
        print(f"  {text}", file=sys.stderr)
        print("  " + " " * start + "^" * max(end - start, 1), file=sys.stderr)
    expected = getattr(err, "expected", None)
    if expected and "expected one of" not in err.message:
        print(f"  expected: {', '.join(expected)}", file=sys.stderr)


def _print_table(corpus: Corpus, result: Result) -> None:
    if result.kind == "scalar":
        print(result.value)
        return
    if result.kind == "entities":
        keys = result.entities or []
        rows = [(k, label_for(corpus, result.entity_kind, k)) for k in keys]
        _print_rows(("key", "label"), rows)
        print(f"({len(rows)} {result.entity_kind or 'entity'} rows)")
        return
    rows = [tuple("" if v is None else str(v) for v in r) for r in result.rows or []]
    _print_rows(result.columns or (), rows)
    print(f"({len(rows)} rows)")


def _print_rows(columns: tuple[str, ...], rows: list[tuple]) -> None:
    widths = [len(c) for c in columns]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(str(cell)))
    header = "  ".join(c.ljust(widths[i]) for i, c in enumerate(columns))
    print(header.rstrip())
    print("  ".join("-" * w for w in widths))
    for row in rows:
        line = "  ".join(str(cell).ljust(widths[i]) for i, cell in enumerate(row))
        print(line.rstrip())


if __name__ == "__main__":
    sys.exit(main())
