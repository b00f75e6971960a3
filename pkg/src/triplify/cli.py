"""Command-line front door: convert, validate, query, synth, stats.

Exit codes: 0 success, 1 validation or data errors, 2 unusable input
(unreadable files, parse failures, bad usage). Diagnostics go to stderr;
data goes to stdout or --output.
"""

from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path
from typing import Optional

from .convert import convert
from .errors import (
    CsvError,
    MappingError,
    ParseError,
    QueryError,
    TriplifyError,
    UnknownPrefixError,
)
from .graph import Graph, merge
from .ntriples import parse_ntriples, serialize_ntriples
from .query import merge_and_query, parse_query
from .registry import (
    builtin_shapes,
    builtin_vocabulary,
    generate_synthetic,
    load_shapes,
    predicate_categories,
    registry_prefixes,
    validate_graph,
)
from .r2rml import parse_mapping, validate_mapping
from .tabular import load_csv, write_csv
from .terms import RDF_TYPE
from .turtle import parse_turtle


def _fail(message: str, code: int) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_graphs(paths: list[str]) -> list[Graph]:
    graphs = []
    for p in paths:
        graphs.append(parse_ntriples(_read(p)))
    return graphs


def _write_output(text: str, output: Optional[str]) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        Path(output).write_text(text, encoding="utf-8")


def cmd_convert(args: argparse.Namespace) -> int:
    try:
        doc, prefixes = parse_turtle(_read(args.mapping))
        mapping = parse_mapping(doc, prefixes, source_name=args.mapping)
    except (OSError, TriplifyError) as exc:
        return _fail(f"cannot load mapping: {exc}", 2)
    for w in mapping.warnings:
        print(f"warning: {w}", file=sys.stderr)

    tables = {}
    try:
        for path in args.csv:
            name = Path(path).stem
            tables[name] = load_csv(_read(path), name)
        for spec in args.table or ():
            name, sep, path = spec.partition("=")
            if not sep:
                return _fail(f"--table needs NAME=PATH, got {spec!r}", 2)
            tables[name] = load_csv(_read(path), name)
    except (OSError, CsvError) as exc:
        return _fail(f"cannot load tables: {exc}", 2)

    diagnostics = validate_mapping(mapping, {n: set(t.columns) for n, t in tables.items()})
    for d in diagnostics:
        print(str(d), file=sys.stderr)
    if any(d.severity == "error" for d in diagnostics):
        return 1

    try:
        g, report = convert(mapping, tables)
    except MappingError as exc:
        return _fail(str(exc), 1)
    _write_output(serialize_ntriples(g), args.output)
    print(report.summary(), file=sys.stderr)
    if args.skipped_log is not None:
        Path(args.skipped_log).write_text(report.skipped_log(), encoding="utf-8")
    if args.strict and report.skipped_terms:
        print(
            f"strict mode: {len(report.skipped_terms)} skipped term(s)",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        g = parse_ntriples(_read(args.graph))
    except (OSError, ParseError) as exc:
        return _fail(f"cannot load graph: {exc}", 2)
    try:
        if args.shapes is not None:
            shapes = load_shapes(_read(args.shapes))
        else:
            shapes = builtin_shapes()
    except (OSError, TriplifyError) as exc:
        return _fail(f"cannot load shapes: {exc}", 2)
    report = validate_graph(g, shapes)
    for line in report.lines():
        print(line)
    return 0 if report.conforms else 1


def cmd_query(args: argparse.Namespace) -> int:
    try:
        if args.query_file is not None:
            text = _read(args.query_file)
        else:
            text = args.query
        q = parse_query(text, registry_prefixes())
    except (OSError, QueryError, ParseError, UnknownPrefixError) as exc:
        return _fail(f"bad query: {exc}", 2)
    try:
        graphs = _load_graphs(args.graphs)
    except (OSError, ParseError) as exc:
        return _fail(f"cannot load graph: {exc}", 2)
    try:
        solution = merge_and_query(graphs, q)
    except QueryError as exc:
        return _fail(str(exc), 1)
    sys.stdout.write(solution.to_tsv())
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    tables = generate_synthetic(args.n, args.seed)
    outdir = Path(args.outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        for name, table in tables.items():
            (outdir / f"{name}.csv").write_text(write_csv(table), encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot write to {args.outdir!r}: {exc}", 2)
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        g = merge(_load_graphs(args.graphs))
    except (OSError, ParseError) as exc:
        return _fail(f"cannot load graph: {exc}", 2)
    print(f"triples\t{len(g)}")
    classes = Counter(t.o for t in g if t.p == RDF_TYPE)
    for cls in sorted(classes, key=lambda c: c.to_ntriples()):
        print(f"class\t{cls.to_ntriples()}\t{classes[cls]}")
    categories = predicate_categories(builtin_vocabulary())
    counts = Counter()
    for t in g:
        category = categories.get(t.p)
        if category is not None:
            counts[category] += 1
    for name in ("demographic", "tumour", "treatment", "core"):
        print(f"category\t{name}\t{counts.get(name, 0)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="triplify",
        description="Convert flat CSV tables to an RDF graph with R2RML, "
        "validate the graph against shapes, and query it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="run a mapping over CSV tables, emit N-Triples")
    p.add_argument("mapping", help="R2RML mapping file (Turtle)")
    p.add_argument("csv", nargs="*", help="CSV files; table name is the file stem")
    p.add_argument("--table", action="append", metavar="NAME=PATH",
                   help="add a table under an explicit name (overrides stem)")
    p.add_argument("-o", "--output", help="output file (default: stdout)")
    p.add_argument("--strict", action="store_true",
                   help="exit 1 when any term was skipped")
    p.add_argument("--skipped-log", metavar="PATH",
                   help="write the tab-separated skipped-term log here")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("validate", help="check an N-Triples graph against shapes")
    p.add_argument("graph", help="N-Triples file")
    p.add_argument("--shapes", help="shapes file (default: bundled registry shapes)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("query", help="run a SELECT query over one or more graphs")
    p.add_argument("graphs", nargs="+", help="N-Triples files, merged before querying")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--query", help="query text")
    group.add_argument("--query-file", help="file containing the query")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("synth", help="write deterministic synthetic registry tables")
    p.add_argument("outdir", help="directory for PATIENT.csv and TREATMENT.csv")
    p.add_argument("--n", type=int, required=True, help="number of patients")
    p.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("stats", help="print triple count, class histogram, category edges")
    p.add_argument("graphs", nargs="+", help="N-Triples files, merged")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TriplifyError as exc:
        return _fail(str(exc), 2)


if __name__ == "__main__":
    sys.exit(main())
