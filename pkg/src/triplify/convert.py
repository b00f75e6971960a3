"""Apply a mapping to tables, producing the graph and a conversion report.

Dirty cells never abort a conversion: a term that cannot be produced
(NULL input, bad lexical form, invalid IRI) is skipped and logged in the
report, and the remaining terms of the row still convert. The output
graph is a set, so it is independent of row order, triples-map order,
and row duplication.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field
from typing import Optional

from .errors import (
    MappingError,
    MissingColumnError,
    TriplifyError,
    ValidationFailedError,
)
from .graph import Graph
from .r2rml import (
    MappingDocument,
    RefObjectMap,
    Template,
    TermMap,
    TriplesMap,
    validate_mapping,
)
from .tabular import Row, TableSource
from .terms import (
    RDF_LANGSTRING,
    RDF_TYPE,
    XSD_STRING,
    BlankNode,
    Iri,
    Literal,
    Term,
    Triple,
)

_IUNRESERVED_ASCII = frozenset(string.ascii_letters + string.digits + "-._~")
# RFC 3987 ucschar: private-use planes excluded, surrogates excluded.
_UCSCHAR_RANGES = (
    (0xA0, 0xD7FF),
    (0xF900, 0xFDCF),
    (0xFDF0, 0xFFEF),
    *((base, base + 0xFFFD) for base in range(0x10000, 0xE0000, 0x10000)),
    (0xE1000, 0xEFFFD),
)


def _is_iunreserved(ch: str) -> bool:
    if ch in _IUNRESERVED_ASCII:
        return True
    cp = ord(ch)
    return any(lo <= cp <= hi for lo, hi in _UCSCHAR_RANGES)


def iri_safe_encode(text: str) -> str:
    """Percent-encode every character outside iunreserved (uppercase hex)."""
    if text.isascii() and text.isalnum():
        return text
    out: list[str] = []
    for ch in text:
        if _is_iunreserved(ch):
            out.append(ch)
        else:
            out.extend("%%%02X" % b for b in ch.encode("utf-8"))
    return "".join(out)


def expand_template(template: Template, row: Row, kind: str = "IRI") -> Optional[str]:
    """Fill a template from a row; None when any referenced cell is NULL.

    Substituted values are IRI-safe percent-encoded when kind is "IRI"
    and copied verbatim otherwise.
    """
    parts: list[str] = []
    encode = kind == "IRI"
    for seg in template.segments:
        if not seg.is_column:
            parts.append(seg.value)
            continue
        try:
            cell = row[seg.value]
        except KeyError:
            raise MissingColumnError(seg.value) from None
        if cell is None:
            return None
        parts.append(iri_safe_encode(cell) if encode else cell)
    return "".join(parts)


def _blank_label(text: str) -> str:
    label = "".join(ch if ch.isascii() and (ch.isalnum() or ch == "_") else "_" for ch in text)
    if not label:
        raise TriplifyError("blank node label came out empty")
    return label


def _wrap(text: str, tm: TermMap) -> Term:
    if tm.term_kind == "IRI":
        return Iri(text)
    if tm.term_kind == "BlankNode":
        return BlankNode(_blank_label(text))
    if tm.language is not None:
        return Literal(text, RDF_LANGSTRING, tm.language)
    return Literal(text, tm.datatype if tm.datatype is not None else XSD_STRING)


def generate_term(tm: TermMap, row: Row) -> Optional[Term]:
    """Produce the term a term map yields for one row.

    Returns None when a referenced cell is NULL. Raises on data that
    cannot form the requested term (bad lexical form, invalid IRI).
    """
    if tm.constant is not None:
        return tm.constant
    if tm.column is not None:
        try:
            cell = row[tm.column]
        except KeyError:
            raise MissingColumnError(tm.column) from None
        if cell is None:
            return None
        return _wrap(cell, tm)
    if tm.template is None:
        raise MappingError("term map has no constant, column or template")
    text = expand_template(tm.template, row, tm.term_kind)
    if text is None:
        return None
    return _wrap(text, tm)


# --- reporting ----------------------------------------------------------------

@dataclass(slots=True)
class SkippedTerm:
    map_id: str
    row: int  # 1-based data row within the map's logical table
    column: str
    reason: str


@dataclass(slots=True)
class ConversionReport:
    rows_read: int = 0
    triples_emitted: int = 0
    triples_deduplicated: int = 0
    skipped_terms: list[SkippedTerm] = field(default_factory=list)

    def summary(self) -> str:
        lines = [
            f"rows read:            {self.rows_read}",
            f"triples in graph:     {self.triples_emitted}",
            f"duplicates collapsed: {self.triples_deduplicated}",
            f"terms skipped:        {len(self.skipped_terms)}",
        ]
        return "\n".join(lines)

    def skipped_log(self) -> str:
        """One tab-separated line per skipped term: map, row, column, reason."""
        return "".join(
            f"{t.map_id}\t{t.row}\t{t.column}\t{t.reason}\n" for t in self.skipped_terms
        )


# --- execution ------------------------------------------------------------------

def _skip(
    report: ConversionReport,
    map_id: str,
    rownum: int,
    tm: TermMap,
    row: Row,
    what: str,
    error: Optional[TriplifyError],
) -> None:
    columns = tm.source_columns()
    if error is not None:
        column = columns[0] if columns else ""
        reason = f"{what}: {error}"
    else:
        column = next((c for c in columns if row.get(c) is None), "")
        reason = f"{what}: NULL input"
    report.skipped_terms.append(SkippedTerm(map_id, rownum, column, reason))


def _term_or_skip(
    tm: TermMap,
    row: Row,
    report: ConversionReport,
    map_id: str,
    rownum: int,
    what: str,
) -> Optional[Term]:
    try:
        term = generate_term(tm, row)
    except MissingColumnError:
        raise
    except TriplifyError as exc:
        _skip(report, map_id, rownum, tm, row, what, exc)
        return None
    if term is None:
        _skip(report, map_id, rownum, tm, row, what, None)
    return term


def _subject_terms(
    tm: TriplesMap,
    table: TableSource,
    report: ConversionReport,
    map_id: str,
    record: bool,
) -> list[Optional[Term]]:
    """The subject for every row of the map's table (None where absent)."""
    out: list[Optional[Term]] = []
    for rownum, row in enumerate(table.rows, start=1):
        if record:
            out.append(_term_or_skip(tm.subject_map, row, report, map_id, rownum, "subject"))
        else:
            try:
                out.append(generate_term(tm.subject_map, row))
            except MissingColumnError:
                raise
            except TriplifyError:
                out.append(None)
    return out


def apply_triples_map(
    tm: TriplesMap,
    tables: dict[str, TableSource],
    g: Graph,
    report: ConversionReport,
) -> None:
    """Run one triples map over its logical table, inserting into g."""
    try:
        table = tables[tm.logical_table]
    except KeyError:
        raise MappingError(f"logical table {tm.logical_table!r} was not provided") from None
    map_id = tm.id.to_ntriples()
    report.rows_read += len(table.rows)
    subjects = _subject_terms(tm, table, report, map_id, record=True)

    def emit(t: Triple) -> None:
        if not g.add(t):
            report.triples_deduplicated += 1

    # Resolve referencing object maps once: parent subjects plus, when join
    # conditions exist, a hash index over the parent join columns.
    ref_plans: dict[int, tuple] = {}
    parent_subject_cache: dict[int, list[Optional[Term]]] = {}
    for index, pom in enumerate(tm.predicate_object_maps):
        rom = pom.object
        if not isinstance(rom, RefObjectMap):
            continue
        parent = rom.parent
        parent_table = tables.get(parent.logical_table)
        if parent_table is None:
            raise MappingError(
                f"logical table {parent.logical_table!r} was not provided"
            )
        key = id(parent)
        if key not in parent_subject_cache:
            parent_subject_cache[key] = _subject_terms(
                parent, parent_table, report, parent.id.to_ntriples(), record=False
            )
        parent_subjects = parent_subject_cache[key]
        if rom.joins:
            joined: dict[tuple, list[Term]] = {}
            parent_columns = [pc for _, pc in rom.joins]
            for prow, psubj in zip(parent_table.rows, parent_subjects):
                if psubj is None:
                    continue
                jkey = tuple(prow.get(c) for c in parent_columns)
                if None in jkey:
                    continue  # NULL joins nothing
                joined.setdefault(jkey, []).append(psubj)
            ref_plans[index] = ("join", [cc for cc, _ in rom.joins], joined)
        else:
            if parent.logical_table != tm.logical_table:
                raise MappingError(
                    f"reference to {parent.id.to_ntriples()} has no join condition "
                    f"and a different logical table"
                )
            ref_plans[index] = ("same-row", parent_subjects)

    for rownum, (row, subject) in enumerate(zip(table.rows, subjects), start=1):
        if subject is None:
            continue  # the subject skip is already in the report
        for cls in tm.subject_classes:
            emit(Triple(subject, RDF_TYPE, cls))
        for index, pom in enumerate(tm.predicate_object_maps):
            predicate = _term_or_skip(
                pom.predicate, row, report, map_id, rownum, "predicate"
            )
            if predicate is None:
                continue
            rom = pom.object
            if isinstance(rom, RefObjectMap):
                plan = ref_plans[index]
                if plan[0] == "same-row":
                    obj = plan[1][rownum - 1]
                    if obj is not None:
                        emit(Triple(subject, predicate, obj))
                else:
                    _, child_columns, joined = plan
                    jkey = tuple(row.get(c) for c in child_columns)
                    if None in jkey:
                        continue
                    for obj in joined.get(jkey, ()):
                        emit(Triple(subject, predicate, obj))
            else:
                obj = _term_or_skip(rom, row, report, map_id, rownum, "object")
                if obj is not None:
                    emit(Triple(subject, predicate, obj))


def convert(
    m: MappingDocument, tables: dict[str, TableSource]
) -> tuple[Graph, ConversionReport]:
    """Run every triples map; requires a validation pass with zero errors."""
    available = {name: set(t.columns) for name, t in tables.items()}
    diagnostics = validate_mapping(m, available)
    errors = [d for d in diagnostics if d.severity == "error"]
    if errors:
        raise ValidationFailedError(errors)
    g = Graph()
    report = ConversionReport()
    for tm in m.triples_maps:
        apply_triples_map(tm, tables, g, report)
    report.triples_emitted = len(g)
    return g, report
