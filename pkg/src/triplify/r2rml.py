"""R2RML mapping documents: parsing, the executable model, validation.

A mapping document is itself an RDF graph (usually parsed from Turtle).
parse_mapping() turns it into TriplesMap objects ready for execution:
every node carrying rr:logicalTable / rr:subjectMap / rr:subject becomes
one TriplesMap. Predicate-object blocks with several predicates or objects
are flattened into one (predicate, object) pair per combination.

Deliberate restrictions: logical tables are base table names only
(rr:sqlQuery is rejected), and named graphs (rr:graphMap) are rejected;
rr:inverseExpression and rr:sqlVersion are ignored with a warning, as is
any unrecognized rr: property.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import (
    ConflictingSourceError,
    DanglingParentMapError,
    EmptyColumnNameError,
    LiteralSubjectError,
    MappingError,
    MissingLogicalTableError,
    MissingSubjectMapError,
    NoColumnReferenceError,
    UnbalancedBracesError,
    UnsupportedFeatureError,
)
from .graph import Graph
from .terms import BlankNode, Iri, Literal, PrefixMap, Term

RR_NS = "http://www.w3.org/ns/r2rml#"


def _rr(local: str) -> Iri:
    return Iri(RR_NS + local)


RR_LOGICAL_TABLE = _rr("logicalTable")
RR_TABLE_NAME = _rr("tableName")
RR_SQL_QUERY = _rr("sqlQuery")
RR_SUBJECT_MAP = _rr("subjectMap")
RR_SUBJECT = _rr("subject")
RR_CLASS = _rr("class")
RR_POM = _rr("predicateObjectMap")
RR_PREDICATE = _rr("predicate")
RR_PREDICATE_MAP = _rr("predicateMap")
RR_OBJECT = _rr("object")
RR_OBJECT_MAP = _rr("objectMap")
RR_CONSTANT = _rr("constant")
RR_COLUMN = _rr("column")
RR_TEMPLATE = _rr("template")
RR_TERM_TYPE = _rr("termType")
RR_DATATYPE = _rr("datatype")
RR_LANGUAGE = _rr("language")
RR_PARENT_TRIPLES_MAP = _rr("parentTriplesMap")
RR_JOIN_CONDITION = _rr("joinCondition")
RR_CHILD = _rr("child")
RR_PARENT = _rr("parent")
RR_GRAPH_MAP = _rr("graphMap")
RR_GRAPH = _rr("graph")

_TERM_TYPES = {
    _rr("IRI"): "IRI",
    _rr("BlankNode"): "BlankNode",
    _rr("Literal"): "Literal",
}

_KNOWN = {
    RR_LOGICAL_TABLE,
    RR_TABLE_NAME,
    RR_SUBJECT_MAP,
    RR_SUBJECT,
    RR_CLASS,
    RR_POM,
    RR_PREDICATE,
    RR_PREDICATE_MAP,
    RR_OBJECT,
    RR_OBJECT_MAP,
    RR_CONSTANT,
    RR_COLUMN,
    RR_TEMPLATE,
    RR_TERM_TYPE,
    RR_DATATYPE,
    RR_LANGUAGE,
    RR_PARENT_TRIPLES_MAP,
    RR_JOIN_CONDITION,
    RR_CHILD,
    RR_PARENT,
}
_REJECTED = {
    RR_SQL_QUERY: "rr:sqlQuery is not supported; name a base table with rr:tableName",
    RR_GRAPH_MAP: "named graphs (rr:graphMap) are not supported",
    RR_GRAPH: "named graphs (rr:graph) are not supported",
}
_IGNORED = {
    _rr("inverseExpression"): "rr:inverseExpression has no effect without a SQL backend",
    _rr("sqlVersion"): "rr:sqlVersion has no effect without a SQL backend",
}


# --- templates --------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class TemplateSegment:
    value: str
    is_column: bool


@dataclass(frozen=True, slots=True)
class Template:
    """An rr:template split into literal text and column references."""

    segments: tuple[TemplateSegment, ...]

    def columns(self) -> list[str]:
        return [s.value for s in self.segments if s.is_column]

    def unparse(self) -> str:
        parts = []
        for seg in self.segments:
            if seg.is_column:
                parts.append("{" + seg.value + "}")
            else:
                parts.append(seg.value.replace("{", "\\{").replace("}", "\\}"))
        return "".join(parts)


def parse_template(text: str) -> Template:
    """Parse an rr:template string.

    `{NAME}` is a column reference; `\\{` and `\\}` are literal braces.
    A template must reference at least one column.
    """
    segments: list[TemplateSegment] = []
    literal: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\" and i + 1 < n and text[i + 1] in "{}":
            literal.append(text[i + 1])
            i += 2
            continue
        if ch == "{":
            end = text.find("}", i + 1)
            if end < 0:
                raise UnbalancedBracesError(f"unclosed '{{' at offset {i + 1}: {text!r}")
            name = text[i + 1 : end]
            if "{" in name:
                raise UnbalancedBracesError(f"nested '{{' at offset {i + 1}: {text!r}")
            if not name:
                raise EmptyColumnNameError(f"empty column reference at offset {i + 1}: {text!r}")
            if literal:
                segments.append(TemplateSegment("".join(literal), False))
                literal = []
            segments.append(TemplateSegment(name, True))
            i = end + 1
            continue
        if ch == "}":
            raise UnbalancedBracesError(f"stray '}}' at offset {i + 1}: {text!r}")
        literal.append(ch)
        i += 1
    if literal:
        segments.append(TemplateSegment("".join(literal), False))
    template = Template(tuple(segments))
    if not template.columns():
        raise NoColumnReferenceError(f"template references no column: {text!r}")
    return template


# --- executable mapping model -----------------------------------------------

@dataclass(slots=True)
class TermMap:
    """One rule producing a term from a row: constant, column, or template."""

    term_kind: str  # "IRI" | "BlankNode" | "Literal"
    constant: Optional[Term] = None
    column: Optional[str] = None
    template: Optional[Template] = None
    datatype: Optional[Iri] = None
    language: Optional[str] = None

    def source_columns(self) -> list[str]:
        if self.column is not None:
            return [self.column]
        if self.template is not None:
            return self.template.columns()
        return []


@dataclass(slots=True)
class RefObjectMap:
    """A link to the subjects of another triples map, matched by joins."""

    parent_id: Term
    joins: tuple[tuple[str, str], ...]  # (child column, parent column)
    parent: Optional["TriplesMap"] = None  # resolved during parse_mapping


@dataclass(slots=True)
class PredicateObjectMap:
    predicate: TermMap
    object: Union[TermMap, RefObjectMap]


@dataclass(slots=True)
class TriplesMap:
    id: Term
    logical_table: str
    subject_map: TermMap
    subject_classes: list[Iri] = field(default_factory=list)
    predicate_object_maps: list[PredicateObjectMap] = field(default_factory=list)


@dataclass(slots=True)
class MappingDocument:
    triples_maps: list[TriplesMap]
    prefixes: PrefixMap
    source_name: str = ""
    warnings: list[str] = field(default_factory=list)

    def map_by_id(self, term: Term) -> TriplesMap:
        for tm in self.triples_maps:
            if tm.id == term:
                return tm
        raise KeyError(term)


# --- parsing ----------------------------------------------------------------

def _name(term: Term) -> str:
    return term.to_ntriples()


def _values(doc: Graph, node: Term, prop: Iri) -> list[Term]:
    return [t.o for t in doc.match(node, prop, None)]


def _single(doc: Graph, node: Term, prop: Iri, owner: str) -> Optional[Term]:
    found = _values(doc, node, prop)
    if len(found) > 1:
        raise MappingError(f"{owner}: more than one {prop.value.rsplit('#', 1)[1]!r} value")
    return found[0] if found else None


def _check_rejected(doc: Graph, warnings: list[str]) -> None:
    seen_unknown = set()
    for t in doc:
        p = t.p
        if not p.value.startswith(RR_NS):
            continue
        if p in _REJECTED:
            raise UnsupportedFeatureError(_REJECTED[p])
        if p in _IGNORED:
            warnings.append(_IGNORED[p])
        elif p not in _KNOWN and p not in seen_unknown:
            seen_unknown.add(p)
            warnings.append(f"unknown R2RML property ignored: <{p.value}>")


def _parse_term_map(
    doc: Graph, node: Term, position: str, owner: str
) -> TermMap:
    constant = _single(doc, node, RR_CONSTANT, owner)
    column_term = _single(doc, node, RR_COLUMN, owner)
    template_term = _single(doc, node, RR_TEMPLATE, owner)
    sources = [x for x in (constant, column_term, template_term) if x is not None]
    if len(sources) > 1:
        raise ConflictingSourceError(
            f"{owner}: term map declares more than one of constant/column/template"
        )
    if not sources:
        raise MappingError(f"{owner}: term map needs rr:constant, rr:column or rr:template")

    column = None
    template = None
    if column_term is not None:
        if not isinstance(column_term, Literal):
            raise MappingError(f"{owner}: rr:column must be a literal column name")
        column = column_term.lexical
    if template_term is not None:
        if not isinstance(template_term, Literal):
            raise MappingError(f"{owner}: rr:template must be a literal")
        template = parse_template(template_term.lexical)

    datatype = _single(doc, node, RR_DATATYPE, owner)
    if datatype is not None and not isinstance(datatype, Iri):
        raise MappingError(f"{owner}: rr:datatype must be an IRI")
    language_term = _single(doc, node, RR_LANGUAGE, owner)
    language = None
    if language_term is not None:
        if not isinstance(language_term, Literal):
            raise MappingError(f"{owner}: rr:language must be a literal")
        language = language_term.lexical
    if datatype is not None and language is not None:
        raise MappingError(f"{owner}: rr:datatype and rr:language are mutually exclusive")

    term_type = _single(doc, node, RR_TERM_TYPE, owner)
    if constant is not None:
        kind = (
            "IRI"
            if isinstance(constant, Iri)
            else "BlankNode"
            if isinstance(constant, BlankNode)
            else "Literal"
        )
    elif term_type is not None:
        try:
            kind = _TERM_TYPES[term_type]
        except KeyError:
            raise MappingError(f"{owner}: unknown rr:termType {_name(term_type)}") from None
    elif position in ("subject", "predicate"):
        kind = "IRI"
    elif column is not None or datatype is not None or language is not None:
        kind = "Literal"
    else:
        kind = "IRI"

    if (datatype is not None or language is not None) and kind != "Literal":
        raise MappingError(f"{owner}: rr:datatype/rr:language require a literal term map")
    return TermMap(
        term_kind=kind,
        constant=constant,
        column=column,
        template=template,
        datatype=datatype,
        language=language,
    )


def _parse_logical_table(doc: Graph, node: Term, owner: str) -> str:
    lt = _single(doc, node, RR_LOGICAL_TABLE, owner)
    if lt is None:
        raise MissingLogicalTableError(f"{owner}: no rr:logicalTable")
    name = _single(doc, lt, RR_TABLE_NAME, owner)
    if name is None:
        raise MissingLogicalTableError(f"{owner}: logical table has no rr:tableName")
    if not isinstance(name, Literal):
        raise MappingError(f"{owner}: rr:tableName must be a literal")
    return name.lexical


def _parse_subject(doc: Graph, node: Term, owner: str) -> tuple[TermMap, list[Iri]]:
    sm_nodes = _values(doc, node, RR_SUBJECT_MAP)
    const_subjects = _values(doc, node, RR_SUBJECT)
    if len(sm_nodes) + len(const_subjects) == 0:
        raise MissingSubjectMapError(f"{owner}: no rr:subjectMap")
    if len(sm_nodes) + len(const_subjects) > 1:
        raise MappingError(f"{owner}: more than one subject map")
    classes: list[Iri] = []
    if const_subjects:
        subject = const_subjects[0]
        if isinstance(subject, Literal):
            raise LiteralSubjectError(f"{owner}: subjects cannot be literals")
        sm = TermMap(
            term_kind="IRI" if isinstance(subject, Iri) else "BlankNode",
            constant=subject,
        )
    else:
        sm = _parse_term_map(doc, sm_nodes[0], "subject", owner)
        if sm.term_kind == "Literal":
            raise LiteralSubjectError(f"{owner}: subjects cannot be literals")
        for c in _values(doc, sm_nodes[0], RR_CLASS):
            if not isinstance(c, Iri):
                raise MappingError(f"{owner}: rr:class must be an IRI")
            classes.append(c)
    return sm, classes


def _parse_poms(
    doc: Graph, node: Term, owner: str, map_nodes: set[Term]
) -> list[PredicateObjectMap]:
    out: list[PredicateObjectMap] = []
    for pom_node in _values(doc, node, RR_POM):
        predicates: list[TermMap] = []
        for p in _values(doc, pom_node, RR_PREDICATE):
            if not isinstance(p, Iri):
                raise MappingError(f"{owner}: rr:predicate must be an IRI")
            predicates.append(TermMap(term_kind="IRI", constant=p))
        for pm_node in _values(doc, pom_node, RR_PREDICATE_MAP):
            pm = _parse_term_map(doc, pm_node, "predicate", owner)
            if pm.term_kind != "IRI":
                raise MappingError(f"{owner}: predicate maps must produce IRIs")
            predicates.append(pm)
        if not predicates:
            raise MappingError(f"{owner}: predicate-object map has no predicate")

        objects: list[Union[TermMap, RefObjectMap]] = []
        for o in _values(doc, pom_node, RR_OBJECT):
            kind = (
                "IRI"
                if isinstance(o, Iri)
                else "BlankNode"
                if isinstance(o, BlankNode)
                else "Literal"
            )
            objects.append(TermMap(term_kind=kind, constant=o))
        for om_node in _values(doc, pom_node, RR_OBJECT_MAP):
            parent = _single(doc, om_node, RR_PARENT_TRIPLES_MAP, owner)
            if parent is not None:
                if parent not in map_nodes:
                    raise DanglingParentMapError(
                        f"{owner}: rr:parentTriplesMap {_name(parent)} is not a triples map"
                    )
                joins = []
                for jc in _values(doc, om_node, RR_JOIN_CONDITION):
                    child = _single(doc, jc, RR_CHILD, owner)
                    par = _single(doc, jc, RR_PARENT, owner)
                    if not isinstance(child, Literal) or not isinstance(par, Literal):
                        raise MappingError(
                            f"{owner}: join conditions need literal rr:child and rr:parent"
                        )
                    joins.append((child.lexical, par.lexical))
                joins.sort()
                objects.append(RefObjectMap(parent_id=parent, joins=tuple(joins)))
            else:
                objects.append(_parse_term_map(doc, om_node, "object", owner))
        if not objects:
            raise MappingError(f"{owner}: predicate-object map has no object")
        for p in predicates:
            for o in objects:
                out.append(PredicateObjectMap(predicate=p, object=o))
    return out


def parse_mapping(doc: Graph, prefixes: PrefixMap, source_name: str = "") -> MappingDocument:
    """Interpret an RDF graph as an R2RML mapping document."""
    warnings: list[str] = []
    _check_rejected(doc, warnings)

    map_nodes = {t.s for t in doc if t.p in (RR_LOGICAL_TABLE, RR_SUBJECT_MAP, RR_SUBJECT)}
    if not map_nodes:
        raise MissingSubjectMapError("document contains no triples maps")

    ordered = sorted(map_nodes, key=lambda n: n.to_ntriples())
    maps: dict[Term, TriplesMap] = {}
    for node in ordered:
        owner = f"triples map {_name(node)}"
        table = _parse_logical_table(doc, node, owner)
        subject_map, classes = _parse_subject(doc, node, owner)
        maps[node] = TriplesMap(
            id=node,
            logical_table=table,
            subject_map=subject_map,
            subject_classes=classes,
        )
    for node in ordered:
        owner = f"triples map {_name(node)}"
        poms = _parse_poms(doc, node, owner, map_nodes)
        for pom in poms:
            if isinstance(pom.object, RefObjectMap):
                pom.object.parent = maps[pom.object.parent_id]
        maps[node].predicate_object_maps = poms

    return MappingDocument(
        triples_maps=[maps[n] for n in ordered],
        prefixes=prefixes,
        source_name=source_name,
        warnings=warnings,
    )


# --- validation ---------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    map_id: str
    message: str

    def __str__(self):
        return f"{self.severity}: {self.map_id}: {self.message}"


def validate_mapping(
    m: MappingDocument, available_columns: dict[str, set[str]]
) -> list[Diagnostic]:
    """Check a mapping against the tables it will run on.

    Errors block conversion; warnings do not. An empty error set is the
    precondition of convert().
    """
    out: list[Diagnostic] = []
    used_tables: set[str] = set()

    def err(tm_id: str, msg: str) -> None:
        out.append(Diagnostic("error", tm_id, msg))

    def warn(tm_id: str, msg: str) -> None:
        out.append(Diagnostic("warning", tm_id, msg))

    def check_columns(tm_id: str, table: str, term_map: TermMap, what: str) -> None:
        cols = available_columns.get(table)
        if cols is None:
            return  # missing table reported once per map
        for c in term_map.source_columns():
            if c not in cols:
                err(tm_id, f"{what} references column {c!r} absent from table {table!r}")

    for tm in m.triples_maps:
        tm_id = _name(tm.id)
        used_tables.add(tm.logical_table)
        if tm.logical_table not in available_columns:
            err(tm_id, f"logical table {tm.logical_table!r} was not provided")
        check_columns(tm_id, tm.logical_table, tm.subject_map, "subject map")
        seen_classes: set[Iri] = set()
        for c in tm.subject_classes:
            if c in seen_classes:
                warn(tm_id, f"duplicate rr:class {_name(c)} (harmless under set semantics)")
            seen_classes.add(c)
        for pom in tm.predicate_object_maps:
            check_columns(tm_id, tm.logical_table, pom.predicate, "predicate map")
            if isinstance(pom.object, RefObjectMap):
                rom = pom.object
                parent_table = rom.parent.logical_table
                used_tables.add(parent_table)
                parent_cols = available_columns.get(parent_table)
                child_cols = available_columns.get(tm.logical_table)
                if not rom.joins and parent_table != tm.logical_table:
                    err(
                        tm_id,
                        f"reference to {_name(rom.parent_id)} needs a join condition: "
                        f"parent table {parent_table!r} differs from {tm.logical_table!r}",
                    )
                for child, parent in rom.joins:
                    if child_cols is not None and child not in child_cols:
                        err(tm_id, f"join child column {child!r} absent from {tm.logical_table!r}")
                    if parent_cols is not None and parent not in parent_cols:
                        err(tm_id, f"join parent column {parent!r} absent from {parent_table!r}")
            else:
                check_columns(tm_id, tm.logical_table, pom.object, "object map")

    for table in sorted(set(available_columns) - used_tables):
        warn("-", f"table {table!r} is not used by any triples map")
    return out
