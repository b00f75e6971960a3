"""A SPARQL SELECT subset over one or more merged graphs.

Grammar: PREFIX declarations, `SELECT ?v ...` or `SELECT (COUNT(*) AS ?n)`,
and a WHERE block of dot-separated triple patterns followed by FILTER
clauses (`FILTER(?v <op> literal)` with =, !=, <, <=, >, >=). Terms are
written as in Turtle; blank nodes in patterns act as variables with
hidden names.

Evaluation is a left-to-right nested-loop join over index-backed matches:
no optimizer, but the solution set is independent of pattern order.
Result rows are deduplicated and canonically sorted; there is no ORDER BY.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .errors import (
    ParseError,
    TypeMismatchError,
    UnboundProjectionError,
    UnknownPrefixError,
)
from .graph import Graph, merge
from .ntriples import unescape
from .terms import (
    RDF_LANGSTRING,
    RDF_TYPE,
    XSD_BOOLEAN,
    XSD_DATE,
    XSD_DOUBLE,
    XSD_INTEGER,
    Iri,
    Literal,
    PrefixMap,
    Term,
)

_NUMERIC_DATATYPES = (XSD_INTEGER, XSD_DOUBLE)
_ORDERING_OPS = ("<", "<=", ">", ">=")


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __repr__(self):
        return f"?{self.name}"


PatternTerm = Union[Term, Var]


@dataclass(frozen=True, slots=True)
class TriplePattern:
    s: PatternTerm
    p: PatternTerm
    o: PatternTerm


@dataclass(frozen=True, slots=True)
class FilterExpr:
    var: Var
    op: str
    operand: Literal


@dataclass(frozen=True, slots=True)
class Query:
    variables: tuple[str, ...]  # projection, in SELECT order
    count_var: Optional[str]
    patterns: tuple[TriplePattern, ...]
    filters: tuple[FilterExpr, ...]


@dataclass(slots=True)
class Solution:
    variables: tuple[str, ...]
    rows: list[dict[str, Term]]

    def to_tsv(self) -> str:
        """Header of ?names, then canonical N-Triples terms, tab-separated."""
        lines = ["\t".join("?" + v for v in self.variables)]
        for row in self.rows:
            lines.append("\t".join(row[v].to_ntriples() for v in self.variables))
        return "\n".join(lines) + "\n"


# --- tokenizer -------------------------------------------------------------

@dataclass(slots=True)
class _Token:
    kind: str
    value: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>\#[^\n]*)
    | (?P<iriref><[^>\n]*>)
    | (?P<var>\?[A-Za-z_][A-Za-z0-9_]*)
    | (?P<string>"(?:[^"\\\n]|\\.)*")
    | (?P<number>[+-]?[0-9]+(?:\.[0-9]+)?(?:[eE][+-]?[0-9]+)?)
    | (?P<hathat>\^\^)
    | (?P<langtag>@[A-Za-z]+(?:-[A-Za-z0-9]+)*)
    | (?P<op><=|>=|!=|=|<|>)
    | (?P<punct>[{}().*])
    | (?P<blank>_:[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)
    | (?P<name>[A-Za-z_][A-Za-z0-9_\-]*)?(?P<colon>:)?(?P<local>[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?)?
    """,
    re.VERBOSE,
)

_KEYWORDS = {"prefix", "select", "where", "filter", "count", "as", "a", "true", "false"}


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group(0)
        if kind in ("ws", "comment"):
            newlines = value.count("\n")
            if newlines:
                line += newlines
                line_start = pos + value.rfind("\n") + 1
        elif kind in ("name", "colon", "local"):
            # The name branch above matched a bare word, `pfx:local`,
            # `pfx:`, or `:local`; distinguish keywords from pnames.
            if ":" in value:
                tokens.append(_Token("pname", value, line, col))
            elif value.lower() in _KEYWORDS:
                tokens.append(_Token(value.lower(), value, line, col))
            else:
                raise ParseError(f"unexpected token {value!r}", line, col)
        else:
            tokens.append(_Token(kind, value, line, col))
        pos = m.end()
    tokens.append(_Token("eof", "", line, n - line_start + 1))
    return tokens


# --- parser ----------------------------------------------------------------

class _QueryParser:
    def __init__(self, text: str, prefixes: Optional[PrefixMap]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.prefixes = prefixes.copy() if prefixes is not None else PrefixMap()
        self.hidden = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, value: Optional[str] = None) -> _Token:
        tok = self.next()
        if tok.kind != kind or (value is not None and tok.value != value):
            want = value if value is not None else kind.upper()
            raise ParseError(f"expected {want!r}, got {tok.value!r}", tok.line, tok.col)
        return tok

    def iri_of(self, tok: _Token) -> Iri:
        try:
            if tok.kind == "iriref":
                return Iri(tok.value[1:-1])
            prefix, _, local = tok.value.partition(":")
            return Iri(self.prefixes.namespace(prefix).value + local)
        except UnknownPrefixError:
            raise
        except Exception as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None

    def parse(self) -> Query:
        while self.peek().kind == "prefix":
            self.next()
            name = self.expect("pname")
            if not name.value.endswith(":"):
                raise ParseError("prefix declarations end in ':'", name.line, name.col)
            iri = self.expect("iriref")
            self.prefixes.bind(name.value[:-1], Iri(iri.value[1:-1]))

        self.expect("select")
        variables: list[str] = []
        count_var: Optional[str] = None
        tok = self.peek()
        if tok.kind == "punct" and tok.value == "(":
            self.next()
            self.expect("count")
            self.expect("punct", "(")
            self.expect("punct", "*")
            self.expect("punct", ")")
            self.expect("as")
            count_var = self.expect("var").value[1:]
            self.expect("punct", ")")
        else:
            while self.peek().kind == "var":
                variables.append(self.next().value[1:])
            if not variables:
                raise ParseError(
                    "SELECT needs variables or (COUNT(*) AS ?v)", tok.line, tok.col
                )

        self.expect("where")
        self.expect("punct", "{")
        patterns: list[TriplePattern] = []
        filters: list[FilterExpr] = []
        patterns.append(self.pattern())
        while True:
            tok = self.peek()
            if not (tok.kind == "punct" and tok.value == "."):
                break
            self.next()
            if self.peek().kind in ("var", "iriref", "pname", "blank"):
                patterns.append(self.pattern())
            else:
                break
        while self.peek().kind == "filter":
            self.next()
            filters.append(self.filter_expr())
            if self.peek().kind == "punct" and self.peek().value == ".":
                self.next()
        closing = self.next()
        if closing.kind != "punct" or closing.value != "}":
            raise ParseError(
                f"expected '}}', got {closing.value!r}", closing.line, closing.col
            )
        self.expect("eof")

        q = Query(tuple(variables), count_var, tuple(patterns), tuple(filters))
        self.check_bound(q)
        return q

    def pattern(self) -> TriplePattern:
        s = self.term(position="subject")
        p = self.term(position="predicate")
        o = self.term(position="object")
        return TriplePattern(s, p, o)

    def term(self, position: str) -> PatternTerm:
        tok = self.next()
        if tok.kind == "var":
            return Var(tok.value[1:])
        if tok.kind == "a":
            if position != "predicate":
                raise ParseError("'a' is only valid as a predicate", tok.line, tok.col)
            return RDF_TYPE
        if tok.kind in ("iriref", "pname"):
            return self.iri_of(tok)
        if tok.kind == "blank":
            if position == "predicate":
                raise ParseError("blank nodes cannot be predicates", tok.line, tok.col)
            return Var("_:" + tok.value[2:])
        if tok.kind == "punct" and tok.value == "(":
            raise ParseError("collections are not supported", tok.line, tok.col)
        if position != "object":
            raise ParseError(
                f"expected IRI or variable as {position}, got {tok.value!r}",
                tok.line,
                tok.col,
            )
        return self.literal(tok)

    def literal(self, tok: _Token) -> Literal:
        try:
            if tok.kind == "string":
                lexical = unescape(tok.value[1:-1], tok.line)
                nxt = self.peek()
                if nxt.kind == "hathat":
                    self.next()
                    dt = self.next()
                    if dt.kind not in ("iriref", "pname"):
                        raise ParseError("expected datatype IRI", dt.line, dt.col)
                    return Literal(lexical, self.iri_of(dt))
                if nxt.kind == "langtag":
                    self.next()
                    return Literal(lexical, RDF_LANGSTRING, nxt.value[1:])
                return Literal(lexical)
            if tok.kind == "number":
                if any(c in tok.value for c in ".eE"):
                    return Literal(tok.value, XSD_DOUBLE)
                return Literal(tok.value, XSD_INTEGER)
            if tok.kind in ("true", "false"):
                return Literal(tok.value, XSD_BOOLEAN)
        except ParseError:
            raise
        except Exception as exc:
            raise ParseError(str(exc), tok.line, tok.col) from None
        raise ParseError(f"expected a term, got {tok.value!r}", tok.line, tok.col)

    def filter_expr(self) -> FilterExpr:
        self.expect("punct", "(")
        var_tok = self.expect("var")
        op_tok = self.next()
        if op_tok.kind != "op":
            raise ParseError(
                f"expected comparison operator, got {op_tok.value!r}",
                op_tok.line,
                op_tok.col,
            )
        operand_tok = self.next()
        operand = self.literal(operand_tok)
        self.expect("punct", ")")
        if op_tok.value in _ORDERING_OPS and operand.datatype not in (
            *_NUMERIC_DATATYPES,
            XSD_DATE,
        ):
            raise TypeMismatchError(
                f"ordering operator {op_tok.value!r} needs a numeric or date operand"
            )
        return FilterExpr(Var(var_tok.value[1:]), op_tok.value, operand)

    def check_bound(self, q: Query) -> None:
        bound = {t.name for pat in q.patterns for t in (pat.s, pat.p, pat.o) if isinstance(t, Var)}
        for v in q.variables:
            if v not in bound:
                raise UnboundProjectionError(f"?{v} appears in no pattern")
        for f in q.filters:
            if f.var.name not in bound:
                raise UnboundProjectionError(
                    f"filter variable ?{f.var.name} appears in no pattern"
                )


def parse_query(text: str, prefixes: Optional[PrefixMap] = None) -> Query:
    """Parse a SELECT query; raises ParseError / UnknownPrefixError /
    UnboundProjectionError / TypeMismatchError."""
    return _QueryParser(text, prefixes).parse()


# --- evaluation --------------------------------------------------------------

def _resolve(t: PatternTerm, binding: dict[str, Term]) -> Optional[Term]:
    if isinstance(t, Var):
        return binding.get(t.name)
    return t


def _solve(g: Graph, q: Query) -> list[dict[str, Term]]:
    bindings: list[dict[str, Term]] = [{}]
    for pat in q.patterns:
        nxt: list[dict[str, Term]] = []
        for b in bindings:
            s = _resolve(pat.s, b)
            p = _resolve(pat.p, b)
            o = _resolve(pat.o, b)
            if p is not None and not isinstance(p, Iri):
                continue  # a non-IRI bound to predicate position matches nothing
            if s is not None and isinstance(s, Literal):
                continue
            for t in g.match(s, p, o):
                nb = dict(b)
                ok = True
                for pos, val in ((pat.s, t.s), (pat.p, t.p), (pat.o, t.o)):
                    if isinstance(pos, Var):
                        seen = nb.get(pos.name)
                        if seen is None:
                            nb[pos.name] = val
                        elif seen != val:
                            ok = False
                            break
                if ok:
                    nxt.append(nb)
        bindings = nxt
        if not bindings:
            break
    return [b for b in bindings if all(_passes(f, b) for f in q.filters)]


def _numeric(lit: Literal) -> Union[int, float]:
    if lit.datatype == XSD_INTEGER:
        return int(lit.lexical)
    return float(lit.lexical)


def _compare(a, op: str, b) -> bool:
    if op == "=":
        return a == b
    if op == "!=":
        return a != b
    if op == "<":
        return a < b
    if op == "<=":
        return a <= b
    if op == ">":
        return a > b
    return a >= b


def _passes(f: FilterExpr, binding: dict[str, Term]) -> bool:
    term = binding[f.var.name]
    operand = f.operand
    if operand.datatype in _NUMERIC_DATATYPES:
        if not isinstance(term, Literal) or term.datatype not in _NUMERIC_DATATYPES:
            if f.op in ("=", "!="):
                return f.op == "!="
            raise TypeMismatchError(
                f"cannot order {term.to_ntriples()} against a numeric operand"
            )
        return _compare(_numeric(term), f.op, _numeric(operand))
    if operand.datatype == XSD_DATE:
        if not isinstance(term, Literal) or term.datatype != XSD_DATE:
            if f.op in ("=", "!="):
                return f.op == "!="
            raise TypeMismatchError(
                f"cannot order {term.to_ntriples()} against a date operand"
            )
        return _compare(term.lexical, f.op, operand.lexical)
    # equality on everything else is plain term equality
    equal = isinstance(term, Literal) and term == operand
    return equal if f.op == "=" else not equal


def execute(g: Graph, q: Query) -> Solution:
    """Evaluate a query; rows are deduplicated and canonically sorted."""
    matches = _solve(g, q)
    if q.count_var is not None:
        row = {q.count_var: Literal(str(len(matches)), XSD_INTEGER)}
        return Solution((q.count_var,), [row])
    seen: set[tuple] = set()
    rows: list[dict[str, Term]] = []
    for b in matches:
        key = tuple(b[v] for v in q.variables)
        if key not in seen:
            seen.add(key)
            rows.append(dict(zip(q.variables, key)))
    rows.sort(key=lambda r: tuple(r[v].to_ntriples() for v in q.variables))
    return Solution(q.variables, rows)


def merge_and_query(graphs: Iterable[Graph], q: Query) -> Solution:
    """Evaluate over the set-union of several graphs."""
    return execute(merge(graphs), q)
