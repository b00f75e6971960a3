"""RDF terms: IRIs, blank nodes, literals, triples, and prefix maps.

Terms are immutable value objects, valid by construction:

* every Iri is an absolute IRI free of forbidden characters,
* every Literal's lexical form matches its datatype (for the datatypes
  this package validates: integer, double, date, boolean),
* every Triple obeys the RDF position rules (no literal subjects,
  IRI predicates only).

All positions reported in errors are 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .errors import (
    IllegalCharacterError,
    LexicalFormMismatchError,
    RelativeIriError,
    TriplifyError,
    UnknownPrefixError,
)

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

# Characters never allowed in an IRI: controls, space, and the brackets
# and quoting characters the IRI grammar reserves for delimiters.
_IRI_ILLEGAL = re.compile(r'[\x00-\x20<>"{}|^`\\\x7f]')
_IRI_SCHEME = re.compile(r"[A-Za-z][A-Za-z0-9+.\-]*:")

_BLANK_LABEL = re.compile(r"[A-Za-z0-9_](?:[A-Za-z0-9_.\-]*[A-Za-z0-9_\-])?$")

_INTEGER_LEXICAL = re.compile(r"[+-]?[0-9]+$")
_DOUBLE_LEXICAL = re.compile(
    r"(?:[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)(?:[eE][+-]?[0-9]+)?|[+-]?INF|NaN)$"
)
_BOOLEAN_LEXICAL = re.compile(r"(?:true|false|1|0)$")
_DATE_LEXICAL = re.compile(r"(-?[0-9]{4,})-([0-9]{2})-([0-9]{2})(?:Z|[+-][0-9]{2}:[0-9]{2})?$")
_MONTH_DAYS = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)

_LANGUAGE_TAG = re.compile(r"[A-Za-z]{1,8}(?:-[A-Za-z0-9]{1,8})*$")

# Fast path: literals without any of these characters serialize as-is.
_NEEDS_ESCAPE = re.compile(r'["\\\x00-\x1f\x7f]')
_ESCAPES = {'"': '\\"', "\\": "\\\\", "\n": "\\n"}


def _valid_date(lexical: str) -> bool:
    m = _DATE_LEXICAL.match(lexical)
    if not m:
        return False
    year, month, day = int(m.group(1)), int(m.group(2)), int(m.group(3))
    if not 1 <= month <= 12:
        return False
    days = _MONTH_DAYS[month - 1]
    if month == 2 and year % 4 == 0 and (year % 100 != 0 or year % 400 == 0):
        days = 29
    return 1 <= day <= days


def _escape_char(ch: str) -> str:
    try:
        return _ESCAPES[ch]
    except KeyError:
        return "\\u%04X" % ord(ch)


def escape_literal(text: str) -> str:
    """Escape a literal's lexical form for N-Triples output.

    Quote, backslash and newline use their short escapes; every other
    control character becomes \\uXXXX; everything else passes through.
    """
    if _NEEDS_ESCAPE.search(text) is None:
        return text
    return _NEEDS_ESCAPE.sub(lambda m: _escape_char(m.group(0)), text)


@dataclass(frozen=True, slots=True)
class Iri:
    """An absolute IRI. Construction validates, never normalizes."""

    value: str

    def __post_init__(self):
        m = _IRI_ILLEGAL.search(self.value)
        if m is not None:
            raise IllegalCharacterError(self.value, m.start() + 1)
        if _IRI_SCHEME.match(self.value) is None:
            raise RelativeIriError(f"not an absolute IRI: {self.value!r}")

    def to_ntriples(self) -> str:
        return f"<{self.value}>"

    def __repr__(self):
        return f"Iri({self.value!r})"


def make_iri(text: str) -> Iri:
    """Validate `text` as an absolute IRI and wrap it, byte-exact."""
    return Iri(text)


RDF_TYPE = Iri(RDF_NS + "type")
RDF_LANGSTRING = Iri(RDF_NS + "langString")
XSD_STRING = Iri(XSD_NS + "string")
XSD_INTEGER = Iri(XSD_NS + "integer")
XSD_DOUBLE = Iri(XSD_NS + "double")
XSD_DATE = Iri(XSD_NS + "date")
XSD_BOOLEAN = Iri(XSD_NS + "boolean")

_VALIDATED_LEXICALS = {
    XSD_INTEGER: _INTEGER_LEXICAL.match,
    XSD_DOUBLE: _DOUBLE_LEXICAL.match,
    XSD_BOOLEAN: _BOOLEAN_LEXICAL.match,
    XSD_DATE: _valid_date,
}


@dataclass(frozen=True, slots=True)
class BlankNode:
    """A blank node with a document-scoped label."""

    label: str

    def __post_init__(self):
        if _BLANK_LABEL.match(self.label) is None:
            raise TriplifyError(f"invalid blank node label: {self.label!r}")

    def to_ntriples(self) -> str:
        return f"_:{self.label}"

    def __repr__(self):
        return f"BlankNode({self.label!r})"


@dataclass(frozen=True, slots=True)
class Literal:
    """A literal with lexical form, datatype, and optional language tag.

    A plain literal gets datatype xsd:string; a language tag is allowed
    exactly when the datatype is rdf:langString.
    """

    lexical: str
    datatype: Iri = XSD_STRING
    language: Optional[str] = None

    def __post_init__(self):
        if self.language is not None:
            if self.datatype != RDF_LANGSTRING:
                raise TriplifyError(
                    "language tags require the rdf:langString datatype"
                )
            if _LANGUAGE_TAG.match(self.language) is None:
                raise TriplifyError(f"malformed language tag: {self.language!r}")
        elif self.datatype == RDF_LANGSTRING:
            raise TriplifyError("rdf:langString literals require a language tag")
        check = _VALIDATED_LEXICALS.get(self.datatype)
        if check is not None and not check(self.lexical):
            raise LexicalFormMismatchError(self.lexical, self.datatype.value)

    def to_ntriples(self) -> str:
        body = f'"{escape_literal(self.lexical)}"'
        if self.language is not None:
            return f"{body}@{self.language}"
        if self.datatype == XSD_STRING:
            return body
        return f"{body}^^{self.datatype.to_ntriples()}"

    def __repr__(self):
        if self.language is not None:
            return f"Literal({self.lexical!r}, lang={self.language!r})"
        if self.datatype == XSD_STRING:
            return f"Literal({self.lexical!r})"
        return f"Literal({self.lexical!r}, {self.datatype.value!r})"


Term = Union[Iri, BlankNode, Literal]
SubjectTerm = Union[Iri, BlankNode]


@dataclass(frozen=True, slots=True)
class Triple:
    """One RDF statement. Position constraints hold by construction."""

    s: SubjectTerm
    p: Iri
    o: Term

    def __post_init__(self):
        if isinstance(self.s, Literal):
            raise TriplifyError("literals cannot be subjects")
        if not isinstance(self.s, (Iri, BlankNode)):
            raise TriplifyError(f"bad subject: {self.s!r}")
        if not isinstance(self.p, Iri):
            raise TriplifyError(f"predicates must be IRIs, got: {self.p!r}")
        if not isinstance(self.o, (Iri, BlankNode, Literal)):
            raise TriplifyError(f"bad object: {self.o!r}")

    def to_line(self) -> str:
        """The N-Triples line for this triple (no trailing newline)."""
        return f"{self.s.to_ntriples()} {self.p.to_ntriples()} {self.o.to_ntriples()} ."


class PrefixMap:
    """Mutable prefix-to-namespace registry with CURIE expansion.

    Re-binding a prefix replaces the old binding.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Optional[dict[str, Union[Iri, str]]] = None):
        self._entries: dict[str, Iri] = {}
        if entries:
            for prefix, ns in entries.items():
                self.bind(prefix, ns)

    def bind(self, prefix: str, namespace: Union[Iri, str]) -> None:
        if not isinstance(namespace, Iri):
            namespace = Iri(namespace)
        self._entries[prefix] = namespace

    def namespace(self, prefix: str) -> Iri:
        try:
            return self._entries[prefix]
        except KeyError:
            raise UnknownPrefixError(prefix) from None

    def expand(self, curie: str) -> Iri:
        """Expand `prefix:local` to a validated Iri."""
        prefix, sep, local = curie.partition(":")
        if not sep:
            raise ValueError(f"not a CURIE (missing colon): {curie!r}")
        return Iri(self.namespace(prefix).value + local)

    def copy(self) -> "PrefixMap":
        out = PrefixMap()
        out._entries.update(self._entries)
        return out

    def items(self):
        return self._entries.items()

    def __contains__(self, prefix: str) -> bool:
        return prefix in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrefixMap) and self._entries == other._entries

    def __repr__(self):
        return f"PrefixMap({self._entries!r})"


def expand_curie(prefixes: PrefixMap, curie: str) -> Iri:
    """Functional form of PrefixMap.expand."""
    return prefixes.expand(curie)
