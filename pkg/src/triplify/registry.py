"""The bundled clinical-registry model.

Ships four things: an ontology-coded vocabulary (classes and predicates
grouped into demographic / tumour / treatment categories around a central
patient class), shape constraints over converted graphs, a structural
validator, and a deterministic synthetic data generator that stands in
for the real registry tables.

Vocabulary and shapes live in committed data files (see data/), loaded
here; the ontology codes are data and can be re-pointed without touching
code.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from datetime import date, timedelta
from importlib import resources
from typing import Optional

from .errors import TriplifyError
from .graph import Graph
from .r2rml import MappingDocument, parse_mapping
from .tabular import TableSource
from .terms import (
    RDF_NS,
    RDF_TYPE,
    XSD_NS,
    BlankNode,
    Iri,
    Literal,
    PrefixMap,
    Term,
    Triple,
)
from .turtle import parse_turtle

NCIT_NS = "http://purl.obolibrary.org/obo/NCIT_"
ROO_NS = "http://www.cancerdata.org/roo/"
DATA_NS = "https://data.example.org/registry/"

_CATEGORIES = ("demographic", "tumour", "treatment", "core")
_ROLES = ("class", "predicate")


def registry_prefixes() -> PrefixMap:
    return PrefixMap(
        {
            "rdf": RDF_NS,
            "xsd": XSD_NS,
            "ncit": NCIT_NS,
            "roo": ROO_NS,
            "data": DATA_NS,
        }
    )


def _data_text(filename: str) -> str:
    return resources.files("triplify").joinpath("data", filename).read_text("utf-8")


# --- vocabulary ---------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class VocabularyTerm:
    curie: str
    iri: Iri
    label: str
    role: str  # "class" | "predicate"
    category: str  # "demographic" | "tumour" | "treatment" | "core"


def load_vocabulary(text: str, prefixes: Optional[PrefixMap] = None) -> list[VocabularyTerm]:
    """Read `curie TAB label TAB role TAB category` lines."""
    if prefixes is None:
        prefixes = registry_prefixes()
    terms: list[VocabularyTerm] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 4:
            raise TriplifyError(f"vocabulary line {lineno}: expected 4 tab-separated fields")
        curie, label, role, category = (p.strip() for p in parts)
        if role not in _ROLES:
            raise TriplifyError(f"vocabulary line {lineno}: bad role {role!r}")
        if category not in _CATEGORIES:
            raise TriplifyError(f"vocabulary line {lineno}: bad category {category!r}")
        if not label:
            raise TriplifyError(f"vocabulary line {lineno}: empty label")
        terms.append(
            VocabularyTerm(
                curie=curie,
                iri=prefixes.expand(curie),
                label=label,
                role=role,
                category=category,
            )
        )
    return terms


_vocabulary_cache: Optional[tuple[VocabularyTerm, ...]] = None


def builtin_vocabulary() -> list[VocabularyTerm]:
    global _vocabulary_cache
    if _vocabulary_cache is None:
        _vocabulary_cache = tuple(load_vocabulary(_data_text("vocabulary.tsv")))
    return list(_vocabulary_cache)


def term_by_label(label: str, vocabulary: Optional[list[VocabularyTerm]] = None) -> VocabularyTerm:
    for term in vocabulary if vocabulary is not None else builtin_vocabulary():
        if term.label == label:
            return term
    raise KeyError(label)


def predicate_categories(
    vocabulary: Optional[list[VocabularyTerm]] = None,
) -> dict[Iri, str]:
    """Predicate IRI -> category, for grouping edges Figure-style."""
    return {
        t.iri: t.category
        for t in (vocabulary if vocabulary is not None else builtin_vocabulary())
        if t.role == "predicate"
    }


# --- shapes -------------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class ShapeConstraint:
    predicate: Iri
    kind: str  # "class" | "literal"
    kind_iri: Iri
    min_count: int
    max_count: Optional[int]  # None = unbounded


@dataclass(frozen=True, slots=True)
class Shape:
    target_class: Iri
    constraints: tuple[ShapeConstraint, ...]


def load_shapes(text: str, prefixes: Optional[PrefixMap] = None) -> list[Shape]:
    """Read `class TAB predicate TAB kind TAB min TAB max` lines.

    kind is `class(curie)` or `literal(curie)`; max is a count or `*`.
    """
    if prefixes is None:
        prefixes = registry_prefixes()
    grouped: dict[Iri, list[ShapeConstraint]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) != 5:
            raise TriplifyError(f"shapes line {lineno}: expected 5 tab-separated fields")
        cls, pred, kind_text, min_text, max_text = (p.strip() for p in parts)
        if kind_text.startswith("class(") and kind_text.endswith(")"):
            kind, kind_curie = "class", kind_text[6:-1]
        elif kind_text.startswith("literal(") and kind_text.endswith(")"):
            kind, kind_curie = "literal", kind_text[8:-1]
        else:
            raise TriplifyError(f"shapes line {lineno}: bad kind {kind_text!r}")
        min_count = int(min_text)
        max_count = None if max_text == "*" else int(max_text)
        if max_count is not None and min_count > max_count:
            raise TriplifyError(f"shapes line {lineno}: min exceeds max")
        grouped.setdefault(prefixes.expand(cls), []).append(
            ShapeConstraint(
                predicate=prefixes.expand(pred),
                kind=kind,
                kind_iri=prefixes.expand(kind_curie),
                min_count=min_count,
                max_count=max_count,
            )
        )
    return [Shape(cls, tuple(cs)) for cls, cs in grouped.items()]


_shapes_cache: Optional[tuple[Shape, ...]] = None


def builtin_shapes() -> list[Shape]:
    global _shapes_cache
    if _shapes_cache is None:
        _shapes_cache = tuple(load_shapes(_data_text("shapes.tsv")))
    return list(_shapes_cache)


# --- validation -----------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Violation:
    focus: Term
    target_class: Iri
    predicate: Iri
    message: str
    observed_count: Optional[int] = None
    offending: Optional[Term] = None

    def line(self) -> str:
        return (
            f"{self.focus.to_ntriples()}\t{self.target_class.to_ntriples()}"
            f"\t{self.predicate.to_ntriples()}\t{self.message}"
        )


@dataclass(slots=True)
class ValidationReport:
    violations: list[Violation]

    @property
    def conforms(self) -> bool:
        return not self.violations

    def lines(self) -> list[str]:
        return [v.line() for v in self.violations]


def validate_graph(g: Graph, shapes: list[Shape]) -> ValidationReport:
    """Check every instance of each shape's target class.

    For `class` constraints the object must be an IRI or blank node that
    itself has the required rdf:type; for `literal` constraints it must
    be a literal of the required datatype. Objects of the wrong kind are
    reported individually and do not count toward cardinality.
    """
    violations: list[Violation] = []
    for shape in shapes:
        focuses = sorted(
            g.subjects(RDF_TYPE, shape.target_class), key=lambda t: t.to_ntriples()
        )
        for focus in focuses:
            for c in shape.constraints:
                conforming = 0
                for t in g.match(focus, c.predicate, None):
                    o = t.o
                    if c.kind == "literal":
                        if isinstance(o, Literal) and o.datatype == c.kind_iri:
                            conforming += 1
                        else:
                            violations.append(
                                Violation(
                                    focus,
                                    shape.target_class,
                                    c.predicate,
                                    f"object {o.to_ntriples()} is not a literal of "
                                    f"datatype {c.kind_iri.to_ntriples()}",
                                    offending=o,
                                )
                            )
                    else:
                        if isinstance(o, (Iri, BlankNode)) and Triple(
                            o, RDF_TYPE, c.kind_iri
                        ) in g:
                            conforming += 1
                        else:
                            violations.append(
                                Violation(
                                    focus,
                                    shape.target_class,
                                    c.predicate,
                                    f"object {o.to_ntriples()} lacks required type "
                                    f"{c.kind_iri.to_ntriples()}",
                                    offending=o,
                                )
                            )
                if conforming < c.min_count:
                    violations.append(
                        Violation(
                            focus,
                            shape.target_class,
                            c.predicate,
                            f"expected at least {c.min_count} conforming value(s), "
                            f"found {conforming}",
                            observed_count=conforming,
                        )
                    )
                elif c.max_count is not None and conforming > c.max_count:
                    violations.append(
                        Violation(
                            focus,
                            shape.target_class,
                            c.predicate,
                            f"expected at most {c.max_count} conforming value(s), "
                            f"found {conforming}",
                            observed_count=conforming,
                        )
                    )
    return ValidationReport(violations)


# --- synthetic data ---------------------------------------------------------------

PATIENT_COLUMNS = ("ID", "AGE", "SEX", "TUMOUR_SITE")
TREATMENT_COLUMNS = ("ID", "PATIENT_ID", "RT_START_DATE", "MODALITY", "MODALITY_CODE")

_SEX_CODES = ("C16576", "C20197")
_SITE_CODES = ("C12468", "C12420", "C12971")
_MODALITIES = (("proton", "C15402"), ("photon", "C104914"))
_FIRST_DAY = date(2019, 1, 1)
_DAY_SPAN = (date(2023, 12, 31) - _FIRST_DAY).days


def generate_synthetic(n: int, seed: int) -> dict[str, TableSource]:
    """Deterministic flat tables for n patients: PATIENT plus TREATMENT.

    Each patient gets one to three treatment rows; converting the result
    with the bundled mapping yields a graph that validates cleanly
    against the builtin shapes. Values are uniform draws from fixed code
    lists — fixtures, not clinical realism.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = random.Random(seed)
    patients = []
    treatments = []
    treatment_id = 0
    for pid in range(1, n + 1):
        patients.append(
            {
                "ID": str(pid),
                "AGE": str(rng.randint(18, 90)),
                "SEX": rng.choice(_SEX_CODES),
                "TUMOUR_SITE": rng.choice(_SITE_CODES),
            }
        )
        for _ in range(rng.randint(1, 3)):
            treatment_id += 1
            day = _FIRST_DAY + timedelta(days=rng.randrange(_DAY_SPAN + 1))
            modality, code = rng.choice(_MODALITIES)
            treatments.append(
                {
                    "ID": f"T{treatment_id}",
                    "PATIENT_ID": str(pid),
                    "RT_START_DATE": day.isoformat(),
                    "MODALITY": modality,
                    "MODALITY_CODE": code,
                }
            )
    return {
        "PATIENT": TableSource("PATIENT", PATIENT_COLUMNS, patients),
        "TREATMENT": TableSource("TREATMENT", TREATMENT_COLUMNS, treatments),
    }


def bundled_mapping_text() -> str:
    return _data_text("mapping.ttl")


def bundled_mapping() -> MappingDocument:
    """The registry mapping shipped with the package, parsed and ready."""
    doc, prefixes = parse_turtle(bundled_mapping_text())
    return parse_mapping(doc, prefixes, source_name="data/mapping.ttl")
