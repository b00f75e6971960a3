"""RDF term construction rules and prefix expansion."""

import pytest

from triplify import BlankNode, Iri, Literal, PrefixMap, Triple, expand_curie, make_iri
from triplify.errors import (
    IllegalCharacterError,
    LexicalFormMismatchError,
    RelativeIriError,
    TriplifyError,
    UnknownPrefixError,
)
from triplify.terms import (
    RDF_LANGSTRING,
    XSD_BOOLEAN,
    XSD_DATE,
    XSD_DOUBLE,
    XSD_INTEGER,
    XSD_STRING,
    escape_literal,
)


class TestMakeIri:
    def test_wellformed_absolute_iri(self):
        iri = make_iri("http://purl.obolibrary.org/obo/NCIT_C3262")
        assert iri.value == "http://purl.obolibrary.org/obo/NCIT_C3262"

    def test_no_scheme_is_relative(self):
        with pytest.raises(RelativeIriError):
            make_iri("patient/7")

    def test_raw_space_reports_offset(self):
        with pytest.raises(IllegalCharacterError) as err:
            make_iri("http://e.org/a b")
        assert err.value.position == 15

    def test_input_preserved_byte_exact(self):
        text = "http://e.org/%41?x=1#frag"
        assert make_iri(text).value == text

    @pytest.mark.parametrize("bad", ['http://e.org/"', "http://e.org/<x>", "http://e.org/\x01"])
    def test_forbidden_characters(self, bad):
        with pytest.raises(IllegalCharacterError):
            make_iri(bad)

    def test_colon_after_slash_is_not_a_scheme(self):
        with pytest.raises(RelativeIriError):
            make_iri("a/b:c")

    def test_unicode_allowed(self):
        assert make_iri("http://ex.org/café").value.endswith("café")


class TestExpandCurie:
    def test_ncit_neoplasm(self):
        prefixes = PrefixMap({"ncit": "http://purl.obolibrary.org/obo/NCIT_"})
        assert expand_curie(prefixes, "ncit:C3262").value == (
            "http://purl.obolibrary.org/obo/NCIT_C3262"
        )

    def test_unknown_prefix(self):
        with pytest.raises(UnknownPrefixError):
            expand_curie(PrefixMap(), "roo:P100000")

    def test_empty_local_part(self):
        prefixes = PrefixMap({"ex": "http://e.org/"})
        assert expand_curie(prefixes, "ex:").value == "http://e.org/"

    def test_result_validated(self):
        prefixes = PrefixMap({"ex": "http://e.org/"})
        with pytest.raises(IllegalCharacterError):
            expand_curie(prefixes, "ex:a b")

    def test_missing_colon_rejected(self):
        with pytest.raises(ValueError):
            expand_curie(PrefixMap({"ex": "http://e.org/"}), "noseparator")

    def test_rebinding_replaces(self):
        prefixes = PrefixMap({"ex": "http://e.org/"})
        prefixes.bind("ex", "http://other.org/")
        assert prefixes.expand("ex:x").value == "http://other.org/x"


class TestLiteral:
    def test_plain_literal_gets_xsd_string(self):
        assert Literal("hello").datatype == XSD_STRING

    def test_language_requires_langstring(self):
        Literal("hoi", RDF_LANGSTRING, "nl")
        with pytest.raises(TriplifyError):
            Literal("hoi", XSD_STRING, "nl")
        with pytest.raises(TriplifyError):
            Literal("hoi", RDF_LANGSTRING)  # tag missing

    @pytest.mark.parametrize("lexical", ["63", "-1", "+007"])
    def test_integer_lexicals(self, lexical):
        Literal(lexical, XSD_INTEGER)

    @pytest.mark.parametrize("lexical", ["abc", "1.5", "", "1 "])
    def test_bad_integer_lexicals(self, lexical):
        with pytest.raises(LexicalFormMismatchError):
            Literal(lexical, XSD_INTEGER)

    @pytest.mark.parametrize("lexical", ["2020-02-29", "1999-12-31", "2020-01-01Z"])
    def test_date_lexicals(self, lexical):
        Literal(lexical, XSD_DATE)

    @pytest.mark.parametrize("lexical", ["2020-02-30", "2021-02-29", "2020-13-01", "20-01-01"])
    def test_bad_date_lexicals(self, lexical):
        with pytest.raises(LexicalFormMismatchError):
            Literal(lexical, XSD_DATE)

    @pytest.mark.parametrize("lexical", ["1.5", "-2.0e3", "INF", "NaN", ".5", "3"])
    def test_double_lexicals(self, lexical):
        Literal(lexical, XSD_DOUBLE)

    def test_bad_double_lexical(self):
        with pytest.raises(LexicalFormMismatchError):
            Literal("abc", XSD_DOUBLE)

    @pytest.mark.parametrize("lexical", ["true", "false", "1", "0"])
    def test_boolean_lexicals(self, lexical):
        Literal(lexical, XSD_BOOLEAN)

    def test_bad_boolean_lexical(self):
        with pytest.raises(LexicalFormMismatchError):
            Literal("yes", XSD_BOOLEAN)

    def test_value_equality(self):
        assert Literal("63", XSD_INTEGER) == Literal("63", XSD_INTEGER)
        assert Literal("63", XSD_INTEGER) != Literal("63")


class TestTriple:
    def test_positions_enforced(self):
        s = Iri("http://e.org/s")
        p = Iri("http://e.org/p")
        Triple(s, p, Literal("x"))
        Triple(BlankNode("b"), p, s)
        with pytest.raises(TriplifyError):
            Triple(Literal("x"), p, s)
        with pytest.raises(TriplifyError):
            Triple(s, BlankNode("b"), s)

    def test_line_rendering(self):
        t = Triple(Iri("http://e.org/s"), Iri("http://e.org/p"), Literal("63", XSD_INTEGER))
        assert t.to_line() == (
            '<http://e.org/s> <http://e.org/p> '
            '"63"^^<http://www.w3.org/2001/XMLSchema#integer> .'
        )


class TestEscaping:
    def test_quote_backslash_newline_short_escapes(self):
        assert escape_literal('a"b') == 'a\\"b'
        assert escape_literal("a\\b") == "a\\\\b"
        assert escape_literal("a\nb") == "a\\nb"

    def test_other_controls_as_uXXXX(self):
        assert escape_literal("a\rb") == "a\\u000Db"
        assert escape_literal("a\tb") == "a\\u0009b"
        assert escape_literal("\x7f") == "\\u007F"

    def test_unicode_passes_through(self):
        assert escape_literal("café \U0001f642") == "café \U0001f642"
