"""Graph set semantics, index coherence, and match ordering."""

import random

from triplify import Graph, Iri, Literal, Triple, merge
from triplify.terms import XSD_INTEGER

from genutil import random_graph, random_triple

EX = "http://ex.org/"
NCIT = "http://purl.obolibrary.org/obo/NCIT_"


def _t(s, p, o):
    return Triple(Iri(EX + s), Iri(EX + p), Iri(EX + o))


class TestInsert:
    def test_insert_reports_new(self):
        g = Graph()
        t = Triple(
            Iri(EX + "patient1"),
            Iri("http://www.cancerdata.org/roo/hasDisease"),
            Iri(NCIT + "C3262"),
        )
        assert g.add(t) is True
        assert len(g) == 1

    def test_reinsert_is_noop(self):
        g = Graph()
        t = _t("s", "p", "o")
        g.add(t)
        assert g.add(t) is False
        assert len(g) == 1

    def test_distinct_object_grows(self):
        g = Graph()
        g.add(_t("patient1", "hasDisease", "C3262"))
        assert g.add(_t("patient1", "hasDisease", "C4323")) is True
        assert len(g) == 2

    def test_insert_twice_equals_insert_once(self):
        rng = random.Random(7)
        triples = [random_triple(rng) for _ in range(50)]
        once = Graph(triples)
        twice = Graph(triples + triples)
        assert once == twice


class TestMatch:
    def test_full_scan(self):
        g = Graph([_t("a", "p", "x"), _t("b", "p", "y"), _t("c", "q", "z")])
        assert len(g.match()) == 3

    def test_by_subject(self):
        g = Graph([_t("a", "p", "x"), _t("a", "q", "y"), _t("b", "p", "x")])
        found = g.match(s=Iri(EX + "a"))
        assert len(found) == 2
        assert all(t.s == Iri(EX + "a") for t in found)

    def test_result_canonically_sorted(self):
        g = Graph([_t("b", "p", "x"), _t("a", "p", "x"), _t("a", "p", "w")])
        lines = [t.to_line() for t in g.match()]
        assert lines == sorted(lines)

    def test_object_can_be_literal(self):
        t = Triple(Iri(EX + "s"), Iri(EX + "p"), Literal("5", XSD_INTEGER))
        g = Graph([t])
        assert g.match(o=Literal("5", XSD_INTEGER)) == [t]
        assert g.match(o=Literal("5")) == []

    def test_index_coherence_against_linear_scan(self):
        # randomized graphs up to 10^4 triples: every index-backed match
        # must equal a plain filtered scan
        rng = random.Random(2024)
        for trial in range(8):
            g = random_graph(rng, 500 if trial < 7 else 10_000)
            pool = list(g)
            for _ in range(40):
                probe = rng.choice(pool) if pool else random_triple(rng)
                s = probe.s if rng.random() < 0.6 else None
                p = probe.p if rng.random() < 0.6 else None
                o = probe.o if rng.random() < 0.6 else None
                expected = sorted(
                    (
                        t
                        for t in pool
                        if (s is None or t.s == s)
                        and (p is None or t.p == p)
                        and (o is None or t.o == o)
                    ),
                    key=Triple.to_line,
                )
                assert g.match(s, p, o) == expected, f"trial {trial}"


class TestHelpers:
    def test_subjects_and_objects(self):
        g = Graph([_t("a", "p", "x"), _t("b", "p", "x"), _t("a", "q", "y")])
        assert g.subjects(p=Iri(EX + "p")) == {Iri(EX + "a"), Iri(EX + "b")}
        assert g.objects(s=Iri(EX + "a")) == {Iri(EX + "x"), Iri(EX + "y")}

    def test_value_single_or_none_or_raise(self):
        g = Graph([_t("s", "p", "o")])
        assert g.value(Iri(EX + "s"), Iri(EX + "p")) == Iri(EX + "o")
        assert g.value(Iri(EX + "s"), Iri(EX + "q")) is None
        g.add(_t("s", "p", "o2"))
        import pytest

        with pytest.raises(ValueError):
            g.value(Iri(EX + "s"), Iri(EX + "p"))


class TestMerge:
    def test_merge_commutes(self):
        rng = random.Random(99)
        g1 = random_graph(rng, 120)
        g2 = random_graph(rng, 120)
        assert merge([g1, g2]) == merge([g2, g1])

    def test_merge_idempotent(self):
        rng = random.Random(100)
        g = random_graph(rng, 80)
        assert merge([g, g]) == g

    def test_shared_triples_counted_once(self):
        shared = _t("x", "p", "y")
        g1 = Graph([shared, _t("a", "p", "b")])
        g2 = Graph([shared, _t("c", "p", "d")])
        assert len(merge([g1, g2])) == 3
