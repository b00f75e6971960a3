"""Exit-code contract and stream discipline of the command line."""

import pytest

from triplify import parse_ntriples
from triplify.cli import main
from triplify.registry import bundled_mapping_text

from conftest import FIXTURES

CASE01 = FIXTURES / "case01_basic"


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestConvert:
    def test_fixture_converts_to_oracle(self, capsys, tmp_path):
        out = tmp_path / "out.nt"
        code, stdout, stderr = run(
            capsys,
            "convert",
            str(CASE01 / "mapping.ttl"),
            str(CASE01 / "PATIENT.csv"),
            "-o",
            str(out),
        )
        assert code == 0
        expected = parse_ntriples((CASE01 / "expected.nt").read_text())
        assert parse_ntriples(out.read_text()) == expected
        assert "triples in graph" in stderr
        assert stdout == ""

    def test_stdout_when_no_output_flag(self, capsys):
        code, stdout, _ = run(
            capsys, "convert", str(CASE01 / "mapping.ttl"), str(CASE01 / "PATIENT.csv")
        )
        assert code == 0
        assert parse_ntriples(stdout) == parse_ntriples((CASE01 / "expected.nt").read_text())

    def test_missing_column_exits_1_and_names_it(self, capsys, tmp_path):
        bad = tmp_path / "PATIENT.csv"
        bad.write_text("ID\n1\n")
        code, _, stderr = run(capsys, "convert", str(CASE01 / "mapping.ttl"), str(bad))
        assert code == 1
        assert "AGE" in stderr

    def test_nonexistent_mapping_exits_2(self, capsys):
        code, _, stderr = run(capsys, "convert", "/nope/mapping.ttl")
        assert code == 2
        assert "error" in stderr

    def test_malformed_mapping_exits_2(self, capsys, tmp_path):
        broken = tmp_path / "broken.ttl"
        broken.write_text("@prefix rr: <http://www.w3.org/ns/r2rml#> . rr:x rr:y")
        code, _, _ = run(capsys, "convert", str(broken))
        assert code == 2

    def test_strict_turns_skips_into_failure(self, capsys, tmp_path):
        out = tmp_path / "out.nt"
        code, _, _ = run(
            capsys,
            "convert",
            str(CASE01 / "mapping.ttl"),
            str(CASE01 / "PATIENT.csv"),
            "-o",
            str(out),
            "--strict",
        )
        assert code == 1  # row 2 has a NULL age
        assert out.exists()

    def test_skipped_log_written(self, capsys, tmp_path):
        log = tmp_path / "skips.tsv"
        code, _, _ = run(
            capsys,
            "convert",
            str(CASE01 / "mapping.ttl"),
            str(CASE01 / "PATIENT.csv"),
            "-o",
            str(tmp_path / "out.nt"),
            "--skipped-log",
            str(log),
        )
        assert code == 0
        fields = log.read_text().strip().split("\t")
        assert len(fields) == 4 and fields[1] == "2" and fields[2] == "AGE"

    def test_bundled_mapping_against_registry_oracle(self, capsys, tmp_path):
        case = FIXTURES / "case12_registry"
        mapping = tmp_path / "mapping.ttl"
        mapping.write_text(bundled_mapping_text())
        code, stdout, _ = run(
            capsys,
            "convert",
            str(mapping),
            str(case / "PATIENT.csv"),
            str(case / "TREATMENT.csv"),
        )
        assert code == 0
        assert parse_ntriples(stdout) == parse_ntriples((case / "expected.nt").read_text())

    def test_table_override(self, capsys, tmp_path):
        renamed = tmp_path / "weird-name.csv"
        renamed.write_text((CASE01 / "PATIENT.csv").read_text())
        code, stdout, _ = run(
            capsys,
            "convert",
            str(CASE01 / "mapping.ttl"),
            "--table",
            f"PATIENT={renamed}",
        )
        assert code == 0
        assert parse_ntriples(stdout) == parse_ntriples((CASE01 / "expected.nt").read_text())


class TestValidate:
    @pytest.fixture()
    def conforming_graph(self, capsys, tmp_path):
        synth_dir = tmp_path / "tables"
        assert main(["synth", str(synth_dir), "--n", "6", "--seed", "3"]) == 0
        mapping = tmp_path / "mapping.ttl"
        mapping.write_text(bundled_mapping_text())
        graph = tmp_path / "graph.nt"
        assert (
            main(
                [
                    "convert",
                    str(mapping),
                    str(synth_dir / "PATIENT.csv"),
                    str(synth_dir / "TREATMENT.csv"),
                    "-o",
                    str(graph),
                ]
            )
            == 0
        )
        capsys.readouterr()
        return graph

    def test_conforming_graph_exits_0_silent(self, capsys, conforming_graph):
        code, stdout, _ = run(capsys, "validate", str(conforming_graph))
        assert code == 0
        assert stdout == ""

    def test_missing_edge_is_one_line_exit_1(self, capsys, tmp_path, conforming_graph):
        lines = conforming_graph.read_text().splitlines(keepends=True)
        victim = next(i for i, l in enumerate(lines) if "P100018" in l)
        broken = tmp_path / "broken.nt"
        broken.write_text("".join(lines[:victim] + lines[victim + 1 :]))
        code, stdout, _ = run(capsys, "validate", str(broken))
        assert code == 1
        assert len(stdout.splitlines()) == 1

    def test_malformed_ntriples_exits_2(self, capsys, tmp_path):
        bad = tmp_path / "bad.nt"
        bad.write_text("<http://e.org/s> <http://e.org/p> .\n")
        code, _, stderr = run(capsys, "validate", str(bad))
        assert code == 2
        assert "error" in stderr

    def test_custom_shapes_file(self, capsys, tmp_path, conforming_graph):
        shapes = tmp_path / "shapes.tsv"
        shapes.write_text("ncit:C16960\troo:P100027\tliteral(xsd:integer)\t1\t1\n")
        code, stdout, _ = run(
            capsys, "validate", str(conforming_graph), "--shapes", str(shapes)
        )
        assert code == 0 and stdout == ""


class TestQuery:
    def _graphs(self, tmp_path):
        mapping = tmp_path / "mapping.ttl"
        mapping.write_text(bundled_mapping_text())
        paths = []
        for prefix, seed in (("A", 1), ("B", 2)):
            synth_dir = tmp_path / f"tables{prefix}"
            assert main(["synth", str(synth_dir), "--n", "3", "--seed", str(seed)]) == 0
            # namespace the IDs so the two centres stay disjoint
            for name in ("PATIENT", "TREATMENT"):
                f = synth_dir / f"{name}.csv"
                lines = f.read_text().splitlines()
                header = lines[0].split(",")
                rows = [line.split(",") for line in lines[1:]]
                for row in rows:
                    for i, col in enumerate(header):
                        if col in ("ID", "PATIENT_ID"):
                            row[i] = prefix + row[i]
                f.write_text("\n".join([",".join(header)] + [",".join(r) for r in rows]) + "\n")
            out = tmp_path / f"centre{prefix}.nt"
            assert (
                main(
                    [
                        "convert",
                        str(mapping),
                        str(synth_dir / "PATIENT.csv"),
                        str(synth_dir / "TREATMENT.csv"),
                        "-o",
                        str(out),
                    ]
                )
                == 0
            )
            paths.append(out)
        return paths

    def test_unified_patient_count(self, capsys, tmp_path):
        a, b = self._graphs(tmp_path)
        capsys.readouterr()
        code, stdout, _ = run(
            capsys,
            "query",
            str(a),
            str(b),
            "--query",
            "PREFIX rdf: <http://www.w3.org/1999/02/22-rdf-syntax-ns#> "
            "PREFIX ncit: <http://purl.obolibrary.org/obo/NCIT_> "
            "SELECT (COUNT(*) AS ?n) WHERE { ?p rdf:type ncit:C16960 . }",
        )
        assert code == 0
        assert stdout.splitlines() == ["?n", '"6"^^<http://www.w3.org/2001/XMLSchema#integer>']

    def test_empty_result_header_only(self, capsys, tmp_path):
        a, _ = self._graphs(tmp_path)
        capsys.readouterr()
        code, stdout, _ = run(
            capsys,
            "query",
            str(a),
            "--query",
            "PREFIX e: <http://nothing.org/> SELECT ?x WHERE { ?x e:absent ?y . }",
        )
        assert code == 0
        assert stdout == "?x\n"

    def test_syntax_error_exits_2(self, capsys, tmp_path):
        a, _ = self._graphs(tmp_path)
        capsys.readouterr()
        code, _, stderr = run(capsys, "query", str(a), "--query", "SELECT ?x WHERE {")
        assert code == 2
        assert "line" in stderr

    def test_query_file(self, capsys, tmp_path):
        a, _ = self._graphs(tmp_path)
        qfile = tmp_path / "q.rq"
        qfile.write_text(
            "PREFIX roo: <http://www.cancerdata.org/roo/> "
            "SELECT (COUNT(*) AS ?n) WHERE { ?p roo:P100039 ?t . }"
        )
        capsys.readouterr()
        code, stdout, _ = run(capsys, "query", str(a), "--query-file", str(qfile))
        assert code == 0 and stdout.startswith("?n\n")


class TestSynth:
    def test_deterministic_files(self, capsys, tmp_path):
        d1, d2 = tmp_path / "one", tmp_path / "two"
        assert main(["synth", str(d1), "--n", "50", "--seed", "1"]) == 0
        assert main(["synth", str(d2), "--n", "50", "--seed", "1"]) == 0
        for name in ("PATIENT.csv", "TREATMENT.csv"):
            assert (d1 / name).read_bytes() == (d2 / name).read_bytes()

    def test_zero_patients_header_only(self, capsys, tmp_path):
        d = tmp_path / "zero"
        assert main(["synth", str(d), "--n", "0"]) == 0
        assert (d / "PATIENT.csv").read_text() == "ID,AGE,SEX,TUMOUR_SITE\n"
        assert (
            d / "TREATMENT.csv"
        ).read_text() == "ID,PATIENT_ID,RT_START_DATE,MODALITY,MODALITY_CODE\n"

    def test_unwritable_directory_exits_2(self, capsys, tmp_path):
        blocker = tmp_path / "blocker"
        blocker.write_text("a file, not a directory")
        code, _, stderr = run(capsys, "synth", str(blocker), "--n", "1")
        assert code == 2
        assert "error" in stderr

    def test_synth_convert_validate_chain(self, capsys, tmp_path):
        d = tmp_path / "chain"
        assert main(["synth", str(d), "--n", "12", "--seed", "5"]) == 0
        mapping = tmp_path / "mapping.ttl"
        mapping.write_text(bundled_mapping_text())
        graph = tmp_path / "chain.nt"
        assert (
            main(
                [
                    "convert",
                    str(mapping),
                    str(d / "PATIENT.csv"),
                    str(d / "TREATMENT.csv"),
                    "-o",
                    str(graph),
                ]
            )
            == 0
        )
        assert main(["validate", str(graph)]) == 0


class TestStats:
    def test_stats_shape(self, capsys, tmp_path):
        d = tmp_path / "tables"
        assert main(["synth", str(d), "--n", "4", "--seed", "8"]) == 0
        mapping = tmp_path / "mapping.ttl"
        mapping.write_text(bundled_mapping_text())
        graph = tmp_path / "g.nt"
        assert (
            main(
                [
                    "convert",
                    str(mapping),
                    str(d / "PATIENT.csv"),
                    str(d / "TREATMENT.csv"),
                    "-o",
                    str(graph),
                ]
            )
            == 0
        )
        capsys.readouterr()
        code, stdout, _ = run(capsys, "stats", str(graph))
        assert code == 0
        lines = stdout.splitlines()
        assert lines[0].startswith("triples\t")
        assert any(l.startswith("class\t") and "C16960" in l and l.endswith("\t4") for l in lines)
        assert any(l.startswith("category\tdemographic\t") for l in lines)


class TestUsage:
    def test_no_subcommand_exits_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main([])
        assert err.value.code == 2

    def test_unknown_flag_exits_2(self, capsys):
        with pytest.raises(SystemExit) as err:
            main(["convert", "--frobnicate"])
        assert err.value.code == 2

    def test_help_available_everywhere(self, capsys):
        for sub in ("convert", "validate", "query", "synth", "stats"):
            with pytest.raises(SystemExit) as err:
                main([sub, "--help"])
            assert err.value.code == 0
            assert sub in capsys.readouterr().out
