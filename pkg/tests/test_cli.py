import hashlib
import json
from pathlib import Path

import pytest

from variantkg.cli import main

from conftest import REFERENCE_ACCESSION


def run(*argv):
    return main([str(a) for a in argv])


def write_two_accession_fixture(directory: Path):
    """Two accessions sharing exactly one variant; both CADD-covered."""
    directory.mkdir(parents=True, exist_ok=True)
    header = "##fileformat=VCFv4.2\n#CHROM\tPOS\tID\tREF\tALT\tQUAL\tFILTER\tINFO\n"
    (directory / "SRRA.vcf").write_text(
        header + "1\t100\t.\tG\tA\t50.0\tPASS\tDP=3\n", encoding="utf-8"
    )
    (directory / "SRRB.vcf").write_text(
        header + "1\t100\t.\tG\tA\t60.0\tPASS\tDP=4\n", encoding="utf-8"
    )
    cadd_header = "#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED\n"
    (directory / "SRRA.cadd.tsv").write_text(
        cadd_header + "1\t100\tG\tA\t2.5\t7.1\n", encoding="utf-8"
    )
    (directory / "SRRB.cadd.tsv").write_text(
        cadd_header + "1\t100\tG\tA\t2.5\t7.1\n", encoding="utf-8"
    )


class TestConvertVcf:
    def test_reference_golden_line(self, reference_vcf_path, tmp_path, capsys):
        out = tmp_path / "rdf"
        assert run("convert-vcf", reference_vcf_path, "--out", out) == 0
        text = (out / f"{REFERENCE_ACCESSION}.nq").read_text()
        digest = hashlib.md5(
            f"{REFERENCE_ACCESSION}\t1\t16963\tG\tA".encode()
        ).hexdigest()
        assert (
            f"<origin://{digest}@0> <sg://0.99.11/vcf2rdf/variant/REF> "
            f"<sg://0.99.11/vcf2rdf/sequence/G> <sg://{REFERENCE_ACCESSION}> ."
        ) in text.splitlines()
        stats = capsys.readouterr().out
        assert "1 records" in stats
        assert (out / "run-manifest.json").exists()

    def test_empty_directory(self, tmp_path, capsys):
        empty = tmp_path / "empty"
        empty.mkdir()
        assert run("convert-vcf", empty, "--out", tmp_path / "out") == 0
        assert "0 files" in capsys.readouterr().out

    def test_mixed_valid_invalid(self, tmp_path, capsys):
        src = tmp_path / "src"
        src.mkdir()
        (src / "GOOD.vcf").write_text(
            "#CHROM\tPOS\tID\tREF\tALT\tQUAL\tFILTER\tINFO\n1\t5\t.\tG\tA\t1\tPASS\tDP=1\n"
        )
        (src / "BAD.vcf").write_text("not a vcf at all\n")
        out = tmp_path / "out"
        assert run("convert-vcf", src, "--out", out) == 1
        assert (out / "GOOD.nq").exists()
        captured = capsys.readouterr()
        assert "FAILED" in captured.err

    def test_accession_override(self, reference_vcf_path, tmp_path):
        out = tmp_path / "out"
        assert run("convert-vcf", reference_vcf_path, "--out", out, "--accession", "RUN7") == 0
        assert (out / "RUN7.nq").exists()

    def test_duplicate_accessions_rejected(self, tmp_path, capsys):
        src = tmp_path / "src"
        src.mkdir()
        header = "#CHROM\tPOS\tID\tREF\tALT\tQUAL\tFILTER\tINFO\n"
        (src / "A.vcf").write_text(header)
        sub = src / "sub"
        sub.mkdir()
        (sub / "A.vcf").write_text(header)
        assert run("convert-vcf", src / "A.vcf", sub / "A.vcf", "--out", tmp_path / "o") == 1


class TestConvertCadd:
    def test_reference_block(self, reference_cadd_path, tmp_path):
        out = tmp_path / "rdf"
        assert run("convert-cadd", reference_cadd_path, "--out", out) == 0
        text = (out / f"{REFERENCE_ACCESSION}.ttl").read_text()
        assert f"<http://sg.org/{REFERENCE_ACCESSION}/1/variant1> a ns1:variant ;" in text
        assert "ns1:raw_score 0.900784" in text

    def test_header_only_file(self, tmp_path):
        src = tmp_path / "EMPTY.cadd.tsv"
        src.write_text("#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED\n")
        out = tmp_path / "out"
        assert run("convert-cadd", src, "--out", out) == 0
        text = (out / "EMPTY.ttl").read_text()
        assert text == "@prefix ns1: <http://sg.org/> .\n\n"

    def test_rerun_byte_identical(self, reference_cadd_path, tmp_path):
        out1, out2 = tmp_path / "o1", tmp_path / "o2"
        run("convert-cadd", reference_cadd_path, "--out", out1)
        run("convert-cadd", reference_cadd_path, "--out", out2)
        name = f"{REFERENCE_ACCESSION}.ttl"
        assert (out1 / name).read_bytes() == (out2 / name).read_bytes()


class TestEmitOntology:
    def test_writes_turtle(self, tmp_path):
        out = tmp_path / "ontology.ttl"
        assert run("emit-ontology", "--out", out) == 0
        text = out.read_text()
        assert "@prefix ns1: <http://sg.org/> ." in text
        assert "ns1:has_pos" in text
        assert "wd:Q37748" in text
        assert (tmp_path / "run-manifest.json").exists()


class TestBuild:
    def convert_fixture(self, tmp_path):
        src = tmp_path / "src"
        write_two_accession_fixture(src)
        rdf = tmp_path / "rdf"
        assert run("convert-vcf", src, "--out", rdf) == 0
        assert run("convert-cadd", src, "--out", rdf) == 0
        return rdf

    def test_two_accessions_one_shared_variant(self, tmp_path, capsys):
        rdf = self.convert_fixture(tmp_path)
        out = tmp_path / "built"
        assert run("build", rdf, "--out", out, "--seed", 1) == 0
        captured = capsys.readouterr().out
        assert "2 nodes, 1 undirected edges" in captured
        assert (out / "dataset.tsv").exists()
        assert (out / "graph.vkg").exists()
        assert (out / "vocab.tsv").exists()

    def test_label_distribution_sums(self, tmp_path, capsys):
        rdf = self.convert_fixture(tmp_path)
        assert run("build", rdf, "--out", tmp_path / "b") == 0
        lines = capsys.readouterr().out.splitlines()
        dist_line = next(l for l in lines if l.startswith("label distribution"))
        total = sum(int(part.split(": ")[1]) for part in dist_line.split("distribution: ")[1].split(", "))
        labeled_line = next(l for l in lines if "labeled nodes" in l)
        assert total == int(labeled_line.split("), ")[1].split(" ")[0])

    def test_same_seed_identical_graph_hash(self, tmp_path):
        rdf = self.convert_fixture(tmp_path)
        out1, out2 = tmp_path / "b1", tmp_path / "b2"
        assert run("build", rdf, "--out", out1, "--seed", 7) == 0
        assert run("build", rdf, "--out", out2, "--seed", 7) == 0
        h1 = hashlib.sha256((out1 / "graph.vkg").read_bytes()).hexdigest()
        h2 = hashlib.sha256((out2 / "graph.vkg").read_bytes()).hexdigest()
        assert h1 == h2

    def test_option_combinations(self, tmp_path, corpus_dir, capsys):
        rdf = tmp_path / "rdf"
        assert run("convert-vcf", corpus_dir, "--out", rdf, "--threads", 3) == 0
        assert run("convert-cadd", corpus_dir, "--out", rdf, "--threads", 3) == 0
        out = tmp_path / "built"
        assert run(
            "build", rdf, "--out", out,
            "--mode", "both", "--encoding", "index",
            "--dataset-format", "jsonl", "--drop-accession", "--stratified",
        ) == 0
        assert (out / "dataset.jsonl").exists()
        vocab_text = (out / "vocab.tsv").read_text()
        assert not any(line.startswith("accession\t") for line in vocab_text.splitlines())
        assert "(index)" in capsys.readouterr().out

    def test_no_labeled_nodes_fails(self, tmp_path, capsys):
        src = tmp_path / "src"
        write_two_accession_fixture(src)
        rdf = tmp_path / "rdf"
        run("convert-vcf", src, "--out", rdf)  # no CADD conversion
        assert run("build", rdf, "--out", tmp_path / "b") == 1
        assert "no labeled nodes" in capsys.readouterr().err

    def test_no_inputs_fails(self, tmp_path):
        empty = tmp_path / "none"
        empty.mkdir()
        assert run("build", empty, "--out", tmp_path / "b") == 1


class TestTrainAndGrid:
    @pytest.fixture()
    def built(self, tmp_path, corpus_dir):
        rdf = tmp_path / "rdf"
        assert run("convert-vcf", corpus_dir, "--out", rdf) == 0
        assert run("convert-cadd", corpus_dir, "--out", rdf) == 0
        out = tmp_path / "built"
        assert run("build", rdf, "--out", out, "--seed", 3, "--stratified") == 0
        return out / "graph.vkg"

    def test_train_writes_artifacts(self, built, tmp_path, capsys):
        out = tmp_path / "run"
        assert run(
            "train", built, "--out", out, "--model", "gcn",
            "--hidden", 8, "--epochs", 30, "--seed", 2,
        ) == 0
        assert (out / "history_gcn.csv").exists()
        assert (out / "model_gcn.vkgm").exists()
        assert (out / "confusion_test_gcn.csv").exists()
        assert "test accuracy" in capsys.readouterr().out

    def test_history_long_format(self, built, tmp_path):
        out = tmp_path / "run"
        run("train", built, "--out", out, "--model", "sage", "--epochs", 5)
        lines = (out / "history_sage.csv").read_text().splitlines()
        assert lines[0] == "epoch,split,metric,value"
        assert lines[1].startswith("1,train,loss,")
        assert len(lines) == 1 + 5 * 3

    def test_grid_single_cell(self, built, tmp_path, capsys):
        out = tmp_path / "grid"
        assert run(
            "grid", built, "--out", out, "--model", "both",
            "--hidden", 4, "--lr", 0.01, "--epochs", 10, "--seed", 0,
        ) == 0
        table = (out / "grid_table.txt").read_text()
        assert "LR = 0.01" in table
        csv_lines = (out / "grid.csv").read_text().splitlines()
        assert len(csv_lines) == 3  # header + one cell per kind
        assert all(line.endswith(",1") for line in csv_lines[1:])

    def test_grid_seed_repeatable(self, built, tmp_path):
        outs = []
        for name in ("g1", "g2"):
            out = tmp_path / name
            assert run(
                "grid", built, "--out", out, "--model", "gcn",
                "--hidden", 2, 4, "--lr", 0.01, "--epochs", 8, "--seed", 5,
            ) == 0
            outs.append((out / "grid_table.txt").read_bytes())
        assert outs[0] == outs[1]

    def test_missing_graph_file(self, tmp_path):
        assert run("train", tmp_path / "nope.vkg", "--out", tmp_path / "o") == 1


class TestQuery:
    def test_position_query(self, reference_vcf_path, tmp_path, capsys):
        rdf = tmp_path / "rdf"
        run("convert-vcf", reference_vcf_path, "--out", rdf)
        assert run(
            "query", rdf,
            "--pattern", "?v <http://biohackathon.org/resource/faldo#position> ?p ?g",
        ) == 0
        out = capsys.readouterr().out
        assert "16963" in out
        assert f"<sg://{REFERENCE_ACCESSION}>" in out

    def test_typed_literal_pattern(self, reference_vcf_path, tmp_path, capsys):
        rdf = tmp_path / "rdf"
        run("convert-vcf", reference_vcf_path, "--out", rdf)
        assert run(
            "query", rdf,
            "--pattern",
            '?v * "16963"^^<http://www.w3.org/2001/XMLSchema#integer> ?g',
        ) == 0
        assert "origin://" in capsys.readouterr().out

    def test_multi_pattern_join(self, reference_vcf_path, tmp_path, capsys):
        rdf = tmp_path / "rdf"
        run("convert-vcf", reference_vcf_path, "--out", rdf)
        assert run(
            "query", rdf,
            "--pattern", "?v <http://biohackathon.org/resource/faldo#position> ?p ?g",
            "--pattern", "?v <sg://0.99.11/vcf2rdf/variant/FILTER> ?f ?g",
        ) == 0
        out = capsys.readouterr().out
        assert "SnpCluster" in out

    def test_bad_pattern(self, reference_vcf_path, tmp_path):
        rdf = tmp_path / "rdf"
        run("convert-vcf", reference_vcf_path, "--out", rdf)
        assert run("query", rdf, "--pattern", "?a ?b") == 1


class TestExitCodes:
    def test_bad_usage_exit_one(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["convert-vcf"])  # missing --out
        assert excinfo.value.code == 1

    def test_internal_error_exit_two(self, tmp_path, monkeypatch, capsys):
        import variantkg.cli as cli

        def boom(args):
            raise RuntimeError("synthetic crash")

        monkeypatch.setitem(cli.build_parser.__globals__, "cmd_emit_ontology", boom)
        # rebuild dispatch through a fresh parser that picks up the patched handler
        assert cli.main(["emit-ontology", "--out", str(tmp_path / "x.ttl")]) == 2
        assert "synthetic crash" in capsys.readouterr().err


class TestManifests:
    def test_manifest_contents(self, reference_vcf_path, tmp_path):
        out = tmp_path / "o"
        run("convert-vcf", reference_vcf_path, "--out", out)
        manifest = json.loads((out / "run-manifest.json").read_text())
        assert manifest["command"] == "convert-vcf"
        assert manifest["tool"] == "variantkg"
        assert manifest["inputs"][0]["path"].endswith(".vcf")
        assert len(manifest["inputs"][0]["sha256"]) == 64
        assert "out" not in manifest["arguments"]

    def test_manifest_reproducible(self, reference_vcf_path, tmp_path):
        out1, out2 = tmp_path / "m1", tmp_path / "m2"
        run("convert-vcf", reference_vcf_path, "--out", out1)
        run("convert-vcf", reference_vcf_path, "--out", out2)
        assert (out1 / "run-manifest.json").read_bytes() == (out2 / "run-manifest.json").read_bytes()
