import gzip
import io
import itertools

import pytest
from hypothesis import given, strategies as st

from variantkg.model import VariantRecord
from variantkg.parsers import (
    CaddParseError,
    VcfParseError,
    accession_from_path,
    open_text,
    parse_ann_info,
    parse_cadd_tsv,
    parse_vcf,
)

from conftest import REFERENCE_VCF

MINIMAL_HEADER = "#CHROM\tPOS\tID\tREF\tALT\tQUAL\tFILTER\tINFO\n"


def parse_all(text, accession="ACC1", strict=False):
    header, records, diagnostics = parse_vcf(io.StringIO(text), accession, strict=strict)
    return header, list(records), diagnostics


class TestParseVcf:
    def test_reference_line(self):
        header, records, diagnostics = parse_all(REFERENCE_VCF, "SRR13112995")
        assert not diagnostics
        assert header.sample_names == ("SRR13112995",)
        assert len(header.meta_lines) == 2
        (record,) = records
        assert record.chrom == "1"
        assert record.pos == 16963
        assert record.id == "."
        assert record.ref_allele == "G"
        assert record.alt_alleles == ("A",)
        assert record.qual == 45.64
        assert record.filter == "SnpCluster"
        assert record.info["AC"] == "1"
        assert record.info["AF"] == "0.500"
        assert record.annotations == ()
        assert record.accession == "SRR13112995"

    def test_header_only(self):
        header, records, diagnostics = parse_all(MINIMAL_HEADER)
        assert records == []
        assert diagnostics == []
        assert header.sample_names == ()

    def test_whitespace_fallback(self):
        text = MINIMAL_HEADER + "1   16963  .   G   A  45.64 SnpCluster AC=1\n"
        _, records, diagnostics = parse_all(text)
        assert not diagnostics
        assert records[0].pos == 16963

    def test_bad_pos_lenient(self):
        text = MINIMAL_HEADER + "1\tabc\t.\tG\tA\t10\tPASS\tDP=1\n"
        _, records, diagnostics = parse_all(text)
        assert records == []
        assert len(diagnostics) == 1
        assert diagnostics[0].line_number == 2
        assert diagnostics[0].severity == "error"

    def test_bad_pos_strict(self):
        text = MINIMAL_HEADER + "1\tabc\t.\tG\tA\t10\tPASS\tDP=1\n"
        header, records, _ = parse_vcf(io.StringIO(text), "ACC1", strict=True)
        with pytest.raises(VcfParseError):
            list(records)

    def test_missing_header_fatal(self):
        with pytest.raises(VcfParseError):
            parse_vcf(io.StringIO("1\t5\t.\tG\tA\t1\tPASS\tDP=1\n"), "ACC1")

    def test_invalid_header_fatal(self):
        with pytest.raises(VcfParseError):
            parse_vcf(io.StringIO("#CHROM\tPOS\tID\tREF\n"), "ACC1")

    def test_empty_accession_rejected(self):
        with pytest.raises(ValueError):
            parse_vcf(io.StringIO(MINIMAL_HEADER), "")

    def test_qual_missing(self):
        text = MINIMAL_HEADER + "1\t5\t.\tG\tA\t.\tPASS\tDP=1\n"
        _, records, _ = parse_all(text)
        assert records[0].qual is None

    def test_info_flag_key(self):
        text = MINIMAL_HEADER + "1\t5\t.\tG\tA\t1\tPASS\tINDEL;DP=4\n"
        _, records, _ = parse_all(text)
        assert records[0].info == {"INDEL": "", "DP": "4"}

    def test_multi_alt(self):
        text = MINIMAL_HEADER + "1\t5\t.\tG\tA,T\t1\tPASS\tDP=4\n"
        _, records, _ = parse_all(text)
        assert records[0].alt_alleles == ("A", "T")

    def test_bad_ref_skipped(self):
        text = MINIMAL_HEADER + "1\t5\t.\tZZ\tA\t1\tPASS\tDP=4\n"
        _, records, diagnostics = parse_all(text)
        assert records == []
        assert "ACGTN" in diagnostics[0].message

    def test_ann_attached(self):
        text = MINIMAL_HEADER + "1\t5\t.\tG\tA\t1\tPASS\tANN=A|stop_gained|HIGH|S|G2\n"
        _, records, _ = parse_all(text)
        (record,) = records
        assert len(record.annotations) == 1
        assert record.annotations[0].effect == "stop_gained"

    def test_rejected_ann_entries_warn(self):
        text = MINIMAL_HEADER + "1\t5\t.\tG\tA\t1\tPASS\tANN=A|eff|X|G|I,A\n"
        _, records, diagnostics = parse_all(text)
        assert len(records[0].annotations) == 1
        assert any(d.severity == "warning" for d in diagnostics)

    def test_empty_ann_value_warns(self):
        text = MINIMAL_HEADER + "1\t5\t.\tG\tA\t1\tPASS\tANN=\n"
        _, records, diagnostics = parse_all(text)
        assert records[0].annotations == ()
        assert any("ANN" in d.message and d.severity == "warning" for d in diagnostics)

    def test_streaming_is_lazy(self):
        def endless():
            yield MINIMAL_HEADER
            for pos in itertools.count(1):
                yield f"1\t{pos}\t.\tG\tA\t1\tPASS\tDP=1\n"

        _, records, _ = parse_vcf(endless(), "ACC1")
        first = list(itertools.islice(records, 1000))
        assert len(first) == 1000
        assert first[-1].pos == 1000


class TestRoundTrip:
    def test_reference_line_round_trip(self):
        _, records, _ = parse_all(REFERENCE_VCF, "SRR13112995")
        line = records[0].to_vcf_line()
        assert line == REFERENCE_VCF.splitlines()[-1]

    @given(
        chrom=st.sampled_from(["1", "22", "X", "MT"]),
        pos=st.integers(min_value=1, max_value=10**8),
        vid=st.sampled_from([".", "rs1", "rs4242"]),
        ref=st.text(alphabet="ACGTN", min_size=1, max_size=4),
        alts=st.lists(st.text(alphabet="ACGT", min_size=1, max_size=3), min_size=1, max_size=3),
        qual=st.one_of(st.none(), st.floats(min_value=0, max_value=1e4, allow_nan=False)),
        filt=st.sampled_from(["PASS", "SnpCluster", "LowQual"]),
    )
    def test_parse_serialize_fixpoint(self, chrom, pos, vid, ref, alts, qual, filt):
        record = VariantRecord(
            chrom=chrom,
            pos=pos,
            id=vid,
            ref_allele=ref,
            alt_alleles=tuple(alts),
            qual=qual,
            filter=filt,
            info={"DP": "3", "INDEL": ""},
            accession="ACC1",
        )
        text = MINIMAL_HEADER + record.to_vcf_line() + "\n"
        _, records, diagnostics = parse_all(text)
        assert not diagnostics
        parsed = records[0]
        assert parsed.to_vcf_line() == record.to_vcf_line()
        assert (parsed.chrom, parsed.pos, parsed.id) == (chrom, pos, vid)
        assert parsed.qual == qual
        assert parsed.info == record.info


class TestParseAnnInfo:
    def test_full_entry(self):
        value = (
            "A|missense_variant|MODERATE|GENE1|ENSG0001|transcript|ENST0001|"
            "protein_coding|11/15|c.1312G>T|p.Asp438Tyr|1441/1844|1312/1632|438/543||"
        )
        (ann,) = parse_ann_info(value)
        assert ann.allele == "A"
        assert ann.effect == "missense_variant"
        assert ann.putative_impact == "MODERATE"
        assert ann.gene_name == "GENE1"
        assert ann.gene_id == "ENSG0001"
        assert ann.extra_fields[0] == "transcript"
        assert len(ann.extra_fields) == 11

    def test_two_entries(self):
        anns = parse_ann_info("A|eff1|MOD|G1|ID1,C|eff2|LOW|G2|ID2")
        assert len(anns) == 2
        assert anns[1].allele == "C"

    def test_under_specified_rejected(self):
        assert parse_ann_info("A") == []

    def test_empty_value(self):
        assert parse_ann_info("") == []

    def test_short_entry_padded(self):
        (ann,) = parse_ann_info("A|eff")
        assert ann.putative_impact == ""
        assert ann.extra_fields == ()

    @given(st.integers(min_value=1, max_value=8))
    def test_entry_count(self, n):
        value = ",".join(f"A|eff{i}|MOD|G|ID" for i in range(n))
        assert len(parse_ann_info(value)) == n


class TestParseCaddTsv:
    def test_reference_row(self):
        text = "#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED\n1\t16963\tG\tA\t0.900784\t12.72\n"
        records, diagnostics = parse_cadd_tsv(io.StringIO(text))
        (record,) = list(records)
        assert not diagnostics
        assert record.chrom == "1"
        assert record.pos == 16963
        assert record.ref_allele == "G"
        assert record.alt_allele == "A"
        assert record.raw_score == 0.900784
        assert record.phred == 12.72

    def test_header_only(self):
        records, diagnostics = parse_cadd_tsv(io.StringIO("#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED\n"))
        assert list(records) == []
        assert diagnostics == []

    def test_wrong_arity_skipped(self):
        text = "#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED\n1\t5\tG\tA\t0.5\n"
        records, diagnostics = parse_cadd_tsv(io.StringIO(text))
        assert list(records) == []
        assert len(diagnostics) == 1

    def test_missing_score_columns_fatal(self):
        with pytest.raises(CaddParseError, match="RawScore"):
            parse_cadd_tsv(io.StringIO("#Chrom\tPos\tRef\tAlt\n"))

    def test_missing_header_fatal(self):
        with pytest.raises(CaddParseError):
            parse_cadd_tsv(io.StringIO(""))

    def test_negative_phred_diagnostic(self):
        text = "#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED\n1\t5\tG\tA\t0.5\t-2\n"
        records, diagnostics = parse_cadd_tsv(io.StringIO(text))
        assert list(records) == []
        assert len(diagnostics) == 1

    def test_comment_lines_skipped(self):
        text = "## CADD v1.6\n#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED\n1\t5\tG\tA\t0.5\t2\n"
        records, _ = parse_cadd_tsv(io.StringIO(text))
        assert len(list(records)) == 1


class TestFileHelpers:
    def test_open_text_gz(self, tmp_path):
        path = tmp_path / "x.vcf.gz"
        with gzip.open(path, "wt", encoding="utf-8") as sink:
            sink.write("hello\n")
        with open_text(path) as stream:
            assert stream.read() == "hello\n"

    def test_open_text_plain(self, tmp_path):
        path = tmp_path / "x.vcf"
        path.write_text("hi\n")
        with open_text(path) as stream:
            assert stream.read() == "hi\n"

    @pytest.mark.parametrize(
        "name,expected",
        [
            ("SRR13112995.vcf", "SRR13112995"),
            ("SRR13112995.vcf.gz", "SRR13112995"),
            ("SRR13112995.cadd.tsv", "SRR13112995"),
            ("/data/runs/SRR7.vcf", "SRR7"),
        ],
    )
    def test_accession_from_path(self, name, expected):
        assert accession_from_path(name) == expected
