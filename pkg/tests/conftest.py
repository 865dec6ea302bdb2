"""Shared fixtures: reference VCF/CADD files and a synthetic corpus builder."""

from __future__ import annotations

import random
from pathlib import Path

import pytest

REFERENCE_ACCESSION = "SRR13112995"

REFERENCE_INFO = (
    "AC=1;AF=0.500;AN=2;BaseQRankSum=1.465;DP=8;ExcessHet=3.0103;FS=0.000;"
    "MLEAC=1;MLEAF=0.500;MQ=60.00;MQRankSum=0.000;QD=5.70;"
    "ReadPosRankSum=-0.366;SOR=0.169"
)

REFERENCE_VCF = (
    "##fileformat=VCFv4.2\n"
    '##INFO=<ID=ANN,Number=.,Type=String,Description="Functional annotations: '
    "'Allele | Annotation | Annotation_Impact | Gene_Name | Gene_ID | Feature_Type | "
    "Feature_ID | Transcript_BioType | Rank | HGVS.c | HGVS.p | cDNA.pos / cDNA.length | "
    "CDS.pos / CDS.length | AA.pos / AA.length | Distance | ERRORS / WARNINGS / INFO'\">\n"
    "#CHROM\tPOS\tID\tREF\tALT\tQUAL\tFILTER\tINFO\tFORMAT\t" + REFERENCE_ACCESSION + "\n"
    "1\t16963\t.\tG\tA\t45.64\tSnpCluster\t" + REFERENCE_INFO + "\tGT:AD:DP:GQ:PL\t0/1:6,2:8:53:53,0,228\n"
)

REFERENCE_CADD = (
    "## CADD GRCh37-v1.6\n"
    "#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED\n"
    "1\t16963\tG\tA\t0.900784\t12.72\n"
)


@pytest.fixture
def reference_vcf_path(tmp_path) -> Path:
    path = tmp_path / f"{REFERENCE_ACCESSION}.vcf"
    path.write_text(REFERENCE_VCF, encoding="utf-8")
    return path


@pytest.fixture
def reference_cadd_path(tmp_path) -> Path:
    path = tmp_path / f"{REFERENCE_ACCESSION}.cadd.tsv"
    path.write_text(REFERENCE_CADD, encoding="utf-8")
    return path


CHROMS = ("1", "2", "X")
BASES = "ACGT"
ANN_CHOICES = (
    ("missense_variant", "MODERATE", "ORF1ab", "GENE0001"),
    ("synonymous_variant", "LOW", "S", "GENE0002"),
    ("upstream_gene_variant", "MODIFIER", "N", "GENE0003"),
    ("stop_gained", "HIGH", "ORF1ab", "GENE0001"),
)
# cycled per locus so every CADD category occurs
RAW_SCORE_LEVELS = (-2.31, 0.42, 2.87, 7.13, 12.55)


def build_corpus(
    directory: Path,
    n_accessions: int = 5,
    n_loci: int = 40,
    variants_per_accession: int = 30,
    cadd_fraction: float = 0.85,
    seed: int = 20240601,
) -> list[str]:
    """Write a deterministic multi-accession VCF + CADD corpus.

    Loci are shared across accessions so variant keys overlap; each locus
    carries a fixed raw score (as CADD would), spread over all five
    categories.
    """
    rng = random.Random(seed)
    directory.mkdir(parents=True, exist_ok=True)
    loci = []
    used = set()
    while len(loci) < n_loci:
        chrom = rng.choice(CHROMS)
        pos = rng.randrange(100, 29000)
        if (chrom, pos) in used:
            continue
        used.add((chrom, pos))
        ref = rng.choice(BASES)
        alt = rng.choice([b for b in BASES if b != ref])
        level = RAW_SCORE_LEVELS[len(loci) % len(RAW_SCORE_LEVELS)]
        raw = round(level + rng.uniform(-0.05, 0.05), 4)
        phred = round(abs(raw) * 1.9 + 0.5, 2)
        loci.append((chrom, pos, ref, alt, raw, phred))

    accessions = [f"SRR90{i:05d}" for i in range(n_accessions)]
    for accession in accessions:
        chosen = rng.sample(loci, variants_per_accession)
        chosen.sort(key=lambda l: (l[0], l[1]))
        vcf_lines = [
            "##fileformat=VCFv4.2",
            "#CHROM\tPOS\tID\tREF\tALT\tQUAL\tFILTER\tINFO\tFORMAT\t" + accession,
        ]
        cadd_lines = ["#Chrom\tPos\tRef\tAlt\tRawScore\tPHRED"]
        for chrom, pos, ref, alt, raw, phred in chosen:
            effect, impact, gene, gene_id = ANN_CHOICES[pos % len(ANN_CHOICES)]
            ann = f"{alt}|{effect}|{impact}|{gene}|{gene_id}|transcript|TR{pos}|protein_coding"
            qual = round(rng.uniform(20.0, 90.0), 2)
            filt = "PASS" if pos % 3 else "SnpCluster"
            vcf_lines.append(
                f"{chrom}\t{pos}\t.\t{ref}\t{alt}\t{qual!r}\t{filt}\t"
                f"DP={pos % 50 + 1};ANN={ann}\tGT\t0/1"
            )
            if rng.random() < cadd_fraction:
                cadd_lines.append(f"{chrom}\t{pos}\t{ref}\t{alt}\t{raw!r}\t{phred!r}")
        (directory / f"{accession}.vcf").write_text("\n".join(vcf_lines) + "\n", encoding="utf-8")
        (directory / f"{accession}.cadd.tsv").write_text(
            "\n".join(cadd_lines) + "\n", encoding="utf-8"
        )
    return accessions


@pytest.fixture
def corpus_dir(tmp_path) -> Path:
    directory = tmp_path / "corpus"
    build_corpus(directory)
    return directory
