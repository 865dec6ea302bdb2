"""Streaming parsers for VCF text (SnpEff-annotated) and CADD score TSVs.

Both parsers are single-pass over a line iterator: records are yielded as
they are read and malformed lines turn into diagnostics instead of being
buffered, so memory stays flat in the file length.  Lenient mode (default)
skips bad data lines; strict mode raises on the first error.
"""

from __future__ import annotations

import gzip
import re
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Iterator

from .model import AnnAnnotation, CaddRecord, VariantRecord

MANDATORY_VCF_COLUMNS = ("CHROM", "POS", "ID", "REF", "ALT", "QUAL", "FILTER", "INFO")
CADD_COLUMNS = ("Chrom", "Pos", "Ref", "Alt", "RawScore", "PHRED")

_REF_ALLELE_RE = re.compile(r"[ACGTN]+\Z")


class VcfParseError(ValueError):
    """Fatal VCF problem: bad header, or a bad data line in strict mode."""


class CaddParseError(ValueError):
    """Fatal CADD TSV problem: missing or incomplete column header."""


@dataclass(frozen=True)
class ParseDiagnostic:
    line_number: int
    severity: str  # "warning" | "error"
    message: str

    def __str__(self) -> str:
        return f"line {self.line_number}: {self.severity}: {self.message}"


@dataclass(frozen=True)
class VcfHeader:
    """VCF header: meta lines verbatim, the #CHROM line, and sample names."""

    meta_lines: tuple[str, ...]
    column_line: str
    sample_names: tuple[str, ...]


def open_text(path: str | Path) -> IO[str]:
    """Open a text file for reading, transparently decompressing ``.gz``."""
    path = Path(path)
    if path.suffix == ".gz":
        return gzip.open(path, "rt", encoding="utf-8")
    return open(path, "r", encoding="utf-8")


def accession_from_path(path: str | Path) -> str:
    """Infer the run accession from a file name stem.

    "SRR13112995.vcf.gz" -> "SRR13112995"; a trailing ".cadd" marker is
    stripped as well ("SRR13112995.cadd.tsv" -> "SRR13112995").
    """
    name = Path(path).name
    if name.endswith(".gz"):
        name = name[:-3]
    stem = Path(name).stem
    if stem.endswith(".cadd"):
        stem = stem[: -len(".cadd")]
    return stem


def parse_ann_info(value: str) -> list[AnnAnnotation]:
    """Parse the raw text after "ANN=" into annotation entries.

    Entries are comma-separated; sub-fields pipe-separated with the first
    five bound positionally (allele, effect, putative impact, gene name,
    gene id) and the rest kept verbatim.  Entries with fewer than two
    pipe-fields, or an empty allele/effect, are rejected.
    """
    annotations: list[AnnAnnotation] = []
    if not value:
        return annotations
    for entry in value.split(","):
        fields = entry.split("|")
        if len(fields) < 2 or not fields[0] or not fields[1]:
            continue
        head = fields[:5] + [""] * (5 - len(fields))
        annotations.append(
            AnnAnnotation(
                allele=head[0],
                effect=head[1],
                putative_impact=head[2],
                gene_name=head[3],
                gene_id=head[4],
                extra_fields=tuple(fields[5:]),
            )
        )
    return annotations


def parse_vcf(
    stream: Iterable[str], accession: str, strict: bool = False
) -> tuple[VcfHeader, Iterator[VariantRecord], list[ParseDiagnostic]]:
    """Parse VCF text into (header, record iterator, diagnostics).

    The header is read eagerly; records stream lazily as the returned
    iterator is consumed, and the diagnostics list fills alongside it.
    Fields split on tabs, falling back to whitespace runs when a line has
    fewer than 8 tab-fields.
    """
    if not accession:
        raise ValueError("accession may not be empty")
    lines = enumerate(stream, start=1)
    meta: list[str] = []
    column_line = None
    last_lineno = 0
    for lineno, raw in lines:
        last_lineno = lineno
        line = raw.rstrip("\r\n")
        if line.startswith("##"):
            meta.append(line)
        elif line.startswith("#"):
            column_line = line
            break
        elif not line.strip():
            continue
        else:
            raise VcfParseError(f"line {lineno}: data line before #CHROM header")
    if column_line is None:
        raise VcfParseError("missing #CHROM header line")
    columns = column_line.split("\t")
    if len(columns) < 8:
        columns = column_line.split()
    if len(columns) < 8 or columns[0] != "#CHROM" or tuple(columns[1:8]) != MANDATORY_VCF_COLUMNS[1:]:
        expected = "#CHROM " + " ".join(MANDATORY_VCF_COLUMNS[1:])
        raise VcfParseError(f"line {last_lineno}: invalid column header, expected {expected!r}")
    sample_names = tuple(columns[9:]) if len(columns) > 9 else ()
    header = VcfHeader(tuple(meta), column_line, sample_names)
    diagnostics: list[ParseDiagnostic] = []

    def report(lineno: int, severity: str, message: str) -> None:
        diagnostics.append(ParseDiagnostic(lineno, severity, message))
        if strict and severity == "error":
            raise VcfParseError(f"line {lineno}: {message}")

    def records() -> Iterator[VariantRecord]:
        for lineno, raw in lines:
            line = raw.rstrip("\r\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                report(lineno, "warning", "header line after data lines, ignored")
                continue
            fields = line.split("\t")
            if len(fields) < 8:
                fields = line.split()
            if len(fields) < 8:
                report(lineno, "error", f"expected at least 8 columns, got {len(fields)}")
                continue
            try:
                pos = int(fields[1])
            except ValueError:
                report(lineno, "error", f"non-integer POS {fields[1]!r}")
                continue
            if pos < 1:
                report(lineno, "error", f"POS must be >= 1, got {pos}")
                continue
            ref = fields[3]
            if not _REF_ALLELE_RE.fullmatch(ref):
                report(lineno, "error", f"REF {ref!r} not over alphabet ACGTN")
                continue
            alts = tuple(fields[4].split(","))
            if any(not a for a in alts):
                report(lineno, "error", f"empty ALT allele in {fields[4]!r}")
                continue
            if fields[5] == ".":
                qual = None
            else:
                try:
                    qual = float(fields[5])
                except ValueError:
                    report(lineno, "error", f"invalid QUAL {fields[5]!r}")
                    continue
                if qual < 0:
                    report(lineno, "error", f"negative QUAL {qual}")
                    continue
            info: dict[str, str] = {}
            if fields[7] != ".":
                for entry in fields[7].split(";"):
                    if not entry:
                        continue
                    key, _, val = entry.partition("=")
                    info[key] = val
            annotations: tuple[AnnAnnotation, ...] = ()
            if "ANN" in info:
                ann_value = info["ANN"]
                parsed = parse_ann_info(ann_value)
                if not ann_value:
                    report(lineno, "warning", "empty ANN value")
                elif len(parsed) < len(ann_value.split(",")):
                    rejected = len(ann_value.split(",")) - len(parsed)
                    report(lineno, "warning", f"{rejected} under-specified ANN entries rejected")
                annotations = tuple(parsed)
            yield VariantRecord(
                chrom=fields[0],
                pos=pos,
                id=fields[2],
                ref_allele=ref,
                alt_alleles=alts,
                qual=qual,
                filter=fields[6],
                info=info,
                annotations=annotations,
                accession=accession,
                samples=tuple(fields[8:]),
            )

    return header, records(), diagnostics


def parse_cadd_tsv(
    stream: Iterable[str],
) -> tuple[Iterator[CaddRecord], list[ParseDiagnostic]]:
    """Parse a CADD TSV into (record iterator, diagnostics).

    The "#Chrom ..." line (or the first non-comment line) defines column
    order; Chrom, Pos, Ref, Alt, RawScore and PHRED must all be present.
    Rows with the wrong arity or unparseable values are skipped with a
    diagnostic.
    """
    lines = enumerate(stream, start=1)
    header_fields: list[str] | None = None
    for lineno, raw in lines:
        line = raw.rstrip("\r\n")
        if not line.strip() or line.startswith("##"):
            continue
        if line.startswith("#"):
            line = line[1:]
        header_fields = line.split("\t")
        if len(header_fields) < len(CADD_COLUMNS):
            header_fields = line.split()
        break
    if header_fields is None:
        raise CaddParseError("missing column header line")
    index_of = {name.strip().lower(): i for i, name in enumerate(header_fields)}
    missing = [c for c in CADD_COLUMNS if c.lower() not in index_of]
    if missing:
        raise CaddParseError(f"missing columns: {', '.join(missing)}")
    cols = {c: index_of[c.lower()] for c in CADD_COLUMNS}
    arity = len(header_fields)
    diagnostics: list[ParseDiagnostic] = []

    def records() -> Iterator[CaddRecord]:
        for lineno, raw in lines:
            line = raw.rstrip("\r\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) < arity:
                fields = line.split()
            if len(fields) != arity:
                diagnostics.append(
                    ParseDiagnostic(lineno, "error", f"expected {arity} columns, got {len(fields)}")
                )
                continue
            try:
                pos = int(fields[cols["Pos"]])
                raw_score = float(fields[cols["RawScore"]])
                phred = float(fields[cols["PHRED"]])
                record = CaddRecord(
                    chrom=fields[cols["Chrom"]],
                    pos=pos,
                    ref_allele=fields[cols["Ref"]],
                    alt_allele=fields[cols["Alt"]],
                    raw_score=raw_score,
                    phred=phred,
                )
            except ValueError as exc:
                diagnostics.append(ParseDiagnostic(lineno, "error", str(exc)))
                continue
            yield record

    return records(), diagnostics
