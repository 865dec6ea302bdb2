"""Core domain types shared across the toolkit.

A variant is one (record, ALT allele) pair: multi-allelic VCF lines expand
into one logical variant per alternate allele.  CADD raw scores map onto
five ordered deleteriousness categories, which are the class labels of the
downstream node-classification task.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

NUM_CADD_CATEGORIES = 5


def bin_cadd_score(raw: float) -> int:
    """Map a raw CADD score onto its category in {0..4}.

    Bins are half-open, partitioning the real line: (-inf, 0) -> 0,
    [0, 1) -> 1, [1, 5) -> 2, [5, 10) -> 3, [10, inf) -> 4.  Boundary
    values land in the higher category; scores above 100 clamp into 4.
    """
    raw = float(raw)
    if not math.isfinite(raw):
        raise ValueError(f"invalid score: {raw!r}")
    if raw < 0.0:
        return 0
    if raw < 1.0:
        return 1
    if raw < 5.0:
        return 2
    if raw < 10.0:
        return 3
    return 4


def synthetic_variant_key(chrom: str, pos: int, ref: str, alt: str) -> str:
    """Accession-independent key for variants without an ID column value."""
    return f"{chrom}:{pos}:{ref}>{alt}"


@dataclass(frozen=True)
class AnnAnnotation:
    """One SnpEff ANN entry (one predicted effect on one transcript).

    Only the first five pipe-separated sub-fields are bound by name; the
    remainder is preserved verbatim in ``extra_fields``.
    """

    allele: str
    effect: str
    putative_impact: str = ""
    gene_name: str = ""
    gene_id: str = ""
    extra_fields: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.allele or not self.effect:
            raise ValueError("ANN allele and effect may not be empty")


@dataclass(frozen=True)
class VariantRecord:
    """One parsed VCF data line, bound to the accession of its source file.

    ``alt_alleles`` is ordered as written; ``info`` preserves INFO key order
    (flag keys carry an empty value); ``samples`` holds the FORMAT column and
    everything after it, verbatim and uninterpreted.
    """

    chrom: str
    pos: int
    id: str
    ref_allele: str
    alt_alleles: tuple[str, ...]
    qual: float | None
    filter: str
    info: dict[str, str] = field(default_factory=dict)
    annotations: tuple[AnnAnnotation, ...] = ()
    accession: str = ""
    samples: tuple[str, ...] = ()

    def __post_init__(self):
        if self.pos < 1:
            raise ValueError(f"pos must be >= 1, got {self.pos}")
        if not self.ref_allele:
            raise ValueError("ref_allele may not be empty")
        if not self.alt_alleles:
            raise ValueError("alt_alleles may not be empty")
        if self.qual is not None and self.qual < 0:
            raise ValueError(f"qual must be non-negative, got {self.qual}")

    def to_vcf_line(self) -> str:
        """Re-serialize as a tab-separated VCF data line."""
        qual = "." if self.qual is None else repr(self.qual)
        if not self.info:
            info = "."
        else:
            info = ";".join(k if v == "" else f"{k}={v}" for k, v in self.info.items())
        fields = [
            self.chrom,
            str(self.pos),
            self.id,
            self.ref_allele,
            ",".join(self.alt_alleles),
            qual,
            self.filter,
            info,
        ]
        fields.extend(self.samples)
        return "\t".join(fields)


def variant_key(record: VariantRecord, alt_index: int) -> str:
    """Canonical cross-accession join key for one (record, ALT allele) pair.

    The VCF ID wins when present ("." means missing); otherwise a synthetic
    "chrom:pos:ref>alt" key is built for the indexed allele.  The key is
    deterministic and independent of the accession, so records of the same
    variant observed in different runs share it.
    """
    if not 0 <= alt_index < len(record.alt_alleles):
        raise IndexError(
            f"alt_index {alt_index} out of range for {len(record.alt_alleles)} alleles"
        )
    if record.id != ".":
        return record.id
    return synthetic_variant_key(
        record.chrom, record.pos, record.ref_allele, record.alt_alleles[alt_index]
    )


@dataclass(frozen=True)
class CaddRecord:
    """One CADD score file row: a variant locus with raw and PHRED scores."""

    chrom: str
    pos: int
    ref_allele: str
    alt_allele: str
    raw_score: float
    phred: float

    def __post_init__(self):
        if self.pos < 1:
            raise ValueError(f"pos must be >= 1, got {self.pos}")
        if self.phred < 0:
            raise ValueError(f"phred must be non-negative, got {self.phred}")
        if not (math.isfinite(self.raw_score) and math.isfinite(self.phred)):
            raise ValueError("scores must be finite")
