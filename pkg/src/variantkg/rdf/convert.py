"""Convert parsed variant and CADD records into RDF statements.

VCF-derived statements land in the accession's named graph with one origin
subject per (record, ALT allele); CADD-derived statements are graph-less
triples under http://sg.org/ with ordinal subjects per (accession,
chromosome).  The two sides use different subject schemes and join later on
(accession, chrom, pos, ref, alt).
"""

from __future__ import annotations

import hashlib
from typing import Iterable, Iterator

from ..model import CaddRecord, VariantRecord
from . import vocab
from .terms import Quad, RDF_TYPE, Term, decimal_literal, int_literal, iri, string_literal


def origin_iri(record: VariantRecord, alt_index: int) -> Term:
    """Deterministic origin subject for one (record, ALT allele) pair.

    The host part is the 32-hex MD5 digest of the tab-joined canonical
    string "accession\\tchrom\\tpos\\tref\\talt"; the fragment after "@" is
    the allele index.  Identical inputs always produce identical IRIs.
    """
    if not 0 <= alt_index < len(record.alt_alleles):
        raise IndexError(
            f"alt_index {alt_index} out of range for {len(record.alt_alleles)} alleles"
        )
    canonical = "\t".join(
        (
            record.accession,
            record.chrom,
            str(record.pos),
            record.ref_allele,
            record.alt_alleles[alt_index],
        )
    )
    digest = hashlib.md5(canonical.encode("utf-8")).hexdigest()
    return iri(f"origin://{digest}@{alt_index}")


def variant_to_quads(record: VariantRecord, graph: Term | None = None) -> list[Quad]:
    """Named-graph statements for one variant record.

    Per ALT allele: position (integer literal), REF and ALT sequence IRIs,
    QUAL (decimal; "." placeholder literal when missing), FILTER, and the
    chromosome linkage pair -- 7 statements.  When the ID column is present
    it adds one statement on the first allele's subject.  Each parsed ANN
    entry adds 5 statements, attached to the subject of the allele it
    annotates (first allele when no allele matches).
    """
    if graph is None:
        graph = vocab.accession_graph(record.accession)
    quads: list[Quad] = []
    chrom_node = vocab.chromosome_node(record.chrom)
    subjects: list[Term] = []
    for index, alt in enumerate(record.alt_alleles):
        subject = origin_iri(record, index)
        subjects.append(subject)
        if record.qual is None:
            qual_term = string_literal(".")
        else:
            qual_term = decimal_literal(record.qual)
        quads.extend(
            (
                Quad(subject, vocab.FALDO_POSITION, int_literal(record.pos), graph),
                Quad(subject, vocab.VCF2RDF_REF, vocab.sequence_iri(record.ref_allele), graph),
                Quad(subject, vocab.VCF2RDF_ALT, vocab.sequence_iri(alt), graph),
                Quad(subject, vocab.VCF2RDF_QUAL, qual_term, graph),
                Quad(subject, vocab.VCF2RDF_FILTER, string_literal(record.filter), graph),
                Quad(chrom_node, vocab.HAS_VARIANT, subject, graph),
                Quad(chrom_node, vocab.HAS_CHROMOSOME_NUMBER, string_literal(record.chrom), graph),
            )
        )
    if record.id != ".":
        quads.append(Quad(subjects[0], vocab.VCF2RDF_ID, string_literal(record.id), graph))
    alt_position = {alt: i for i, alt in enumerate(record.alt_alleles)}
    for annotation in record.annotations:
        subject = subjects[alt_position.get(annotation.allele, 0)]
        for field in vocab.ANN_FIELDS:
            value = getattr(annotation, field)
            quads.append(Quad(subject, vocab.ANN_PREDICATES[field], string_literal(value), graph))
    return quads


def cadd_subject(accession: str, chrom: str, ordinal: int) -> Term:
    return iri(f"{vocab.BASE}{accession}/{chrom}/variant{ordinal}")


def cadd_to_triples(record: CaddRecord, accession: str, ordinal: int) -> list[Quad]:
    """Graph-less triples for one CADD score row.

    ``ordinal`` is the 1-based position of the variant within its
    (accession, chromosome) stream and names the subject
    http://sg.org/<accession>/<chrom>/variant<ordinal>; the score node
    appends "/cadd".
    """
    if ordinal < 1:
        raise ValueError(f"ordinal must be >= 1, got {ordinal}")
    subject = cadd_subject(accession, record.chrom, ordinal)
    scores = iri(subject.value + "/cadd")
    return [
        Quad(subject, RDF_TYPE, vocab.VARIANT_NODE_TYPE),
        Quad(subject, vocab.HAS_POS, int_literal(record.pos)),
        Quad(subject, vocab.HAS_REF_GENOME, string_literal(record.ref_allele)),
        Quad(subject, vocab.HAS_ALT_GENOME, string_literal(record.alt_allele)),
        Quad(subject, vocab.HAS_CADD_SCORES, scores),
        Quad(scores, RDF_TYPE, vocab.CADD),
        Quad(scores, vocab.RAW_SCORE, decimal_literal(record.raw_score)),
        Quad(scores, vocab.PHRED, decimal_literal(record.phred)),
    ]


def cadd_stream_to_triples(records: Iterable[CaddRecord], accession: str) -> Iterator[Quad]:
    """Convert a CADD record stream, assigning per-chromosome ordinals in file order."""
    counters: dict[str, int] = {}
    for record in records:
        ordinal = counters.get(record.chrom, 0) + 1
        counters[record.chrom] = ordinal
        yield from cadd_to_triples(record, accession, ordinal)
