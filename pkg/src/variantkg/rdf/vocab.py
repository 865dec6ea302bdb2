"""Ontology vocabulary: namespaces, term constants, and schema statements.

Two namespaces coexist deliberately.  VCF-derived facts use converter-style
IRIs under ``sg://0.99.11/vcf2rdf/`` inside per-accession named graphs;
CADD-derived facts and the schema itself live under ``http://sg.org/``.
"""

from __future__ import annotations

from .terms import (
    Quad,
    RDF_PROPERTY,
    RDF_TYPE,
    RDFS_CLASS,
    RDFS_DOMAIN,
    RDFS_RANGE,
    RDFS_SUBCLASSOF,
    Term,
    XSD_INT,
    XSD_LONG,
    XSD_STRING,
    iri,
)

BASE = "http://sg.org/"
WIKIDATA_NS = "http://www.wikidata.org/entity/"


def sg(name: str) -> Term:
    return iri(BASE + name)


# Properties
HAS_POS = sg("has_pos")
HAS_REF_GENOME = sg("has_ref_genome")
HAS_ALT_GENOME = sg("has_alt_genome")
HAS_VARIANT_ID = sg("has_variant_id")
HAS_VARIANT = sg("has_variant")
HAS_CADD_SCORES = sg("has_cadd_scores")
HAS_CHROMOSOME_NUMBER = sg("has_chromosome_number")
HAS_NUMBER = sg("has_number")
PHRED = sg("phred")
RAW_SCORE = sg("raw_score")

# Classes
CHROMOSOME = sg("Chromosome")
CHROMOSOME_NUMBER = sg("chromosome_number")
VARIANT = sg("Variant")
CADD = sg("CADD")
ORIGIN = sg("Origin")
XREF_LINK = sg("xref_link")
URL_LINK = sg("url_link")
STUDY_ATTRIBUTE = sg("study_attribute")
RUN_ATTRIBUTE = sg("run_attribute")
EXPERIMENT_ATTRIBUTE = sg("experiment_attribute")

# Instance typing of converted CADD variants, as serialized (lowercase)
VARIANT_NODE_TYPE = sg("variant")

WIKIDATA_CHROMOSOME = iri(WIKIDATA_NS + "Q37748")

# External / converter vocabulary
FALDO_POSITION = iri("http://biohackathon.org/resource/faldo#position")

VCF2RDF_BASE = "sg://0.99.11/vcf2rdf/"
VCF2RDF_REF = iri(VCF2RDF_BASE + "variant/REF")
VCF2RDF_ALT = iri(VCF2RDF_BASE + "variant/ALT")
VCF2RDF_ID = iri(VCF2RDF_BASE + "variant/ID")
VCF2RDF_QUAL = iri(VCF2RDF_BASE + "variant/QUAL")
VCF2RDF_FILTER = iri(VCF2RDF_BASE + "variant/FILTER")

ANN_FIELDS = ("allele", "effect", "putative_impact", "gene_name", "gene_id")
ANN_PREDICATES = {f: iri(VCF2RDF_BASE + "info/ANN/" + f) for f in ANN_FIELDS}


def sequence_iri(allele: str) -> Term:
    return iri(VCF2RDF_BASE + "sequence/" + allele)


def accession_graph(accession: str) -> Term:
    """Named graph for one run: sg://<accession>."""
    if not accession:
        raise ValueError("accession may not be empty")
    return iri("sg://" + accession)


def chromosome_node(chrom: str) -> Term:
    return iri(BASE + "chromosome/" + chrom)


XSD_INT_TERM = iri(XSD_INT)
XSD_LONG_TERM = iri(XSD_LONG)
XSD_STRING_TERM = iri(XSD_STRING)

# Every predicate the converters may emit; the schema audit checks
# emitted statements against this set.
KNOWN_PREDICATES = frozenset(
    t.value
    for t in (
        RDF_TYPE,
        RDFS_DOMAIN,
        RDFS_RANGE,
        RDFS_SUBCLASSOF,
        HAS_POS,
        HAS_REF_GENOME,
        HAS_ALT_GENOME,
        HAS_VARIANT_ID,
        HAS_VARIANT,
        HAS_CADD_SCORES,
        HAS_CHROMOSOME_NUMBER,
        HAS_NUMBER,
        PHRED,
        RAW_SCORE,
        FALDO_POSITION,
        VCF2RDF_REF,
        VCF2RDF_ALT,
        VCF2RDF_ID,
        VCF2RDF_QUAL,
        VCF2RDF_FILTER,
        *ANN_PREDICATES.values(),
    )
)

DEFAULT_PREFIXES = {
    "ns1": BASE,
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "rdfs": "http://www.w3.org/2000/01/rdf-schema#",
    "xsd": "http://www.w3.org/2001/XMLSchema#",
    "wd": WIKIDATA_NS,
}


def emit_ontology() -> list[Quad]:
    """Schema statements for the knowledge-graph vocabulary.

    Covers every class and property declaration row (type, subClassOf,
    domain, range) plus the auxiliary metadata classes.  Deterministic:
    repeated calls return identical statement lists.
    """

    def t(s: Term, p: Term, o: Term) -> Quad:
        return Quad(s, p, o)

    statements = [
        t(CHROMOSOME, RDF_TYPE, WIKIDATA_CHROMOSOME),
        t(CHROMOSOME, RDFS_SUBCLASSOF, WIKIDATA_CHROMOSOME),
        t(HAS_CHROMOSOME_NUMBER, RDF_TYPE, RDF_PROPERTY),
        t(HAS_CHROMOSOME_NUMBER, RDFS_DOMAIN, CHROMOSOME),
        t(HAS_CHROMOSOME_NUMBER, RDFS_RANGE, CHROMOSOME_NUMBER),
        t(CHROMOSOME_NUMBER, RDF_TYPE, RDFS_CLASS),
        t(HAS_NUMBER, RDF_TYPE, RDF_PROPERTY),
        t(HAS_NUMBER, RDFS_DOMAIN, CHROMOSOME_NUMBER),
        t(HAS_NUMBER, RDFS_RANGE, XSD_INT_TERM),
        t(VARIANT, RDF_TYPE, RDFS_CLASS),
        t(HAS_VARIANT, RDF_TYPE, RDF_PROPERTY),
        t(HAS_VARIANT, RDFS_DOMAIN, CHROMOSOME),
        t(HAS_VARIANT, RDFS_RANGE, VARIANT),
        t(HAS_POS, RDF_TYPE, RDF_PROPERTY),
        t(HAS_POS, RDFS_DOMAIN, VARIANT),
        t(HAS_POS, RDFS_RANGE, XSD_INT_TERM),
        t(HAS_REF_GENOME, RDF_TYPE, RDF_PROPERTY),
        t(HAS_REF_GENOME, RDFS_DOMAIN, VARIANT),
        t(HAS_REF_GENOME, RDFS_RANGE, XSD_STRING_TERM),
        t(HAS_ALT_GENOME, RDF_TYPE, RDF_PROPERTY),
        t(HAS_ALT_GENOME, RDFS_DOMAIN, VARIANT),
        t(HAS_ALT_GENOME, RDFS_RANGE, XSD_STRING_TERM),
        t(CADD, RDF_TYPE, RDFS_CLASS),
        t(HAS_CADD_SCORES, RDF_TYPE, RDF_PROPERTY),
        t(HAS_CADD_SCORES, RDFS_DOMAIN, VARIANT),
        t(HAS_CADD_SCORES, RDFS_RANGE, CADD),
        t(RAW_SCORE, RDF_TYPE, RDF_PROPERTY),
        t(RAW_SCORE, RDFS_DOMAIN, CADD),
        t(RAW_SCORE, RDFS_RANGE, XSD_LONG_TERM),
        t(PHRED, RDF_TYPE, RDF_PROPERTY),
        t(PHRED, RDFS_DOMAIN, CADD),
        t(PHRED, RDFS_RANGE, XSD_LONG_TERM),
        # Variant identifier property and auxiliary metadata classes
        t(HAS_VARIANT_ID, RDF_TYPE, RDF_PROPERTY),
        t(HAS_VARIANT_ID, RDFS_DOMAIN, VARIANT),
        t(HAS_VARIANT_ID, RDFS_RANGE, XSD_STRING_TERM),
        t(ORIGIN, RDF_TYPE, RDFS_CLASS),
        t(XREF_LINK, RDF_TYPE, RDFS_CLASS),
        t(URL_LINK, RDF_TYPE, RDFS_CLASS),
        t(STUDY_ATTRIBUTE, RDF_TYPE, RDFS_CLASS),
        t(RUN_ATTRIBUTE, RDF_TYPE, RDFS_CLASS),
        t(EXPERIMENT_ATTRIBUTE, RDF_TYPE, RDFS_CLASS),
    ]
    return statements
