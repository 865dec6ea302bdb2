"""RDF layer: terms, vocabulary, record conversion, and serialization."""

from . import vocab
from .convert import (
    cadd_stream_to_triples,
    cadd_subject,
    cadd_to_triples,
    origin_iri,
    variant_to_quads,
)
from .parse import RdfSyntaxError, parse_nquads, parse_turtle
from .serialize import (
    nquads_line,
    serialize_nquads,
    serialize_turtle,
    write_nquads_file,
    write_turtle_file,
)
from .terms import (
    Quad,
    RDF_TYPE,
    Term,
    XSD_DECIMAL,
    XSD_INTEGER,
    XSD_LONG,
    XSD_STRING,
    blank,
    decimal_literal,
    format_decimal,
    int_literal,
    iri,
    literal,
    string_literal,
)
from .vocab import emit_ontology

__all__ = [
    "Quad",
    "RDF_TYPE",
    "RdfSyntaxError",
    "Term",
    "XSD_DECIMAL",
    "XSD_INTEGER",
    "XSD_LONG",
    "XSD_STRING",
    "blank",
    "cadd_stream_to_triples",
    "cadd_subject",
    "cadd_to_triples",
    "decimal_literal",
    "emit_ontology",
    "format_decimal",
    "int_literal",
    "iri",
    "literal",
    "nquads_line",
    "origin_iri",
    "parse_nquads",
    "parse_turtle",
    "serialize_nquads",
    "serialize_turtle",
    "string_literal",
    "variant_to_quads",
    "vocab",
    "write_nquads_file",
    "write_turtle_file",
]
