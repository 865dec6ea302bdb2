"""RDF term and statement types with typed-literal helpers."""

from __future__ import annotations

from dataclasses import dataclass

XSD = "http://www.w3.org/2001/XMLSchema#"
XSD_INTEGER = XSD + "integer"
XSD_DECIMAL = XSD + "decimal"
XSD_STRING = XSD + "string"
XSD_INT = XSD + "int"
XSD_LONG = XSD + "long"

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"

_FORBIDDEN_IRI_CHARS = set(' <>"{}|^`\\\n\r\t')


@dataclass(frozen=True)
class Term:
    """One RDF term: an absolute IRI, a literal, or a blank node label."""

    kind: str  # "iri" | "literal" | "blank"
    value: str
    datatype: str | None = None
    language: str | None = None

    def __post_init__(self):
        if self.kind not in ("iri", "literal", "blank"):
            raise ValueError(f"unknown term kind {self.kind!r}")
        if self.kind != "literal" and (self.datatype or self.language):
            raise ValueError(f"{self.kind} terms carry no datatype or language")
        if self.datatype and self.language:
            raise ValueError("a literal has either a datatype or a language, not both")
        if self.kind == "iri":
            if ":" not in self.value:
                raise ValueError(f"not an absolute IRI: {self.value!r}")
            if _FORBIDDEN_IRI_CHARS.intersection(self.value):
                raise ValueError(f"IRI contains forbidden characters: {self.value!r}")

    @property
    def is_iri(self) -> bool:
        return self.kind == "iri"


def iri(value: str) -> Term:
    return Term("iri", value)


def blank(label: str) -> Term:
    return Term("blank", label)


def literal(value: str, datatype: str | None = None, language: str | None = None) -> Term:
    return Term("literal", value, datatype, language)


def int_literal(value: int) -> Term:
    return Term("literal", str(int(value)), XSD_INTEGER)


def decimal_literal(value: float) -> Term:
    return Term("literal", format_decimal(value), XSD_DECIMAL)


def string_literal(value: str) -> Term:
    return Term("literal", value)


def format_decimal(value: float) -> str:
    """Render a float as a plain decimal lexical form (no exponent)."""
    text = repr(float(value))
    if "e" in text or "E" in text:
        text = format(float(value), ".17f").rstrip("0")
        if text.endswith("."):
            text += "0"
    if "." not in text:
        text += ".0"
    return text


RDF_TYPE = iri(RDF_NS + "type")
RDF_PROPERTY = iri(RDF_NS + "Property")
RDFS_CLASS = iri(RDFS_NS + "Class")
RDFS_DOMAIN = iri(RDFS_NS + "domain")
RDFS_RANGE = iri(RDFS_NS + "range")
RDFS_SUBCLASSOF = iri(RDFS_NS + "subClassOf")


@dataclass(frozen=True)
class Quad:
    """An RDF statement, optionally inside a named graph.

    ``graph`` is present exactly when the statement targets N-Quads output;
    graph-less statements are Turtle-bound triples.
    """

    subject: Term
    predicate: Term
    object: Term
    graph: Term | None = None

    def __post_init__(self):
        if self.subject.kind == "literal":
            raise ValueError("statement subject may not be a literal")
        if self.predicate.kind != "iri":
            raise ValueError("statement predicate must be an IRI")
        if self.graph is not None and self.graph.kind != "iri":
            raise ValueError("named graph must be an IRI")

    def triple(self) -> "Quad":
        """The same statement without its graph component."""
        if self.graph is None:
            return self
        return Quad(self.subject, self.predicate, self.object)
