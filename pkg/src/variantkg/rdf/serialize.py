"""N-Quads and Turtle writers.

Output is byte-stable for a given statement order: no timestamps, fixed
escaping, and deterministic grouping, so converted files can be compared
and hashed across runs.
"""

from __future__ import annotations

import re
from typing import IO, Iterable, Mapping

from . import vocab
from .terms import Quad, RDF_TYPE, Term, XSD_DECIMAL, XSD_INTEGER

_ESCAPES = {
    "\\": "\\\\",
    '"': '\\"',
    "\n": "\\n",
    "\r": "\\r",
    "\t": "\\t",
}

_INTEGER_RE = re.compile(r"[+-]?[0-9]+\Z")
_DECIMAL_RE = re.compile(r"[+-]?[0-9]*\.[0-9]+\Z")
_PN_LOCAL_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")


def escape_literal(value: str) -> str:
    return "".join(_ESCAPES.get(ch, ch) for ch in value)


def nquads_term(term: Term) -> str:
    if term.kind == "iri":
        return f"<{term.value}>"
    if term.kind == "blank":
        return f"_:{term.value}"
    rendered = f'"{escape_literal(term.value)}"'
    if term.language:
        return f"{rendered}@{term.language}"
    if term.datatype:
        return f"{rendered}^^<{term.datatype}>"
    return rendered


def nquads_line(quad: Quad) -> str:
    if quad.graph is None:
        raise ValueError("quad missing graph term")
    return (
        f"{nquads_term(quad.subject)} {nquads_term(quad.predicate)} "
        f"{nquads_term(quad.object)} {nquads_term(quad.graph)} ."
    )


def serialize_nquads(quads: Iterable[Quad], sink: IO[str]) -> int:
    """Write one N-Quads line per statement; returns the line count."""
    count = 0
    for quad in quads:
        sink.write(nquads_line(quad))
        sink.write("\n")
        count += 1
    return count


def turtle_term(term: Term, prefixes: Mapping[str, str]) -> str:
    if term.kind == "blank":
        return f"_:{term.value}"
    if term.kind == "iri":
        best_prefix = None
        best_len = -1
        for prefix, namespace in prefixes.items():
            if term.value.startswith(namespace) and len(namespace) > best_len:
                local = term.value[len(namespace):]
                if _PN_LOCAL_RE.fullmatch(local):
                    best_prefix, best_len = f"{prefix}:{local}", len(namespace)
        return best_prefix if best_prefix is not None else f"<{term.value}>"
    if term.datatype == XSD_INTEGER and _INTEGER_RE.fullmatch(term.value):
        return term.value
    if term.datatype == XSD_DECIMAL and _DECIMAL_RE.fullmatch(term.value):
        return term.value
    rendered = f'"{escape_literal(term.value)}"'
    if term.language:
        return f"{rendered}@{term.language}"
    if term.datatype:
        return f"{rendered}^^{turtle_term(Term('iri', term.datatype), prefixes)}"
    return rendered


def serialize_turtle(
    quads: Iterable[Quad], prefixes: Mapping[str, str], sink: IO[str]
) -> int:
    """Write graph-less statements as compact Turtle.

    Statements group by subject in first-appearance order.  Within a block
    "a" (rdf:type) comes first and the remaining predicates sort by their
    rendered form; repeated predicates join objects with ",".  Duplicate
    statements collapse; returns the number of distinct statements written.
    """
    if "ns1" not in prefixes:
        raise ValueError('prefixes must include "ns1"')
    by_subject: dict[Term, dict[str, list[str]]] = {}
    subject_order: list[Term] = []
    count = 0
    for quad in quads:
        if quad.graph is not None:
            raise ValueError("Turtle statements must be graph-less")
        if quad.subject not in by_subject:
            by_subject[quad.subject] = {}
            subject_order.append(quad.subject)
        rendered_pred = "a" if quad.predicate == RDF_TYPE else turtle_term(quad.predicate, prefixes)
        objects = by_subject[quad.subject].setdefault(rendered_pred, [])
        rendered_obj = turtle_term(quad.object, prefixes)
        if rendered_obj not in objects:
            objects.append(rendered_obj)
            count += 1

    for prefix in sorted(prefixes):
        sink.write(f"@prefix {prefix}: <{prefixes[prefix]}> .\n")
    if prefixes:
        sink.write("\n")
    for subject in subject_order:
        predicates = by_subject[subject]
        names = sorted(predicates, key=lambda p: (p != "a", p))
        lines = []
        for name in names:
            objects = ", ".join(sorted(predicates[name]))
            lines.append(f"{name} {objects}")
        head = turtle_term(subject, prefixes)
        if len(lines) == 1:
            sink.write(f"{head} {lines[0]} .\n")
        else:
            sink.write(f"{head} {lines[0]} ;\n")
            for line in lines[1:-1]:
                sink.write(f"    {line} ;\n")
            sink.write(f"    {lines[-1]} .\n")
    return count


def write_nquads_file(quads: Iterable[Quad], path) -> int:
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        return serialize_nquads(quads, sink)


def write_turtle_file(quads: Iterable[Quad], path, prefixes: Mapping[str, str] | None = None) -> int:
    if prefixes is None:
        prefixes = {"ns1": vocab.BASE}
    with open(path, "w", encoding="utf-8", newline="\n") as sink:
        return serialize_turtle(quads, prefixes, sink)
