"""Readers for the serializations this package writes.

``parse_nquads`` handles general N-Quads/N-Triples lines.  ``parse_turtle``
covers the Turtle subset the writer produces: @prefix declarations, IRIs,
prefixed names, "a", quoted literals with datatype or language tags, bare
integers and decimals, and ";" / "," continuations.
"""

from __future__ import annotations

import re
from typing import Iterable, Iterator

from .terms import Quad, RDF_TYPE, Term, XSD_DECIMAL, XSD_INTEGER, iri, literal

_NQ_TERM_RE = re.compile(
    r"""
    \s*
    (?:
        <(?P<iri>[^>]*)>
      | _:(?P<blank>\S+)
      | "(?P<lit>(?:[^"\\]|\\.)*)"
        (?: \^\^<(?P<dt>[^>]*)> | @(?P<lang>[A-Za-z0-9-]+) )?
      | (?P<dot>\.)
    )
    """,
    re.VERBOSE,
)

_UNESCAPES = {
    "\\": "\\",
    '"': '"',
    "n": "\n",
    "r": "\r",
    "t": "\t",
    "b": "\b",
    "f": "\f",
    "'": "'",
}


class RdfSyntaxError(ValueError):
    pass


def unescape_literal(value: str) -> str:
    out: list[str] = []
    i = 0
    while i < len(value):
        ch = value[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        if i + 1 >= len(value):
            raise RdfSyntaxError("dangling escape in literal")
        nxt = value[i + 1]
        if nxt == "u":
            out.append(chr(int(value[i + 2 : i + 6], 16)))
            i += 6
        elif nxt == "U":
            out.append(chr(int(value[i + 2 : i + 10], 16)))
            i += 10
        elif nxt in _UNESCAPES:
            out.append(_UNESCAPES[nxt])
            i += 2
        else:
            raise RdfSyntaxError(f"unknown escape \\{nxt}")
    return "".join(out)


def parse_nquads(lines: Iterable[str]) -> Iterator[Quad]:
    """Parse N-Quads text; lines with three terms yield graph-less quads."""
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        terms: list[Term] = []
        pos = 0
        saw_dot = False
        while pos < len(stripped):
            match = _NQ_TERM_RE.match(stripped, pos)
            if match is None:
                raise RdfSyntaxError(f"line {lineno}: cannot parse near {stripped[pos:pos+30]!r}")
            pos = match.end()
            if match.group("dot"):
                saw_dot = True
                if stripped[pos:].strip():
                    raise RdfSyntaxError(f"line {lineno}: content after terminating dot")
                break
            if match.group("iri") is not None:
                terms.append(iri(match.group("iri")))
            elif match.group("blank") is not None:
                terms.append(Term("blank", match.group("blank")))
            else:
                terms.append(
                    literal(
                        unescape_literal(match.group("lit")),
                        datatype=match.group("dt"),
                        language=match.group("lang"),
                    )
                )
        if not saw_dot:
            raise RdfSyntaxError(f"line {lineno}: missing terminating dot")
        if len(terms) == 3:
            yield Quad(terms[0], terms[1], terms[2])
        elif len(terms) == 4:
            yield Quad(terms[0], terms[1], terms[2], terms[3])
        else:
            raise RdfSyntaxError(f"line {lineno}: expected 3 or 4 terms, got {len(terms)}")


_TTL_TOKEN_RE = re.compile(
    r"""
    \s*
    (?:
        (?P<comment>\#[^\n]*)
      | (?P<prefix_kw>@prefix)
      | <(?P<iri>[^>]*)>
      | "(?P<lit>(?:[^"\\]|\\.)*)"
        (?: \^\^ (?: <(?P<dtiri>[^>]*)> | (?P<dtpn>[A-Za-z_][\w-]*:[A-Za-z0-9_.-]*) )
          | @(?P<lang>[A-Za-z0-9-]+) )?
      | _:(?P<blank>[A-Za-z0-9_]+)
      | (?P<num>[+-]?[0-9]+(?:\.[0-9]+)?)
      | (?P<pname>(?:[A-Za-z_][\w-]*)?:[A-Za-z0-9_][A-Za-z0-9_.-]*)
      | (?P<pns>(?:[A-Za-z_][\w-]*)?:)
      | (?P<a>a)(?![\w:-])
      | (?P<punct>[.;,])
    )
    """,
    re.VERBOSE,
)


def _tokenize_turtle(text: str) -> list[tuple[str, object]]:
    tokens: list[tuple[str, object]] = []
    pos = 0
    while pos < len(text):
        match = _TTL_TOKEN_RE.match(text, pos)
        if match is None:
            if not text[pos:].strip():
                break
            raise RdfSyntaxError(f"cannot tokenize near {text[pos:pos+30]!r}")
        pos = match.end()
        if match.group("comment"):
            continue
        if match.group("prefix_kw"):
            tokens.append(("@prefix", None))
        elif match.group("iri") is not None:
            tokens.append(("iri", match.group("iri")))
        elif match.group("lit") is not None:
            tokens.append(
                ("literal", (match.group("lit"), match.group("dtiri"), match.group("dtpn"), match.group("lang")))
            )
        elif match.group("blank") is not None:
            tokens.append(("blank", match.group("blank")))
        elif match.group("num") is not None:
            tokens.append(("num", match.group("num")))
        elif match.group("pname") is not None:
            tokens.append(("pname", match.group("pname")))
        elif match.group("pns") is not None:
            tokens.append(("pname", match.group("pns")))
        elif match.group("a") is not None:
            tokens.append(("a", None))
        else:
            tokens.append((match.group("punct"), None))
    return tokens


def parse_turtle(lines: Iterable[str] | str) -> Iterator[Quad]:
    """Parse the Turtle subset emitted by this package into graph-less quads."""
    text = lines if isinstance(lines, str) else "".join(lines)
    tokens = _tokenize_turtle(text)
    prefixes: dict[str, str] = {}

    def expand(pname: str) -> Term:
        prefix, _, local = pname.partition(":")
        if prefix not in prefixes:
            raise RdfSyntaxError(f"undeclared prefix {prefix!r}")
        return iri(prefixes[prefix] + local)

    def term_of(token: tuple[str, object]) -> Term:
        kind, value = token
        if kind == "iri":
            return iri(value)  # type: ignore[arg-type]
        if kind == "pname":
            return expand(value)  # type: ignore[arg-type]
        if kind == "blank":
            return Term("blank", value)  # type: ignore[arg-type]
        if kind == "a":
            return RDF_TYPE
        if kind == "num":
            text = value  # type: ignore[assignment]
            datatype = XSD_DECIMAL if "." in text else XSD_INTEGER
            return literal(text, datatype=datatype)
        if kind == "literal":
            lex, dtiri, dtpn, lang = value  # type: ignore[misc]
            datatype = dtiri
            if dtpn:
                datatype = expand(dtpn).value
            return literal(unescape_literal(lex), datatype=datatype, language=lang)
        raise RdfSyntaxError(f"unexpected token {kind!r}")

    i = 0
    while i < len(tokens):
        kind, _ = tokens[i]
        if kind == "@prefix":
            if i + 3 >= len(tokens) or tokens[i + 1][0] != "pname" or tokens[i + 2][0] != "iri" or tokens[i + 3][0] != ".":
                raise RdfSyntaxError("malformed @prefix declaration")
            pname = tokens[i + 1][1]
            prefix = str(pname).rstrip(":")
            prefixes[prefix] = str(tokens[i + 2][1])
            i += 4
            continue
        subject = term_of(tokens[i])
        i += 1
        while True:
            predicate = term_of(tokens[i])
            i += 1
            while True:
                obj = term_of(tokens[i])
                i += 1
                yield Quad(subject, predicate, obj)
                if i < len(tokens) and tokens[i][0] == ",":
                    i += 1
                    continue
                break
            if i < len(tokens) and tokens[i][0] == ";":
                i += 1
                if i < len(tokens) and tokens[i][0] == ".":
                    i += 1
                    break
                continue
            if i < len(tokens) and tokens[i][0] == ".":
                i += 1
                break
            raise RdfSyntaxError("statement not terminated with '.'")
