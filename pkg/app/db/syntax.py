"""
Reader and writer for the knowledge base text format.

The format is a small N-Triples/Turtle hybrid:

- statements `S P O .`, whitespace separated, `#` line comments;
- IRIs in `<...>`, prefixed names `name:local`, `a` for `rdf:type`;
- prefix declarations `@prefix name: <iri> .` and `PREFIX name: <iri>`;
- literals `"lex"` or `"lex"^^datatype` with datatype one of string, integer,
  decimal, boolean, plus bare numbers and `true`/`false`;
- variables `?name` (graph patterns only).

`serialize` writes the canonical form: expanded IRIs, no prefixes, one
statement per line, triples in (subject, predicate, object) order.
"""

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from app.db.terms import (GraphPattern, Iri, Literal, PatternTerm, Triple,
                          TriplePattern, Variable, canonical_order)
from app.helpers.exceptions import (KbSyntaxError, MalformedTermError,
                                    UnknownPrefixError)
from app.models.Datatype import Datatype
from app.models.Vocabulary import Predicate

LOCAL_CHARS = r"[^\s<>\"{}|^`\\]"

TOKEN_PATTERN = re.compile(
    rf"""
    (?P<space>[ \t\r\n]+)
    |(?P<comment>\#[^\n]*)
    |(?P<iri><[^<>"{{}}|^`\\\s]*>)
    |(?P<string>"(?:[^"\\\n]|\\.)*")
    |(?P<datatype_marker>\^\^)
    |(?P<variable>[?$][A-Za-z_][A-Za-z0-9_]*)
    |(?P<at_prefix>@prefix\b)
    |(?P<pname>(?:[A-Za-z][A-Za-z0-9_\-]*)?:(?:{LOCAL_CHARS}*[^\s<>"{{}}|^`\\.])?)
    |(?P<number>[+-]?(?:\d+\.\d+|\.\d+|\d+))
    |(?P<word>[A-Za-z_][A-Za-z0-9_\-]*)
    |(?P<dot>\.)
    """,
    re.VERBOSE,
)

UNESCAPES: dict[str, str] = {
    "\\": "\\",
    "\"": "\"",
    "n": "\n",
    "r": "\r",
    "t": "\t",
}


# region tokens
@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    """
    Split text into tokens, skipping whitespace and comments.

    :raises KbSyntaxError: On a character that starts no token.
    """
    position = 0
    line = 1
    line_start = 0
    while position < len(text):
        match = TOKEN_PATTERN.match(text, position)
        column = position - line_start + 1
        if not match:
            raise KbSyntaxError(f"Unexpected character {text[position]!r}", line, column)

        kind = match.lastgroup or ""
        value = match.group()
        if kind not in ("space", "comment"):
            yield Token(kind, value, line, column)

        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + value.rindex("\n") + 1
        position = match.end()
# endregion


# region parser
class _Parser:
    """Recursive-descent parser over the token stream."""

    def __init__(self, text: str, prefixes: Mapping[str, str], allow_variables: bool):
        self.tokens = list(tokenize(text))
        self.index = 0
        self.prefixes = dict(prefixes)
        self.allow_variables = allow_variables
        self.end_line, self.end_column = _end_position(text)

    def peek(self) -> Token | None:
        return self.tokens[self.index] if self.index < len(self.tokens) else None

    def advance(self) -> Token:
        token = self.peek()
        if token is None:
            raise KbSyntaxError("Unexpected end of input", self.end_line, self.end_column)
        self.index += 1
        return token

    def expect(self, kind: str, what: str) -> Token:
        token = self.advance()
        if token.kind != kind:
            raise KbSyntaxError(
                f"Expected {what}, found {token.text!r}", token.line, token.column
            )
        return token

    def statements(self) -> Iterator[tuple[PatternTerm, PatternTerm, PatternTerm]]:
        while (token := self.peek()) is not None:
            if token.kind == "at_prefix":
                self.advance()
                self.prefix_declaration()
                self.expect("dot", "'.' after @prefix declaration")
            elif token.kind == "word" and token.text.upper() == "PREFIX":
                self.advance()
                self.prefix_declaration()
            else:
                subject = self.term("subject")
                predicate = self.term("predicate")
                object_ = self.term("object")
                self.expect("dot", "'.' at end of statement")
                yield subject, predicate, object_

    def prefix_declaration(self) -> None:
        name_token = self.expect("pname", "prefix name")
        name, _, local = name_token.text.partition(":")
        if local:
            raise KbSyntaxError(
                f"Prefix name must end with ':', found {name_token.text!r}",
                name_token.line, name_token.column,
            )
        iri_token = self.expect("iri", "namespace IRI")
        self.prefixes[name] = self.iri(iri_token.text[1:-1], iri_token).value

    def term(self, position: str) -> PatternTerm:
        token = self.advance()
        match token.kind:
            case "iri":
                return self.iri(token.text[1:-1], token)
            case "pname":
                return self.prefixed_name(token)
            case "variable":
                if not self.allow_variables:
                    raise KbSyntaxError(
                        f"Variables are not allowed in documents: {token.text}",
                        token.line, token.column,
                    )
                return Variable(token.text[1:])
            case "word" if token.text == "a" and position == "predicate":
                return Iri(str(Predicate.TYPE))
            case "string" | "number" | "word" if position == "object":
                return self.literal(token)
            case "string" | "number":
                raise KbSyntaxError(
                    f"Literal not allowed in {position} position", token.line, token.column
                )
        raise KbSyntaxError(
            f"Expected {position}, found {token.text!r}", token.line, token.column
        )

    def iri(self, value: str, token: Token) -> Iri:
        try:
            return Iri(value)
        except ValueError as e:
            raise MalformedTermError(
                f"Malformed IRI <{value}>", token.line, token.column
            ) from e

    def prefixed_name(self, token: Token) -> Iri:
        name, _, local = token.text.partition(":")
        if name not in self.prefixes:
            raise UnknownPrefixError(
                f"Unknown prefix {name + ':'!r}", token.line, token.column
            )
        return self.iri(self.prefixes[name] + local, token)

    def literal(self, token: Token) -> Literal:
        match token.kind:
            case "string":
                lexical = _unescape(token)
                datatype = Datatype.STRING
                marker = self.peek()
                if marker is not None and marker.kind == "datatype_marker":
                    self.advance()
                    datatype_token = self.expect("word", "datatype name")
                    if datatype_token.text not in {member.value for member in Datatype}:
                        raise MalformedTermError(
                            f"Unknown datatype {datatype_token.text!r}",
                            datatype_token.line, datatype_token.column,
                        )
                    datatype = Datatype(datatype_token.text)
            case "number":
                lexical = token.text
                datatype = Datatype.DECIMAL if "." in lexical else Datatype.INTEGER
            case _:
                if token.text not in ("true", "false"):
                    raise KbSyntaxError(
                        f"Expected object, found {token.text!r}", token.line, token.column
                    )
                lexical = token.text
                datatype = Datatype.BOOLEAN

        try:
            return Literal(lexical, datatype)
        except ValueError as e:
            raise MalformedTermError(
                f"Malformed {datatype} literal {lexical!r}", token.line, token.column
            ) from e


def _unescape(token: Token) -> str:
    body = token.text[1:-1]
    chars: list[str] = []
    index = 0
    while index < len(body):
        char = body[index]
        if char == "\\":
            escaped = body[index + 1]
            if escaped not in UNESCAPES:
                raise MalformedTermError(
                    f"Unknown escape sequence \\{escaped}", token.line, token.column + index + 1
                )
            chars.append(UNESCAPES[escaped])
            index += 2
        else:
            chars.append(char)
            index += 1
    return "".join(chars)


def _end_position(text: str) -> tuple[int, int]:
    lines = text.split("\n")
    return len(lines), len(lines[-1]) + 1
# endregion


# region functions
def parse_document(text: str, base_prefixes: Mapping[str, str] | None = None) -> list[Triple]:
    """
    Parse a knowledge base document.

    :param text: Document in the knowledge base text format
    :type text: str
    :param base_prefixes: Prefixes known before the first declaration
    :type base_prefixes: Mapping[str, str] | None
    :return: Triples in document order, duplicates preserved
    :rtype: list[Triple]
    :raises KbSyntaxError: On syntax errors, unknown prefixes or malformed terms
    """
    parser = _Parser(text, base_prefixes or {}, allow_variables=False)
    triples: list[Triple] = []
    for subject, predicate, object_ in parser.statements():
        triples.append(Triple(subject, predicate, object_))  # type: ignore[arg-type]
    return triples


def parse_pattern(text: str, prefixes: Mapping[str, str] | None = None) -> GraphPattern:
    """
    Parse a graph pattern written in the knowledge base syntax with variables.

    :param text: Pattern text, e.g. `?x rdf:type sp:Category-3AHeadscan .`
    :type text: str
    :param prefixes: Prefixes known before the first declaration
    :type prefixes: Mapping[str, str] | None
    :return: The patterns in textual order
    :rtype: GraphPattern
    :raises KbSyntaxError: On syntax errors, unknown prefixes or malformed terms
    """
    parser = _Parser(text, prefixes or {}, allow_variables=True)
    return GraphPattern(tuple(
        TriplePattern(subject, predicate, object_)  # type: ignore[arg-type]
        for subject, predicate, object_ in parser.statements()
    ))


def serialize(triples: Iterable[Triple]) -> str:
    """
    Canonical serialization: one statement per line, sorted, expanded IRIs.

    :return: The document, "" when there are no triples
    :rtype: str
    """
    lines = [triple.n3() for triple in canonical_order(triples)]
    return "".join(f"{line}\n" for line in lines)
# endregion
