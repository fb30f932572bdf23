"""Lexer for CVL source text.

Produces a flat token sequence plus trivia (comments), which the parser
ignores but the verify harness scans for testing directives.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import SourceLocation
from .errors import LexError

KEYWORDS = {
    "void",
    "bool",
    "int",
    "const",
    "char",
    "true",
    "false",
    "if",
    "else",
    "while",
    "return",
    "std",
    "string",
    "string_view",
}

# Longest first so `==` wins over `=` and `+=` over `+`.
PUNCTUATION = [
    "::",
    "==",
    "!=",
    "+=",
    "<",
    ">",
    "+",
    "-",
    "=",
    "(",
    ")",
    "{",
    "}",
    "[",
    "]",
    ",",
    ";",
    ".",
    "*",
    "&",
]


@dataclass(frozen=True)
class Token:
    kind: str  # "ident", "int", "string", "keyword", "punct", "eof"
    text: str
    loc: SourceLocation

    def __str__(self) -> str:
        return f"{self.kind}({self.text})@{self.loc.line}:{self.loc.column}"


@dataclass(frozen=True)
class Trivia:
    """A comment, attached to the line it starts on."""

    text: str
    loc: SourceLocation


def lex(source: str, filename: str = "<input>") -> tuple[list[Token], list[Trivia]]:
    tokens: list[Token] = []
    trivia: list[Trivia] = []
    pos = 0
    line = 1
    col = 1
    n = len(source)

    def loc() -> SourceLocation:
        return SourceLocation(filename, line, col)

    def advance(count: int) -> None:
        nonlocal pos, line, col
        for _ in range(count):
            if source[pos] == "\n":
                line += 1
                col = 1
            else:
                col += 1
            pos += 1

    while pos < n:
        ch = source[pos]
        if ch in " \t\r\n":
            advance(1)
            continue
        if source.startswith("//", pos):
            start = loc()
            end = source.find("\n", pos)
            end = n if end == -1 else end
            trivia.append(Trivia(source[pos:end], start))
            advance(end - pos)
            continue
        if source.startswith("/*", pos):
            start = loc()
            end = source.find("*/", pos + 2)
            if end == -1:
                raise LexError("unterminated block comment", start)
            trivia.append(Trivia(source[pos : end + 2], start))
            advance(end + 2 - pos)
            continue
        if ch == '"':
            start = loc()
            advance(1)
            chars: list[str] = []
            while True:
                if pos >= n or source[pos] == "\n":
                    raise LexError("unterminated string literal", start)
                c = source[pos]
                if c == '"':
                    advance(1)
                    break
                if c == "\\":
                    if pos + 1 >= n or source[pos + 1] not in ('"', "\\"):
                        raise LexError("unsupported escape sequence", loc())
                    chars.append(source[pos + 1])
                    advance(2)
                    continue
                chars.append(c)
                advance(1)
            tokens.append(Token("string", "".join(chars), start))
            continue
        if ch.isdigit():
            start = loc()
            end = pos
            while end < n and source[end].isdigit():
                end += 1
            tokens.append(Token("int", source[pos:end], start))
            advance(end - pos)
            continue
        if ch.isalpha() or ch == "_":
            start = loc()
            end = pos
            while end < n and (source[end].isalnum() or source[end] == "_"):
                end += 1
            text = source[pos:end]
            kind = "keyword" if text in KEYWORDS else "ident"
            tokens.append(Token(kind, text, start))
            advance(end - pos)
            continue
        for punct in PUNCTUATION:
            if source.startswith(punct, pos):
                tokens.append(Token("punct", punct, loc()))
                advance(len(punct))
                break
        else:
            raise LexError(f"illegal character {ch!r}", loc())

    tokens.append(Token("eof", "", loc()))
    return tokens, trivia
