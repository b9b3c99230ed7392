"""Lexer for Java source: offset-preserving tokens for the method splitter.

The splitter only needs structure (words, punctuation, comment spans), so
literals are lexed permissively: the exact numeric grammar does not matter
as long as no structural character is swallowed. Offsets always refer to
the original text, which is what makes verbatim method extraction possible.
"""

from __future__ import annotations

import re
from bisect import bisect_right
from dataclasses import dataclass


class ParseError(ValueError):
    """Source text does not lex/parse as a Java compilation unit."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


WORD = "word"
NUMBER = "number"
STRING = "string"
CHAR = "char"
COMMENT = "comment"
PUNCT = "punct"


@dataclass(frozen=True)
class Token:
    kind: str
    start: int
    end: int

    def text(self, source: str) -> str:
        return source[self.start : self.end]


_LEX_RE = re.compile(
    r"""
      (?P<ws>\s+)
    | (?P<comment>//[^\n]* | /\*(?:[^*]|\*(?!/))*\*/)
    | (?P<textblock>\"\"\"(?:\\.|\"(?!\"\")|[^"\\])*\"\"\")
    | (?P<string>"(?:\\.|[^"\\\n])*")
    | (?P<char>'(?:\\.|[^'\\\n])*')
    | (?P<word>(?:\$|[^\W\d])[\w$]*)
    | (?P<number>[0-9][\w.]*)
    | (?P<punct>.)
    """,
    re.VERBOSE | re.DOTALL,
)

# Punctuation that signals an unterminated comment/literal survived the scan.
_BROKEN_LEAD = {'"', "'"}


class LineIndex:
    """Offset -> 1-based line number lookups."""

    def __init__(self, source: str):
        self._starts = [0]
        for m in re.finditer("\n", source):
            self._starts.append(m.end())

    def line_of(self, offset: int) -> int:
        return bisect_right(self._starts, offset)


def lex(source: str) -> list[Token]:
    """Tokenize; raises ParseError on unterminated comments or literals."""
    tokens: list[Token] = []
    lines = None
    pos = 0
    n = len(source)
    for m in _LEX_RE.finditer(source):
        if m.start() != pos:
            break
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        if kind == "punct":
            ch = m.group()
            if ch in _BROKEN_LEAD or (ch == "/" and pos < n and source[pos] == "*"):
                lines = lines or LineIndex(source)
                raise ParseError(lines.line_of(m.start()), f"unterminated literal or comment at {ch!r}")
            tokens.append(Token(PUNCT, m.start(), m.end()))
            continue
        if kind in ("textblock", "string"):
            kind = STRING
        tokens.append(Token(kind, m.start(), m.end()))
    if pos != n:
        lines = lines or LineIndex(source)
        raise ParseError(lines.line_of(pos), "unlexable input")
    return tokens
