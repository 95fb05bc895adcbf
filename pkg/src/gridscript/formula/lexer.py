"""Formula tokenizer.

Positions are 1-based column offsets into the formula source, which includes
the leading "=". "$" anchors are dropped during lexing, so "=$A$1" and "=A1"
produce identical token streams.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..addresses import AddressError, CellAddress

BUILTIN_FUNCTIONS = (
    "SUM",
    "AVERAGE",
    "MIN",
    "MAX",
    "COUNT",
    "COUNTIF",
    "IF",
    "ABS",
    "ROUND",
    "LEN",
    "CONCAT",
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (column {position})")
        self.message = message
        self.position = position


@dataclass(frozen=True)
class Token:
    kind: str  # NUMBER STRING BOOL IDENT CELL SHEETNAME OP PUNCT EOF
    text: str
    pos: int
    value: object = None


_NUMBER_RE = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_WORD_RE = re.compile(r"[$A-Za-z_][$A-Za-z0-9_]*")
_CELL_RE = re.compile(r"^\$?([A-Za-z]{1,3})\$?([0-9]+)$")

_TWO_CHAR_OPS = ("<>", "<=", ">=")
_ONE_CHAR_OPS = "=<>+-*/^&%"
_PUNCT = "()[],:!"


def tokenize(source: str) -> list[Token]:
    """Tokenize formula source; the text must begin with "="."""
    if not source.startswith("="):
        raise ParseError("formula must begin with '='", 1)
    tokens: list[Token] = []
    i = 1
    n = len(source)
    while i < n:
        ch = source[i]
        pos = i + 1
        if ch in " \t":
            i += 1
            continue
        if ch == '"':
            text, i = _scan_string(source, i)
            tokens.append(Token("STRING", source[pos - 1 : i], pos, text))
            continue
        if ch == "'":
            name, i = _scan_quoted_sheet(source, i)
            tokens.append(Token("SHEETNAME", source[pos - 1 : i], pos, name))
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and source[i + 1].isdigit()):
            m = _NUMBER_RE.match(source, i)
            text = m.group(0)
            value = int(text) if re.fullmatch(r"\d+", text) else float(text)
            tokens.append(Token("NUMBER", text, pos, value))
            i = m.end()
            continue
        if ch == "$" or ch.isalpha() or ch == "_":
            m = _WORD_RE.match(source, i)
            if m is None:  # letters outside A-Z, e.g. accented names
                raise ParseError(f"unexpected character {ch!r}", pos)
            word = m.group(0)
            i = m.end()
            tokens.append(_word_token(word, pos, _peek_after_spaces(source, i)))
            continue
        two = source[i : i + 2]
        if two in _TWO_CHAR_OPS:
            tokens.append(Token("OP", two, pos))
            i += 2
            continue
        if ch in _ONE_CHAR_OPS:
            tokens.append(Token("OP", ch, pos))
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(Token("PUNCT", ch, pos))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", pos)
    tokens.append(Token("EOF", "", n + 1))
    return tokens


def _word_token(word: str, pos: int, next_char: str) -> Token:
    cell = _CELL_RE.match(word)
    if cell and "_" not in word:
        try:
            addr = CellAddress.parse(word)
        except AddressError as exc:
            raise ParseError(str(exc), pos) from None
        return Token("CELL", word, pos, str(addr))
    if "$" in word:
        raise ParseError(f"stray '$' in {word!r}", pos)
    upper = word.upper()
    if upper in ("TRUE", "FALSE"):
        return Token("BOOL", word, pos, upper == "TRUE")
    # Builtin names are case-insensitive, canonicalized to upper case; a
    # word directly before "!" is a sheet name and keeps its exact case.
    if upper in BUILTIN_FUNCTIONS and next_char != "!":
        return Token("IDENT", upper, pos, upper)
    return Token("IDENT", word, pos, word)


def _peek_after_spaces(source: str, i: int) -> str:
    while i < len(source) and source[i] in " \t":
        i += 1
    return source[i] if i < len(source) else ""


def _scan_string(source: str, i: int) -> tuple[str, int]:
    # Double-quote escaping: "" inside a string is a literal quote.
    start = i
    i += 1
    out: list[str] = []
    while i < len(source):
        ch = source[i]
        if ch == '"':
            if i + 1 < len(source) and source[i + 1] == '"':
                out.append('"')
                i += 2
                continue
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise ParseError("unterminated string literal", start + 1)


def _scan_quoted_sheet(source: str, i: int) -> tuple[str, int]:
    start = i
    i += 1
    out: list[str] = []
    while i < len(source):
        ch = source[i]
        if ch == "'":
            if i + 1 < len(source) and source[i + 1] == "'":
                out.append("'")
                i += 2
                continue
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise ParseError("unterminated sheet name", start + 1)
