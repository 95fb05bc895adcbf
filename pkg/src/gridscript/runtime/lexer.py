"""Script tokenizer: line-oriented with INDENT/DEDENT like Python.

Comments run from '#' to end of line. Indentation must use spaces; the
canonical generated form indents by four.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ScriptSyntaxError


@dataclass(frozen=True)
class Token:
    kind: str  # NAME NUMBER STRING OP NEWLINE INDENT DEDENT EOF
    text: str
    line: int
    value: object = None


KEYWORDS = frozenset(
    ["def", "return", "if", "elif", "else", "for", "in", "while", "and", "or", "not", "pass", "True", "False"]
)

_NUMBER_RE = re.compile(r"(\d+\.?\d*|\.\d+)([eE][+-]?\d+)?")
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TWO_CHAR = ("==", "!=", "<=", ">=", "**")
_ONE_CHAR = "=<>+-*/%()[]{},:."

_ESCAPES = {"\\": "\\", '"': '"', "n": "\n", "r": "\r", "t": "\t"}


def tokenize_script(source: str) -> list[Token]:
    tokens: list[Token] = []
    indents = [0]
    lines = source.split("\n")
    for lineno, raw_line in enumerate(lines, start=1):
        if raw_line.endswith("\r"):
            raw_line = raw_line[:-1]
        stripped_for_blank = _strip_comment(raw_line, lineno).rstrip()
        if not stripped_for_blank.strip():
            continue  # blank or comment-only lines carry no tokens
        indent = _measure_indent(raw_line, lineno)
        if indent > indents[-1]:
            indents.append(indent)
            tokens.append(Token("INDENT", "", lineno))
        else:
            while indent < indents[-1]:
                indents.pop()
                tokens.append(Token("DEDENT", "", lineno))
            if indent != indents[-1]:
                raise ScriptSyntaxError("unindent does not match any outer level", lineno)
        _tokenize_line(stripped_for_blank, lineno, tokens)
        tokens.append(Token("NEWLINE", "", lineno))
    last_line = len(lines)
    while len(indents) > 1:
        indents.pop()
        tokens.append(Token("DEDENT", "", last_line))
    tokens.append(Token("EOF", "", last_line))
    return tokens


def _measure_indent(line: str, lineno: int) -> int:
    indent = 0
    for ch in line:
        if ch == " ":
            indent += 1
        elif ch == "\t":
            raise ScriptSyntaxError("tabs are not allowed in indentation", lineno)
        else:
            break
    return indent


def _strip_comment(line: str, lineno: int) -> str:
    in_string = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_string:
            if ch == "\\":
                i += 2
                continue
            if ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "#":
            return line[:i]
        i += 1
    return line


def _tokenize_line(line: str, lineno: int, tokens: list[Token]) -> None:
    i = 0
    n = len(line)
    while i < n:
        ch = line[i]
        if ch in " \t":
            i += 1
            continue
        if ch == '"':
            value, i = _scan_string(line, i, lineno)
            tokens.append(Token("STRING", "", lineno, value))
            continue
        if ch.isdigit() or (ch == "." and i + 1 < n and line[i + 1].isdigit()):
            m = _NUMBER_RE.match(line, i)
            text = m.group(0)
            value = int(text) if re.fullmatch(r"\d+", text) else float(text)
            tokens.append(Token("NUMBER", text, lineno, value))
            i = m.end()
            continue
        if ch.isalpha() or ch == "_":
            m = _NAME_RE.match(line, i)
            tokens.append(Token("NAME", m.group(0), lineno))
            i = m.end()
            continue
        two = line[i : i + 2]
        if two in _TWO_CHAR:
            tokens.append(Token("OP", two, lineno))
            i += 2
            continue
        if ch in _ONE_CHAR:
            tokens.append(Token("OP", ch, lineno))
            i += 1
            continue
        raise ScriptSyntaxError(f"unexpected character {ch!r}", lineno)


def _scan_string(line: str, i: int, lineno: int) -> tuple[str, int]:
    i += 1
    out: list[str] = []
    while i < len(line):
        ch = line[i]
        if ch == "\\":
            if i + 1 >= len(line):
                raise ScriptSyntaxError("dangling escape at end of line", lineno)
            esc = line[i + 1]
            if esc not in _ESCAPES:
                raise ScriptSyntaxError(f"unknown escape \\{esc}", lineno)
            out.append(_ESCAPES[esc])
            i += 2
            continue
        if ch == '"':
            return "".join(out), i + 1
        out.append(ch)
        i += 1
    raise ScriptSyntaxError("unterminated string literal", lineno)
