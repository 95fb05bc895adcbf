"""Recursive-descent formula parser.

Precedence, loosest first: comparisons; then + - &; then * /; then unary
sign; then ^ (right-associative); postfix % binds tightest.
"""

from __future__ import annotations

import re

from ..addresses import CellAddress
from . import ast
from .lexer import ParseError, Token, tokenize

_COMPARE_OPS = ("=", "<>", "<", "<=", ">", ">=")
_COLUMN_ONLY_RE = re.compile(r"^[A-Za-z]{1,3}$")


def parse_formula(source: str) -> ast.Node:
    """Parse a cell formula ("=..." text) into a syntax tree."""
    return _Parser(tokenize(source), worksheet_mode=False).parse()


def parse_worksheet_formula(source: str) -> ast.Node:
    """Parse a whole-worksheet formula, where bare names denote sheets."""
    return _Parser(tokenize(source), worksheet_mode=True).parse()


class _Parser:
    def __init__(self, tokens: list[Token], worksheet_mode: bool):
        self.tokens = tokens
        self.pos = 0
        self.worksheet_mode = worksheet_mode

    def parse(self) -> ast.Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "EOF":
            raise ParseError(f"unexpected {tok.text!r}", tok.pos)
        return node

    # token helpers

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def match(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            return False
        self.advance()
        return True

    def expect(self, kind: str, text: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind or tok.text != text:
            raise ParseError(f"expected {what}", tok.pos)
        return self.advance()

    # grammar

    def expr(self) -> ast.Node:
        return self.comparison()

    def comparison(self) -> ast.Node:
        node = self.addsub()
        while self.peek().kind == "OP" and self.peek().text in _COMPARE_OPS:
            op = self.advance().text
            node = ast.BinOp(op, node, self.addsub())
        return node

    def addsub(self) -> ast.Node:
        node = self.muldiv()
        while self.peek().kind == "OP" and self.peek().text in ("+", "-", "&"):
            op = self.advance().text
            node = ast.BinOp(op, node, self.muldiv())
        return node

    def muldiv(self) -> ast.Node:
        node = self.unary()
        while self.peek().kind == "OP" and self.peek().text in ("*", "/"):
            op = self.advance().text
            node = ast.BinOp(op, node, self.unary())
        return node

    def unary(self) -> ast.Node:
        tok = self.peek()
        if tok.kind == "OP" and tok.text in ("-", "+"):
            self.advance()
            return ast.UnaryOp(tok.text, self.unary())
        return self.power()

    def power(self) -> ast.Node:
        node = self.postfix()
        if self.peek().kind == "OP" and self.peek().text == "^":
            self.advance()
            return ast.BinOp("^", node, self.unary())
        return node

    def postfix(self) -> ast.Node:
        node = self.primary()
        while self.peek().kind == "OP" and self.peek().text == "%":
            self.advance()
            node = ast.UnaryOp("%", node)
        return node

    def primary(self) -> ast.Node:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return ast.NumberLit(tok.value)
        if tok.kind == "STRING":
            self.advance()
            return ast.TextLit(tok.value)
        if tok.kind == "BOOL":
            self.advance()
            return ast.BoolLit(tok.value)
        if tok.kind == "PUNCT" and tok.text == "(":
            self.advance()
            inner = self.expr()
            self.expect("PUNCT", ")", "')'")
            return ast.Paren(inner)
        if tok.kind == "PUNCT" and tok.text == "[":
            return self.list_literal()
        if tok.kind == "CELL":
            return self.reference(sheet=None)
        if tok.kind == "SHEETNAME":
            return self.sheet_qualified()
        if tok.kind == "IDENT":
            return self.name()
        raise ParseError(f"unexpected {tok.text!r}" if tok.text else "unexpected end of formula", tok.pos)

    def list_literal(self) -> ast.Node:
        self.expect("PUNCT", "[", "'['")
        items: list[ast.Node] = []
        if not self.match("PUNCT", "]"):
            items.append(self.expr())
            while self.match("PUNCT", ","):
                items.append(self.expr())
            self.expect("PUNCT", "]", "']'")
        return ast.ListLit(tuple(items))

    def sheet_qualified(self) -> ast.Node:
        tok = self.advance()
        if self.peek().kind == "PUNCT" and self.peek().text == "!":
            self.advance()
            return self.reference(sheet=tok.value)
        if self.worksheet_mode:
            return ast.SheetRef(tok.value)
        raise ParseError("sheet name must be followed by '!'", tok.pos)

    def name(self) -> ast.Node:
        tok = self.advance()
        word = tok.value
        if word.lower() == "lambda":
            raise ParseError("lambda expressions are not supported in formulae", tok.pos)
        nxt = self.peek()
        if nxt.kind == "PUNCT" and nxt.text == "!":
            self.advance()
            return self.reference(sheet=word)
        if nxt.kind == "PUNCT" and nxt.text == "(":
            if self.worksheet_mode:
                raise ParseError("function calls are not allowed in worksheet formulae", tok.pos)
            return self.call(word)
        if (
            not self.worksheet_mode
            and _COLUMN_ONLY_RE.match(word)
            and nxt.kind == "PUNCT"
            and nxt.text == ":"
            and self.peek(1).kind == "IDENT"
            and _COLUMN_ONLY_RE.match(self.peek(1).value)
        ):
            self.advance()
            other = self.advance()
            if other.value.upper() != word.upper():
                raise ParseError("column ranges must name a single column", other.pos)
            return ast.ColumnRef(None, word.upper())
        if self.worksheet_mode:
            return ast.SheetRef(word)
        raise ParseError(f"{word!r} is not a reference or function call", tok.pos)

    def call(self, name: str) -> ast.Node:
        self.expect("PUNCT", "(", "'('")
        args: list[ast.Node] = []
        if not self.match("PUNCT", ")"):
            args.append(self.expr())
            while self.match("PUNCT", ","):
                args.append(self.expr())
            self.expect("PUNCT", ")", "')'")
        return ast.FuncCall(name, tuple(args))

    def reference(self, sheet: str | None) -> ast.Node:
        tok = self.peek()
        if self.worksheet_mode:
            raise ParseError("cell references are not allowed in worksheet formulae", tok.pos)
        if tok.kind == "IDENT" and _COLUMN_ONLY_RE.match(tok.value):
            self.advance()
            self.expect("PUNCT", ":", "':'")
            other = self.peek()
            if other.kind != "IDENT" or not _COLUMN_ONLY_RE.match(other.value):
                raise ParseError("expected a column letter", other.pos)
            self.advance()
            if other.value.upper() != tok.value.upper():
                raise ParseError("column ranges must name a single column", other.pos)
            return ast.ColumnRef(sheet, tok.value.upper())
        if tok.kind != "CELL":
            raise ParseError("expected a cell or column reference", tok.pos)
        self.advance()
        start = CellAddress.parse(tok.value)
        if self.peek().kind == "PUNCT" and self.peek().text == ":":
            self.advance()
            end_tok = self.peek()
            if end_tok.kind != "CELL":
                raise ParseError("expected a cell address after ':'", end_tok.pos)
            self.advance()
            return ast.RangeRef(sheet, start, CellAddress.parse(end_tok.value))
        return ast.CellRef(sheet, start)
