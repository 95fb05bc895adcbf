"""Script statement and expression parser."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ScriptSyntaxError
from .lexer import KEYWORDS, Token, tokenize_script


# expressions


class Expr:
    __slots__ = ()


@dataclass(frozen=True)
class Num(Expr):
    value: float | int


@dataclass(frozen=True)
class Str(Expr):
    value: str


@dataclass(frozen=True)
class Bool(Expr):
    value: bool


@dataclass(frozen=True)
class ListExpr(Expr):
    items: tuple[Expr, ...]


@dataclass(frozen=True)
class MapExpr(Expr):
    entries: tuple[tuple[Expr, Expr], ...]


@dataclass(frozen=True)
class Name(Expr):
    ident: str


@dataclass(frozen=True)
class Attr(Expr):
    base: Expr
    name: str


@dataclass(frozen=True)
class Index(Expr):
    base: Expr
    key: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: Expr
    args: tuple[Expr, ...]
    kwargs: tuple[tuple[str, Expr], ...] = ()


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # + - * / % **
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Compare(Expr):
    op: str  # == != < <= > >=
    left: Expr
    right: Expr


@dataclass(frozen=True)
class UnaryOp(Expr):
    op: str  # - +
    operand: Expr


@dataclass(frozen=True)
class BoolOp(Expr):
    op: str  # and or
    left: Expr
    right: Expr


@dataclass(frozen=True)
class NotOp(Expr):
    operand: Expr


# statements


class Stmt:
    __slots__ = ()


@dataclass(frozen=True)
class Assign(Stmt):
    target: Expr  # Name, Attr or Index
    value: Expr
    line: int


@dataclass(frozen=True)
class ExprStmt(Stmt):
    value: Expr
    line: int


@dataclass(frozen=True)
class Return(Stmt):
    value: Expr | None
    line: int


@dataclass(frozen=True)
class Pass(Stmt):
    line: int


@dataclass(frozen=True)
class FuncDef(Stmt):
    name: str
    params: tuple[str, ...]
    body: tuple[Stmt, ...]
    line: int


@dataclass(frozen=True)
class If(Stmt):
    # (condition, body) per branch; the else branch has condition None
    branches: tuple[tuple[Expr | None, tuple[Stmt, ...]], ...]
    line: int


@dataclass(frozen=True)
class For(Stmt):
    var: str
    iterable: Expr
    body: tuple[Stmt, ...]
    line: int


@dataclass(frozen=True)
class While(Stmt):
    cond: Expr
    body: tuple[Stmt, ...]
    line: int


def parse_script(source: str) -> tuple[Stmt, ...]:
    """Parse script text into statements; raises ScriptSyntaxError."""
    return _Parser(tokenize_script(source)).parse_program()


def parse_statement(source: str) -> Stmt:
    """Parse a single simple statement (used by the document loader)."""
    stmts = parse_script(source)
    if len(stmts) != 1:
        raise ScriptSyntaxError("expected exactly one statement", 1)
    return stmts[0]


_COMPARE_OPS = ("==", "!=", "<", "<=", ">", ">=")


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0
        self.func_depth = 0

    # token plumbing

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "EOF":
            self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def at_keyword(self, word: str) -> bool:
        return self.at("NAME", word)

    def match(self, kind: str, text: str | None = None) -> bool:
        if self.at(kind, text):
            self.advance()
            return True
        return False

    def expect(self, kind: str, text: str | None, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            raise ScriptSyntaxError(f"expected {what}", tok.line)
        return self.advance()

    # statements

    def parse_program(self) -> tuple[Stmt, ...]:
        stmts: list[Stmt] = []
        while not self.at("EOF"):
            stmts.append(self.statement())
        return tuple(stmts)

    def statement(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text in ("def", "if", "for", "while"):
            return getattr(self, f"{tok.text}_stmt")()
        stmt = self.simple_statement()
        self.expect("NEWLINE", None, "end of line")
        return stmt

    def simple_statement(self) -> Stmt:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text == "pass":
            self.advance()
            return Pass(line=tok.line)
        if tok.kind == "NAME" and tok.text == "return":
            self.advance()
            if self.func_depth == 0:
                raise ScriptSyntaxError("'return' outside a function", tok.line)
            value = None if self.at("NEWLINE") else self.expression()
            return Return(value=value, line=tok.line)
        if tok.kind == "NAME" and tok.text in ("elif", "else"):
            raise ScriptSyntaxError(f"{tok.text!r} without a matching 'if'", tok.line)
        expr = self.expression()
        if self.at("OP", "="):
            self.advance()
            if not isinstance(expr, (Name, Attr, Index)):
                raise ScriptSyntaxError("cannot assign to this expression", tok.line)
            value = self.expression()
            return Assign(target=expr, value=value, line=tok.line)
        return ExprStmt(value=expr, line=tok.line)

    def block(self) -> tuple[Stmt, ...]:
        self.expect("OP", ":", "':'")
        self.expect("NEWLINE", None, "a new line after ':'")
        self.expect("INDENT", None, "an indented block")
        stmts: list[Stmt] = []
        while not self.at("DEDENT") and not self.at("EOF"):
            stmts.append(self.statement())
        self.expect("DEDENT", None, "the end of the block")
        return tuple(stmts)

    def def_stmt(self) -> Stmt:
        tok = self.advance()
        name = self.name_token("a function name")
        self.expect("OP", "(", "'('")
        params: list[str] = []
        if not self.match("OP", ")"):
            params.append(self.name_token("a parameter name"))
            while self.match("OP", ","):
                params.append(self.name_token("a parameter name"))
            self.expect("OP", ")", "')'")
        if len(set(params)) != len(params):
            raise ScriptSyntaxError("duplicate parameter name", tok.line)
        self.func_depth += 1
        try:
            body = self.block()
        finally:
            self.func_depth -= 1
        return FuncDef(name=name, params=tuple(params), body=body, line=tok.line)

    def if_stmt(self) -> Stmt:
        tok = self.advance()
        branches: list[tuple[Expr | None, tuple[Stmt, ...]]] = []
        cond = self.expression()
        branches.append((cond, self.block()))
        while self.at_keyword("elif"):
            self.advance()
            cond = self.expression()
            branches.append((cond, self.block()))
        if self.at_keyword("else"):
            self.advance()
            branches.append((None, self.block()))
        return If(branches=tuple(branches), line=tok.line)

    def for_stmt(self) -> Stmt:
        tok = self.advance()
        var = self.name_token("a loop variable")
        self.expect("NAME", "in", "'in'")
        iterable = self.expression()
        body = self.block()
        return For(var=var, iterable=iterable, body=body, line=tok.line)

    def while_stmt(self) -> Stmt:
        tok = self.advance()
        cond = self.expression()
        body = self.block()
        return While(cond=cond, body=body, line=tok.line)

    def name_token(self, what: str) -> str:
        tok = self.peek()
        if tok.kind != "NAME" or tok.text in KEYWORDS:
            raise ScriptSyntaxError(f"expected {what}", tok.line)
        self.advance()
        return tok.text

    # expressions

    def expression(self) -> Expr:
        return self.or_expr()

    def or_expr(self) -> Expr:
        node = self.and_expr()
        while self.at_keyword("or"):
            self.advance()
            node = BoolOp("or", node, self.and_expr())
        return node

    def and_expr(self) -> Expr:
        node = self.not_expr()
        while self.at_keyword("and"):
            self.advance()
            node = BoolOp("and", node, self.not_expr())
        return node

    def not_expr(self) -> Expr:
        if self.at_keyword("not"):
            self.advance()
            return NotOp(self.not_expr())
        return self.comparison()

    def comparison(self) -> Expr:
        node = self.arith()
        while self.peek().kind == "OP" and self.peek().text in _COMPARE_OPS:
            op = self.advance().text
            node = Compare(op, node, self.arith())
        return node

    def arith(self) -> Expr:
        node = self.term()
        while self.peek().kind == "OP" and self.peek().text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.peek().kind == "OP" and self.peek().text in ("*", "/", "%"):
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Expr:
        tok = self.peek()
        if tok.kind == "OP" and tok.text in ("-", "+"):
            self.advance()
            return UnaryOp(tok.text, self.factor())
        return self.power()

    def power(self) -> Expr:
        node = self.postfix()
        if self.at("OP", "**"):
            self.advance()
            return BinOp("**", node, self.factor())
        return node

    def postfix(self) -> Expr:
        node = self.atom()
        while True:
            if self.at("OP", "."):
                self.advance()
                tok = self.peek()
                if tok.kind != "NAME":
                    raise ScriptSyntaxError("expected an attribute name after '.'", tok.line)
                self.advance()
                node = Attr(node, tok.text)
            elif self.at("OP", "("):
                node = self.call(node)
            elif self.at("OP", "["):
                self.advance()
                key = self.expression()
                self.expect("OP", "]", "']'")
                node = Index(node, key)
            else:
                return node

    def call(self, func: Expr) -> Expr:
        self.expect("OP", "(", "'('")
        args: list[Expr] = []
        kwargs: list[tuple[str, Expr]] = []
        if not self.match("OP", ")"):
            self.argument(args, kwargs)
            while self.match("OP", ","):
                self.argument(args, kwargs)
            self.expect("OP", ")", "')'")
        return Call(func=func, args=tuple(args), kwargs=tuple(kwargs))

    def argument(self, args: list[Expr], kwargs: list[tuple[str, Expr]]) -> None:
        tok = self.peek()
        if tok.kind == "NAME" and tok.text not in KEYWORDS and self.peek(1).kind == "OP" and self.peek(1).text == "=":
            self.advance()
            self.advance()
            kwargs.append((tok.text, self.expression()))
            return
        if kwargs:
            raise ScriptSyntaxError("positional argument after keyword argument", tok.line)
        args.append(self.expression())

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "NUMBER":
            self.advance()
            return Num(tok.value)
        if tok.kind == "STRING":
            self.advance()
            return Str(tok.value)
        if tok.kind == "NAME":
            if tok.text in ("True", "False"):
                self.advance()
                return Bool(tok.text == "True")
            if tok.text in KEYWORDS:
                raise ScriptSyntaxError(f"unexpected keyword {tok.text!r}", tok.line)
            self.advance()
            return Name(tok.text)
        if tok.kind == "OP" and tok.text == "(":
            self.advance()
            inner = self.expression()
            self.expect("OP", ")", "')'")
            return inner
        if tok.kind == "OP" and tok.text == "[":
            self.advance()
            items: list[Expr] = []
            if not self.match("OP", "]"):
                items.append(self.expression())
                while self.match("OP", ","):
                    items.append(self.expression())
                self.expect("OP", "]", "']'")
            return ListExpr(tuple(items))
        if tok.kind == "OP" and tok.text == "{":
            self.advance()
            entries: list[tuple[Expr, Expr]] = []
            if not self.match("OP", "}"):
                entries.append(self.map_entry())
                while self.match("OP", ","):
                    entries.append(self.map_entry())
                self.expect("OP", "}", "'}'")
            return MapExpr(tuple(entries))
        raise ScriptSyntaxError(
            f"unexpected {tok.text!r}" if tok.text else "unexpected end of input", tok.line
        )

    def map_entry(self) -> tuple[Expr, Expr]:
        key = self.expression()
        self.expect("OP", ":", "':'")
        return key, self.expression()
