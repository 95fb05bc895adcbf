"""Translate formula trees into script statements.

Every cell formula becomes exactly one assignment statement. Rendering is
deterministic: single spaces around binary operators, one space after commas
in call argument lists, and grouping parentheses only where the user wrote
them or precedence demands them.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..addresses import CellAddress
from ..values import quote_text
from . import ast

_BIN_PREC = {
    "=": 1, "<>": 1, "<": 1, "<=": 1, ">": 1, ">=": 1,
    "+": 2, "-": 2, "&": 2,
    "*": 3, "/": 3,
    "^": 5,
}
_UNARY_PREC = 4
_ATOM_PREC = 8

_OP_TO_SCRIPT = {
    "=": "==", "<>": "!=", "<": "<", "<=": "<=", ">": ">", ">=": ">=",
    "+": "+", "-": "-", "*": "*", "/": "/", "^": "**",
}


@dataclass(frozen=True)
class CellDep:
    sheet: str
    addr: CellAddress


@dataclass(frozen=True)
class RangeDep:
    sheet: str
    start: CellAddress  # normalized: top-left
    end: CellAddress  # normalized: bottom-right


@dataclass(frozen=True)
class ColumnDep:
    sheet: str
    column: str


@dataclass(frozen=True)
class SheetDep:
    sheet: str


@dataclass(frozen=True)
class TranslationUnit:
    statement_text: str
    dependencies: tuple
    referenced_names: tuple[str, ...]


def translate_formula(node: ast.Node, sheet: str, target: CellAddress) -> TranslationUnit:
    """Render the single assignment statement for a cell formula."""
    text = f"workbook[{quote_text(sheet)}].{target}.value = {render_expression(node, sheet)}"
    return TranslationUnit(
        statement_text=text,
        dependencies=formula_dependencies(node, sheet),
        referenced_names=_referenced_names(node),
    )


def render_expression(node: ast.Node, host_sheet: str, cell_var: str = "_cell") -> str:
    return _render(node, 0, host_sheet, cell_var)


def _render(node: ast.Node, min_prec: int, host: str, cell_var: str) -> str:
    if isinstance(node, ast.NumberLit):
        return repr(node.value) if isinstance(node.value, float) else str(node.value)
    if isinstance(node, ast.TextLit):
        return quote_text(node.value)
    if isinstance(node, ast.BoolLit):
        return "True" if node.value else "False"
    if isinstance(node, ast.ListLit):
        return "[" + ", ".join(_render(item, 0, host, cell_var) for item in node.items) + "]"
    if isinstance(node, ast.CellRef):
        return f"workbook[{quote_text(node.sheet or host)}].{node.addr}.value"
    if isinstance(node, ast.RangeRef):
        return f'workbook[{quote_text(node.sheet or host)}].range("{node.start}","{node.end}")'
    if isinstance(node, ast.ColumnRef):
        return f'workbook[{quote_text(node.sheet or host)}].column("{node.column}")'
    if isinstance(node, ast.SheetRef):
        return f"workbook[{quote_text(node.name)}][{cell_var}].value"
    if isinstance(node, ast.FuncCall):
        args = ", ".join(_render(a, 0, host, cell_var) for a in node.args)
        return f"{node.name}({args})"
    if isinstance(node, ast.Paren):
        return f"({_render(node.inner, 0, host, cell_var)})"
    if isinstance(node, ast.UnaryOp):
        if node.op == "%":
            return f"({_render(node.operand, 0, host, cell_var)} / 100)"
        text = node.op + _render(node.operand, _UNARY_PREC, host, cell_var)
        return f"({text})" if _UNARY_PREC < min_prec else text
    if isinstance(node, ast.BinOp):
        if node.op == "&":
            left = _render(node.left, 0, host, cell_var)
            right = _render(node.right, 0, host, cell_var)
            return f"CONCAT({left}, {right})"
        prec = _BIN_PREC[node.op]
        if node.op == "^":
            left = _render(node.left, prec + 1, host, cell_var)
            right = _render(node.right, prec, host, cell_var)
        else:
            left = _render(node.left, prec, host, cell_var)
            right = _render(node.right, prec + 1, host, cell_var)
        text = f"{left} {_OP_TO_SCRIPT[node.op]} {right}"
        return f"({text})" if prec < min_prec else text
    raise TypeError(f"unknown formula node: {node!r}")


def formula_dependencies(node: ast.Node, host_sheet: str) -> tuple:
    """Cell, range, column and sheet references read by a formula."""
    deps: list = []
    seen: set = set()

    def add(dep) -> None:
        if dep not in seen:
            seen.add(dep)
            deps.append(dep)

    def walk(n: ast.Node) -> None:
        if isinstance(n, ast.CellRef):
            add(CellDep(n.sheet or host_sheet, n.addr))
        elif isinstance(n, ast.RangeRef):
            start = CellAddress(row=min(n.start.row, n.end.row), col=min(n.start.col, n.end.col))
            end = CellAddress(row=max(n.start.row, n.end.row), col=max(n.start.col, n.end.col))
            add(RangeDep(n.sheet or host_sheet, start, end))
        elif isinstance(n, ast.ColumnRef):
            add(ColumnDep(n.sheet or host_sheet, n.column))
        elif isinstance(n, ast.SheetRef):
            add(SheetDep(n.name))
        elif isinstance(n, ast.ListLit):
            for item in n.items:
                walk(item)
        elif isinstance(n, ast.FuncCall):
            for arg in n.args:
                walk(arg)
        elif isinstance(n, ast.BinOp):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, (ast.UnaryOp, ast.Paren)):
            walk(n.operand if isinstance(n, ast.UnaryOp) else n.inner)

    walk(node)
    return tuple(deps)


def _referenced_names(node: ast.Node) -> tuple[str, ...]:
    names: list[str] = []

    def walk(n: ast.Node) -> None:
        if isinstance(n, ast.FuncCall):
            if n.name not in names:
                names.append(n.name)
            for arg in n.args:
                walk(arg)
        elif isinstance(n, ast.BinOp):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, ast.UnaryOp):
            walk(n.operand)
        elif isinstance(n, ast.Paren):
            walk(n.inner)
        elif isinstance(n, ast.ListLit):
            for item in n.items:
                walk(item)

    walk(node)
    return tuple(names)
