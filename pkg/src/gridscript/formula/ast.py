"""Formula syntax tree nodes.

Parenthesised groups are kept as explicit nodes so a formula and its
translation always show the same grouping the user wrote.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..addresses import CellAddress


class Node:
    __slots__ = ()


@dataclass(frozen=True)
class NumberLit(Node):
    value: float | int


@dataclass(frozen=True)
class TextLit(Node):
    value: str


@dataclass(frozen=True)
class BoolLit(Node):
    value: bool


@dataclass(frozen=True)
class ListLit(Node):
    items: tuple[Node, ...]


@dataclass(frozen=True)
class CellRef(Node):
    sheet: str | None
    addr: CellAddress


@dataclass(frozen=True)
class RangeRef(Node):
    sheet: str | None
    start: CellAddress
    end: CellAddress


@dataclass(frozen=True)
class ColumnRef(Node):
    sheet: str | None
    column: str


@dataclass(frozen=True)
class SheetRef(Node):
    # Whole-worksheet operand; only valid in worksheet formulae.
    name: str


@dataclass(frozen=True)
class FuncCall(Node):
    name: str
    args: tuple[Node, ...]


@dataclass(frozen=True)
class BinOp(Node):
    op: str  # one of: = <> < <= > >= + - & * / ^
    left: Node
    right: Node


@dataclass(frozen=True)
class UnaryOp(Node):
    op: str  # prefix: - +  postfix: %
    operand: Node


@dataclass(frozen=True)
class Paren(Node):
    inner: Node
