"""The live results grid the script reads and writes.

This is a separate, mutable copy of the grid: executing the program populates
it from nothing, so section order is what makes constants invisible early and
computed values visible late.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

from ..addresses import AddressError, BoundsRect, CellAddress
from ..model import FormatSpec
from ..values import EnforcedType, TypeConformanceError, coerce_to_type, infer_literal
from .errors import ScriptError


class BoundMethod:
    __slots__ = ("obj", "name")

    def __init__(self, obj, name: str):
        self.obj = obj
        self.name = name

    def call(self, ctx, args: list, kwargs: dict):
        return self.obj.call_method(ctx, self.name, args, kwargs)


def _text_arg(args: list, index: int, what: str) -> str:
    if index >= len(args) or not isinstance(args[index], str):
        raise ScriptError("VALUE", f"expected {what}")
    return args[index]


class RuntimeWorkbook:
    def __init__(self, ctx, name: str = "Workbook"):
        self.ctx = ctx
        self.name = name
        self.sheets: dict[str, RuntimeSheet] = {}
        self.locked = False

    def sheet_names(self) -> list[str]:
        return list(self.sheets.keys())

    def get_sheet(self, name: str) -> "RuntimeSheet":
        sheet = self.sheets.get(name)
        if sheet is None:
            raise ScriptError("NAME", f"no worksheet named {name!r}")
        return sheet

    def get_attr(self, name: str):
        if name in ("add_sheet", "lock", "unlock"):
            return BoundMethod(self, name)
        raise ScriptError("NAME", f"workbook has no attribute {name!r}")

    def call_method(self, ctx, name: str, args: list, kwargs: dict):
        if kwargs:
            raise ScriptError("VALUE", f"{name}() takes no keyword arguments")
        if name == "add_sheet":
            if len(args) != 1:
                raise ScriptError("VALUE", "add_sheet() takes exactly one argument")
            sheet_name = _text_arg(args, 0, "a worksheet name")
            if sheet_name in self.sheets:
                raise ScriptError("VALUE", f"worksheet {sheet_name!r} already exists")
            self.sheets[sheet_name] = RuntimeSheet(self.ctx, sheet_name)
            return None
        if name in ("lock", "unlock"):
            if args:
                raise ScriptError("VALUE", f"{name}() takes no arguments")
            self.locked = name == "lock"
            return None
        raise ScriptError("NAME", f"workbook has no method {name!r}")


class RuntimeSheet:
    def __init__(self, ctx, name: str):
        self.ctx = ctx
        self.name = name
        self.values: dict[tuple[int, int], object] = {}
        self.formats: dict[tuple[int, int], str] = {}
        self.enforced: dict[tuple[int, int], EnforcedType] = {}
        self.constant_cells: set[tuple[int, int]] = set()
        self.overridden: set[tuple[int, int]] = set()

    # value plumbing

    def get_value(self, row: int, col: int):
        return self.values.get((row, col))

    def set_value(self, row: int, col: int, value) -> None:
        from .interp import FunctionValue  # local import avoids a cycle

        if isinstance(value, (FunctionValue, BoundMethod, RuntimeSheet, RuntimeWorkbook, CellHandle)):
            raise ScriptError("TYPE", "this value cannot be stored in a cell")
        key = (row, col)
        enforced = self.enforced.get(key)
        if enforced is not None and value is not None:
            try:
                value = coerce_to_type(value, enforced)
            except TypeConformanceError as exc:
                from ..values import ErrorValue

                value = ErrorValue.of("TYPE", str(exc))
        section = self.ctx.current_section
        if section == "CONSTANTS":
            self.constant_cells.add(key)
        elif section == "POST_FORMULAE" and key in self.constant_cells:
            self.overridden.add(key)
        if value is None:
            self.values.pop(key, None)
        else:
            self.values[key] = value

    def bounds(self) -> BoundsRect:
        return BoundsRect.of(CellAddress(row=r, col=c) for r, c in self.values)

    # attribute protocol

    def get_attr(self, name: str):
        handle = self._cell_handle(name)
        if handle is not None:
            return handle
        if name in ("range", "column", "row", "load_csv"):
            return BoundMethod(self, name)
        raise ScriptError("NAME", f"worksheet has no attribute {name!r}")

    def get_item(self, key) -> "CellHandle":
        if not isinstance(key, str):
            raise ScriptError("TYPE", "worksheet subscripts take a cell address")
        handle = self._cell_handle(key)
        if handle is None:
            raise ScriptError("VALUE", f"invalid cell address {key!r}")
        return handle

    def _cell_handle(self, text: str) -> "CellHandle | None":
        try:
            addr = CellAddress.parse(text)
        except AddressError:
            return None
        return CellHandle(self, addr.row, addr.col)

    def call_method(self, ctx, name: str, args: list, kwargs: dict):
        if name == "range":
            if kwargs or len(args) != 2:
                raise ScriptError("VALUE", "range() takes two cell addresses")
            start = self._parse_addr(_text_arg(args, 0, "a cell address"))
            end = self._parse_addr(_text_arg(args, 1, "a cell address"))
            rows = sorted((start.row, end.row))
            cols = sorted((start.col, end.col))
            ctx.charge((rows[1] - rows[0] + 1) * (cols[1] - cols[0] + 1))
            return [
                self.get_value(r, c)
                for r in range(rows[0], rows[1] + 1)
                for c in range(cols[0], cols[1] + 1)
            ]
        if name == "column":
            if kwargs or len(args) != 1:
                raise ScriptError("VALUE", "column() takes one column letter")
            from ..addresses import column_number

            try:
                col = column_number(_text_arg(args, 0, "a column letter"))
            except AddressError as exc:
                raise ScriptError("VALUE", str(exc)) from None
            rect = self.bounds()
            if rect.empty:
                return []
            ctx.charge(rect.max.row - rect.min.row + 1)
            return [self.get_value(r, col) for r in range(rect.min.row, rect.max.row + 1)]
        if name == "row":
            if kwargs or len(args) != 1 or isinstance(args[0], bool) or not isinstance(args[0], int):
                raise ScriptError("VALUE", "row() takes one row number")
            rect = self.bounds()
            if rect.empty:
                return []
            ctx.charge(rect.max.col - rect.min.col + 1)
            return [self.get_value(args[0], c) for c in range(rect.min.col, rect.max.col + 1)]
        if name == "load_csv":
            return self._load_csv(ctx, args, kwargs)
        raise ScriptError("NAME", f"worksheet has no method {name!r}")

    def _parse_addr(self, text: str) -> CellAddress:
        try:
            return CellAddress.parse(text)
        except AddressError as exc:
            raise ScriptError("VALUE", str(exc)) from None

    def _load_csv(self, ctx, args: list, kwargs: dict):
        header = False
        if kwargs:
            extra = set(kwargs) - {"header"}
            if extra:
                raise ScriptError("VALUE", f"load_csv() got unexpected keyword {extra.pop()!r}")
            header = kwargs.get("header", False)
        if len(args) == 2:
            header = args[1]
        elif len(args) != 1:
            raise ScriptError("VALUE", "load_csv() takes a path and an optional header flag")
        if not isinstance(header, bool):
            raise ScriptError("VALUE", "load_csv() header flag must be True or False")
        path = _text_arg(args, 0, "a file path")
        resolved = ctx.resolve_data_path(path)
        try:
            with open(resolved, "r", encoding="utf-8", newline="") as fh:
                rows = list(csv.reader(fh))
        except OSError as exc:
            raise ScriptError("REF", f"cannot read {path!r}: {exc.strerror or exc}") from None
        except (UnicodeDecodeError, csv.Error) as exc:
            raise ScriptError("VALUE", f"malformed CSV {path!r}: {exc}") from None
        ctx.charge(sum(len(r) for r in rows) + 1)
        self.values.clear()
        out_row = 1
        for i, fields in enumerate(rows):
            if header and i == 0:
                for col, field in enumerate(fields, start=1):
                    self._store_csv_field(out_row, col, field, as_text=True)
                out_row += 1
                continue
            for col, field in enumerate(fields, start=1):
                self._store_csv_field(out_row, col, field, as_text=False)
            out_row += 1
        return None

    def _store_csv_field(self, row: int, col: int, field: str, as_text: bool) -> None:
        if field == "":
            return
        value = field if as_text else infer_literal(field)
        enforced = self.enforced.get((row, col))
        if enforced is not None:
            try:
                value = coerce_to_type(value, enforced)
            except TypeConformanceError as exc:
                from ..values import ErrorValue

                value = ErrorValue.of("TYPE", str(exc))
        self.values[(row, col)] = value


@dataclass
class CellHandle:
    sheet: RuntimeSheet
    row: int
    col: int

    def addr_text(self) -> str:
        return str(CellAddress(row=self.row, col=self.col))

    def get_attr(self, name: str):
        if name == "value":
            return self.sheet.get_value(self.row, self.col)
        if name == "format":
            return self.sheet.formats.get((self.row, self.col))
        if name == "enforced_type":
            enforced = self.sheet.enforced.get((self.row, self.col))
            return None if enforced is None else enforced.value
        raise ScriptError("NAME", f"cells have no attribute {name!r}")

    def set_attr(self, name: str, value) -> None:
        if name == "value":
            self.sheet.set_value(self.row, self.col, value)
            return
        if name == "format":
            if value is None:
                self.sheet.formats.pop((self.row, self.col), None)
                return
            if not isinstance(value, str):
                raise ScriptError("TYPE", "format must be text")
            try:
                spec = FormatSpec.parse(value)
            except ValueError as exc:
                raise ScriptError("VALUE", str(exc)) from None
            self.sheet.formats[(self.row, self.col)] = spec.render()
            return
        if name == "enforced_type":
            if value is None:
                self.sheet.enforced.pop((self.row, self.col), None)
                return
            if not isinstance(value, str) or value not in EnforcedType.__members__:
                raise ScriptError("VALUE", f"unknown enforced type {value!r}")
            self.sheet.enforced[(self.row, self.col)] = EnforcedType(value)
            return
        raise ScriptError("NAME", f"cells have no attribute {name!r}")
