"""The grid document model.

Workbook snapshots are immutable: every mutation returns a new Workbook.
Worksheets hold a sparse cell map; a cell exists only while it has stored
content, so absence is what encodes emptiness.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field, replace

from .addresses import BoundsRect, CellAddress
from .errors import (
    DerivedCycleError,
    DerivedSheetError,
    LockedError,
    SheetInUseError,
    UnknownSheetError,
)
from .formula import SheetDep, formula_dependencies, parse_worksheet_formula
from .values import EnforcedType, coerce_to_type, infer_literal


class SectionKind(enum.Enum):
    IMPORTS = "IMPORTS"
    PRE_CONSTANTS = "PRE_CONSTANTS"
    CONSTANTS = "CONSTANTS"
    PRE_FORMULAE = "PRE_FORMULAE"
    FORMULAE = "FORMULAE"
    POST_FORMULAE = "POST_FORMULAE"

    @property
    def editable(self) -> bool:
        return self in _EDITABLE_KINDS


_EDITABLE_KINDS = frozenset(
    {SectionKind.PRE_CONSTANTS, SectionKind.PRE_FORMULAE, SectionKind.POST_FORMULAE}
)

SECTION_ORDER = (
    SectionKind.IMPORTS,
    SectionKind.PRE_CONSTANTS,
    SectionKind.CONSTANTS,
    SectionKind.PRE_FORMULAE,
    SectionKind.FORMULAE,
    SectionKind.POST_FORMULAE,
)


@dataclass(frozen=True)
class Constant:
    value: object


@dataclass(frozen=True)
class Formula:
    source: str  # verbatim text, beginning with "="


_ALIGNMENTS = ("left", "right", "center")


@dataclass(frozen=True)
class FormatSpec:
    """Display formatting; rendered canonically as e.g. "bold;align=right"."""

    bold: bool = False
    align: str | None = None
    number_format: str | None = None

    def __post_init__(self) -> None:
        if self.align is not None and self.align not in _ALIGNMENTS:
            raise ValueError(f"unknown alignment {self.align!r}")

    @property
    def empty(self) -> bool:
        return not self.bold and self.align is None and self.number_format is None

    def render(self) -> str:
        parts = []
        if self.bold:
            parts.append("bold")
        if self.align is not None:
            parts.append(f"align={self.align}")
        if self.number_format is not None:
            parts.append(f"number={self.number_format}")
        return ";".join(parts)

    @classmethod
    def parse(cls, text: str) -> "FormatSpec":
        bold = False
        align = None
        number_format = None
        for part in text.split(";"):
            part = part.strip()
            if not part:
                continue
            if part == "bold":
                bold = True
            elif part.startswith("align="):
                align = part[len("align="):]
            elif part.startswith("number="):
                number_format = part[len("number="):]
            else:
                raise ValueError(f"unknown format component {part!r}")
        return cls(bold=bold, align=align, number_format=number_format)


@dataclass(frozen=True)
class Cell:
    content: Constant | Formula
    enforced_type: EnforcedType | None = None
    format: FormatSpec | None = None


@dataclass(frozen=True)
class DataSource:
    """A CSV file feeding a derived-by-import worksheet."""

    path: str
    target_sheet: str
    has_header: bool = False


@dataclass(frozen=True)
class Worksheet:
    name: str
    cells: dict[CellAddress, Cell] = field(default_factory=dict)
    worksheet_formula: str | None = None

    @property
    def derived(self) -> bool:
        return self.worksheet_formula is not None

    def cell(self, addr: CellAddress | str) -> Cell | None:
        return self.cells.get(_addr(addr))

    def bounds(self) -> BoundsRect:
        """Minimal rectangle over non-empty stored cells."""
        return BoundsRect.of(self.cells.keys())


def _addr(addr: CellAddress | str) -> CellAddress:
    return addr if isinstance(addr, CellAddress) else CellAddress.parse(addr)


@dataclass(frozen=True)
class UserSections:
    pre_constants: str = ""
    pre_formulae: str = ""
    post_formulae: str = ""

    def get(self, kind: SectionKind) -> str:
        return {
            SectionKind.PRE_CONSTANTS: self.pre_constants,
            SectionKind.PRE_FORMULAE: self.pre_formulae,
            SectionKind.POST_FORMULAE: self.post_formulae,
        }[kind]


_MARKER_LIKE_RE = re.compile(r"^\s*#===\s*SECTION:", re.MULTILINE)


@dataclass(frozen=True)
class Workbook:
    name: str = "Workbook"
    sheets: tuple[Worksheet, ...] = ()
    user_sections: UserSections = field(default_factory=UserSections)
    data_sources: tuple[DataSource, ...] = ()
    locked: bool = False

    @classmethod
    def new(cls, name: str = "Workbook", sheet_names: tuple[str, ...] = ("Sheet1",)) -> "Workbook":
        return cls(name=name, sheets=tuple(Worksheet(n) for n in sheet_names))

    # lookups

    def sheet_names(self) -> tuple[str, ...]:
        return tuple(ws.name for ws in self.sheets)

    def sheet(self, name: str) -> Worksheet:
        for ws in self.sheets:
            if ws.name == name:
                return ws
        raise UnknownSheetError(f"no worksheet named {name!r}")

    def has_sheet(self, name: str) -> bool:
        return any(ws.name == name for ws in self.sheets)

    def import_targets(self) -> frozenset[str]:
        return frozenset(ds.target_sheet for ds in self.data_sources)

    def _replace_sheet(self, updated: Worksheet) -> "Workbook":
        sheets = tuple(updated if ws.name == updated.name else ws for ws in self.sheets)
        return replace(self, sheets=sheets)

    # mutations (each returns a new snapshot)

    def add_sheet(self, name: str) -> "Workbook":
        if not name:
            raise ValueError("worksheet name must be non-empty")
        if self.has_sheet(name):
            raise SheetInUseError(f"worksheet {name!r} already exists")
        return replace(self, sheets=self.sheets + (Worksheet(name),))

    def set_cell(self, sheet: str, addr: CellAddress | str, raw: str) -> "Workbook":
        """Apply a raw grid edit: "=..." stores a formula, "" deletes,
        anything else stores an inferred constant."""
        ws = self.sheet(sheet)
        address = _addr(addr)
        if ws.derived or ws.name in self.import_targets():
            raise DerivedSheetError(f"worksheet {ws.name!r} is derived; its cells cannot be edited")
        existing = ws.cells.get(address)
        is_formula_edit = raw.startswith("=") or (existing is not None and isinstance(existing.content, Formula))
        if self.locked and is_formula_edit:
            raise LockedError("workbook is locked; formulae cannot be changed")
        cells = dict(ws.cells)
        if raw == "":
            cells.pop(address, None)
            return self._replace_sheet(replace(ws, cells=cells))
        if raw.startswith("="):
            if "\n" in raw or "\r" in raw:
                raise ValueError("formula text must be a single line")
            content: Constant | Formula = Formula(raw)
        else:
            value = infer_literal(raw)
            if existing is not None and existing.enforced_type is not None:
                if existing.enforced_type is EnforcedType.TEXT:
                    value = raw  # typed entries stay verbatim under TEXT
                else:
                    value = coerce_to_type(value, existing.enforced_type)
            content = Constant(value)
        if existing is not None:
            cells[address] = replace(existing, content=content)
        else:
            cells[address] = Cell(content=content)
        return self._replace_sheet(replace(ws, cells=cells))

    def set_format(self, sheet: str, addr: CellAddress | str, spec: FormatSpec | None) -> "Workbook":
        ws = self.sheet(sheet)
        address = _addr(addr)
        existing = ws.cells.get(address)
        if existing is None:
            raise ValueError(f"cannot format empty cell {address}")
        if spec is not None and spec.empty:
            spec = None
        cells = dict(ws.cells)
        cells[address] = replace(existing, format=spec)
        return self._replace_sheet(replace(ws, cells=cells))

    def set_enforced_type(self, sheet: str, addr: CellAddress | str, enforced: EnforcedType | None) -> "Workbook":
        """Attach a type to a stored cell, coercing any stored constant."""
        if self.locked:
            raise LockedError("workbook is locked; cell types cannot be changed")
        ws = self.sheet(sheet)
        address = _addr(addr)
        existing = ws.cells.get(address)
        if existing is None:
            raise ValueError(f"cannot set a type on empty cell {address}")
        content = existing.content
        if enforced is not None and isinstance(content, Constant):
            content = Constant(coerce_to_type(content.value, enforced))
        cells = dict(ws.cells)
        cells[address] = replace(existing, content=content, enforced_type=enforced)
        return self._replace_sheet(replace(ws, cells=cells))

    def with_user_section(self, kind: SectionKind, text: str) -> "Workbook":
        if self.locked:
            raise LockedError("workbook is locked; user sections cannot be changed")
        if not kind.editable:
            raise ValueError(f"section {kind.value} is generated and cannot be edited")
        text = text.replace("\r\n", "\n")
        if _MARKER_LIKE_RE.search(text):
            raise ValueError("user code may not contain section marker lines")
        if text and not text.endswith("\n"):
            text += "\n"
        fields = {
            SectionKind.PRE_CONSTANTS: "pre_constants",
            SectionKind.PRE_FORMULAE: "pre_formulae",
            SectionKind.POST_FORMULAE: "post_formulae",
        }
        sections = replace(self.user_sections, **{fields[kind]: text})
        return replace(self, user_sections=sections)

    def set_worksheet_formula(self, sheet: str, source: str | None) -> "Workbook":
        """Attach or clear a whole-worksheet formula like "=Balances * Rates".

        The target sheet is created when missing; it must hold no user cells
        and must not be an import target. Cycles between derived sheets are
        rejected here, before anything is generated.
        """
        if self.locked:
            raise LockedError("workbook is locked; worksheet formulae cannot be changed")
        wb = self
        if not wb.has_sheet(sheet):
            if source is None:
                raise UnknownSheetError(f"no worksheet named {sheet!r}")
            wb = wb.add_sheet(sheet)
        ws = wb.sheet(sheet)
        if source is None:
            return wb._replace_sheet(replace(ws, worksheet_formula=None))
        if ws.cells:
            raise DerivedSheetError(f"worksheet {sheet!r} holds user cells and cannot be derived")
        if sheet in wb.import_targets():
            raise SheetInUseError(f"worksheet {sheet!r} is fed by a data source")
        if "\n" in source or "\r" in source:
            raise ValueError("worksheet formula must be a single line")
        node = parse_worksheet_formula(source)
        operands = [d.sheet for d in formula_dependencies(node, sheet) if isinstance(d, SheetDep)]
        for operand in operands:
            if not wb.has_sheet(operand):
                raise UnknownSheetError(f"worksheet formula refers to unknown sheet {operand!r}")
        updated = wb._replace_sheet(replace(ws, worksheet_formula=source))
        updated._check_derived_cycles()
        return updated

    def _check_derived_cycles(self) -> None:
        edges: dict[str, list[str]] = {}
        for ws in self.sheets:
            if ws.worksheet_formula is None:
                continue
            node = parse_worksheet_formula(ws.worksheet_formula)
            edges[ws.name] = [d.sheet for d in formula_dependencies(node, ws.name) if isinstance(d, SheetDep)]
        state: dict[str, int] = {}  # 1 = visiting, 2 = done

        def visit(name: str, trail: tuple[str, ...]) -> None:
            if state.get(name) == 2:
                return
            if state.get(name) == 1:
                cycle = " -> ".join(trail + (name,))
                raise DerivedCycleError(f"worksheet formulae form a cycle: {cycle}")
            state[name] = 1
            for dep in edges.get(name, ()):
                visit(dep, trail + (name,))
            state[name] = 2

        for name in edges:
            visit(name, ())

    def attach_data_source(self, path: str, target_sheet: str, has_header: bool = False) -> "Workbook":
        if self.locked:
            raise LockedError("workbook is locked; data sources cannot be changed")
        if not path:
            raise ValueError("data source path must be non-empty")
        wb = self
        if wb.has_sheet(target_sheet):
            ws = wb.sheet(target_sheet)
            if ws.cells or ws.derived:
                raise SheetInUseError(f"worksheet {target_sheet!r} is not free for imported data")
            if target_sheet in wb.import_targets():
                raise SheetInUseError(f"worksheet {target_sheet!r} already has a data source")
        else:
            wb = wb.add_sheet(target_sheet)
        source = DataSource(path=path, target_sheet=target_sheet, has_header=has_header)
        return replace(wb, data_sources=wb.data_sources + (source,))

    def detach_data_source(self, target_sheet: str) -> "Workbook":
        if self.locked:
            raise LockedError("workbook is locked; data sources cannot be changed")
        remaining = tuple(ds for ds in self.data_sources if ds.target_sheet != target_sheet)
        if len(remaining) == len(self.data_sources):
            raise UnknownSheetError(f"no data source feeds {target_sheet!r}")
        return replace(self, data_sources=remaining)

    def lock(self) -> "Workbook":
        return replace(self, locked=True)

    def unlock(self) -> "Workbook":
        return replace(self, locked=False)

    def extract_data(self) -> "Workbook":
        """Data-only copy: constants and their formatting survive; formulae,
        worksheet formulae, user sections, data sources and the lock do not."""
        sheets = []
        for ws in self.sheets:
            kept = {
                addr: cell
                for addr, cell in ws.cells.items()
                if isinstance(cell.content, Constant)
            }
            sheets.append(Worksheet(name=ws.name, cells=kept))
        return Workbook(name=self.name, sheets=tuple(sheets))
