"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from pydantic import BaseModel


class CellEdit(BaseModel):
    sheet: str
    addr: str
    raw: str


class SectionEdit(BaseModel):
    kind: str
    text: str


class WorksheetFormulaEdit(BaseModel):
    sheet: str
    source: str | None = None


class EnforcedTypeEdit(BaseModel):
    sheet: str
    addr: str
    type: str | None = None


class FormatEdit(BaseModel):
    sheet: str
    addr: str
    format: str


class DataSourceAttach(BaseModel):
    path: str
    target_sheet: str
    has_header: bool = False


class BoundsState(BaseModel):
    empty: bool
    min: str | None = None
    max: str | None = None


class CellState(BaseModel):
    addr: str
    stored: str | None = None
    value: str = ""
    is_error: bool = False
    overridden: bool = False
    enforced_type: str | None = None
    format: str | None = None


class SheetState(BaseModel):
    name: str
    bounds: BoundsState
    cells: list[CellState]
    derived: bool
    worksheet_formula: str | None = None


class SectionState(BaseModel):
    kind: str
    editable: bool
    text: str
    start_line: int


class StackFrameState(BaseModel):
    section: str
    line: int
    function: str


class ErrorState(BaseModel):
    kind: str
    message: str
    section: str | None = None
    line: int | None = None
    cell: str | None = None
    stack: list[StackFrameState] = []


class DataSourceState(BaseModel):
    path: str
    target_sheet: str
    has_header: bool


class WorkbookState(BaseModel):
    name: str
    locked: bool
    sheets: list[SheetState]
    sections: list[SectionState]
    output: str
    errors: list[ErrorState]
    incomplete: bool
    line_map: dict[str, dict[str, int]]
    data_sources: list[DataSourceState]
    diagnostics: list[str] = []


class ErrorPayload(BaseModel):
    error_kind: str
    message: str
    position: int | None = None
