"""HTTP service: every mutation is applied atomically, recalculated once,
persisted, and answered with the full post-recalculation state."""

from __future__ import annotations

import os
import threading

from fastapi import FastAPI
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .addresses import AddressError, CellAddress
from .engine import EngineConfig, RecalcResult, recalculate, save_file, set_user_section
from .errors import (
    DerivedCycleError,
    DerivedSheetError,
    DocumentError,
    LockedError,
    SheetInUseError,
    UnknownSheetError,
)
from .formula import ParseError
from .model import FormatSpec, Formula, SectionKind, Workbook
from .program import export_data_only, export_library, export_standalone
from .schemas import (
    BoundsState,
    CellEdit,
    CellState,
    DataSourceAttach,
    DataSourceState,
    EnforcedTypeEdit,
    ErrorPayload,
    ErrorState,
    FormatEdit,
    SectionEdit,
    SectionState,
    SheetState,
    StackFrameState,
    WorkbookState,
    WorksheetFormulaEdit,
)
from .values import EnforcedType, ErrorValue, TypeConformanceError, render_value

_CONFLICT_ERRORS = (
    LockedError,
    SheetInUseError,
    DerivedSheetError,
    DerivedCycleError,
    TypeConformanceError,
)


class _BadRequest(Exception):
    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.message = message
        self.position = position


class WorkbookSession:
    """One served document: serialized mutations, snapshot reads."""

    def __init__(self, workbook: Workbook, config: EngineConfig, path: str | None = None):
        self._lock = threading.Lock()
        self.config = config
        self.path = path
        self.workbook = workbook
        self.result = recalculate(workbook, config)

    def state(self, diagnostics: list[str] | None = None) -> WorkbookState:
        with self._lock:
            return build_state(self.workbook, self.result, diagnostics or [])

    def mutate(self, step) -> WorkbookState:
        with self._lock:
            outcome = step(self.workbook)
            diagnostics: list[str] = []
            if isinstance(outcome, tuple):
                updated, diagnostics = outcome
            else:
                updated = outcome
            result = recalculate(updated, self.config)
            self.workbook = updated
            self.result = result
            if self.path is not None:
                save_file(updated, self.path)
            return build_state(updated, result, diagnostics)

    def export(self, renderer) -> str:
        with self._lock:
            return renderer(self.workbook)


def _bounds_state(bounds) -> BoundsState:
    if bounds.empty:
        return BoundsState(empty=True)
    return BoundsState(empty=False, min=str(bounds.min), max=str(bounds.max))


def _stored_text(cell) -> str:
    if isinstance(cell.content, Formula):
        return cell.content.source
    return render_value(cell.content.value)


def _sheet_state(ws, sheet_result) -> SheetState:
    cells: dict[CellAddress, CellState] = {}
    for addr in ws.cells:
        cell = ws.cells[addr]
        cells[addr] = CellState(
            addr=str(addr),
            stored=_stored_text(cell),
            enforced_type=cell.enforced_type.name if cell.enforced_type else None,
            format=cell.format.render() if cell.format else None,
        )
    values = sheet_result.values if sheet_result is not None else {}
    overridden = sheet_result.overridden if sheet_result is not None else frozenset()
    for addr, value in values.items():
        state = cells.get(addr)
        if state is None:
            state = CellState(addr=str(addr))
            cells[addr] = state
        state.value = render_value(value)
        state.is_error = isinstance(value, ErrorValue)
        state.overridden = addr in overridden
    bounds = sheet_result.bounds if sheet_result is not None else None
    return SheetState(
        name=ws.name,
        bounds=_bounds_state(bounds) if bounds is not None else BoundsState(empty=True),
        cells=[cells[addr] for addr in sorted(cells)],
        derived=ws.derived,
        worksheet_formula=ws.worksheet_formula,
    )


def build_state(wb: Workbook, result: RecalcResult, diagnostics: list[str]) -> WorkbookState:
    by_name = {sheet.name: sheet for sheet in result.sheets}
    line_map: dict[str, dict[str, int]] = {}
    for (sheet, addr), line in result.program.cell_to_line.items():
        line_map.setdefault(sheet, {})[str(addr)] = line
    return WorkbookState(
        name=wb.name,
        locked=wb.locked,
        sheets=[_sheet_state(ws, by_name.get(ws.name)) for ws in wb.sheets],
        sections=[
            SectionState(
                kind=section.kind.value,
                editable=section.editable,
                text=section.text,
                start_line=section.start_line,
            )
            for section in result.program.sections
        ],
        output=result.output,
        errors=[
            ErrorState(
                kind=record.kind,
                message=record.message,
                section=record.section,
                line=record.line,
                cell=record.cell,
                stack=[
                    StackFrameState(section=f.section, line=f.line, function=f.function)
                    for f in record.stack
                ],
            )
            for record in result.errors
        ],
        incomplete=result.incomplete,
        line_map=line_map,
        data_sources=[
            DataSourceState(path=ds.path, target_sheet=ds.target_sheet, has_header=ds.has_header)
            for ds in wb.data_sources
        ],
        diagnostics=diagnostics,
    )


def _error_response(kind: str, message: str, status: int, position: int | None = None):
    payload = ErrorPayload(error_kind=kind, message=message, position=position)
    return JSONResponse(status_code=status, content=payload.model_dump())


def create_app(
    workbook: Workbook | None = None,
    path: str | None = None,
    config: EngineConfig | None = None,
    frontend_dir: str | None = None,
) -> FastAPI:
    if workbook is None:
        workbook = Workbook.new()
    session = WorkbookSession(workbook, config or EngineConfig(), path)
    app = FastAPI(title="gridscript", version="0.1.0")
    app.state.session = session

    @app.exception_handler(_BadRequest)
    async def _bad_request(_request, exc: _BadRequest):
        return _error_response("BAD_REQUEST", exc.message, 400, exc.position)

    @app.exception_handler(ValueError)
    async def _invalid_argument(_request, exc: ValueError):
        # model-level argument validation (marker lines, empty-cell formats, ...)
        return _error_response("BAD_REQUEST", str(exc), 400)

    @app.exception_handler(AddressError)
    async def _bad_address(_request, exc: AddressError):
        return _error_response("BAD_ADDRESS", str(exc), 400)

    @app.exception_handler(ParseError)
    async def _bad_formula(_request, exc: ParseError):
        return _error_response("PARSE", exc.message, 400, exc.position)

    @app.exception_handler(UnknownSheetError)
    async def _unknown_sheet(_request, exc: UnknownSheetError):
        return _error_response(exc.kind, str(exc), 400)

    @app.exception_handler(TypeConformanceError)
    async def _type_conflict(_request, exc: TypeConformanceError):
        return _error_response("TYPE", str(exc), 409)

    @app.exception_handler(DocumentError)
    async def _document_error(_request, exc: DocumentError):
        status = 409 if isinstance(exc, _CONFLICT_ERRORS) else 400
        return _error_response(exc.kind, str(exc), status)

    @app.get("/workbook", response_model=WorkbookState)
    def get_workbook():
        return session.state()

    @app.put("/cell", response_model=WorkbookState)
    def put_cell(edit: CellEdit):
        CellAddress.parse(edit.addr)  # malformed addresses fail before mutation
        return session.mutate(lambda wb: wb.set_cell(edit.sheet, edit.addr, edit.raw))

    @app.put("/section", response_model=WorkbookState)
    def put_section(edit: SectionEdit):
        try:
            kind = SectionKind(edit.kind)
        except ValueError:
            raise _BadRequest(f"unknown section kind {edit.kind!r}") from None
        if not kind.editable:
            raise _BadRequest(f"section {kind.value} is generated and not editable")
        return session.mutate(lambda wb: set_user_section(wb, kind, edit.text))

    @app.put("/worksheet-formula", response_model=WorkbookState)
    def put_worksheet_formula(edit: WorksheetFormulaEdit):
        return session.mutate(lambda wb: wb.set_worksheet_formula(edit.sheet, edit.source))

    @app.put("/enforced-type", response_model=WorkbookState)
    def put_enforced_type(edit: EnforcedTypeEdit):
        CellAddress.parse(edit.addr)
        enforced = None
        if edit.type is not None:
            if edit.type not in EnforcedType.__members__:
                raise _BadRequest(f"unknown enforced type {edit.type!r}")
            enforced = EnforcedType[edit.type]
        return session.mutate(lambda wb: wb.set_enforced_type(edit.sheet, edit.addr, enforced))

    @app.put("/format", response_model=WorkbookState)
    def put_format(edit: FormatEdit):
        CellAddress.parse(edit.addr)
        try:
            spec = FormatSpec.parse(edit.format)
        except ValueError as exc:
            raise _BadRequest(str(exc)) from None
        return session.mutate(
            lambda wb: wb.set_format(edit.sheet, edit.addr, None if spec.empty else spec)
        )

    @app.post("/lock", response_model=WorkbookState)
    def post_lock():
        return session.mutate(lambda wb: wb.lock())

    @app.post("/unlock", response_model=WorkbookState)
    def post_unlock():
        return session.mutate(lambda wb: wb.unlock())

    @app.post("/data-source", response_model=WorkbookState)
    def post_data_source(attach: DataSourceAttach):
        return session.mutate(
            lambda wb: wb.attach_data_source(
                attach.path, attach.target_sheet, has_header=attach.has_header
            )
        )

    @app.delete("/data-source", response_model=WorkbookState)
    def delete_data_source(target_sheet: str):
        return session.mutate(lambda wb: wb.detach_data_source(target_sheet))

    @app.get("/export/standalone", response_class=PlainTextResponse)
    def get_export_standalone():
        return session.export(export_standalone)

    @app.get("/export/library", response_class=PlainTextResponse)
    def get_export_library():
        return session.export(export_library)

    @app.get("/export/data-only", response_class=PlainTextResponse)
    def get_export_data_only():
        return session.export(export_data_only)

    if frontend_dir and os.path.isdir(frontend_dir):
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")

    return app
