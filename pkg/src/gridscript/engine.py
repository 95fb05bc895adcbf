"""Recalculation pipeline: regenerate the program, run it, package results."""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field

from .addresses import BoundsRect, CellAddress
from .model import SectionKind, Workbook
from .program import GeneratedProgram, generate_program, load, save
from .runtime import (
    BudgetExceeded,
    ErrorRecord,
    ExecutionLimits,
    Interpreter,
    ScriptError,
    ScriptSyntaxError,
    parse_script,
)
from .runtime import parser as rt
from .values import ErrorValue


@dataclass(frozen=True)
class EngineConfig:
    data_root: str | None = None
    limits: ExecutionLimits = field(default_factory=ExecutionLimits)


@dataclass(frozen=True)
class SheetResult:
    name: str
    derived: bool
    values: dict[CellAddress, object]
    overridden: frozenset[CellAddress]
    bounds: BoundsRect


@dataclass(frozen=True)
class RecalcResult:
    sheets: tuple[SheetResult, ...]
    output: str
    errors: tuple[ErrorRecord, ...]
    incomplete: bool
    program: GeneratedProgram

    def sheet(self, name: str) -> SheetResult:
        for sheet in self.sheets:
            if sheet.name == name:
                return sheet
        raise KeyError(name)

    def value(self, sheet: str, addr: CellAddress | str):
        address = addr if isinstance(addr, CellAddress) else CellAddress.parse(addr)
        return self.sheet(sheet).values.get(address)

    @property
    def has_failures(self) -> bool:
        if self.errors or self.incomplete:
            return True
        return any(
            isinstance(value, ErrorValue)
            for sheet in self.sheets
            for value in sheet.values.values()
        )


def _statement_cell(stmt: rt.Stmt) -> tuple[str, str] | None:
    """The (sheet, address) a generated formula statement assigns, if any."""
    if not isinstance(stmt, rt.Assign):
        return None
    target = stmt.target
    if not (isinstance(target, rt.Attr) and target.name == "value"):
        return None
    base = target.base
    if not isinstance(base, rt.Attr):
        return None
    inner = base.base
    if (
        isinstance(inner, rt.Index)
        and isinstance(inner.base, rt.Name)
        and inner.base.ident == "workbook"
        and isinstance(inner.key, rt.Str)
    ):
        return inner.key.value, base.name
    return None


def recalculate(wb: Workbook, config: EngineConfig | None = None) -> RecalcResult:
    config = config or EngineConfig()
    program = generate_program(wb)
    interp = Interpreter(limits=config.limits, data_root=config.data_root)
    errors: list[ErrorRecord] = []
    incomplete = False

    for section in program.sections:
        if incomplete:
            break
        if not section.text:
            continue
        interp.set_section(section.kind.value)
        try:
            stmts = parse_script(section.text)
        except ScriptSyntaxError as exc:
            errors.append(
                ErrorRecord(
                    kind="SYNTAX",
                    message=exc.message,
                    section=section.kind.value,
                    line=exc.line,
                )
            )
            continue
        if section.editable:
            # user code: a fault abandons the rest of this section only
            try:
                interp.exec_statements(stmts, interp.globals)
            except BudgetExceeded as exc:
                errors.append(_budget_record(exc, section.kind, interp))
                incomplete = True
            except ScriptError as err:
                errors.append(_fault_record(err, section.kind, interp, cell=None))
        else:
            # generated code: recover per statement so one bad cell
            # cannot silence the rest
            for stmt in stmts:
                try:
                    interp.exec_stmt(stmt, interp.globals)
                except BudgetExceeded as exc:
                    errors.append(_budget_record(exc, section.kind, interp))
                    incomplete = True
                    break
                except ScriptError as err:
                    cell = _statement_cell(stmt)
                    if cell is not None:
                        _assign_error(interp, cell, err)
                    errors.append(
                        _fault_record(err, section.kind, interp, cell=cell, line=stmt.line)
                    )

    return RecalcResult(
        sheets=_collect_sheets(wb, interp),
        output="".join(interp.output),
        errors=tuple(errors),
        incomplete=incomplete,
        program=program,
    )


def _assign_error(interp: Interpreter, cell: tuple[str, str], err: ScriptError) -> None:
    if interp.workbook is None:
        return
    sheet = interp.workbook.sheets.get(cell[0])
    if sheet is None:
        return
    addr = CellAddress.parse(cell[1])
    kind = err.kind if err.kind != "SYNTAX" else "NAME"
    sheet.values[(addr.row, addr.col)] = ErrorValue.of(kind, err.message)


def _fault_record(
    err: ScriptError,
    kind: SectionKind,
    interp: Interpreter,
    cell: tuple[str, str] | None,
    line: int | None = None,
) -> ErrorRecord:
    stack = err.stack if err.stack is not None else interp.stack_snapshot()
    return ErrorRecord(
        kind=err.kind,
        message=err.message,
        section=kind.value,
        line=line if line is not None else (stack[0].line if stack else None),
        cell=f"{cell[0]}!{cell[1]}" if cell else None,
        stack=stack,
    )


def _budget_record(exc: BudgetExceeded, kind: SectionKind, interp: Interpreter) -> ErrorRecord:
    stack = interp.stack_snapshot()
    return ErrorRecord(
        kind="BUDGET",
        message=exc.message,
        section=kind.value,
        line=stack[0].line if stack else None,
        stack=stack,
    )


def _collect_sheets(wb: Workbook, interp: Interpreter) -> tuple[SheetResult, ...]:
    results: list[SheetResult] = []
    runtime = interp.workbook.sheets if interp.workbook is not None else {}
    seen = set()
    for ws in wb.sheets:
        seen.add(ws.name)
        results.append(_sheet_result(ws.name, ws.derived, runtime.get(ws.name)))
    for name, sheet in runtime.items():
        if name not in seen:
            results.append(_sheet_result(name, False, sheet))
    return tuple(results)


def _sheet_result(name: str, derived: bool, runtime_sheet) -> SheetResult:
    if runtime_sheet is None:
        return SheetResult(name, derived, {}, frozenset(), BoundsRect(empty=True))
    values = {
        CellAddress(row=r, col=c): v for (r, c), v in sorted(runtime_sheet.values.items())
    }
    overridden = frozenset(CellAddress(row=r, col=c) for r, c in runtime_sheet.overridden)
    return SheetResult(name, derived, values, overridden, runtime_sheet.bounds())


def set_user_section(wb: Workbook, kind: SectionKind, text: str) -> tuple[Workbook, list[str]]:
    """Store a user section verbatim; returns syntax diagnostics without blocking."""
    updated = wb.with_user_section(kind, text)
    diagnostics = []
    stored = updated.user_sections.get(kind)
    if stored:
        try:
            parse_script(stored)
        except ScriptSyntaxError as exc:
            diagnostics.append(f"line {exc.line}: {exc.message}")
    return updated, diagnostics


def load_file(path: str, strict: bool = True) -> Workbook:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return load(fh.read(), strict=strict)


def save_file(wb: Workbook, path: str) -> None:
    """Write atomically: temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, temp_path = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(save(wb))
        os.replace(temp_path, path)
    except BaseException:
        try:
            os.unlink(temp_path)
        except OSError:
            pass
        raise
