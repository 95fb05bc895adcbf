"""Command-line client over the engine: file operations and the server."""

from __future__ import annotations

import os
import sys

import click

from .addresses import CellAddress, column_letters
from .engine import EngineConfig, RecalcResult, load_file, recalculate, save_file
from .errors import DocumentError
from .model import Workbook
from .program import export_data_only, export_library, export_standalone
from .runtime import (
    BudgetExceeded,
    ExecutionLimits,
    Interpreter,
    ScriptError,
    execute_program_text,
)
from .values import render_value


def _fail(message: str, code: int = 2) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(path: str, strict: bool = True) -> Workbook:
    try:
        return load_file(path, strict=strict)
    except OSError as exc:
        _fail(f"cannot read {path}: {exc.strerror or exc}")
    except DocumentError as exc:
        _fail(str(exc))
    raise AssertionError("unreachable")


def _save(wb: Workbook, path: str) -> None:
    try:
        save_file(wb, path)
    except OSError as exc:
        _fail(f"cannot write {path}: {exc.strerror or exc}")


def _config(path: str, data_root: str | None) -> EngineConfig:
    root = data_root or os.path.dirname(os.path.abspath(path))
    return EngineConfig(data_root=root)


def _print_sheet_table(result: RecalcResult) -> None:
    for sheet in result.sheets:
        click.echo(f"== {sheet.name} ==")
        if sheet.bounds.empty:
            click.echo("(empty)")
            continue
        lo, hi = sheet.bounds.min, sheet.bounds.max
        columns = list(range(lo.col, hi.col + 1))
        header = [""] + [column_letters(c) for c in columns]
        rows = [header]
        for r in range(lo.row, hi.row + 1):
            rows.append(
                [str(r)] + [render_value(sheet.values.get(CellAddress(row=r, col=c))) for c in columns]
            )
        widths = [max(len(row[i]) for row in rows) for i in range(len(header))]
        for row in rows:
            click.echo("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())


def _print_errors(result: RecalcResult) -> None:
    for record in result.errors:
        where = f"{record.section}" if record.section else "?"
        if record.line is not None:
            where += f":{record.line}"
        cell = f" [{record.cell}]" if record.cell else ""
        click.echo(f"{record.kind} at {where}{cell}: {record.message}", err=True)
        for frame in record.stack:
            click.echo(f"    in {frame.function} ({frame.section}:{frame.line})", err=True)


@click.group()
@click.version_option(package_name="gridscript")
def main() -> None:
    """Work with dual-view spreadsheet documents."""


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--name", default=None, help="Workbook name; defaults to the file stem.")
@click.option("--sheet", "sheets", multiple=True, help="Initial sheet name(s).")
def init(path: str, name: str | None, sheets: tuple[str, ...]) -> None:
    """Create a fresh document file."""
    if os.path.exists(path):
        _fail(f"{path} already exists")
    title = name or os.path.splitext(os.path.basename(path))[0]
    wb = Workbook.new(title, sheets or ("Sheet1",))
    _save(wb, path)
    click.echo(f"created {path}")


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--data-root", type=click.Path(file_okay=False), default=None)
def recalc(path: str, data_root: str | None) -> None:
    """Recalculate a document and print its output and value tables."""
    wb = _load(path)
    result = recalculate(wb, _config(path, data_root))
    if result.output:
        click.echo(result.output, nl=False)
    _print_sheet_table(result)
    _print_errors(result)
    if result.incomplete:
        click.echo("recalculation incomplete: budget exceeded", err=True)
    sys.exit(1 if result.has_failures else 0)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--data-root", type=click.Path(file_okay=False), default=None)
def run(path: str, data_root: str | None) -> None:
    """Execute a standalone exported script and print what it prints."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        _fail(f"cannot read {path}: {exc.strerror or exc}")
        return
    root = data_root or os.path.dirname(os.path.abspath(path))
    interp = Interpreter(limits=ExecutionLimits(), data_root=root)
    code = 0
    try:
        execute_program_text(source, interp)
    except ScriptError as exc:
        click.echo(f"{exc.kind}: {exc.message}", err=True)
        for frame in exc.stack or ():
            click.echo(f"    in {frame.function} (line {frame.line})", err=True)
        code = 1
    except BudgetExceeded as exc:
        click.echo(f"BUDGET: {exc.message}", err=True)
        code = 1
    if interp.output:
        click.echo("".join(interp.output), nl=False)
    sys.exit(code)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--standalone", "mode", flag_value="standalone", default=True)
@click.option("--library", "mode", flag_value="library")
@click.option("--data-only", "mode", flag_value="data-only")
@click.option("-o", "--output", "output_path", type=click.Path(dir_okay=False), default=None)
def export(path: str, mode: str, output_path: str | None) -> None:
    """Render a document as a runnable script, a function library, or data only."""
    wb = _load(path)
    renderers = {
        "standalone": export_standalone,
        "library": export_library,
        "data-only": export_data_only,
    }
    text = renderers[mode](wb)
    if output_path is None:
        click.echo(text, nl=False)
        return
    try:
        with open(output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        _fail(f"cannot write {output_path}: {exc.strerror or exc}")


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
def lock(path: str) -> None:
    """Lock a document: formulae and code become immutable."""
    _save(_load(path).lock(), path)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
def unlock(path: str) -> None:
    """Remove a document's lock."""
    _save(_load(path).unlock(), path)


@main.command("import-csv")
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--sheet", required=True, help="Target worksheet fed by the file.")
@click.option("--csv", "csv_path", required=True, help="CSV path relative to the data root.")
@click.option("--header/--no-header", default=False)
def import_csv(path: str, sheet: str, csv_path: str, header: bool) -> None:
    """Attach a CSV data source that is re-read on every recalculation."""
    wb = _load(path)
    try:
        wb = wb.attach_data_source(csv_path, sheet, has_header=header)
    except DocumentError as exc:
        _fail(str(exc))
    _save(wb, path)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
@click.option("--data-root", type=click.Path(file_okay=False), default=None)
@click.option("--frontend", type=click.Path(file_okay=False), default=None,
              help="Directory of static UI files to serve at /.")
def serve(path: str, host: str, port: int, data_root: str | None, frontend: str | None) -> None:
    """Serve a document over HTTP for the web client."""
    import uvicorn

    from .service import create_app

    wb = _load(path)
    app = create_app(
        workbook=wb,
        path=path,
        config=_config(path, data_root),
        frontend_dir=frontend,
    )
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.argument("path", type=click.Path(dir_okay=False))
def fmt(path: str) -> None:
    """Rewrite a document into canonical byte form."""
    wb = _load(path, strict=False)
    _save(wb, path)


if __name__ == "__main__":
    main()
