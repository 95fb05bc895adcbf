"""Rendering a workbook as its six-section program, and reading one back.

The rendered program doubles as the document file format: section markers
are comments, so the file stays runnable as a plain script.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass

from .addresses import CellAddress, column_number
from .errors import DocumentError, FormatError
from .formula import (
    CellDep,
    ColumnDep,
    ParseError,
    RangeDep,
    SheetDep,
    formula_dependencies,
    parse_formula,
    parse_worksheet_formula,
    render_expression,
    translate_formula,
)
from .model import (
    SECTION_ORDER,
    Cell,
    Constant,
    FormatSpec,
    Formula,
    SectionKind,
    Workbook,
    Worksheet,
)
from .runtime import parser as rt
from .runtime.errors import ScriptSyntaxError
from .values import EnforcedType, parse_iso_date, literal_source, quote_text


@dataclass(frozen=True)
class Section:
    kind: SectionKind
    editable: bool
    text: str  # body without the marker line, "" or "\n"-terminated
    header_marker: str
    start_line: int  # absolute 1-based line number of the first body line


@dataclass(frozen=True)
class GeneratedProgram:
    sections: tuple[Section, ...]
    text: str
    cell_to_line: dict[tuple[str, CellAddress], int]
    line_to_cell: dict[int, tuple[str, CellAddress]]

    def section(self, kind: SectionKind) -> Section:
        for section in self.sections:
            if section.kind is kind:
                return section
        raise KeyError(kind)


_MARKER_CANDIDATE = re.compile(r"^#===\s*SECTION:")


def _marker(kind: SectionKind) -> str:
    mode = "editable" if kind.editable else "generated"
    return f"#=== SECTION: {kind.value} ({mode}) ===#"


def _cell_prefix(sheet: str, addr: CellAddress) -> str:
    return f"workbook[{quote_text(sheet)}].{addr}"


def _imports_lines(wb: Workbook) -> list[str]:
    lines = [f"workbook = Workbook({quote_text(wb.name)})"]
    for ws in wb.sheets:
        lines.append(f"workbook.add_sheet({quote_text(ws.name)})")
    for ds in wb.data_sources:
        lines.append(
            f"workbook[{quote_text(ds.target_sheet)}].load_csv("
            f"{quote_text(ds.path)}, header={ds.has_header})"
        )
    if wb.locked:
        lines.append("workbook.lock()")
    return lines


def _constants_lines(wb: Workbook) -> list[str]:
    lines = []
    for ws in wb.sheets:
        for addr in sorted(ws.cells):
            cell = ws.cells[addr]
            prefix = _cell_prefix(ws.name, addr)
            if cell.enforced_type is not None:
                lines.append(f'{prefix}.enforced_type = "{cell.enforced_type.name}"')
            if isinstance(cell.content, Constant):
                lines.append(f"{prefix}.value = {literal_source(cell.content.value)}")
            if cell.format is not None:
                lines.append(f"{prefix}.format = {quote_text(cell.format.render())}")
    return lines


# formula ordering


@dataclass
class _Node:
    node_id: tuple
    key: tuple  # (sheet index, row, col); blocks sort as row 0
    lines: list[str]  # normal rendering
    cycle_lines: list[str]  # rendering when the node sits in a cycle
    label: str
    cell: tuple[str, CellAddress] | None  # set for single-cell nodes
    deps: list[tuple] = None  # type: ignore[assignment]


def _format_comment(source: str) -> str:
    return f"  # {source}"


def _build_nodes(wb: Workbook) -> dict[tuple, _Node]:
    sheet_index = {ws.name: i for i, ws in enumerate(wb.sheets)}
    nodes: dict[tuple, _Node] = {}
    deps_by_node: dict[tuple, list] = {}

    for ws in wb.sheets:
        for addr in sorted(ws.cells):
            cell = ws.cells[addr]
            if not isinstance(cell.content, Formula):
                continue
            source = cell.content.source
            node_id = ("cell", ws.name, addr)
            target = f"{_cell_prefix(ws.name, addr)}.value"
            try:
                ast = parse_formula(source)
            except ParseError:
                statement = f'{target} = Error("NAME")'
                deps: tuple = ()
            else:
                unit = translate_formula(ast, ws.name, addr)
                statement = unit.statement_text
                deps = unit.dependencies
            comment = _format_comment(source)
            nodes[node_id] = _Node(
                node_id=node_id,
                key=(sheet_index[ws.name], addr.row, addr.col),
                lines=[statement + comment],
                cycle_lines=[f'{target} = Error("CYCLE")' + comment],
                label=f"{ws.name}!{addr}",
                cell=(ws.name, addr),
            )
            deps_by_node[node_id] = list(deps)

    for ws in wb.sheets:
        if ws.worksheet_formula is None:
            continue
        source = ws.worksheet_formula
        node_id = ("block", ws.name)
        ast = parse_worksheet_formula(source)  # validated when stored
        deps = formula_dependencies(ast, ws.name)
        operands = []
        for dep in deps:
            if isinstance(dep, SheetDep) and dep.sheet not in operands:
                operands.append(dep.sheet)
        union_args = ", ".join(f"workbook[{quote_text(name)}]" for name in operands)
        head = f"for _cell in bounds_union({union_args}):" + _format_comment(source)
        body_target = f"workbook[{quote_text(ws.name)}][_cell].value"
        body = f"    {body_target} = {render_expression(ast, ws.name)}"
        nodes[node_id] = _Node(
            node_id=node_id,
            key=(sheet_index[ws.name], 0, 0),
            lines=[head, body],
            cycle_lines=[head, f'    {body_target} = Error("CYCLE")'],
            label=f"{ws.name}!*",
            cell=None,
        )
        deps_by_node[node_id] = list(deps)

    # resolve value-level dependencies to producing nodes
    derived = {ws.name for ws in wb.sheets if ws.derived}
    by_sheet: dict[str, list[tuple[CellAddress, tuple]]] = {}
    for node_id in nodes:
        if node_id[0] == "cell":
            by_sheet.setdefault(node_id[1], []).append((node_id[2], node_id))

    for node_id, raw_deps in deps_by_node.items():
        edges: list[tuple] = []
        seen = set()

        def add(target_id: tuple) -> None:
            if target_id in nodes and target_id not in seen:
                seen.add(target_id)
                edges.append(target_id)

        for dep in raw_deps:
            if isinstance(dep, CellDep):
                if dep.sheet in derived:
                    add(("block", dep.sheet))
                else:
                    add(("cell", dep.sheet, dep.addr))
            elif isinstance(dep, RangeDep):
                if dep.sheet in derived:
                    add(("block", dep.sheet))
                    continue
                for addr, producer in by_sheet.get(dep.sheet, ()):
                    if (
                        dep.start.row <= addr.row <= dep.end.row
                        and dep.start.col <= addr.col <= dep.end.col
                    ):
                        add(producer)
            elif isinstance(dep, ColumnDep):
                if dep.sheet in derived:
                    add(("block", dep.sheet))
                    continue
                col = column_number(dep.column)
                for addr, producer in by_sheet.get(dep.sheet, ()):
                    if addr.col == col:
                        add(producer)
            elif isinstance(dep, SheetDep):
                if dep.sheet in derived:
                    add(("block", dep.sheet))
                else:
                    for _addr, producer in by_sheet.get(dep.sheet, ()):
                        add(producer)
        nodes[node_id].deps = edges
    return nodes


def _cyclic_node_sets(nodes: dict[tuple, _Node]) -> list[set]:
    """Tarjan strongly-connected components; keep real cycles only."""
    index: dict[tuple, int] = {}
    low: dict[tuple, int] = {}
    on_stack: set = set()
    stack: list[tuple] = []
    counter = [0]
    sccs: list[set] = []

    ordered = sorted(nodes, key=lambda nid: nodes[nid].key)

    def strongconnect(root: tuple) -> None:
        # iterative Tarjan: (node, iterator position) frames
        work = [(root, 0)]
        while work:
            node, pointer = work.pop()
            if pointer == 0:
                index[node] = low[node] = counter[0]
                counter[0] += 1
                stack.append(node)
                on_stack.add(node)
            recurse = False
            deps = nodes[node].deps
            for i in range(pointer, len(deps)):
                succ = deps[i]
                if succ not in index:
                    work.append((node, i + 1))
                    work.append((succ, 0))
                    recurse = True
                    break
                if succ in on_stack:
                    low[node] = min(low[node], index[succ])
            if recurse:
                continue
            if low[node] == index[node]:
                component = set()
                while True:
                    member = stack.pop()
                    on_stack.discard(member)
                    component.add(member)
                    if member == node:
                        break
                sccs.append(component)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])

    for node_id in ordered:
        if node_id not in index:
            strongconnect(node_id)

    cyclic = []
    for component in sccs:
        if len(component) > 1:
            cyclic.append(component)
        else:
            (only,) = component
            if only in nodes[only].deps:
                cyclic.append(component)
    return cyclic


def _formulae_lines(wb: Workbook) -> tuple[list[str], list[tuple[str, CellAddress] | None]]:
    """Render the formula section; returns lines plus a per-line cell tag."""
    nodes = _build_nodes(wb)
    cyclic_sets = _cyclic_node_sets(nodes)
    cyclic: set = set().union(*cyclic_sets) if cyclic_sets else set()

    lines: list[str] = []
    tags: list[tuple[str, CellAddress] | None] = []

    def emit(text_lines: list[str], cell: tuple[str, CellAddress] | None) -> None:
        for i, line in enumerate(text_lines):
            lines.append(line)
            tags.append(cell if i == 0 else None)

    # cycle members first, so everything downstream reads CYCLE errors
    for component in sorted(cyclic_sets, key=lambda c: min(nodes[n].key for n in c)):
        members = sorted(component, key=lambda n: nodes[n].key)
        labels = ", ".join(nodes[n].label for n in members)
        emit([f"# cycle: {labels}"], None)
        for member in members:
            emit(nodes[member].cycle_lines, nodes[member].cell)

    remaining = {nid for nid in nodes if nid not in cyclic}
    dependents: dict[tuple, list[tuple]] = {nid: [] for nid in remaining}
    indegree: dict[tuple, int] = {}
    for nid in remaining:
        live = [d for d in nodes[nid].deps if d in remaining]
        indegree[nid] = len(live)
        for dep in live:
            dependents[dep].append(nid)

    ready = [(nodes[nid].key, nid) for nid in remaining if indegree[nid] == 0]
    heapq.heapify(ready)
    emitted = 0
    while ready:
        _key, nid = heapq.heappop(ready)
        emit(nodes[nid].lines, nodes[nid].cell)
        emitted += 1
        for dependent in dependents[nid]:
            indegree[dependent] -= 1
            if indegree[dependent] == 0:
                heapq.heappush(ready, (nodes[dependent].key, dependent))
    if emitted != len(remaining):
        raise AssertionError("formula ordering left unemitted nodes")
    return lines, tags


def generate_program(wb: Workbook) -> GeneratedProgram:
    """Deterministically render the whole document as a program."""
    formula_lines, formula_tags = _formulae_lines(wb)
    body_lines: dict[SectionKind, list[str]] = {
        SectionKind.IMPORTS: _imports_lines(wb),
        SectionKind.CONSTANTS: _constants_lines(wb),
        SectionKind.FORMULAE: formula_lines,
    }

    all_lines: list[str] = []
    sections: list[Section] = []
    cell_to_line: dict[tuple[str, CellAddress], int] = {}

    for kind in SECTION_ORDER:
        marker = _marker(kind)
        all_lines.append(marker)
        start_line = len(all_lines) + 1
        if kind.editable:
            text = wb.user_sections.get(kind)
            body = text.split("\n")[:-1] if text else []
        else:
            body = body_lines[kind]
            text = "\n".join(body) + "\n" if body else ""
        if kind is SectionKind.FORMULAE:
            for offset, tag in enumerate(formula_tags):
                if tag is not None:
                    cell_to_line[tag] = start_line + offset
        all_lines.extend(body)
        sections.append(Section(kind, kind.editable, text, marker, start_line))

    return GeneratedProgram(
        sections=tuple(sections),
        text="\n".join(all_lines) + "\n",
        cell_to_line=cell_to_line,
        line_to_cell={line: cell for cell, line in cell_to_line.items()},
    )


def save(wb: Workbook) -> str:
    return generate_program(wb).text


# loading


def _split_code_comment(line: str) -> tuple[str, str | None]:
    """Split at the first '#' outside a string literal."""
    in_string = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_string:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "#":
            return line[:i].rstrip(), line[i:]
        i += 1
    return line.rstrip(), None


def _comment_source(comment: str | None, line_no: int) -> str:
    if comment is None or not comment.startswith("# ="):
        raise FormatError("formula line is missing its source comment", line_no)
    return comment[2:]


def _parse_single(code: str, line_no: int) -> rt.Stmt:
    try:
        return rt.parse_statement(code)
    except ScriptSyntaxError as exc:
        raise FormatError(f"unparseable generated line: {exc.message}", line_no) from exc


def _string_arg(expr: rt.Expr, line_no: int) -> str:
    if isinstance(expr, rt.Str):
        return expr.value
    raise FormatError("expected a string literal", line_no)


def _is_workbook_name(expr: rt.Expr) -> bool:
    return isinstance(expr, rt.Name) and expr.ident == "workbook"


def _sheet_of(expr: rt.Expr, line_no: int) -> str:
    # matches workbook["Sheet"]
    if (
        isinstance(expr, rt.Index)
        and _is_workbook_name(expr.base)
        and isinstance(expr.key, rt.Str)
    ):
        return expr.key.value
    raise FormatError("expected a workbook[...] sheet reference", line_no)


def _literal_value(expr: rt.Expr, line_no: int):
    if isinstance(expr, rt.Num):
        return expr.value
    if isinstance(expr, rt.Bool):
        return expr.value
    if isinstance(expr, rt.Str):
        return expr.value
    if isinstance(expr, rt.UnaryOp) and expr.op == "-" and isinstance(expr.operand, rt.Num):
        return -expr.operand.value
    if (
        isinstance(expr, rt.Call)
        and isinstance(expr.func, rt.Name)
        and expr.func.ident == "Date"
        and len(expr.args) == 1
        and isinstance(expr.args[0], rt.Str)
    ):
        date = parse_iso_date(expr.args[0].value)
        if date is None:
            raise FormatError(f"invalid date literal {expr.args[0].value!r}", line_no)
        return date
    raise FormatError("constant line must hold a literal value", line_no)


class _DocumentScan:
    """Structural facts pulled out of a document's lines."""

    def __init__(self) -> None:
        self.name = "Workbook"
        self.sheet_names: list[str] = []
        self.data_sources: list[tuple[str, str, bool]] = []
        self.locked = False
        self.constants: dict[tuple[str, CellAddress], object] = {}
        self.formats: dict[tuple[str, CellAddress], FormatSpec] = {}
        self.enforced: dict[tuple[str, CellAddress], EnforcedType] = {}
        self.formulas: dict[tuple[str, CellAddress], str] = {}
        self.worksheet_formulas: dict[str, str] = {}
        self.user_texts: dict[SectionKind, str] = {}


def _scan_imports_line(scan: _DocumentScan, code: str, line_no: int) -> None:
    stmt = _parse_single(code, line_no)
    if isinstance(stmt, rt.Assign):
        if (
            isinstance(stmt.target, rt.Name)
            and stmt.target.ident == "workbook"
            and isinstance(stmt.value, rt.Call)
            and isinstance(stmt.value.func, rt.Name)
            and stmt.value.func.ident == "Workbook"
        ):
            if stmt.value.args:
                scan.name = _string_arg(stmt.value.args[0], line_no)
            return
        raise FormatError("unrecognized assignment in the imports section", line_no)
    if not isinstance(stmt, rt.ExprStmt) or not isinstance(stmt.value, rt.Call):
        raise FormatError("unrecognized statement in the imports section", line_no)
    call = stmt.value
    func = call.func
    if isinstance(func, rt.Attr) and _is_workbook_name(func.base):
        if func.name == "add_sheet" and len(call.args) == 1:
            scan.sheet_names.append(_string_arg(call.args[0], line_no))
            return
        if func.name == "lock" and not call.args:
            scan.locked = True
            return
    if isinstance(func, rt.Attr) and func.name == "load_csv":
        sheet = _sheet_of(func.base, line_no)
        if not call.args:
            raise FormatError("load_csv needs a path argument", line_no)
        path = _string_arg(call.args[0], line_no)
        header = False
        if len(call.args) > 1 and isinstance(call.args[1], rt.Bool):
            header = call.args[1].value
        for kw_name, kw_value in call.kwargs:
            if kw_name == "header" and isinstance(kw_value, rt.Bool):
                header = kw_value.value
        scan.data_sources.append((path, sheet, header))
        return
    raise FormatError("unrecognized statement in the imports section", line_no)


def _scan_constants_line(scan: _DocumentScan, code: str, line_no: int) -> None:
    stmt = _parse_single(code, line_no)
    if not isinstance(stmt, rt.Assign) or not isinstance(stmt.target, rt.Attr):
        raise FormatError("unrecognized statement in the constants section", line_no)
    attr = stmt.target
    if not isinstance(attr.base, rt.Attr):
        raise FormatError("unrecognized constants target", line_no)
    sheet = _sheet_of(attr.base.base, line_no)
    try:
        addr = CellAddress.parse(attr.base.name)
    except Exception as exc:
        raise FormatError(f"bad cell address {attr.base.name!r}", line_no) from exc
    key = (sheet, addr)
    if attr.name == "value":
        if key in scan.constants:
            raise FormatError(f"cell {sheet}!{addr} is assigned twice", line_no)
        scan.constants[key] = _literal_value(stmt.value, line_no)
    elif attr.name == "format":
        if key in scan.formats:
            raise FormatError(f"cell {sheet}!{addr} is formatted twice", line_no)
        try:
            scan.formats[key] = FormatSpec.parse(_string_arg(stmt.value, line_no))
        except ValueError as exc:
            raise FormatError(str(exc), line_no) from exc
    elif attr.name == "enforced_type":
        if key in scan.enforced:
            raise FormatError(f"cell {sheet}!{addr} is typed twice", line_no)
        name = _string_arg(stmt.value, line_no)
        if name not in EnforcedType.__members__:
            raise FormatError(f"unknown enforced type {name!r}", line_no)
        scan.enforced[key] = EnforcedType[name]
    else:
        raise FormatError(f"unrecognized cell attribute {attr.name!r}", line_no)


def _scan_formula_target(code: str, line_no: int) -> tuple[str, CellAddress]:
    stmt = _parse_single(code, line_no)
    if (
        isinstance(stmt, rt.Assign)
        and isinstance(stmt.target, rt.Attr)
        and stmt.target.name == "value"
        and isinstance(stmt.target.base, rt.Attr)
    ):
        sheet = _sheet_of(stmt.target.base.base, line_no)
        try:
            addr = CellAddress.parse(stmt.target.base.name)
        except Exception as exc:
            raise FormatError(f"bad cell address {stmt.target.base.name!r}", line_no) from exc
        return sheet, addr
    raise FormatError("unrecognized formula statement", line_no)


def _scan_block_target(code: str, line_no: int) -> str:
    stmt = _parse_single(code.strip(), line_no)
    if (
        isinstance(stmt, rt.Assign)
        and isinstance(stmt.target, rt.Attr)
        and stmt.target.name == "value"
        and isinstance(stmt.target.base, rt.Index)
    ):
        return _sheet_of(stmt.target.base.base, line_no)
    raise FormatError("unrecognized worksheet-formula body", line_no)


def load(text: str, strict: bool = True) -> Workbook:
    """Rebuild a workbook from document text.

    Strict mode additionally requires the text to be byte-canonical:
    regenerating the parsed workbook must reproduce it exactly.
    """
    original = text
    if not strict:
        text = text.replace("\r\n", "\n")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()

    markers: list[tuple[int, SectionKind]] = []
    for i, line in enumerate(lines):
        stripped = line.strip()
        if not _MARKER_CANDIDATE.match(stripped):
            continue
        matched = None
        for kind in SECTION_ORDER:
            if stripped == _marker(kind):
                matched = kind
                break
        if matched is None:
            raise FormatError(f"unrecognized section marker: {stripped!r}", i + 1)
        markers.append((i, matched))
    if [kind for _i, kind in markers] != list(SECTION_ORDER):
        raise FormatError("document must contain the six section markers in order", 1)
    if markers[0][0] != 0:
        raise FormatError("text before the first section marker", 1)

    scan = _DocumentScan()
    for position, (marker_index, kind) in enumerate(markers):
        end = markers[position + 1][0] if position + 1 < len(markers) else len(lines)
        body = lines[marker_index + 1 : end]
        base_line = marker_index + 2  # 1-based number of the first body line
        if kind.editable:
            scan.user_texts[kind] = "\n".join(body) + "\n" if body else ""
            continue
        if kind is SectionKind.IMPORTS:
            for offset, raw in enumerate(body):
                code, _comment = _split_code_comment(raw)
                if code.strip():
                    _scan_imports_line(scan, code, base_line + offset)
        elif kind is SectionKind.CONSTANTS:
            for offset, raw in enumerate(body):
                code, _comment = _split_code_comment(raw)
                if code.strip():
                    _scan_constants_line(scan, code, base_line + offset)
        else:
            offset = 0
            while offset < len(body):
                raw = body[offset]
                line_no = base_line + offset
                code, comment = _split_code_comment(raw)
                if not code.strip():
                    offset += 1
                    continue
                if code.startswith("for "):
                    source = _comment_source(comment, line_no)
                    if offset + 1 >= len(body):
                        raise FormatError("worksheet-formula block is missing its body", line_no)
                    body_code, _c = _split_code_comment(body[offset + 1])
                    target = _scan_block_target(body_code, line_no + 1)
                    scan.worksheet_formulas[target] = source
                    offset += 2
                    continue
                sheet, addr = _scan_formula_target(code, line_no)
                scan.formulas[(sheet, addr)] = _comment_source(comment, line_no)
                offset += 1

    wb = _assemble(scan)
    if strict:
        regenerated = save(wb)
        if regenerated != original:
            new_lines = regenerated.split("\n")
            old_lines = original.split("\n")
            for i in range(max(len(new_lines), len(old_lines))):
                old = old_lines[i] if i < len(old_lines) else "<missing>"
                new = new_lines[i] if i < len(new_lines) else "<missing>"
                if old != new:
                    raise FormatError(
                        f"document is not canonical at line {i + 1}: "
                        f"found {old!r}, expected {new!r}",
                        i + 1,
                    )
            raise FormatError("document is not canonical", None)
    return wb


def _assemble(scan: _DocumentScan) -> Workbook:
    for key in list(scan.formats) + list(scan.enforced):
        if key not in scan.constants and key not in scan.formulas:
            raise FormatError(f"cell {key[0]}!{key[1]} has metadata but no content", None)
    both = set(scan.constants) & set(scan.formulas)
    if both:
        sheet, addr = sorted(both)[0]
        raise FormatError(f"cell {sheet}!{addr} is assigned twice", None)

    seen = set()
    sheets = []
    for name in scan.sheet_names:
        if name in seen:
            raise FormatError(f"duplicate worksheet {name!r}", None)
        seen.add(name)
        cells: dict[CellAddress, Cell] = {}
        for (sheet, addr), value in scan.constants.items():
            if sheet == name:
                cells[addr] = Cell(
                    content=Constant(value),
                    enforced_type=scan.enforced.get((sheet, addr)),
                    format=scan.formats.get((sheet, addr)),
                )
        for (sheet, addr), source in scan.formulas.items():
            if sheet == name:
                cells[addr] = Cell(
                    content=Formula(source),
                    enforced_type=scan.enforced.get((sheet, addr)),
                    format=scan.formats.get((sheet, addr)),
                )
        sheets.append(Worksheet(name=name, cells=cells))

    for key in list(scan.constants) + list(scan.formulas):
        if key[0] not in seen:
            raise FormatError(f"cell on undeclared worksheet {key[0]!r}", None)

    wb = Workbook(name=scan.name, sheets=tuple(sheets))
    try:
        for kind, text in scan.user_texts.items():
            if text:
                wb = wb.with_user_section(kind, text)
        for target, source in scan.worksheet_formulas.items():
            wb = wb.set_worksheet_formula(target, source)
        for path, target, header in scan.data_sources:
            wb = wb.attach_data_source(path, target, has_header=header)
    except (DocumentError, ValueError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(str(exc), None) from exc
    if scan.locked:
        wb = wb.lock()
    return wb


# exports

_DUMP_EPILOGUE = [
    "# value dump of every sheet's bounds rectangle",
    "for _sheet in sheet_names(workbook):",
    "    for _cell in bounds_union(workbook[_sheet]):",
    '        print(CONCAT(_sheet, "!", _cell), "=", workbook[_sheet][_cell].value)',
]


def export_standalone(wb: Workbook) -> str:
    """The document program plus an epilogue that prints every value."""
    return save(wb) + "\n".join(_DUMP_EPILOGUE) + "\n"


def export_library(wb: Workbook) -> str:
    """Top-level function definitions from the user sections only."""
    lines = [f"# user function library from workbook {quote_text(wb.name)}"]
    for kind in (SectionKind.PRE_CONSTANTS, SectionKind.PRE_FORMULAE, SectionKind.POST_FORMULAE):
        text = wb.user_sections.get(kind)
        if not text:
            continue
        section_lines = text.split("\n")
        i = 0
        while i < len(section_lines):
            line = section_lines[i]
            if line.startswith("def ") or line.startswith("def\t"):
                block = [line]
                i += 1
                while i < len(section_lines):
                    nxt = section_lines[i]
                    if nxt.startswith((" ", "\t")) or nxt == "":
                        block.append(nxt)
                        i += 1
                    else:
                        break
                while block and block[-1] == "":
                    block.pop()
                lines.append("")
                lines.extend(block)
            else:
                i += 1
    return "\n".join(lines) + "\n"


def export_data_only(wb: Workbook) -> str:
    """Document text for the constants-and-formats-only copy."""
    return save(wb.extract_data())
