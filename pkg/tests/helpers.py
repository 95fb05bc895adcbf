"""Seeded random generators shared by the property and acceptance tests."""

from __future__ import annotations

import random

from gridscript.addresses import CellAddress, column_letters
from gridscript.engine import EngineConfig, recalculate
from gridscript.model import FormatSpec, SectionKind, Workbook
from gridscript.values import EnforcedType, TypeConformanceError

from oracle import GridOracle, values_match

WORDS = ("alpha", "beta", "gamma", "delta", "north", "south", "total", "x y", "it's", 'say ""hi""')
PLAIN_WORDS = ("alpha", "beta", "gamma", "delta", "north", "south", "total")
DATES = ("2020-01-15", "2021-12-31", "2019-06-01", "2024-02-29")


def random_addr(rng: random.Random, rows: int, cols: int) -> str:
    return f"{column_letters(rng.randint(1, cols))}{rng.randint(1, rows)}"


def constant_text(rng: random.Random, kind: str) -> str:
    if kind == "num":
        roll = rng.random()
        if roll < 0.4:
            return str(rng.randint(-20, 99))
        if roll < 0.5:
            return "0"
        return f"{rng.uniform(-50, 50):.3f}"
    if kind == "text":
        return rng.choice(PLAIN_WORDS)
    if kind == "bool":
        return rng.choice(("TRUE", "FALSE"))
    return rng.choice(DATES)


class FormulaGen:
    """Random well-typed formula text over a planned grid.

    Ranges and columns appear only as aggregate arguments; their extent is
    the one place where evaluation strategy could legitimately differ.
    """

    def __init__(self, rng, sheets, plan, rows, cols):
        self.rng = rng
        self.sheets = sheets
        self.plan = plan
        self.rows = rows
        self.cols = cols

    def formula(self, kind: str, host: str) -> str:
        return "=" + self.expr(kind, self.rng.randint(1, 4), host)

    def expr(self, kind: str, depth: int, host: str) -> str:
        rng = self.rng
        if depth <= 0:
            return self.terminal(kind, host)
        if rng.random() < 0.04:
            return self.faulty(host)
        if kind == "num":
            return self.num_expr(depth, host)
        if kind == "text":
            return self.text_expr(depth, host)
        return self.bool_expr(depth, host)

    def terminal(self, kind: str, host: str) -> str:
        rng = self.rng
        ref = self.ref(kind, host)
        if ref is not None and rng.random() < 0.45:
            return ref
        if kind == "num":
            return str(rng.randint(0, 99)) if rng.random() < 0.6 else f"{rng.uniform(0, 40):.2f}"
        if kind == "text":
            return self.text_literal()
        if kind == "bool":
            return rng.choice(("TRUE", "FALSE"))
        return ref if ref is not None else "0"

    def text_literal(self) -> str:
        word = self.rng.choice(WORDS)
        return '"' + word.replace('"', '""') + '"'

    def ref(self, kind: str, host: str) -> str | None:
        cells = self.plan.get(kind, ())
        if not cells:
            return None
        sheet, addr = self.rng.choice(cells)
        return addr if sheet == host else f"{sheet}!{addr}"

    def area(self, host: str) -> str:
        rng = self.rng
        sheet = host if rng.random() < 0.7 else rng.choice(self.sheets)
        prefix = "" if sheet == host else f"{sheet}!"
        if rng.random() < 0.25:
            letter = column_letters(rng.randint(1, self.cols))
            return f"{prefix}{letter}:{letter}"
        c1, c2 = sorted(rng.sample(range(1, self.cols + 1), 2))
        r1, r2 = sorted(rng.sample(range(1, self.rows + 1), 2))
        return f"{prefix}{column_letters(c1)}{r1}:{column_letters(c2)}{r2}"

    def num_expr(self, depth: int, host: str) -> str:
        rng = self.rng
        pick = rng.random()
        if pick < 0.30:
            op = rng.choice(("+", "-", "*", "/", "+", "*"))
            return f"{self.expr('num', depth - 1, host)} {op} {self.expr('num', depth - 1, host)}"
        if pick < 0.36:
            return f"{self.expr('num', depth - 1, host)} ^ {rng.randint(0, 3)}"
        if pick < 0.42:
            return f"-{self.terminal('num', host)}"
        if pick < 0.48:
            return f"({self.expr('num', depth - 1, host)})%"
        if pick < 0.54:
            return f"({self.expr('num', depth - 1, host)})"
        if pick < 0.60:
            return f"ABS({self.expr('num', depth - 1, host)})"
        if pick < 0.66:
            return f"ROUND({self.expr('num', depth - 1, host)}, {rng.randint(-2, 4)})"
        if pick < 0.73:
            return f"IF({self.bool_expr(depth - 1, host)}, {self.expr('num', depth - 1, host)}, {self.expr('num', depth - 1, host)})"
        if pick < 0.80:
            return f"LEN({self.expr('text', depth - 1, host)})"
        if pick < 0.88:
            fn = rng.choice(("SUM", "AVERAGE", "MIN", "MAX", "COUNT"))
            if rng.random() < 0.3:
                return f"{fn}({self.area(host)}, {self.expr('num', depth - 1, host)})"
            return f"{fn}({self.area(host)})"
        return f"COUNTIF({self.area(host)}, {self.criterion()})"

    def criterion(self) -> str:
        rng = self.rng
        pick = rng.random()
        if pick < 0.5:
            op = rng.choice((">", ">=", "<", "<=", "<>", "="))
            return f'"{op}{rng.randint(-5, 60)}"'
        if pick < 0.65:
            return f'"{rng.choice(PLAIN_WORDS)}"'
        if pick < 0.75:
            return f'"<>{rng.choice(PLAIN_WORDS)}"'
        if pick < 0.85:
            return '"TRUE"'
        return str(rng.randint(0, 50))

    def text_expr(self, depth: int, host: str) -> str:
        rng = self.rng
        pick = rng.random()
        scalar = rng.choice(("num", "text", "bool"))
        if pick < 0.45:
            return f"{self.expr('text', depth - 1, host)} & {self.expr(scalar, depth - 1, host)}"
        if pick < 0.8:
            args = ", ".join(
                self.expr(rng.choice(("num", "text", "bool")), depth - 1, host)
                for _ in range(rng.randint(2, 3))
            )
            return f"CONCAT({args})"
        return (
            f"IF({self.bool_expr(depth - 1, host)}, "
            f"{self.expr('text', depth - 1, host)}, {self.expr('text', depth - 1, host)})"
        )

    def bool_expr(self, depth: int, host: str) -> str:
        rng = self.rng
        if depth <= 0:
            return self.terminal("bool", host)
        pick = rng.random()
        if pick < 0.45:
            op = rng.choice(("=", "<>", "<", "<=", ">", ">="))
            return f"{self.expr('num', depth - 1, host)} {op} {self.expr('num', depth - 1, host)}"
        if pick < 0.6:
            op = rng.choice(("=", "<>"))
            return f"{self.expr('text', depth - 1, host)} {op} {self.expr('text', depth - 1, host)}"
        if pick < 0.7 and self.plan.get("date"):
            op = rng.choice(("=", "<>", "<", ">"))
            return f"{self.ref('date', host)} {op} {self.ref('date', host)}"
        if pick < 0.8:
            return f"{self.terminal('bool', host)} = {self.terminal('bool', host)}"
        return (
            f"IF({self.bool_expr(depth - 1, host)}, "
            f"{self.terminal('bool', host)}, {self.terminal('bool', host)})"
        )

    def faulty(self, host: str) -> str:
        rng = self.rng
        forms = (
            "1 / 0",
            "FOO(1)",
            f'ABS("{rng.choice(PLAIN_WORDS)}")',
            f'"{rng.choice(PLAIN_WORDS)}" * 2',
            "IF(7, 1, 2)",
        )
        return rng.choice(forms)


def random_grid(rng: random.Random, rows: int = 8, cols: int = 6, formula_count: int | None = None):
    """A dict of {sheet: {addr text: raw cell text}} with constants and formulas."""
    sheet_names = ("Sheet1",) if rng.random() < 0.6 else ("Sheet1", "Data2")
    cells: dict[str, dict[str, str]] = {name: {} for name in sheet_names}
    plan: dict[str, list] = {"num": [], "text": [], "bool": [], "date": []}
    for name in sheet_names:
        for _ in range(rng.randint(4, 10)):
            addr = random_addr(rng, rows, cols)
            if addr in cells[name]:
                continue
            kind = rng.choice(("num", "num", "num", "num", "text", "bool", "date"))
            cells[name][addr] = constant_text(rng, kind)
            plan[kind].append((name, addr))
    count = formula_count if formula_count is not None else rng.randint(3, 12)
    gen = FormulaGen(rng, sheet_names, plan, rows, cols)
    pending = []
    for _ in range(count):
        sheet = rng.choice(sheet_names)
        addr = random_addr(rng, rows, cols)
        if addr in cells[sheet]:
            continue
        kind = rng.choice(("num", "num", "num", "text", "bool"))
        cells[sheet][addr] = ""  # reserve before generating so refs can loop back
        plan[kind].append((sheet, addr))
        pending.append((sheet, addr, kind))
    for sheet, addr, kind in pending:
        cells[sheet][addr] = gen.formula(kind, sheet)
    return cells


def build_workbook(cells: dict[str, dict[str, str]], name: str = "Prop") -> Workbook:
    wb = Workbook.new(name, tuple(cells))
    for sheet, grid in cells.items():
        for addr, raw in grid.items():
            wb = wb.set_cell(sheet, addr, raw)
    return wb


def engine_values(wb: Workbook, config: EngineConfig | None = None):
    result = recalculate(wb, config or EngineConfig())
    out = {}
    for sheet in result.sheets:
        for addr, value in sheet.values.items():
            out[(sheet.name, str(addr))] = value
    return result, out


def oracle_values(cells: dict[str, dict[str, str]]):
    sheets = {
        name: {CellAddress.parse(addr): raw for addr, raw in grid.items()}
        for name, grid in cells.items()
    }
    return GridOracle(sheets).all_values()


def grid_mismatches(cells: dict[str, dict[str, str]]):
    """Recalculate and cross-check one random grid; returns mismatch list."""
    _, got = engine_values(build_workbook(cells))
    want = oracle_values(cells)
    problems = []
    for key in sorted(set(got) | set(want)):
        if not values_match(want.get(key), got.get(key)):
            problems.append((key, want.get(key), got.get(key)))
    return problems


# --- persistence round-trip material ---

SNIPPETS_PRE_CONSTANTS = (
    "rate_cap = 0.19\n",
    "def clamp(v, lo, hi):\n    return MIN(MAX(v, lo), hi)\n",
    'label = CONCAT("run ", 7)\nprint(label)\n',
    "",
)

SNIPPETS_PRE_FORMULAE = (
    "def margin(net, gross):\n    if gross == 0:\n        return 0\n    return net / gross\n",
    "adjust = 1\n\n# tweak before the formulae run\n",
    "",
)

SNIPPETS_POST_FORMULAE = (
    'workbook["{sheet}"].A1.value = 99\n',
    "print(sheet_names(workbook))\n",
    "totals = []\nfor _cell in bounds_union(workbook[\"{sheet}\"]):\n    pass\n",
    "",
)

_ODD_SHEET_NAMES = ("My Data", "P&L 2024", "übersicht", "notes_9", "Sheet1", "Rates")


def random_workbook(rng: random.Random) -> Workbook:
    """A structurally varied workbook for save/load round-trip checks."""
    names = rng.sample(_ODD_SHEET_NAMES, k=rng.randint(1, 3))
    title = rng.choice(("Book", "Q3 plan", 'the "big" one', "Modell 7"))
    wb = Workbook.new(title, (names[0],))
    for extra in names[1:]:
        wb = wb.add_sheet(extra)

    plan = {"num": [], "text": [], "bool": [], "date": []}
    gen = FormulaGen(rng, names, plan, rows=12, cols=7)
    constant_cells = []
    for sheet in names:
        for _ in range(rng.randint(0, 10)):
            addr = random_addr(rng, 12, 7)
            roll = rng.random()
            if roll < 0.62:
                kind = rng.choice(("num", "num", "text", "bool", "date"))
                raw = constant_text(rng, kind)
                wb = wb.set_cell(sheet, addr, raw)
                plan[kind].append((sheet, addr))
                constant_cells.append((sheet, addr, kind))
            elif roll < 0.94:
                kind = rng.choice(("num", "text", "bool"))
                wb = wb.set_cell(sheet, addr, gen.formula(kind, sheet))
            else:
                wb = wb.set_cell(sheet, addr, "=1 +")  # stored broken on purpose
    for sheet, addr, kind in constant_cells:
        if rng.random() < 0.18:
            enforced = {
                "num": rng.choice((EnforcedType.NUMBER, EnforcedType.INTEGER)),
                "text": EnforcedType.TEXT,
                "date": EnforcedType.DATE,
            }.get(kind)
            if enforced is not None:
                try:
                    wb = wb.set_enforced_type(sheet, addr, enforced)
                except TypeConformanceError:
                    pass  # the cell was overwritten with something incompatible
        if rng.random() < 0.18:
            spec = FormatSpec(
                bold=rng.random() < 0.5,
                align=rng.choice((None, "left", "right", "center")),
                number_format=rng.choice((None, "0.00", "#,##0", "0%")),
            )
            if not spec.empty:
                wb = wb.set_format(sheet, addr, spec)

    if rng.random() < 0.5:
        wb = wb.with_user_section(SectionKind.PRE_CONSTANTS, rng.choice(SNIPPETS_PRE_CONSTANTS))
    if rng.random() < 0.4:
        wb = wb.with_user_section(SectionKind.PRE_FORMULAE, rng.choice(SNIPPETS_PRE_FORMULAE))
    if rng.random() < 0.4:
        snippet = rng.choice(SNIPPETS_POST_FORMULAE).replace("{sheet}", names[0])
        wb = wb.with_user_section(SectionKind.POST_FORMULAE, snippet)

    if rng.random() < 0.3:
        wb = wb.attach_data_source(
            rng.choice(("data/feed.csv", "ext/prices.csv")),
            "Imported",
            has_header=rng.random() < 0.5,
        )
    plain = [n for n in names if n.isidentifier() and n.isascii()]
    if plain and rng.random() < 0.3:
        factor = rng.choice(("2", "0.5", plain[0]))
        wb = wb.set_worksheet_formula("Scaled", f"={plain[0]} * {factor}")
    if rng.random() < 0.25:
        wb = wb.lock()
    return wb
