import { CellState, SheetState, WorkbookState } from "../src/api";

export function cell(addr: string, value: string, extra: Partial<CellState> = {}): CellState {
  return { addr, stored: value, value, is_error: false, overridden: false, ...extra };
}

export function sheet(name: string, cells: CellState[], extra: Partial<SheetState> = {}): SheetState {
  let min: string | null = null;
  let max: string | null = null;
  if (cells.length) {
    min = cells[0].addr;
    max = cells[cells.length - 1].addr;
  }
  return {
    name,
    bounds: cells.length ? { empty: false, min, max } : { empty: true },
    cells,
    derived: false,
    worksheet_formula: null,
    ...extra,
  };
}

export function workbook(sheets: SheetState[], extra: Partial<WorkbookState> = {}): WorkbookState {
  return {
    name: "Fixture",
    locked: false,
    sheets,
    sections: [
      { kind: "IMPORTS", editable: false, text: 'workbook = Workbook("Fixture")\n', start_line: 2 },
      { kind: "PRE_CONSTANTS", editable: true, text: "", start_line: 4 },
      { kind: "CONSTANTS", editable: false, text: "", start_line: 5 },
      { kind: "PRE_FORMULAE", editable: true, text: "", start_line: 7 },
      { kind: "FORMULAE", editable: false, text: "", start_line: 8 },
      { kind: "POST_FORMULAE", editable: true, text: "", start_line: 10 },
    ],
    output: "",
    errors: [],
    incomplete: false,
    line_map: {},
    data_sources: [],
    diagnostics: [],
    ...extra,
  };
}
