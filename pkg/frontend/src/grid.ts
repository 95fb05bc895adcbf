import { api, CellState } from "./api";
import { addrText, columnLetter, parseAddr } from "./addr";
import { Store } from "./store";

const MIN_ROWS = 12;
const MIN_COLS = 8;

/**
 * The grid: sheet tabs, a formula bar showing the selected cell's stored
 * text, and the cell table. Cells render the server-computed display value;
 * editing writes the raw text back through PUT /cell.
 */
export class GridView {
  private tabs: HTMLDivElement;
  private bar: HTMLInputElement;
  private barLabel: HTMLSpanElement;
  private table: HTMLTableElement;

  constructor(root: HTMLElement, private store: Store) {
    this.tabs = document.createElement("div");
    this.tabs.className = "sheet-tabs";

    const barRow = document.createElement("div");
    barRow.className = "formula-bar";
    this.barLabel = document.createElement("span");
    this.barLabel.className = "formula-bar-addr";
    this.bar = document.createElement("input");
    this.bar.className = "formula-bar-input";
    this.bar.placeholder = "select a cell";
    barRow.append(this.barLabel, this.bar);

    const scroller = document.createElement("div");
    scroller.className = "grid-scroller";
    this.table = document.createElement("table");
    this.table.className = "grid";
    scroller.append(this.table);

    root.append(this.tabs, barRow, scroller);

    this.bar.addEventListener("input", () => {
      this.store.cellDraft = this.bar.value; // track without re-render
    });
    this.bar.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter") {
        ev.preventDefault();
        this.commitBar();
      } else if (ev.key === "Escape") {
        this.store.setCellDraft(null);
      }
    });

    store.subscribe(() => this.render());
  }

  private commitBar(): void {
    const addr = this.store.selected;
    const sheet = this.store.activeSheet;
    if (!addr || !sheet) return;
    const raw = this.bar.value;
    this.store.cellDraft = null;
    void this.store.mutate(() => api.putCell(sheet, addr, raw));
  }

  private editsBlocked(cell: CellState | null): boolean {
    const state = this.store.state;
    if (!state) return true;
    const sheet = this.store.sheet();
    if (!sheet || sheet.derived) return true;
    // locked documents still accept constant entries, not formula edits
    if (state.locked) {
      const storesFormula = cell?.stored?.startsWith("=") ?? false;
      return storesFormula;
    }
    return false;
  }

  render(): void {
    const state = this.store.state;
    if (!state) return;
    this.renderTabs();
    this.renderBar();
    this.renderTable();
  }

  private renderTabs(): void {
    this.tabs.textContent = "";
    for (const sheet of this.store.state!.sheets) {
      const tab = document.createElement("button");
      tab.className = "sheet-tab" + (sheet.name === this.store.activeSheet ? " active" : "");
      tab.textContent = sheet.derived ? `${sheet.name} *` : sheet.name;
      tab.title = sheet.worksheet_formula ?? "";
      tab.addEventListener("click", () => this.store.setActiveSheet(sheet.name));
      this.tabs.append(tab);
    }
  }

  private renderBar(): void {
    const addr = this.store.selected;
    this.barLabel.textContent = addr ? `${this.store.activeSheet}!${addr}` : "";
    const cell = addr ? this.store.cell(addr) : null;
    const text = this.store.cellDraft ?? cell?.stored ?? "";
    if (document.activeElement !== this.bar) this.bar.value = text;
    this.bar.disabled = !addr || this.editsBlocked(cell);
  }

  private renderTable(): void {
    const sheet = this.store.sheet();
    this.table.textContent = "";
    if (!sheet) return;

    const byAddr = new Map(sheet.cells.map((c) => [c.addr, c]));
    let rows = MIN_ROWS;
    let cols = MIN_COLS;
    let lo: { row: number; col: number } | null = null;
    let hi: { row: number; col: number } | null = null;
    if (!sheet.bounds.empty && sheet.bounds.min && sheet.bounds.max) {
      lo = parseAddr(sheet.bounds.min);
      hi = parseAddr(sheet.bounds.max);
    }
    for (const c of sheet.cells) {
      const p = parseAddr(c.addr);
      rows = Math.max(rows, p.row);
      cols = Math.max(cols, p.col);
    }
    if (hi) {
      rows = Math.max(rows, hi.row);
      cols = Math.max(cols, hi.col);
    }
    rows += 2; // room to grow by typing
    cols += 1;

    const head = this.table.createTHead().insertRow();
    head.append(document.createElement("th"));
    for (let c = 1; c <= cols; c++) {
      const th = document.createElement("th");
      th.textContent = columnLetter(c);
      head.append(th);
    }

    const body = this.table.createTBody();
    for (let r = 1; r <= rows; r++) {
      const tr = body.insertRow();
      const th = document.createElement("th");
      th.textContent = String(r);
      tr.append(th);
      for (let c = 1; c <= cols; c++) {
        const addr = addrText(r, c);
        const cell = byAddr.get(addr) ?? null;
        const td = tr.insertCell();
        td.dataset.addr = addr;
        td.textContent = cell?.value ?? "";
        // the bounds rectangle outline: only when the sheet is non-empty
        if (lo && hi && r >= lo.row && r <= hi.row && c >= lo.col && c <= hi.col) {
          td.classList.add("in-bounds");
        }
        if (cell?.is_error) td.classList.add("error");
        if (cell?.overridden) {
          td.classList.add("overridden");
          td.title = `grid holds: ${cell.stored ?? ""}`;
        }
        if (cell?.enforced_type) {
          const badge = document.createElement("span");
          badge.className = "type-badge";
          badge.textContent = cell.enforced_type[0];
          badge.title = cell.enforced_type;
          td.append(badge);
        }
        if (addr === this.store.selected) td.classList.add("selected");
        td.addEventListener("click", () => this.selectCell(addr));
        td.addEventListener("dblclick", () => {
          this.selectCell(addr);
          if (!this.bar.disabled) this.bar.focus();
        });
      }
    }
  }

  private selectCell(addr: string): void {
    this.store.select(addr);
    const line = this.store.lineFor(this.store.activeSheet, addr);
    this.store.setHighlightLine(line);
  }
}

