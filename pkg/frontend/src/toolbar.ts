import { api } from "./api";
import { Store } from "./store";

const ENFORCED_TYPES = ["", "TEXT", "NUMBER", "INTEGER", "DATE"];

/**
 * Document-level controls: lock toggle, exports, CSV sources, the active
 * sheet's worksheet formula, and the selected cell's enforced type. Server
 * rejections land in the status strip instead of an alert.
 */
export class Toolbar {
  private lockBtn: HTMLButtonElement;
  private typePicker: HTMLSelectElement;
  private sheetFormula: HTMLInputElement;
  private status: HTMLSpanElement;
  private csvForm: HTMLFormElement;

  constructor(root: HTMLElement, private store: Store) {
    this.lockBtn = document.createElement("button");
    this.lockBtn.className = "lock-toggle";
    this.lockBtn.addEventListener("click", () => {
      const locked = this.store.state?.locked;
      void this.store.mutate(() => (locked ? api.unlock() : api.lock()));
    });

    const exports = document.createElement("span");
    exports.className = "export-group";
    for (const mode of ["standalone", "library", "data-only"] as const) {
      const btn = document.createElement("button");
      btn.textContent = `export ${mode}`;
      btn.dataset.mode = mode;
      btn.addEventListener("click", () => void this.download(mode));
      exports.append(btn);
    }

    this.typePicker = document.createElement("select");
    this.typePicker.className = "type-picker";
    for (const t of ENFORCED_TYPES) {
      const opt = document.createElement("option");
      opt.value = t;
      opt.textContent = t === "" ? "(no enforced type)" : t;
      this.typePicker.append(opt);
    }
    this.typePicker.addEventListener("change", () => {
      const addr = this.store.selected;
      const sheet = this.store.activeSheet;
      if (!addr) return;
      const type = this.typePicker.value || null;
      void this.store.mutate(() => api.putEnforcedType(sheet, addr, type));
    });

    this.sheetFormula = document.createElement("input");
    this.sheetFormula.className = "worksheet-formula";
    this.sheetFormula.placeholder = "worksheet formula, e.g. =Balances * Rates";
    this.sheetFormula.addEventListener("keydown", (ev) => {
      if (ev.key !== "Enter") return;
      ev.preventDefault();
      const sheet = this.store.activeSheet;
      const source = this.sheetFormula.value.trim();
      void this.store.mutate(() => api.putWorksheetFormula(sheet, source === "" ? null : source));
    });

    this.csvForm = document.createElement("form");
    this.csvForm.className = "csv-form";
    this.csvForm.innerHTML =
      '<input name="path" placeholder="data.csv">' +
      '<input name="target" placeholder="target sheet">' +
      '<label><input type="checkbox" name="header">header</label>' +
      '<button type="submit">attach csv</button>';
    this.csvForm.addEventListener("submit", (ev) => {
      ev.preventDefault();
      const path = (this.csvForm.elements.namedItem("path") as HTMLInputElement).value;
      const target = (this.csvForm.elements.namedItem("target") as HTMLInputElement).value;
      const header = (this.csvForm.elements.namedItem("header") as HTMLInputElement).checked;
      if (!path || !target) return;
      void this.store.mutate(() => api.attachDataSource(path, target, header));
    });

    this.status = document.createElement("span");
    this.status.className = "status";

    root.append(
      this.lockBtn,
      exports,
      this.typePicker,
      this.sheetFormula,
      this.csvForm,
      this.status,
    );
    store.subscribe(() => this.render());
  }

  private async download(mode: "standalone" | "library" | "data-only"): Promise<void> {
    try {
      const text = await api.exportText(mode);
      const name = `${this.store.state?.name ?? "workbook"}-${mode}.py`;
      // headless DOMs may lack blob URLs; the status line still reports the export
      if (typeof URL.createObjectURL === "function") {
        const link = document.createElement("a");
        link.href = URL.createObjectURL(new Blob([text], { type: "text/x-python" }));
        link.download = name;
        link.click();
        URL.revokeObjectURL(link.href);
      }
      this.status.textContent = `exported ${name} (${text.length} bytes)`;
      this.status.classList.remove("error");
    } catch (err) {
      this.status.textContent = String(err);
      this.status.classList.add("error");
    }
  }

  render(): void {
    const state = this.store.state;
    if (!state) return;
    this.lockBtn.textContent = state.locked ? "unlock" : "lock";
    this.lockBtn.title = state.locked
      ? "formulae and code are frozen"
      : "freeze formulae and code";

    const cell = this.store.selected ? this.store.cell(this.store.selected) : null;
    this.typePicker.value = cell?.enforced_type ?? "";
    this.typePicker.disabled = !this.store.selected || state.locked;

    const sheet = this.store.sheet();
    if (document.activeElement !== this.sheetFormula) {
      this.sheetFormula.value = sheet?.worksheet_formula ?? "";
    }
    this.sheetFormula.disabled = state.locked;

    for (const el of this.csvForm.elements) {
      (el as HTMLInputElement | HTMLButtonElement).disabled = state.locked;
    }

    const err = this.store.lastError;
    if (err) {
      this.status.textContent =
        `${err.errorKind}: ${err.message}` +
        (err.position != null ? ` (position ${err.position})` : "");
      this.status.classList.add("error");
    } else if (this.store.pending) {
      this.status.textContent = "working...";
      this.status.classList.remove("error");
    } else if (!this.status.textContent.startsWith("exported")) {
      this.status.textContent = "";
      this.status.classList.remove("error");
    }
  }
}
