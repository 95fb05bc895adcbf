import { ErrorState } from "./api";
import { Store } from "./store";

/** Prints from the program plus the error list, each row a navigation link. */
export class OutputPane {
  private text: HTMLPreElement;
  private errors: HTMLUListElement;

  constructor(root: HTMLElement, private store: Store) {
    const outHeader = document.createElement("header");
    outHeader.textContent = "output";
    this.text = document.createElement("pre");
    this.text.className = "output-text";
    const errHeader = document.createElement("header");
    errHeader.textContent = "problems";
    this.errors = document.createElement("ul");
    this.errors.className = "error-list";
    root.append(outHeader, this.text, errHeader, this.errors);
    store.subscribe(() => this.render());
  }

  render(): void {
    const state = this.store.state;
    if (!state) return;
    this.text.textContent = state.output || "(no output)";
    this.text.classList.toggle("placeholder", !state.output);

    this.errors.textContent = "";
    if (state.incomplete) {
      const li = document.createElement("li");
      li.className = "error-row incomplete";
      li.textContent = "recalculation incomplete: budget exhausted, values below are partial";
      this.errors.append(li);
    }
    for (const err of state.errors) {
      this.errors.append(this.renderError(err));
    }
    for (const note of state.diagnostics) {
      const li = document.createElement("li");
      li.className = "error-row diagnostic";
      li.textContent = `syntax: ${note}`;
      this.errors.append(li);
    }
  }

  private renderError(err: ErrorState): HTMLLIElement {
    const li = document.createElement("li");
    li.className = "error-row";
    const where = err.section ? `${err.section}${err.line != null ? ":" + err.line : ""}` : "";
    li.textContent = `${err.kind} ${where}${err.cell ? ` [${err.cell}]` : ""} ${err.message}`;
    li.addEventListener("click", () => this.navigate(err));
    return li;
  }

  private navigate(err: ErrorState): void {
    if (err.cell) {
      const bang = err.cell.indexOf("!");
      if (bang > 0) {
        const sheet = err.cell.slice(0, bang);
        const addr = err.cell.slice(bang + 1);
        this.store.setActiveSheet(sheet);
        this.store.select(addr);
        this.store.setHighlightLine(this.store.lineFor(sheet, addr));
        return;
      }
    }
    if (err.section && err.line != null) {
      const section = this.store.section(err.section);
      if (section) this.store.setHighlightLine(section.start_line + err.line - 1);
    }
  }
}
