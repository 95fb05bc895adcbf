import { api, SectionState } from "./api";
import { Store } from "./store";

/**
 * The program as six sections in document order. Generated sections render
 * as shaded read-only line lists; user sections are textareas committed via
 * the service. Which is which comes from the server's editable flag, never
 * from a hardcoded list here.
 */
export class CodePane {
  constructor(private root: HTMLElement, private store: Store) {
    store.subscribe(() => this.render());
  }

  render(): void {
    const state = this.store.state;
    if (!state) return;
    const focused = document.activeElement;
    if (focused instanceof HTMLTextAreaElement && this.root.contains(focused)) {
      return; // do not clobber an edit in progress
    }
    this.root.textContent = "";
    for (const section of state.sections) {
      this.root.append(this.renderSection(section, state.locked));
    }
  }

  private renderSection(section: SectionState, locked: boolean): HTMLElement {
    const wrap = document.createElement("section");
    wrap.className = "code-section " + (section.editable ? "editable" : "generated");
    wrap.dataset.kind = section.kind;

    const header = document.createElement("header");
    header.textContent = `${section.kind} ${section.editable ? "(editable)" : "(generated)"}`;
    wrap.append(header);

    if (section.editable) {
      wrap.append(this.renderUserSection(section, locked));
    } else {
      wrap.append(this.renderGeneratedSection(section));
    }
    return wrap;
  }

  private renderGeneratedSection(section: SectionState): HTMLElement {
    const pre = document.createElement("pre");
    pre.className = "code-generated";
    // contenteditable stays unset: keystrokes have nowhere to land
    const lines = section.text.length ? section.text.replace(/\n$/, "").split("\n") : [];
    lines.forEach((text, i) => {
      const line = document.createElement("span");
      line.className = "code-line";
      const lineNo = section.start_line + i;
      line.dataset.line = String(lineNo);
      line.textContent = text === "" ? " " : text;
      if (lineNo === this.store.highlightLine) {
        line.classList.add("highlight");
        queueMicrotask(() => {
          if (typeof line.scrollIntoView === "function") {
            line.scrollIntoView({ block: "nearest" });
          }
        });
      }
      line.addEventListener("click", () => {
        const hit = this.store.cellForLine(lineNo);
        if (hit) {
          this.store.setActiveSheet(hit.sheet);
          this.store.select(hit.addr);
          this.store.setHighlightLine(lineNo);
        }
      });
      pre.append(line, document.createTextNode("\n"));
    });
    return pre;
  }

  private renderUserSection(section: SectionState, locked: boolean): HTMLElement {
    const holder = document.createElement("div");
    const area = document.createElement("textarea");
    area.className = "code-user";
    area.value = this.store.sectionDrafts.get(section.kind) ?? section.text;
    area.rows = Math.max(3, area.value.split("\n").length);
    area.readOnly = locked;
    area.addEventListener("input", () => {
      this.store.sectionDrafts.set(section.kind, area.value);
    });
    area.addEventListener("keydown", (ev) => {
      if (ev.key === "Enter" && (ev.ctrlKey || ev.metaKey)) {
        ev.preventDefault();
        this.commit(section.kind, area.value);
      }
    });

    const commit = document.createElement("button");
    commit.textContent = "apply";
    commit.className = "section-apply";
    commit.disabled = locked;
    commit.addEventListener("click", () => this.commit(section.kind, area.value));

    holder.append(area, commit);
    return holder;
  }

  private commit(kind: string, text: string): void {
    this.store.sectionDrafts.delete(kind);
    void this.store.mutate(() => api.putSection(kind, text));
  }
}
