import { ApiError, WorkbookState } from "./api";

export type Mutation = () => Promise<WorkbookState>;

type Listener = () => void;

/**
 * Client-side state: the latest server snapshot verbatim plus pure UI
 * concerns (selection, unsent edit buffers, the mutation queue). Values are
 * never recomputed here; a snapshot is only ever replaced by a full server
 * response.
 */
export class Store {
  state: WorkbookState | null = null;
  activeSheet = "";
  selected: string | null = null;
  cellDraft: string | null = null; // uncommitted edit for the selected cell
  sectionDrafts = new Map<string, string>(); // kind -> uncommitted text
  pending = false;
  lastError: ApiError | null = null;
  highlightLine: number | null = null;

  private queue: Mutation[] = [];
  private listeners: Listener[] = [];

  subscribe(fn: Listener): void {
    this.listeners.push(fn);
  }

  private notify(): void {
    for (const fn of this.listeners) fn();
  }

  /** Replace the snapshot with a server response, verbatim. */
  apply(state: WorkbookState): void {
    this.state = state;
    if (!state.sheets.some((s) => s.name === this.activeSheet)) {
      this.activeSheet = state.sheets.length ? state.sheets[0].name : "";
    }
    this.notify();
  }

  sheet(name?: string) {
    const wanted = name ?? this.activeSheet;
    return this.state?.sheets.find((s) => s.name === wanted) ?? null;
  }

  cell(addr: string) {
    return this.sheet()?.cells.find((c) => c.addr === addr) ?? null;
  }

  section(kind: string) {
    return this.state?.sections.find((s) => s.kind === kind) ?? null;
  }

  select(addr: string | null): void {
    this.selected = addr;
    this.cellDraft = null;
    this.notify();
  }

  setActiveSheet(name: string): void {
    this.activeSheet = name;
    this.selected = null;
    this.cellDraft = null;
    this.notify();
  }

  setCellDraft(text: string | null): void {
    this.cellDraft = text;
    this.notify();
  }

  setHighlightLine(line: number | null): void {
    this.highlightLine = line;
    this.notify();
  }

  /**
   * Run a mutation against the service. One request is in flight at a time;
   * anything submitted meanwhile queues behind it. Each response replaces
   * the snapshot; failures keep the old snapshot and surface the error.
   */
  mutate(run: Mutation): Promise<void> {
    return new Promise((resolve) => {
      this.queue.push(async () => {
        try {
          const state = await run();
          this.lastError = null;
          this.apply(state);
        } catch (err) {
          this.lastError =
            err instanceof ApiError ? err : new ApiError("CLIENT", String(err));
          this.notify();
        } finally {
          resolve();
        }
        return this.state as WorkbookState;
      });
      void this.drain();
    });
  }

  private async drain(): Promise<void> {
    if (this.pending) return;
    this.pending = true;
    this.notify();
    while (this.queue.length) {
      const next = this.queue.shift()!;
      await next();
    }
    this.pending = false;
    this.notify();
  }

  /** Program line for a cell, if it is a formula cell (from line_map). */
  lineFor(sheet: string, addr: string): number | null {
    return this.state?.line_map[sheet]?.[addr] ?? null;
  }

  /** Reverse of lineFor: which cell a generated program line belongs to. */
  cellForLine(line: number): { sheet: string; addr: string } | null {
    const map = this.state?.line_map ?? {};
    for (const sheet of Object.keys(map)) {
      for (const addr of Object.keys(map[sheet])) {
        if (map[sheet][addr] === line) return { sheet, addr };
      }
    }
    return null;
  }
}
