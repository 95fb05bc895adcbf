// Typed client for the document service. The UI never computes cell values;
// everything displayed comes out of these response payloads.

export interface BoundsState {
  empty: boolean;
  min?: string | null;
  max?: string | null;
}

export interface CellState {
  addr: string;
  stored?: string | null;
  value: string;
  is_error: boolean;
  overridden: boolean;
  enforced_type?: string | null;
  format?: string | null;
}

export interface SheetState {
  name: string;
  bounds: BoundsState;
  cells: CellState[];
  derived: boolean;
  worksheet_formula?: string | null;
}

export interface SectionState {
  kind: string;
  editable: boolean;
  text: string;
  start_line: number;
}

export interface StackFrameState {
  section: string;
  line: number;
  function: string;
}

export interface ErrorState {
  kind: string;
  message: string;
  section?: string | null;
  line?: number | null;
  cell?: string | null;
  stack: StackFrameState[];
}

export interface DataSourceState {
  path: string;
  target_sheet: string;
  has_header: boolean;
}

export interface WorkbookState {
  name: string;
  locked: boolean;
  sheets: SheetState[];
  sections: SectionState[];
  output: string;
  errors: ErrorState[];
  incomplete: boolean;
  line_map: Record<string, Record<string, number>>;
  data_sources: DataSourceState[];
  diagnostics: string[];
}

export class ApiError extends Error {
  constructor(
    public errorKind: string,
    message: string,
    public position: number | null = null,
    public status = 0,
  ) {
    super(message);
  }
}

let base = "";

/** Point the client somewhere other than the serving origin (tests). */
export function setApiBase(url: string): void {
  base = url.replace(/\/$/, "");
}

async function request<T>(method: string, path: string, body?: unknown): Promise<T> {
  const resp = await fetch(base + path, {
    method,
    headers: body === undefined ? undefined : { "content-type": "application/json" },
    body: body === undefined ? undefined : JSON.stringify(body),
  });
  if (!resp.ok) {
    let kind = "HTTP";
    let message = `${resp.status} ${resp.statusText}`;
    let position: number | null = null;
    try {
      const payload = await resp.json();
      if (payload && typeof payload.error_kind === "string") {
        kind = payload.error_kind;
        message = payload.message ?? message;
        position = payload.position ?? null;
      } else if (payload && payload.detail) {
        message = JSON.stringify(payload.detail);
      }
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(kind, message, position, resp.status);
  }
  return resp.json() as Promise<T>;
}

async function requestText(path: string): Promise<string> {
  const resp = await fetch(base + path);
  if (!resp.ok) throw new ApiError("HTTP", `${resp.status} ${resp.statusText}`, null, resp.status);
  return resp.text();
}

export const api = {
  getWorkbook: () => request<WorkbookState>("GET", "/workbook"),
  putCell: (sheet: string, addr: string, raw: string) =>
    request<WorkbookState>("PUT", "/cell", { sheet, addr, raw }),
  putSection: (kind: string, text: string) =>
    request<WorkbookState>("PUT", "/section", { kind, text }),
  putWorksheetFormula: (sheet: string, source: string | null) =>
    request<WorkbookState>("PUT", "/worksheet-formula", { sheet, source }),
  putEnforcedType: (sheet: string, addr: string, type: string | null) =>
    request<WorkbookState>("PUT", "/enforced-type", { sheet, addr, type }),
  putFormat: (sheet: string, addr: string, format: string) =>
    request<WorkbookState>("PUT", "/format", { sheet, addr, format }),
  lock: () => request<WorkbookState>("POST", "/lock"),
  unlock: () => request<WorkbookState>("POST", "/unlock"),
  attachDataSource: (path: string, targetSheet: string, hasHeader: boolean) =>
    request<WorkbookState>("POST", "/data-source", {
      path,
      target_sheet: targetSheet,
      has_header: hasHeader,
    }),
  detachDataSource: (targetSheet: string) =>
    request<WorkbookState>(
      "DELETE",
      `/data-source?target_sheet=${encodeURIComponent(targetSheet)}`,
    ),
  exportText: (mode: "standalone" | "library" | "data-only") =>
    requestText(`/export/${mode}`),
};
