// @vitest-environment jsdom
import { beforeEach, describe, expect, it } from "vitest";

import { Store } from "../src/store";
import { Toolbar } from "../src/toolbar";
import { cell, sheet, workbook } from "./fixtures";

type Call = [string, string | undefined, unknown];

function mount() {
  document.body.innerHTML = "";
  const root = document.createElement("div");
  document.body.append(root);
  const store = new Store();
  new Toolbar(root, store);
  return { root, store };
}

function stubFetch(handler: (url: string, init?: RequestInit) => Response): Call[] {
  const calls: Call[] = [];
  globalThis.fetch = (async (url: unknown, init?: RequestInit) => {
    const body = init?.body === undefined ? undefined : JSON.parse(String(init.body));
    calls.push([String(url), init?.method, body]);
    return handler(String(url), init);
  }) as typeof fetch;
  return calls;
}

function ok(state: unknown): Response {
  return new Response(JSON.stringify(state), {
    status: 200,
    headers: { "content-type": "application/json" },
  });
}

function fail(status: number, payload: unknown): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "content-type": "application/json" },
  });
}

const settle = () => new Promise((r) => setTimeout(r, 0));

describe("toolbar", () => {
  let root: HTMLElement;
  let store: Store;

  beforeEach(() => {
    ({ root, store } = mount());
  });

  it("toggles the document lock", async () => {
    store.apply(workbook([sheet("Sheet1", [])]));
    const btn = root.querySelector(".lock-toggle") as HTMLButtonElement;
    expect(btn.textContent).toBe("lock");

    const calls = stubFetch(() => ok(workbook([sheet("Sheet1", [])], { locked: true })));
    btn.click();
    await settle();
    expect(calls).toEqual([["/lock", "POST", undefined]]);
    expect(btn.textContent).toBe("unlock");

    calls.length = 0;
    globalThis.fetch = (async () => ok(workbook([sheet("Sheet1", [])]))) as typeof fetch;
    btn.click();
    await settle();
    expect(btn.textContent).toBe("lock");
  });

  it("shows a type conflict inline and keeps the old snapshot", async () => {
    const before = workbook([sheet("Sheet1", [cell("A1", "abc")])]);
    store.apply(before);
    store.select("A1");
    stubFetch(() => fail(409, { error_kind: "TYPE", message: "A1 does not conform to NUMBER" }));

    const picker = root.querySelector(".type-picker") as HTMLSelectElement;
    picker.value = "NUMBER";
    picker.dispatchEvent(new Event("change", { bubbles: true }));
    await settle();

    const status = root.querySelector(".status") as HTMLSpanElement;
    expect(status.textContent).toBe("TYPE: A1 does not conform to NUMBER");
    expect(status.classList.contains("error")).toBe(true);
    expect(store.state).toBe(before); // rejected mutation leaves the snapshot alone
  });

  it("reports parse positions from worksheet formula rejections", async () => {
    store.apply(workbook([sheet("Rates", [])]));
    stubFetch(() => fail(400, { error_kind: "PARSE", message: "expected operand", position: 3 }));

    const input = root.querySelector(".worksheet-formula") as HTMLInputElement;
    input.value = "=A *";
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    await settle();

    const status = root.querySelector(".status") as HTMLSpanElement;
    expect(status.textContent).toBe("PARSE: expected operand (position 3)");
  });

  it("commits the worksheet formula for the active sheet", async () => {
    store.apply(workbook([sheet("Sheet1", []), sheet("Totals", [])]));
    store.setActiveSheet("Totals");
    const calls = stubFetch(() =>
      ok(workbook([sheet("Sheet1", []), sheet("Totals", [], { derived: true })])),
    );

    const input = root.querySelector(".worksheet-formula") as HTMLInputElement;
    input.value = "=Sheet1 * 2";
    input.dispatchEvent(new KeyboardEvent("keydown", { key: "Enter", bubbles: true }));
    await settle();

    expect(calls).toEqual([
      ["/worksheet-formula", "PUT", { sheet: "Totals", source: "=Sheet1 * 2" }],
    ]);
  });

  it("sends null when the enforced type is cleared", async () => {
    store.apply(workbook([sheet("Sheet1", [cell("A1", "5", { enforced_type: "INTEGER" })])]));
    store.select("A1");
    const picker = root.querySelector(".type-picker") as HTMLSelectElement;
    expect(picker.value).toBe("INTEGER"); // tracks the selection

    const calls = stubFetch(() => ok(workbook([sheet("Sheet1", [cell("A1", "5")])])));
    picker.value = "";
    picker.dispatchEvent(new Event("change", { bubbles: true }));
    await settle();
    expect(calls).toEqual([
      ["/enforced-type", "PUT", { sheet: "Sheet1", addr: "A1", type: null }],
    ]);
  });

  it("attaches a csv source from the dialog", async () => {
    store.apply(workbook([sheet("Sheet1", [])]));
    const calls = stubFetch(() => ok(workbook([sheet("Sheet1", []), sheet("Feed", [])])));

    const form = root.querySelector(".csv-form") as HTMLFormElement;
    (form.elements.namedItem("path") as HTMLInputElement).value = "feed.csv";
    (form.elements.namedItem("target") as HTMLInputElement).value = "Feed";
    (form.elements.namedItem("header") as HTMLInputElement).checked = true;
    form.dispatchEvent(new Event("submit", { bubbles: true, cancelable: true }));
    await settle();

    expect(calls).toEqual([
      ["/data-source", "POST", { path: "feed.csv", target_sheet: "Feed", has_header: true }],
    ]);
  });

  it("downloads exports through the service", async () => {
    store.apply(workbook([sheet("Sheet1", [])]));
    stubFetch(() => new Response("program text here", { status: 200 }));

    // keep jsdom from following the blob href; record the triggered download
    const downloads: string[] = [];
    const origClick = HTMLAnchorElement.prototype.click;
    HTMLAnchorElement.prototype.click = function (this: HTMLAnchorElement) {
      downloads.push(this.download);
    };
    try {
      const btn = root.querySelector('button[data-mode="standalone"]') as HTMLButtonElement;
      btn.click();
      await settle();
    } finally {
      HTMLAnchorElement.prototype.click = origClick;
    }

    const status = root.querySelector(".status") as HTMLSpanElement;
    expect(status.textContent).toBe("exported Fixture-standalone.py (17 bytes)");
    expect(status.classList.contains("error")).toBe(false);
    expect(downloads).toEqual(["Fixture-standalone.py"]);
  });

  it("disables mutating controls while locked", () => {
    store.apply(workbook([sheet("Sheet1", [cell("A1", "1")])], { locked: true }));
    store.select("A1");
    expect((root.querySelector(".type-picker") as HTMLSelectElement).disabled).toBe(true);
    expect((root.querySelector(".worksheet-formula") as HTMLInputElement).disabled).toBe(true);
    const form = root.querySelector(".csv-form") as HTMLFormElement;
    for (const el of Array.from(form.elements)) {
      expect((el as HTMLInputElement).disabled).toBe(true);
    }
  });
});
