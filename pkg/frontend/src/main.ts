import { api } from "./api";
import { CodePane } from "./codepane";
import { GridView } from "./grid";
import { OutputPane } from "./output";
import { Store } from "./store";
import { Toolbar } from "./toolbar";

/** Build the whole client into `root` and load the served document. */
export function createApp(root: HTMLElement): Store {
  const store = new Store();

  const toolbar = document.createElement("div");
  toolbar.id = "toolbar";
  const panes = document.createElement("div");
  panes.id = "panes";
  const gridPane = document.createElement("div");
  gridPane.id = "grid-pane";
  const codePane = document.createElement("div");
  codePane.id = "code-pane";
  const outputPane = document.createElement("div");
  outputPane.id = "output-pane";
  panes.append(gridPane, codePane);
  root.append(toolbar, panes, outputPane);

  new Toolbar(toolbar, store);
  new GridView(gridPane, store);
  new CodePane(codePane, store);
  new OutputPane(outputPane, store);

  void store.mutate(() => api.getWorkbook());
  return store;
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  createApp(document.getElementById("app")!);
}
