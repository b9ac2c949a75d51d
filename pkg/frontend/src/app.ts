/**
 * Application shell: view tabs, sort controls, filter panel, matrix
 * editor, the tree table, and the dependency-graph modal, all driven
 * by one ViewState that is mirrored into the URL after every change.
 */

import { ApiError, fetchGraph, fetchView, type FetchLike } from "./api.js";
import { attachFilterPanel } from "./filters.js";
import { renderGraphModal } from "./graphmodal.js";
import { renderMatrixEditor } from "./matrix.js";
import {
  defaultState,
  emptyFilter,
  stateFromQuery,
  stateToQuery,
  toggleExpanded,
  type SortDirectionName,
  type SortKeyName,
  type ViewState,
} from "./state.js";
import { renderErrorBanner, renderViewTable, type TableHandlers } from "./table.js";
import type { RowKind, ViewName, ViewResponse } from "./types.js";

const VIEW_TABS: Array<{ view: ViewName; label: string }> = [
  { view: "repositories", label: "Repositories" },
  { view: "libraries", label: "Libraries" },
  { view: "bugs", label: "Bugs" },
];

const SORT_OPTIONS: Array<{ value: SortKeyName | ""; label: string }> = [
  { value: "", label: "Table order" },
  { value: "mostSevere", label: "Most severe" },
  { value: "vulnerabilityCount", label: "Vulnerability count" },
  { value: "linkCount", label: "Link count" },
  { value: "name", label: "Name" },
];

export interface AppOptions {
  fetchImpl?: FetchLike;
  /** Query string to boot from; defaults to window.location.search. */
  initialQuery?: string;
}

export interface AppHandle {
  /** Resolves once the first view render (and modal restore) settled. */
  ready: Promise<void>;
  getState(): ViewState;
  refresh(): Promise<void>;
}

function errorText(err: unknown): string {
  if (err instanceof ApiError) return `Request failed (${err.status}): ${err.message}`;
  return `Request failed: ${err instanceof Error ? err.message : String(err)}`;
}

export function initApp(root: HTMLElement, options: AppOptions = {}): AppHandle {
  const fetchImpl = options.fetchImpl ?? fetch;
  let state = stateFromQuery(
    new URLSearchParams(options.initialQuery ?? window.location.search),
  );

  root.textContent = "";
  root.className = "app";

  const header = document.createElement("header");
  header.className = "app-header";
  const title = document.createElement("h1");
  title.textContent = "Vulnerability Explorer";
  header.appendChild(title);

  const tabs = document.createElement("nav");
  tabs.className = "view-tabs";
  const tabButtons = new Map<ViewName, HTMLButtonElement>();
  for (const { view, label } of VIEW_TABS) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "view-tab";
    button.dataset["view"] = view;
    button.textContent = label;
    button.addEventListener("click", () => {
      if (state.view === view) return;
      // A new ordering means new row paths, so expansion and paging
      // start over; filters and sorting carry across views.
      state = { ...state, view, expanded: [], page: 1 };
      paintTabs();
      void refresh();
    });
    tabs.appendChild(button);
    tabButtons.set(view, button);
  }
  header.appendChild(tabs);
  root.appendChild(header);

  function paintTabs(): void {
    for (const [view, button] of tabButtons) {
      button.classList.toggle("active", view === state.view);
    }
  }
  paintTabs();

  const controls = document.createElement("div");
  controls.className = "controls";

  const filterHost = document.createElement("div");
  controls.appendChild(filterHost);

  const sortBar = document.createElement("div");
  sortBar.className = "sort-bar";
  const sortLabel = document.createElement("span");
  sortLabel.textContent = "Sort";
  const sortKeySelect = document.createElement("select");
  sortKeySelect.className = "sort-key";
  for (const { value, label } of SORT_OPTIONS) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = label;
    sortKeySelect.appendChild(option);
  }
  const sortDirSelect = document.createElement("select");
  sortDirSelect.className = "sort-direction";
  for (const [value, label] of [
    ["", "default direction"],
    ["asc", "ascending"],
    ["desc", "descending"],
  ] as const) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = label;
    sortDirSelect.appendChild(option);
  }
  function paintSort(): void {
    sortKeySelect.value = state.sortKey ?? "";
    sortDirSelect.value = state.sortDirection ?? "";
    sortDirSelect.disabled = state.sortKey === null;
  }
  sortKeySelect.addEventListener("change", () => {
    const key = sortKeySelect.value === "" ? null : (sortKeySelect.value as SortKeyName);
    state = {
      ...state,
      sortKey: key,
      sortDirection: key === null ? null : state.sortDirection,
      page: 1,
    };
    paintSort();
    void refresh();
  });
  sortDirSelect.addEventListener("change", () => {
    const dir =
      sortDirSelect.value === "" ? null : (sortDirSelect.value as SortDirectionName);
    state = { ...state, sortDirection: dir, page: 1 };
    void refresh();
  });
  paintSort();
  sortBar.append(sortLabel, sortKeySelect, sortDirSelect);
  controls.appendChild(sortBar);

  const matrixHost = document.createElement("div");
  controls.appendChild(matrixHost);
  root.appendChild(controls);

  const banner = document.createElement("div");
  banner.className = "error-banner";
  banner.hidden = true;
  root.appendChild(banner);

  const tableHost = document.createElement("div");
  tableHost.className = "table-host";
  root.appendChild(tableHost);

  const modalHost = document.createElement("div");
  modalHost.className = "modal-host";
  modalHost.hidden = true;
  root.appendChild(modalHost);

  function attachFilters(): void {
    attachFilterPanel(filterHost, state.filter, (form) => {
      state = { ...state, filter: form, page: 1 };
      void refresh();
    });
  }
  attachFilters();

  function syncUrl(): void {
    const query = stateToQuery(state).toString();
    const url = query === "" ? window.location.pathname : `${window.location.pathname}?${query}`;
    window.history.replaceState(null, "", url);
  }

  const tableHandlers: TableHandlers = {
    onToggle(path) {
      state = toggleExpanded(state, path);
      void refresh();
    },
    onOpenGraph(repositoryId) {
      void openGraph(repositoryId);
    },
    onPageChange(page) {
      state = { ...state, page };
      void refresh();
    },
  };

  function onMatrixChange(next: string[] | null): void {
    state = { ...state, matrixColumns: next };
    void refresh();
  }

  function paintMatrixEditor(response: ViewResponse): void {
    const rendered =
      state.matrixColumns === null ? response.matrixColumns : state.matrixColumns;
    renderMatrixEditor(matrixHost, rendered, state.matrixColumns, onMatrixChange);
  }

  async function refresh(): Promise<void> {
    syncUrl();
    try {
      const response = await fetchView(state, fetchImpl);
      renderErrorBanner(banner, null);
      renderViewTable(tableHost, response, state, tableHandlers);
      paintMatrixEditor(response);
    } catch (err) {
      if (err instanceof Error && err.name === "AbortError") return; // superseded
      renderErrorBanner(banner, errorText(err));
      // Previous table (if any) stays on screen.
    }
  }

  function closeGraph(): void {
    state = { ...state, graphRepository: null };
    modalHost.hidden = true;
    modalHost.textContent = "";
    syncUrl();
  }

  function navigateTo(kind: RowKind, _id: string, name: string): void {
    closeGraph();
    const view: ViewName =
      kind === "library" ? "libraries" : kind === "bug" ? "bugs" : "repositories";
    state = {
      ...state,
      view,
      filter: { ...emptyFilter(), nameQuery: name },
      expanded: [],
      page: 1,
    };
    paintTabs();
    attachFilters();
    void refresh();
  }

  async function openGraph(repositoryId: string): Promise<void> {
    state = { ...state, graphRepository: repositoryId };
    syncUrl();
    try {
      const graph = await fetchGraph(repositoryId, fetchImpl);
      renderGraphModal(modalHost, graph, {
        onClose: closeGraph,
        onNavigate: navigateTo,
      });
      modalHost.hidden = false;
    } catch (err) {
      renderErrorBanner(banner, errorText(err));
      closeGraph();
    }
  }

  const ready = (async () => {
    await refresh();
    if (state.graphRepository !== null) await openGraph(state.graphRepository);
  })();

  return {
    ready,
    getState: () => state,
    refresh,
  };
}

/** Boot against the real DOM when loaded as the page entry point. */
export function main(): void {
  const root = document.getElementById("app");
  if (root !== null) initApp(root);
}

export { defaultState };
