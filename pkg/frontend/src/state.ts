/**
 * ViewState: everything the analyst has configured, serializable to
 * the URL query string so an analysis can be bookmarked or shared.
 *
 * Filter fields are kept as raw input strings so invalid text can be
 * flagged inline without losing what the user typed; they are parsed
 * only when a request is built.
 */

import type { ViewName } from "./types.js";

export type SortKeyName = "mostSevere" | "vulnerabilityCount" | "linkCount" | "name";
export type SortDirectionName = "asc" | "desc";

export interface FilterForm {
  nameQuery: string;
  minCvss: string;
  maxCvss: string;
  minDependencies: string;
  maxDependencies: string;
  minVulnerabilities: string;
  maxVulnerabilities: string;
  hideVulnerabilityFree: boolean;
  hideUnscoredCves: boolean;
}

export interface ViewState {
  view: ViewName;
  filter: FilterForm;
  sortKey: SortKeyName | null;
  sortDirection: SortDirectionName | null;
  /** Root-to-row id paths of expanded rows. Ids never contain "/". */
  expanded: string[][];
  /** null means "server default columns". [] means a zero-column matrix. */
  matrixColumns: string[] | null;
  /** Repository whose dependency graph modal is open, if any. */
  graphRepository: string | null;
  page: number;
}

const VIEWS: ViewName[] = ["repositories", "libraries", "bugs"];
const SORT_KEYS: SortKeyName[] = ["mostSevere", "vulnerabilityCount", "linkCount", "name"];

export function emptyFilter(): FilterForm {
  return {
    nameQuery: "",
    minCvss: "",
    maxCvss: "",
    minDependencies: "",
    maxDependencies: "",
    minVulnerabilities: "",
    maxVulnerabilities: "",
    hideVulnerabilityFree: false,
    hideUnscoredCves: false,
  };
}

export function defaultState(): ViewState {
  return {
    view: "repositories",
    filter: emptyFilter(),
    sortKey: null,
    sortDirection: null,
    expanded: [],
    matrixColumns: null,
    graphRepository: null,
    page: 1,
  };
}

const TEXT_FILTERS: Array<keyof FilterForm> = [
  "nameQuery",
  "minCvss",
  "maxCvss",
  "minDependencies",
  "maxDependencies",
  "minVulnerabilities",
  "maxVulnerabilities",
];

/** Serialize the state to query parameters, omitting defaults. */
export function stateToQuery(state: ViewState): URLSearchParams {
  const params = new URLSearchParams();
  if (state.view !== "repositories") params.set("view", state.view);
  for (const field of TEXT_FILTERS) {
    const value = state.filter[field] as string;
    if (value !== "") params.set(field, value);
  }
  if (state.filter.hideVulnerabilityFree) params.set("hideFree", "1");
  if (state.filter.hideUnscoredCves) params.set("hideUnscored", "1");
  if (state.sortKey !== null) params.set("sort", state.sortKey);
  if (state.sortDirection !== null) params.set("dir", state.sortDirection);
  for (const path of state.expanded) params.append("expand", path.join("/"));
  if (state.matrixColumns !== null) params.set("cols", state.matrixColumns.join(","));
  if (state.graphRepository !== null) params.set("graph", state.graphRepository);
  if (state.page !== 1) params.set("page", String(state.page));
  return params;
}

/** Rebuild a ViewState from query parameters; anything malformed falls
 * back to its default rather than failing the page load. */
export function stateFromQuery(params: URLSearchParams): ViewState {
  const state = defaultState();
  const view = params.get("view");
  if (view !== null && (VIEWS as string[]).includes(view)) state.view = view as ViewName;
  for (const field of TEXT_FILTERS) {
    const value = params.get(field);
    if (value !== null) (state.filter[field] as string) = value;
  }
  state.filter.hideVulnerabilityFree = params.get("hideFree") === "1";
  state.filter.hideUnscoredCves = params.get("hideUnscored") === "1";
  const sort = params.get("sort");
  if (sort !== null && (SORT_KEYS as string[]).includes(sort)) {
    state.sortKey = sort as SortKeyName;
  }
  const dir = params.get("dir");
  if (state.sortKey !== null && (dir === "asc" || dir === "desc")) {
    state.sortDirection = dir;
  }
  state.expanded = params.getAll("expand").map((raw) => raw.split("/"));
  const cols = params.get("cols");
  if (cols !== null) state.matrixColumns = cols === "" ? [] : cols.split(",");
  state.graphRepository = params.get("graph");
  const page = Number(params.get("page"));
  if (Number.isInteger(page) && page > 1) state.page = page;
  return state;
}

/** Build the API request path for the current state.
 *
 * Assumes the filter form has passed validation; empty fields are
 * omitted so the server applies no bound for them.
 */
export function requestPath(state: ViewState): string {
  const params = new URLSearchParams();
  const f = state.filter;
  if (f.nameQuery !== "") params.set("nameQuery", f.nameQuery);
  if (f.minCvss !== "") params.set("minCvss", f.minCvss);
  if (f.maxCvss !== "") params.set("maxCvss", f.maxCvss);
  if (f.minDependencies !== "") params.set("minDependencies", f.minDependencies);
  if (f.maxDependencies !== "") params.set("maxDependencies", f.maxDependencies);
  if (f.minVulnerabilities !== "") params.set("minVulnerabilities", f.minVulnerabilities);
  if (f.maxVulnerabilities !== "") params.set("maxVulnerabilities", f.maxVulnerabilities);
  if (f.hideVulnerabilityFree) params.set("hideVulnerabilityFree", "true");
  if (f.hideUnscoredCves) params.set("hideUnscoredCves", "true");
  if (state.sortKey !== null) {
    params.set("sortKey", state.sortKey);
    if (state.sortDirection !== null) params.set("sortDirection", state.sortDirection);
  }
  for (const path of state.expanded) params.append("expand", path.join("/"));
  if (state.matrixColumns !== null) {
    for (const cveId of state.matrixColumns) params.append("matrixColumns", cveId);
  }
  if (state.page !== 1) params.set("page", String(state.page));
  const query = params.toString();
  return `/api/views/${state.view}${query === "" ? "" : "?" + query}`;
}

/** Is this exact path currently expanded? */
export function isExpanded(state: ViewState, path: string[]): boolean {
  const key = path.join("/");
  return state.expanded.some((p) => p.join("/") === key);
}

/** Toggle one row path; collapsing also collapses everything below it. */
export function toggleExpanded(state: ViewState, path: string[]): ViewState {
  const key = path.join("/");
  const expanded = isExpanded(state, path)
    ? state.expanded.filter((p) => p.join("/") !== key && !p.join("/").startsWith(key + "/"))
    : [...state.expanded, path];
  return { ...state, expanded };
}
