/**
 * Tree-table renderer for view responses.
 *
 * Every number and presence decision comes straight from the response;
 * the renderer only lays values out. Rows are keyed by the id path from
 * the root so expansion state survives re-renders.
 */

import { isExpanded, type ViewState } from "./state.js";
import type { Histogram, Row, StripEntry, ViewResponse } from "./types.js";

export interface TableHandlers {
  onToggle(path: string[], row: Row): void;
  onOpenGraph(repositoryId: string): void;
  onPageChange?(page: number): void;
}

const SCORED_BUCKETS = ["low", "medium", "high", "critical"] as const;

const BASE_COLUMNS = ["Name", "Links", "Vulns", "Deps", "Max CVSS", "Severity", "Scores", "Quality"];

function formatScore(value: number): string {
  return value.toFixed(1);
}

/** Always the same four colored squares with counts; zero counts are
 * dimmed rather than omitted so columns stay comparable across rows. */
export function renderSeveritySquares(histogram: Histogram): HTMLElement {
  const wrap = document.createElement("span");
  wrap.className = "sev-squares";
  if (histogram.unscored > 0) {
    wrap.title = `${histogram.unscored} unscored`;
  }
  const buckets: Array<[string, number]> = SCORED_BUCKETS.map((name) => [name, histogram[name]]);
  for (const [name, count] of buckets) {
    const square = document.createElement("span");
    square.className = `sev-square sev-${name}${count === 0 ? " empty" : ""}`;
    square.dataset["severity"] = name;
    square.textContent = String(count);
    square.title = `${count} ${name}`;
    wrap.appendChild(square);
  }
  return wrap;
}

/** Dot plot of per-finding scores on a fixed 0-10 axis. */
export function renderScoreStrip(entries: StripEntry[]): SVGSVGElement {
  const NS = "http://www.w3.org/2000/svg";
  const width = 220;
  const height = 26;
  const pad = 10;
  const svg = document.createElementNS(NS, "svg");
  svg.setAttribute("class", "score-strip");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
  const axis = document.createElementNS(NS, "line");
  axis.setAttribute("x1", String(pad));
  axis.setAttribute("x2", String(width - pad));
  axis.setAttribute("y1", String(height / 2));
  axis.setAttribute("y2", String(height / 2));
  axis.setAttribute("class", "strip-axis");
  svg.appendChild(axis);
  for (const entry of entries) {
    const dot = document.createElementNS(NS, "circle");
    dot.setAttribute("cx", String(pad + (entry.score / 10) * (width - 2 * pad)));
    dot.setAttribute("cy", String(height / 2));
    dot.setAttribute("r", "4");
    dot.setAttribute("class", "strip-dot");
    const title = document.createElementNS(NS, "title");
    title.textContent = `${entry.cveId}: ${formatScore(entry.score)}`;
    dot.appendChild(title);
    svg.appendChild(dot);
  }
  return svg;
}

/** Code-quality cell text; absent fields stay blank, never "0". */
function qualityText(row: Row): string {
  const meta = row.meta;
  if (meta === undefined) return "";
  const parts: string[] = [];
  if (meta.githubStars !== undefined) parts.push(`★${meta.githubStars}`);
  if (meta.githubIssues !== undefined) parts.push(`⚠${meta.githubIssues}`);
  if (meta.githubWatchers !== undefined) parts.push(`👁${meta.githubWatchers}`);
  if (meta.lgtmGrade !== undefined) parts.push(meta.lgtmGrade);
  else if (meta.lgtmScore !== undefined) parts.push(formatScore(meta.lgtmScore));
  return parts.join(" ");
}

function td(className?: string): HTMLTableCellElement {
  const cell = document.createElement("td");
  if (className) cell.className = className;
  return cell;
}

function buildNameCell(
  row: Row,
  path: string[],
  depth: number,
  expanded: boolean,
  handlers: TableHandlers,
): HTMLTableCellElement {
  const cell = td("name-cell");
  cell.style.paddingLeft = `${8 + depth * 18}px`;
  if (row.linkCount > 0) {
    const expander = document.createElement("button");
    expander.type = "button";
    expander.className = "expander";
    expander.dataset["expanded"] = expanded ? "true" : "false";
    expander.textContent = expanded ? "▾" : "▸";
    expander.title = expanded ? "Collapse" : "Expand";
    expander.addEventListener("click", () => handlers.onToggle(path, row));
    cell.appendChild(expander);
  } else {
    const spacer = document.createElement("span");
    spacer.className = "expander-spacer";
    cell.appendChild(spacer);
  }
  const name = document.createElement("span");
  name.className = "row-name";
  name.textContent = row.name;
  name.title = row.id;
  cell.appendChild(name);
  if (row.kind === "repository") {
    const graphButton = document.createElement("button");
    graphButton.type = "button";
    graphButton.className = "graph-btn";
    graphButton.textContent = "graph";
    graphButton.title = "Show dependency graph";
    graphButton.addEventListener("click", () => handlers.onOpenGraph(row.id));
    cell.appendChild(graphButton);
  }
  return cell;
}

function buildSeverityCell(row: Row): HTMLTableCellElement {
  const cell = td("severity-cell");
  if (row.histogram !== undefined) {
    cell.appendChild(renderSeveritySquares(row.histogram));
  } else {
    const badge = document.createElement("span");
    badge.className = `badge sev-${row.severity}`;
    badge.textContent = row.severity;
    cell.appendChild(badge);
  }
  return cell;
}

function buildScoresCell(row: Row): HTMLTableCellElement {
  const cell = td("scores-cell");
  const strip = row.scoreStrip;
  if (strip === undefined || strip.length === 0) return cell;
  const toggle = document.createElement("button");
  toggle.type = "button";
  toggle.className = "strip-toggle";
  toggle.textContent = `${strip.length} scores`;
  toggle.addEventListener("click", () => {
    const existing = cell.querySelector("svg");
    if (existing !== null) existing.remove();
    else cell.appendChild(renderScoreStrip(strip));
  });
  cell.appendChild(toggle);
  return cell;
}

function buildRow(
  row: Row,
  path: string[],
  depth: number,
  matrixColumns: string[],
  state: ViewState,
  handlers: TableHandlers,
  tbody: HTMLTableSectionElement,
): void {
  const tr = document.createElement("tr");
  tr.dataset["kind"] = row.kind;
  tr.dataset["id"] = row.id;
  tr.dataset["path"] = path.join("/");
  tr.dataset["depth"] = String(depth);
  if (row.linkCount > 0) {
    tr.classList.add("expandable");
    tr.addEventListener("click", (event) => {
      // Buttons inside the row (expander, strip toggle, graph) handle
      // their own clicks; anywhere else on the row toggles expansion.
      if ((event.target as Element).closest("button") !== null) return;
      handlers.onToggle(path, row);
    });
  }

  const expanded = isExpanded(state, path);
  tr.appendChild(buildNameCell(row, path, depth, expanded, handlers));

  const links = td("links-cell");
  const badge = document.createElement("span");
  badge.className = "badge link-count";
  badge.textContent = String(row.linkCount);
  links.appendChild(badge);
  tr.appendChild(links);

  const vulns = td("vulns-cell");
  if (row.vulnCount !== undefined) vulns.textContent = String(row.vulnCount);
  tr.appendChild(vulns);

  const deps = td("deps-cell");
  if (row.dependencyCount !== undefined) deps.textContent = String(row.dependencyCount);
  tr.appendChild(deps);

  const max = td("max-cvss-cell");
  if (row.maxCvss !== undefined) max.textContent = formatScore(row.maxCvss);
  tr.appendChild(max);

  tr.appendChild(buildSeverityCell(row));
  tr.appendChild(buildScoresCell(row));

  const quality = td("quality-cell");
  quality.textContent = qualityText(row);
  tr.appendChild(quality);

  for (let i = 0; i < matrixColumns.length; i += 1) {
    const cell = td("matrix-cell");
    if (row.matrix !== undefined) {
      const hit = row.matrix[i] === true;
      cell.classList.add(hit ? "hit" : "miss");
      cell.title = `${row.name} ${hit ? "affected by" : "not affected by"} ${matrixColumns[i]}`;
    }
    tr.appendChild(cell);
  }

  tbody.appendChild(tr);
  for (const child of row.children ?? []) {
    buildRow(child, [...path, child.id], depth + 1, matrixColumns, state, handlers, tbody);
  }
}

/** Replace the container's contents with a table for this response. */
export function renderViewTable(
  container: HTMLElement,
  response: ViewResponse,
  state: ViewState,
  handlers: TableHandlers,
): void {
  container.textContent = "";

  // An explicitly empty column selection renders no matrix at all; the
  // request omits the parameter (the server would substitute defaults),
  // so the suppression happens here.
  const matrixColumns =
    state.matrixColumns !== null && state.matrixColumns.length === 0
      ? []
      : response.matrixColumns;

  const table = document.createElement("table");
  table.className = "view-table";

  const thead = document.createElement("thead");
  const headRow = document.createElement("tr");
  for (const label of BASE_COLUMNS) {
    const th = document.createElement("th");
    th.textContent = label;
    headRow.appendChild(th);
  }
  for (const cveId of matrixColumns) {
    const th = document.createElement("th");
    th.className = "matrix-head";
    th.textContent = cveId;
    th.title = cveId;
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = document.createElement("tbody");
  for (const row of response.rows) {
    buildRow(row, [row.id], 0, matrixColumns, state, handlers, tbody);
  }
  table.appendChild(tbody);
  container.appendChild(table);

  const meta = document.createElement("div");
  meta.className = "table-meta";
  const label = document.createElement("span");
  label.textContent = `${response.totalRows} top-level rows`;
  meta.appendChild(label);
  const page = response.page ?? 1;
  const pageSize = response.pageSize;
  if (pageSize !== undefined && (response.totalRows > pageSize || page > 1)) {
    const lastPage = Math.max(1, Math.ceil(response.totalRows / pageSize));
    const pager = document.createElement("span");
    pager.className = "pager";
    const prev = document.createElement("button");
    prev.type = "button";
    prev.className = "pager-prev";
    prev.textContent = "prev";
    prev.disabled = page <= 1;
    prev.addEventListener("click", () => handlers.onPageChange?.(page - 1));
    const status = document.createElement("span");
    status.textContent = ` page ${page} of ${lastPage} `;
    const next = document.createElement("button");
    next.type = "button";
    next.className = "pager-next";
    next.textContent = "next";
    next.disabled = page >= lastPage;
    next.addEventListener("click", () => handlers.onPageChange?.(page + 1));
    pager.append(prev, status, next);
    meta.appendChild(pager);
  }
  container.appendChild(meta);
}

/** Show (or clear, with null) a non-blocking error banner. The table
 * below it is left untouched so stale-but-real data stays visible. */
export function renderErrorBanner(host: HTMLElement, message: string | null): void {
  if (message === null) {
    host.textContent = "";
    host.hidden = true;
  } else {
    host.textContent = message;
    host.hidden = false;
  }
}
