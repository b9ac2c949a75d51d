/**
 * Dependency-graph modal: one repository rendered as a three-layer
 * SVG — the repository on top, its modules and libraries in the
 * middle, and the findings that affect them at the bottom. Edges come
 * straight from the API response; clicking a node hands navigation
 * back to the table.
 */

import type { GraphResponse, RowKind } from "./types.js";

export interface GraphModalHandlers {
  onClose(): void;
  onNavigate(kind: RowKind, id: string, name: string): void;
}

const NS = "http://www.w3.org/2000/svg";

const LAYER_Y = {
  repository: 48,
  modules: 140,
  libraries: 220,
  bugs: 312,
} as const;

const NODE_HEIGHT = 30;

interface Point {
  x: number;
  y: number;
}

function spread(count: number, width: number): number[] {
  const xs: number[] = [];
  for (let i = 0; i < count; i += 1) {
    xs.push((width * (i + 1)) / (count + 1));
  }
  return xs;
}

function makeNode(
  kind: RowKind,
  id: string,
  label: string,
  at: Point,
  width: number,
  handlers: GraphModalHandlers,
): SVGGElement {
  const g = document.createElementNS(NS, "g");
  g.setAttribute("class", `node node-${kind}`);
  g.dataset["id"] = id;
  g.dataset["kind"] = kind;
  const rect = document.createElementNS(NS, "rect");
  rect.setAttribute("x", String(at.x - width / 2));
  rect.setAttribute("y", String(at.y - NODE_HEIGHT / 2));
  rect.setAttribute("width", String(width));
  rect.setAttribute("height", String(NODE_HEIGHT));
  rect.setAttribute("rx", "5");
  const text = document.createElementNS(NS, "text");
  text.setAttribute("x", String(at.x));
  text.setAttribute("y", String(at.y + 4));
  text.setAttribute("text-anchor", "middle");
  text.textContent = label.length > 20 ? label.slice(0, 19) + "…" : label;
  const title = document.createElementNS(NS, "title");
  title.textContent = id;
  g.append(title, rect, text);
  g.addEventListener("click", () => handlers.onNavigate(kind, id, label));
  return g;
}

function buildSvg(graph: GraphResponse, handlers: GraphModalHandlers): SVGSVGElement {
  const widest = Math.max(
    graph.modules.length,
    graph.libraries.length,
    graph.bugs.length,
    1,
  );
  const width = Math.max(560, widest * 150);
  const height = 360;

  const svg = document.createElementNS(NS, "svg");
  svg.setAttribute("class", "graph-svg");
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  svg.setAttribute("viewBox", `0 0 ${width} ${height}`);

  const positions = new Map<string, Point>();
  positions.set(graph.repository.id, { x: width / 2, y: LAYER_Y.repository });
  const moduleXs = spread(graph.modules.length, width);
  graph.modules.forEach((module, i) => {
    positions.set(module.id, { x: moduleXs[i] as number, y: LAYER_Y.modules });
  });
  const libraryXs = spread(graph.libraries.length, width);
  graph.libraries.forEach((library, i) => {
    positions.set(library.digest, { x: libraryXs[i] as number, y: LAYER_Y.libraries });
  });
  const bugXs = spread(graph.bugs.length, width);
  graph.bugs.forEach((bug, i) => {
    positions.set(bug.cveId, { x: bugXs[i] as number, y: LAYER_Y.bugs });
  });

  // Edges first so nodes draw above them.
  const edges = document.createElementNS(NS, "g");
  edges.setAttribute("class", "edges");
  for (const edge of graph.edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (from === undefined || to === undefined) continue;
    const line = document.createElementNS(NS, "line");
    line.setAttribute("class", "edge");
    line.setAttribute("x1", String(from.x));
    line.setAttribute("y1", String(from.y + NODE_HEIGHT / 2));
    line.setAttribute("x2", String(to.x));
    line.setAttribute("y2", String(to.y - NODE_HEIGHT / 2));
    edges.appendChild(line);
  }
  svg.appendChild(edges);

  const repoLayer = document.createElementNS(NS, "g");
  repoLayer.setAttribute("class", "layer layer-repository");
  repoLayer.appendChild(
    makeNode(
      "repository",
      graph.repository.id,
      graph.repository.name,
      positions.get(graph.repository.id) as Point,
      170,
      handlers,
    ),
  );
  svg.appendChild(repoLayer);

  const middleLayer = document.createElementNS(NS, "g");
  middleLayer.setAttribute("class", "layer layer-middle");
  for (const module of graph.modules) {
    middleLayer.appendChild(
      makeNode("module", module.id, module.name, positions.get(module.id) as Point, 130, handlers),
    );
  }
  for (const library of graph.libraries) {
    middleLayer.appendChild(
      makeNode(
        "library",
        library.digest,
        library.name,
        positions.get(library.digest) as Point,
        130,
        handlers,
      ),
    );
  }
  svg.appendChild(middleLayer);

  const bugLayer = document.createElementNS(NS, "g");
  bugLayer.setAttribute("class", "layer layer-bugs");
  for (const bug of graph.bugs) {
    bugLayer.appendChild(
      makeNode("bug", bug.cveId, bug.cveId, positions.get(bug.cveId) as Point, 140, handlers),
    );
  }
  if (graph.bugs.length === 0) {
    const note = document.createElementNS(NS, "text");
    note.setAttribute("class", "empty-note");
    note.setAttribute("x", String(width / 2));
    note.setAttribute("y", String(LAYER_Y.bugs));
    note.setAttribute("text-anchor", "middle");
    note.textContent = "no known vulnerabilities";
    bugLayer.appendChild(note);
  }
  svg.appendChild(bugLayer);

  return svg;
}

/** Fill `host` with the modal for this graph. The caller shows/hides
 * the host element itself. */
export function renderGraphModal(
  host: HTMLElement,
  graph: GraphResponse,
  handlers: GraphModalHandlers,
): void {
  host.textContent = "";
  host.classList.add("modal-backdrop");
  // Property assignment, not addEventListener: re-rendering the modal
  // must not stack a second close handler on the host.
  host.onclick = (event) => {
    if (event.target === host) handlers.onClose();
  };

  const dialog = document.createElement("div");
  dialog.className = "graph-modal";

  const header = document.createElement("div");
  header.className = "modal-header";
  const title = document.createElement("span");
  title.className = "modal-title";
  title.textContent = `Dependency graph — ${graph.repository.name}`;
  const close = document.createElement("button");
  close.type = "button";
  close.className = "modal-close";
  close.textContent = "close";
  close.addEventListener("click", () => handlers.onClose());
  header.append(title, close);
  dialog.appendChild(header);

  const body = document.createElement("div");
  body.className = "modal-body";
  body.appendChild(buildSvg(graph, handlers));
  dialog.appendChild(body);

  host.appendChild(dialog);
}
