/** SVG rendering of the visible subgraph. DOM-only; logic lives in state. */

import type { ViewState } from "./state.js";
import { layerColor } from "./legend.js";
import { runLayout } from "./layout.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface RenderCallbacks {
  onNodeClick(id: string): void;
}

function shortLabel(id: string): string {
  const key = id.includes(":") ? id.slice(id.indexOf(":") + 1) : id;
  return key.length > 18 ? key.slice(0, 15) + "…" : key;
}

export function renderGraph(
  svg: SVGSVGElement,
  state: ViewState,
  callbacks: RenderCallbacks,
): void {
  while (svg.firstChild) svg.removeChild(svg.firstChild);
  const nodes = state.visibleNodes();
  const edges = state.visibleEdges();
  const width = svg.clientWidth || 900;
  const height = svg.clientHeight || 600;

  if (nodes.length === 0) {
    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(width / 2));
    text.setAttribute("y", String(height / 2));
    text.setAttribute("text-anchor", "middle");
    text.setAttribute("class", "hint");
    text.textContent = state.payload
      ? "nothing to show: all layers hidden or the result is empty"
      : "search to load a neighborhood";
    svg.appendChild(text);
    return;
  }

  const positions = runLayout(
    nodes.map((n) => n.id),
    edges.map((e) => [e.src, e.dst]),
    { width, height, seed: 7 },
  );
  const layers = state.layerList();

  const edgeGroup = document.createElementNS(SVG_NS, "g");
  for (const edge of edges) {
    const a = positions.get(edge.src);
    const b = positions.get(edge.dst);
    if (!a || !b) continue;
    const line = document.createElementNS(SVG_NS, "line");
    line.setAttribute("x1", a.x.toFixed(1));
    line.setAttribute("y1", a.y.toFixed(1));
    line.setAttribute("x2", b.x.toFixed(1));
    line.setAttribute("y2", b.y.toFixed(1));
    line.setAttribute("class", "edge");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = edge.weight === null ? edge.relation : `${edge.relation} (${edge.weight.toFixed(3)})`;
    line.appendChild(title);
    edgeGroup.appendChild(line);
  }
  svg.appendChild(edgeGroup);

  const nodeGroup = document.createElementNS(SVG_NS, "g");
  for (const node of nodes) {
    const pos = positions.get(node.id);
    if (!pos) continue;
    const g = document.createElementNS(SVG_NS, "g");
    g.setAttribute("transform", `translate(${pos.x.toFixed(1)}, ${pos.y.toFixed(1)})`);
    g.setAttribute("class", "node");
    const circle = document.createElementNS(SVG_NS, "circle");
    const seed = state.isSeed(node.id);
    circle.setAttribute("r", seed ? "11" : "7");
    circle.setAttribute("fill", layerColor(node.layer, layers));
    if (seed) circle.setAttribute("class", "seed");
    if (node.id === state.selectedNodeId) circle.setAttribute("stroke-width", "4");
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = node.id;
    circle.appendChild(title);
    g.appendChild(circle);
    const label = document.createElementNS(SVG_NS, "text");
    label.setAttribute("dy", "-12");
    label.setAttribute("text-anchor", "middle");
    label.textContent = shortLabel(node.id);
    g.appendChild(label);
    g.addEventListener("click", () => callbacks.onNodeClick(node.id));
    nodeGroup.appendChild(g);
  }
  svg.appendChild(nodeGroup);
}
