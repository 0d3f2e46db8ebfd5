/** Explorer bootstrap: wires the API client, view state and DOM together. */

import { ApiClient, ApiError } from "./api.js";
import { buildInspectorModel } from "./inspector.js";
import { buildLegend } from "./legend.js";
import { renderGraph } from "./render.js";
import { ViewState } from "./state.js";
import type { SearchMode } from "./types.js";

declare global {
  interface Window {
    __GRAPHILOSOPHY_EXPLORER__?: { serverOrigin?: string };
  }
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function renderError(state: ViewState): void {
  const banner = el<HTMLDivElement>("error-banner");
  if (state.errorMessage) {
    banner.textContent = state.errorMessage;
    banner.hidden = false;
  } else {
    banner.hidden = true;
  }
}

function renderInspector(state: ViewState): void {
  const panel = el<HTMLDivElement>("inspector");
  panel.innerHTML = "";
  if (!state.payload || !state.selectedNodeId) {
    panel.textContent = "select a node to inspect it";
    return;
  }
  const model = buildInspectorModel(state.payload, state.selectedNodeId);
  if (!model) {
    panel.textContent = "node not in the current view";
    return;
  }
  const add = (tag: string, text: string, cls?: string) => {
    const node = document.createElement(tag);
    node.textContent = text;
    if (cls) node.className = cls;
    panel.appendChild(node);
    return node;
  };
  add("h3", model.id);
  add("p", `${model.nodeClass} — layer ${model.layer}`, "muted");
  if (model.panes) {
    add("h4", "Tri-parallel text");
    add("p", model.panes.han ?? "(no Classical Chinese form in view)", "pane-han");
    add("p", model.panes.hanviet ?? "(no phonetic form in view)", "pane-hanviet");
    add("p", model.panes.viet ?? "(no translation in view)", "pane-viet");
  }
  if (model.concept) {
    add("h4", "Concept");
    add("p", `${model.concept.char} · ${model.concept.english} · ${model.concept.vietnamese}`);
    add("p", `category: ${model.concept.category}`, "muted");
  }
  if (model.senses.length) {
    add("h4", `Senses (${model.senses.length})`);
    for (const sense of model.senses) add("li", sense);
  }
  if (model.commentary.length) {
    add("h4", "Commentary");
    for (const text of model.commentary) add("p", text, "commentary");
  }
  for (const [key, value] of model.attrs) {
    add("p", `${key}: ${value}`, "attr");
  }
}

function renderAll(state: ViewState, callbacks: { onNodeClick(id: string): void }): void {
  renderGraph(el<HTMLElement>("canvas") as unknown as SVGSVGElement, state, callbacks);
  renderInspector(state);
  renderError(state);
  el<HTMLSpanElement>("status").textContent = state.payload
    ? `${state.visibleNodes().length}/${state.payload.nodes.length} nodes, ` +
      `${state.visibleEdges().length} edges, seeds: ${state.payload.seeds.length}`
    : "";
}

export async function boot(): Promise<void> {
  const origin = window.__GRAPHILOSOPHY_EXPLORER__?.serverOrigin ?? "http://127.0.0.1:8750";
  const api = new ApiClient(origin);
  const state = new ViewState();
  const callbacks = {
    onNodeClick(id: string) {
      state.selectNode(id);
      renderAll(state, callbacks);
    },
  };

  try {
    const { ontology } = await api.ontology();
    state.setLayers(ontology.layers);
  } catch (exc) {
    state.errorMessage = exc instanceof ApiError ? `${exc.code}: ${exc.message}` : String(exc);
    renderError(state);
    return;
  }

  const legendBox = el<HTMLDivElement>("legend");
  const drawLegend = () => {
    legendBox.innerHTML = "";
    for (const entry of buildLegend(state.layerList(), (l) => state.isLayerEnabled(l))) {
      const item = document.createElement("label");
      item.className = "legend-item";
      const box = document.createElement("input");
      box.type = "checkbox";
      box.checked = entry.enabled;
      box.addEventListener("change", () => {
        state.toggleLayer(entry.layer);
        drawLegend();
        renderAll(state, callbacks);
      });
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.background = entry.color;
      item.append(box, swatch, document.createTextNode(entry.layer));
      legendBox.appendChild(item);
    }
  };
  drawLegend();

  const runSearch = async () => {
    const query = el<HTMLInputElement>("query").value.trim();
    const mode = el<HTMLSelectElement>("mode").value;
    state.depth = Number(el<HTMLInputElement>("depth").value) || 1;
    if (!query) {
      state.errorMessage = "enter a query first";
      renderAll(state, callbacks);
      return;
    }
    const token = state.beginRequest();
    renderError(state);
    try {
      let seeds: string[];
      if (mode === "auto") {
        const exact = await api.search(query, "exact", state.maxSeeds);
        seeds = exact.results.map((r) => r.id);
        if (!seeds.length) {
          const semantic = await api.search(query, "semantic", state.maxSeeds);
          seeds = semantic.results.map((r) => r.id);
        }
      } else {
        const found = await api.search(query, mode as SearchMode, state.maxSeeds);
        seeds = found.results.map((r) => r.id);
      }
      if (!seeds.length) {
        state.failRequest(token, "no matches for this query");
        renderAll(state, callbacks);
        return;
      }
      const payload = await api.subgraph(seeds.slice(0, state.maxSeeds), state.depth);
      if (state.acceptResponse(token, payload)) renderAll(state, callbacks);
    } catch (exc) {
      const message = exc instanceof ApiError ? `${exc.code}: ${exc.message}` : String(exc);
      if (state.failRequest(token, message)) renderAll(state, callbacks);
    }
  };

  el<HTMLButtonElement>("go").addEventListener("click", () => void runSearch());
  el<HTMLInputElement>("query").addEventListener("keydown", (event) => {
    if (event.key === "Enter") void runSearch();
  });
  renderAll(state, callbacks);
}

if (typeof document !== "undefined" && document.getElementById("canvas")) {
  void boot();
}
