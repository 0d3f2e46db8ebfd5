/** Client view model: last payload, layer toggles, selection, sequencing.
 *
 * Rendering reads only from here, which keeps the invariant checkable:
 * visible nodes are exactly the payload nodes whose layer is enabled, and
 * visible edges are the payload edges with both endpoints visible.
 */

import type { EdgePayload, NodePayload, SubgraphPayload } from "./types.js";

/** Dense layers start hidden so first renders stay legible. */
export const DEFAULT_HIDDEN_LAYERS = ["Semantic"];

export class ViewState {
  query = "";
  depth = 1;
  maxSeeds = 10;
  payload: SubgraphPayload | null = null;
  selectedNodeId: string | null = null;
  errorMessage: string | null = null;
  hint: string | null = null;

  private layers: string[] = [];
  private disabled = new Set<string>();
  private seq = 0;

  /** Install the layer list from /ontology; applies default hiding once. */
  setLayers(layers: string[]): void {
    this.layers = [...layers];
    for (const layer of DEFAULT_HIDDEN_LAYERS) {
      if (layers.includes(layer)) this.disabled.add(layer);
    }
  }

  layerList(): string[] {
    return [...this.layers];
  }

  isLayerEnabled(layer: string): boolean {
    return !this.disabled.has(layer);
  }

  toggleLayer(layer: string): void {
    if (this.disabled.has(layer)) {
      this.disabled.delete(layer);
    } else {
      this.disabled.add(layer);
    }
  }

  /** Marks the start of a request; the token gates acceptResponse. */
  beginRequest(): number {
    this.errorMessage = null;
    return ++this.seq;
  }

  /** Stale responses (an older token) are discarded, returning false. */
  acceptResponse(token: number, payload: SubgraphPayload): boolean {
    if (token !== this.seq) return false;
    this.payload = payload;
    this.selectedNodeId = null;
    return true;
  }

  failRequest(token: number, message: string): boolean {
    if (token !== this.seq) return false;
    this.errorMessage = message;
    return true;
  }

  visibleNodes(): NodePayload[] {
    if (!this.payload) return [];
    return this.payload.nodes.filter((n) => !this.disabled.has(n.layer));
  }

  visibleEdges(): EdgePayload[] {
    if (!this.payload) return [];
    const visible = new Set(this.visibleNodes().map((n) => n.id));
    return this.payload.edges.filter((e) => visible.has(e.src) && visible.has(e.dst));
  }

  isSeed(id: string): boolean {
    return this.payload !== null && this.payload.seeds.includes(id);
  }

  selectNode(id: string | null): void {
    this.selectedNodeId = id;
  }
}
