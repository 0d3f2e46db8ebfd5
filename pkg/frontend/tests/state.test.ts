import { describe, expect, it } from "vitest";

import { ViewState } from "../src/state.js";
import type { SubgraphPayload } from "../src/types.js";

const LAYERS = ["Meta", "Textual", "Linguistic", "Conceptual", "CommentarySpeaker", "Semantic"];

function payload(): SubgraphPayload {
  return {
    schema_version: 1,
    nodes: [
      { id: "SENTENCE:a", class: "SENTENCE", layer: "Textual", attrs: {} },
      { id: "HAN_SENTENCE:a", class: "HAN_SENTENCE", layer: "Linguistic", attrs: {} },
      { id: "EMBEDDING:SENTENCE:a", class: "EMBEDDING", layer: "Semantic", attrs: {} },
      { id: "PHILOSOPHICAL_CONCEPT:仁", class: "PHILOSOPHICAL_CONCEPT", layer: "Conceptual", attrs: {} },
    ],
    edges: [
      { src: "SENTENCE:a", dst: "HAN_SENTENCE:a", relation: "HAS_HAN_FORM", weight: null },
      { src: "SENTENCE:a", dst: "EMBEDDING:SENTENCE:a", relation: "HAS_SEMANTIC_REP", weight: null },
      { src: "SENTENCE:a", dst: "PHILOSOPHICAL_CONCEPT:仁", relation: "EXPRESSES_CONCEPT", weight: 1 },
    ],
    seeds: ["SENTENCE:a"],
  };
}

function freshState(): ViewState {
  const state = new ViewState();
  state.setLayers(LAYERS);
  const token = state.beginRequest();
  state.acceptResponse(token, payload());
  return state;
}

describe("ViewState", () => {
  it("renders payload nodes minus disabled layers", () => {
    const state = freshState();
    // Semantic is hidden by default (progressive disclosure)
    const disabled = payload().nodes.filter((n) => !state.isLayerEnabled(n.layer)).length;
    expect(state.visibleNodes().length).toBe(payload().nodes.length - disabled);
    expect(state.visibleNodes().map((n) => n.id)).not.toContain("EMBEDDING:SENTENCE:a");
  });

  it("hides incident edges of disabled layers", () => {
    const state = freshState();
    const relations = state.visibleEdges().map((e) => e.relation);
    expect(relations).toContain("HAS_HAN_FORM");
    expect(relations).not.toContain("HAS_SEMANTIC_REP");
  });

  it("toggle off and on restores exactly the prior set", () => {
    const state = freshState();
    const before = state.visibleNodes().map((n) => n.id);
    state.toggleLayer("Linguistic");
    expect(state.visibleNodes().map((n) => n.id)).not.toContain("HAN_SENTENCE:a");
    state.toggleLayer("Linguistic");
    expect(state.visibleNodes().map((n) => n.id)).toEqual(before);
  });

  it("disabling every layer empties the canvas", () => {
    const state = freshState();
    for (const layer of LAYERS) {
      if (state.isLayerEnabled(layer)) state.toggleLayer(layer);
    }
    expect(state.visibleNodes()).toEqual([]);
    expect(state.visibleEdges()).toEqual([]);
  });

  it("re-enabling the semantic layer surfaces embeddings", () => {
    const state = freshState();
    state.toggleLayer("Semantic");
    expect(state.visibleNodes().map((n) => n.id)).toContain("EMBEDDING:SENTENCE:a");
  });

  it("discards stale responses by sequence number", () => {
    const state = freshState();
    const stale = state.beginRequest();
    const fresh = state.beginRequest();
    const newer = payload();
    newer.seeds = ["HAN_SENTENCE:a"];
    expect(state.acceptResponse(fresh, newer)).toBe(true);
    const older = payload();
    expect(state.acceptResponse(stale, older)).toBe(false);
    expect(state.payload?.seeds).toEqual(["HAN_SENTENCE:a"]);
  });

  it("stale failures do not overwrite newer results", () => {
    const state = freshState();
    const stale = state.beginRequest();
    const fresh = state.beginRequest();
    state.acceptResponse(fresh, payload());
    expect(state.failRequest(stale, "boom")).toBe(false);
    expect(state.errorMessage).toBeNull();
  });

  it("tracks seeds and selection", () => {
    const state = freshState();
    expect(state.isSeed("SENTENCE:a")).toBe(true);
    expect(state.isSeed("HAN_SENTENCE:a")).toBe(false);
    state.selectNode("HAN_SENTENCE:a");
    expect(state.selectedNodeId).toBe("HAN_SENTENCE:a");
  });
});
