/** Pure construction of the node detail panel model from the payload.
 *
 * Works entirely on the current subgraph payload so the panel always
 * reflects what is on screen; richer detail for off-screen neighbors goes
 * through /node instead.
 */

import type { NodePayload, SubgraphPayload } from "./types.js";

export interface LanguagePanes {
  han: string | null;
  hanviet: string | null;
  viet: string | null;
}

export interface ConceptDetail {
  char: string;
  english: string;
  vietnamese: string;
  category: string;
}

export interface InspectorModel {
  id: string;
  nodeClass: string;
  layer: string;
  attrs: Array<[string, string]>;
  panes: LanguagePanes | null;
  concept: ConceptDetail | null;
  /** every linked meaning, in payload order; plurality is the point */
  senses: string[];
  commentary: string[];
}

const PANE_RELATIONS: Record<string, keyof LanguagePanes> = {
  HAS_HAN_FORM: "han",
  HAS_HANVIET_FORM: "hanviet",
  HAS_VIETNAMESE_TRANSLATION: "viet",
};

const HIDDEN_ATTRS = new Set(["vector", "centroid", "sense_audit"]);

function textOf(node: NodePayload): string {
  const attrs = node.attrs;
  for (const key of ["text", "han", "name"]) {
    const value = attrs[key];
    if (typeof value === "string" && value) return value;
  }
  return node.id;
}

export function buildInspectorModel(
  payload: SubgraphPayload,
  nodeId: string,
): InspectorModel | null {
  const byId = new Map(payload.nodes.map((n) => [n.id, n]));
  const node = byId.get(nodeId);
  if (!node) return null;

  const attrs: Array<[string, string]> = [];
  for (const [key, value] of Object.entries(node.attrs)) {
    if (HIDDEN_ATTRS.has(key)) continue;
    attrs.push([key, typeof value === "string" ? value : JSON.stringify(value)]);
  }

  let panes: LanguagePanes | null = null;
  if (node.class === "SENTENCE") {
    panes = { han: null, hanviet: null, viet: null };
    for (const edge of payload.edges) {
      if (edge.src !== nodeId) continue;
      const pane = PANE_RELATIONS[edge.relation];
      if (!pane) continue;
      const neighbor = byId.get(edge.dst);
      if (neighbor) panes[pane] = textOf(neighbor);
    }
    // the sentence record carries the three layers as attributes too; use
    // them when the linguistic neighbors fell outside the payload
    for (const pane of Object.keys(PANE_RELATIONS).map((r) => PANE_RELATIONS[r])) {
      if (panes[pane] === null && typeof node.attrs[pane] === "string") {
        panes[pane] = node.attrs[pane] as string;
      }
    }
  }

  let concept: ConceptDetail | null = null;
  const senses: string[] = [];
  const commentary: string[] = [];
  if (node.class === "PHILOSOPHICAL_CONCEPT") {
    concept = {
      char: String(node.attrs.text ?? ""),
      english: String(node.attrs.english ?? ""),
      vietnamese: String(node.attrs.vietnamese ?? ""),
      category: String(node.attrs.category ?? ""),
    };
    const wordId = `HAN_WORD:${concept.char}`;
    for (const edge of payload.edges) {
      if (edge.relation === "TRANSLATES_TO" && edge.src === wordId) {
        const meaning = byId.get(edge.dst);
        if (meaning) senses.push(textOf(meaning));
      }
    }
    const expressing = new Set(
      payload.edges
        .filter((e) => e.relation === "EXPRESSES_CONCEPT" && e.dst === nodeId)
        .map((e) => e.src),
    );
    for (const edge of payload.edges) {
      if (edge.relation === "CONTEXTUALIZES" && expressing.has(edge.dst)) {
        const chunk = byId.get(edge.src);
        if (chunk) commentary.push(textOf(chunk));
      }
    }
  }
  if (node.class === "HAN_WORD") {
    for (const edge of payload.edges) {
      if (edge.relation === "TRANSLATES_TO" && edge.src === nodeId) {
        const meaning = byId.get(edge.dst);
        if (meaning) senses.push(textOf(meaning));
      }
    }
  }

  return {
    id: node.id,
    nodeClass: node.class,
    layer: node.layer,
    attrs,
    panes,
    concept,
    senses,
    commentary: [...new Set(commentary)],
  };
}
