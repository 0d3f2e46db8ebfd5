/** Wire types mirroring the read-only graph API payloads. */

export interface NodePayload {
  id: string;
  class: string;
  layer: string;
  attrs: Record<string, unknown>;
}

export interface EdgePayload {
  src: string;
  dst: string;
  relation: string;
  weight: number | null;
}

export interface SubgraphPayload {
  schema_version: number;
  nodes: NodePayload[];
  edges: EdgePayload[];
  seeds: string[];
}

export interface SearchResultPayload extends NodePayload {
  score: number | null;
}

export interface SearchPayload {
  schema_version: number;
  query: string;
  mode: string;
  total: number;
  offset: number;
  limit: number;
  results: SearchResultPayload[];
}

export interface OntologyClass {
  name: string;
  layer: string;
}

export interface OntologyRelation {
  name: string;
  layer: string;
  method: string;
  endpoints: string[][];
}

export interface OntologyPayload {
  layers: string[];
  classes: OntologyClass[];
  relations: OntologyRelation[];
  aliases: Record<string, string>;
}

export interface StatsPayload {
  schema_version: number;
  stats: {
    node_count: number;
    edge_count: number;
    density: number;
    class_counts: Record<string, number>;
    relation_counts: Record<string, number>;
    relation_shares: Record<string, number>;
    layer_density: Record<string, number>;
    cross_layer_ratio: number;
  };
}

export interface NodeDetailPayload {
  schema_version: number;
  node: NodePayload;
  edges: EdgePayload[];
  neighbors: NodePayload[];
}

export interface ErrorBody {
  schema_version: number;
  error: { code: string; message: string };
}

export type SearchMode = "exact" | "semantic" | "hybrid";
