/** Typed client for the graph API; every failure surfaces as ApiError. */

import type {
  NodeDetailPayload,
  OntologyPayload,
  SearchMode,
  SearchPayload,
  StatsPayload,
  SubgraphPayload,
} from "./types.js";

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;

  constructor(code: string, message: string, status: number) {
    super(message);
    this.code = code;
    this.status = status;
  }
}

type FetchLike = (url: string) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ApiClient {
  private readonly origin: string;
  private readonly fetchFn: FetchLike;

  constructor(origin: string, fetchFn?: FetchLike) {
    this.origin = origin.replace(/\/$/, "");
    this.fetchFn = fetchFn ?? ((url) => fetch(url));
  }

  private async get<T>(path: string, params?: Record<string, string | number | string[]>): Promise<T> {
    const search = new URLSearchParams();
    for (const [key, value] of Object.entries(params ?? {})) {
      if (Array.isArray(value)) {
        for (const item of value) search.append(key, item);
      } else {
        search.set(key, String(value));
      }
    }
    const qs = search.toString();
    const url = `${this.origin}${path}${qs ? "?" + qs : ""}`;
    let resp;
    try {
      resp = await this.fetchFn(url);
    } catch (exc) {
      throw new ApiError("UNAVAILABLE", `server unreachable: ${String(exc)}`, 0);
    }
    let body: unknown;
    try {
      body = await resp.json();
    } catch {
      throw new ApiError("UNAVAILABLE", "malformed response body", resp.status);
    }
    if (!resp.ok) {
      const err = (body as { error?: { code?: string; message?: string } }).error;
      throw new ApiError(err?.code ?? "UNAVAILABLE", err?.message ?? "request failed", resp.status);
    }
    return body as T;
  }

  stats(): Promise<StatsPayload> {
    return this.get("/stats");
  }

  ontology(): Promise<{ schema_version: number; ontology: OntologyPayload }> {
    return this.get("/ontology");
  }

  concepts(): Promise<{ schema_version: number; concepts: SubgraphPayload["nodes"] }> {
    return this.get("/concepts");
  }

  node(id: string): Promise<NodeDetailPayload> {
    return this.get(`/node/${encodeURIComponent(id)}`);
  }

  search(query: string, mode: SearchMode, k: number): Promise<SearchPayload> {
    return this.get("/search", { q: query, mode, k });
  }

  subgraph(seeds: string[], depth: number): Promise<SubgraphPayload> {
    return this.get("/subgraph", { seed: seeds, depth });
  }

  conceptPair(a: string, b: string, depth = 1): Promise<SubgraphPayload> {
    return this.get("/concept-pair", { a, b, depth });
  }
}
