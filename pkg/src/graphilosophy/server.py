"""Read-only API over a loaded graph for the explorer and external tools.

Responses are timestamp-free and deterministic: identical requests against
an unchanged graph return byte-identical bodies. Every payload carries the
schema version; every failure carries exactly one error object.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import Config, make_embedder
from .graph import Graph, load, stats
from .ontology import EntityClass, Layer, export_schema
from .query import (
    QueryMode,
    Subgraph,
    UnknownConceptError,
    UnknownSeedError,
    bfs_subgraph,
    concept_pair_query,
    exact_match,
    semantic_seeds,
)
from .retrieval import NoEmbeddingsError

SCHEMA_VERSION = 1


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def bad_request(message: str) -> ApiError:
    return ApiError(400, "BAD_REQUEST", message)


def not_found(message: str) -> ApiError:
    return ApiError(404, "NOT_FOUND", message)


def _node_payload(node) -> dict:
    return {
        "id": node.id,
        "class": node.entity_class.value,
        "layer": node.layer.value,
        "attrs": node.attrs,
    }


def _edge_payload(edge) -> dict:
    return {"src": edge.src, "dst": edge.dst, "relation": edge.relation.value, "weight": edge.weight}


def subgraph_payload(sub: Subgraph) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "nodes": [_node_payload(n) for n in sub.nodes],
        "edges": [_edge_payload(e) for e in sub.edges],
        "seeds": list(sub.seeds),
    }


def dump_payload(payload: dict) -> str:
    """Serialize exactly as the HTTP layer does, for bit-exact file export."""
    return json.dumps(
        payload, ensure_ascii=False, allow_nan=False, indent=None, separators=(",", ":")
    )


def _parse_layers(raw: str | None) -> frozenset[Layer] | None:
    if not raw:
        return None
    out = set()
    for name in raw.split(","):
        name = name.strip()
        if not name:
            continue
        try:
            out.add(Layer(name))
        except ValueError:
            raise bad_request(f"unknown layer {name!r}") from None
    return frozenset(out) if out else None


def make_app(graph: Graph, config: Config | None = None, embedder=None) -> FastAPI:
    config = config or Config()
    if embedder is None:
        embedder = make_embedder(config)
    graph_stats = stats(graph)
    app = FastAPI(title="graphilosophy", docs_url=None, redoc_url=None, openapi_url=None)

    origins = [o.strip() for o in config.cors_origins.split(",") if o.strip()]
    app.add_middleware(
        CORSMiddleware,
        allow_origins=origins or ["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    def error_response(status: int, code: str, message: str) -> JSONResponse:
        return JSONResponse(
            status_code=status,
            content={"schema_version": SCHEMA_VERSION, "error": {"code": code, "message": message}},
        )

    @app.exception_handler(ApiError)
    async def _api_error(_req: Request, exc: ApiError):
        return error_response(exc.status, exc.code, exc.message)

    @app.exception_handler(RequestValidationError)
    async def _validation_error(_req: Request, exc: RequestValidationError):
        return error_response(400, "BAD_REQUEST", str(exc.errors()[:1]))

    @app.get("/stats")
    def get_stats():
        return {"schema_version": SCHEMA_VERSION, "stats": graph_stats.to_record()}

    @app.get("/ontology")
    def get_ontology():
        return {"schema_version": SCHEMA_VERSION, "ontology": export_schema()}

    @app.get("/concepts")
    def get_concepts():
        nodes = sorted(
            graph.nodes_of_class(EntityClass.PHILOSOPHICAL_CONCEPT), key=lambda n: n.id
        )
        return {
            "schema_version": SCHEMA_VERSION,
            "concepts": [_node_payload(n) for n in nodes],
        }

    @app.get("/node/{node_id:path}")
    def get_node(node_id: str):
        if node_id not in graph:
            raise not_found(f"no node {node_id!r}")
        node = graph.node(node_id)
        incident = sorted(graph.incident(node_id), key=lambda e: e.sort_key)
        neighbor_ids = []
        for e in incident:
            other = e.dst if e.src == node_id else e.src
            if other not in neighbor_ids:
                neighbor_ids.append(other)
        return {
            "schema_version": SCHEMA_VERSION,
            "node": _node_payload(node),
            "edges": [_edge_payload(e) for e in incident],
            "neighbors": [_node_payload(graph.node(i)) for i in neighbor_ids],
        }

    @app.get("/search")
    def get_search(
        q: str = "", mode: str = "exact", k: int = 10, offset: int = 0, limit: int = 50
    ):
        if not q.strip():
            raise bad_request("empty query")
        if k < 0 or offset < 0 or limit < 1:
            raise bad_request("k/offset/limit out of range")
        try:
            qmode = QueryMode(mode)
        except ValueError:
            raise bad_request(f"unknown mode {mode!r}") from None
        results: list[dict] = []
        if qmode in (QueryMode.EXACT, QueryMode.HYBRID):
            for nid in exact_match(graph, q):
                node = graph.node(nid)
                results.append({**_node_payload(node), "score": None})
        if qmode in (QueryMode.SEMANTIC, QueryMode.HYBRID):
            try:
                seeds = semantic_seeds(graph, q, embedder, max_seeds=max(k, 1))
            except NoEmbeddingsError:
                seeds = []
            known = {r["id"] for r in results}
            for nid in seeds:
                if nid not in known:
                    results.append({**_node_payload(graph.node(nid)), "score": None})
        if k:
            results = results[:k]
        page = results[offset : offset + limit]
        return {
            "schema_version": SCHEMA_VERSION,
            "query": q,
            "mode": qmode.value,
            "total": len(results),
            "offset": offset,
            "limit": limit,
            "results": page,
        }

    @app.get("/subgraph")
    def get_subgraph(request: Request, depth: int = 1, layers: str | None = None):
        seeds = request.query_params.getlist("seed")
        if not seeds:
            raise bad_request("at least one seed parameter is required")
        if depth < 0:
            raise bad_request("depth must be >= 0")
        layer_filter = _parse_layers(layers)
        try:
            sub = bfs_subgraph(graph, seeds, depth, layer_filter=layer_filter)
        except UnknownSeedError as exc:
            raise not_found(str(exc)) from None
        return subgraph_payload(sub)

    @app.get("/concept-pair")
    def get_concept_pair(a: str = "", b: str = "", depth: int = 1):
        if not a or not b:
            raise bad_request("parameters a and b are required")
        try:
            sub = concept_pair_query(graph, a, b, depth=depth)
        except UnknownConceptError as exc:
            raise not_found(str(exc)) from None
        return subgraph_payload(sub)

    return app


def serve(graph_path: Path, bind: str, config: Config | None = None) -> None:
    """Load, validate and serve until interrupted."""
    import uvicorn

    graph, _header = load(graph_path)
    violations = graph.violations()
    if violations:
        raise SystemExit(f"graph failed schema validation: {violations[:3]}")
    app = make_app(graph, config=config)
    host, _, port = bind.partition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port or 8750), log_level="warning")
