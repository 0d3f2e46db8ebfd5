"""Deterministic query engine: exact match, semantic seeding, BFS subgraphs.

Traversal is undirected and results are induced subgraphs, so a rendered
neighborhood shows every relation among the nodes it contains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Sequence

import numpy as np

from .corpus import normalize_text
from .ontology import EntityClass, Layer, RelationType
from .graph.store import Edge, Graph, Node, node_id
from .retrieval import NoEmbeddingsError

if TYPE_CHECKING:
    from .embedding import EmbeddingProvider


class QueryError(Exception):
    pass


class UnknownSeedError(QueryError):
    pass


class UnknownConceptError(QueryError):
    pass


class QueryMode(Enum):
    EXACT = "exact"
    SEMANTIC = "semantic"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class QueryRequest:
    text: str
    mode: QueryMode | None = None  # None routes: exact when it matches, else semantic
    depth: int = 1
    max_seeds: int = 10
    layer_filter: frozenset[Layer] | None = None
    relation_filter: frozenset[RelationType] | None = None

    def __post_init__(self):
        if self.depth < 0:
            raise ValueError("depth must be >= 0")
        if self.max_seeds < 1:
            raise ValueError("max_seeds must be >= 1")


@dataclass
class Subgraph:
    nodes: list[Node] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    seeds: list[str] = field(default_factory=list)

    def node_ids(self) -> set[str]:
        return {n.id for n in self.nodes}


TEXT_SEARCH_CLASSES = (
    EntityClass.HAN_SENTENCE,
    EntityClass.HANVIET_SENTENCE,
    EntityClass.VIETNAMESE_SENTENCE,
    EntityClass.COMMENTARY_CHUNK,
    EntityClass.HAN_WORD,
)


def exact_match(graph: Graph, text: str) -> list[str]:
    """Ids of text-bearing nodes containing the normalized query verbatim."""
    needle = normalize_text(text)
    if not needle:
        return []
    out = []
    for cls in TEXT_SEARCH_CLASSES:
        for node in graph.nodes_of_class(cls):
            if needle in node.attrs.get("text", ""):
                out.append(node.id)
    return sorted(out)


def bfs_subgraph(
    graph: Graph,
    seeds: Sequence[str],
    depth: int,
    layer_filter: Iterable[Layer] | None = None,
    relation_filter: Iterable[RelationType] | None = None,
) -> Subgraph:
    """Undirected BFS out to `depth` hops, then the induced edge set.

    The layer filter gates which nodes may be visited (seeds are exempt);
    the relation filter gates both traversal and the returned edges. Node
    order is BFS level, then id.
    """
    for s in seeds:
        if s not in graph:
            raise UnknownSeedError(f"seed {s!r} not in graph")
    layers = frozenset(layer_filter) if layer_filter is not None else None
    relations = frozenset(relation_filter) if relation_filter is not None else None

    seed_list = sorted(set(seeds))
    visited: dict[str, int] = {s: 0 for s in seed_list}
    order: list[str] = list(seed_list)
    frontier = seed_list
    for level in range(1, depth + 1):
        nxt: set[str] = set()
        for nid in frontier:
            for edge, other in graph.neighbors(nid):
                if relations is not None and edge.relation not in relations:
                    continue
                if other in visited or other in nxt:
                    continue
                if layers is not None and graph.node(other).layer not in layers:
                    continue
                nxt.add(other)
        frontier = sorted(nxt)
        for nid in frontier:
            visited[nid] = level
        order.extend(frontier)
        if not frontier:
            break

    node_set = set(order)
    edges = [
        e
        for e in graph.edges()
        if e.src in node_set
        and e.dst in node_set
        and (relations is None or e.relation in relations)
    ]
    edges.sort(key=lambda e: e.sort_key)
    return Subgraph(
        nodes=[graph.node(nid) for nid in order],
        edges=edges,
        seeds=list(seed_list),
    )


def semantic_seeds(
    graph: Graph, text: str, embedder: "EmbeddingProvider", max_seeds: int
) -> list[str]:
    """Source nodes of the embeddings nearest to the query, best first."""
    from .embedding import Mode

    emb_nodes = [
        n for n in graph.nodes_of_class(EntityClass.EMBEDDING) if not n.attrs.get("flagged")
    ]
    if not emb_nodes:
        raise NoEmbeddingsError("graph has no usable embedding nodes")
    emb_nodes.sort(key=lambda n: n.id)
    mat = np.asarray([n.attrs["vector"] for n in emb_nodes], dtype=np.float64)
    qv = embedder.embed(text, Mode.QUERY).values
    sims = mat @ qv
    ranked = sorted(range(len(emb_nodes)), key=lambda i: (-sims[i], emb_nodes[i].id))
    seeds: list[str] = []
    for i in ranked:
        src = emb_nodes[i].attrs.get("source", "")
        if src in graph and src not in seeds:
            seeds.append(src)
        if len(seeds) >= max_seeds:
            break
    return seeds


def concept_pair_query(graph: Graph, concept_a: str, concept_b: str, depth: int = 1) -> Subgraph:
    """Neighborhoods of two concepts plus every sentence expressing either."""
    ids = []
    for ch in (concept_a, concept_b):
        nid = node_id(EntityClass.PHILOSOPHICAL_CONCEPT, ch)
        if nid not in graph:
            raise UnknownConceptError(f"no concept node for {ch!r}")
        ids.append(nid)
    seen: set[str] = set()
    collected: list[str] = []
    for nid in dict.fromkeys(ids):
        sub = bfs_subgraph(graph, [nid], depth)
        for n in sub.nodes:
            if n.id not in seen:
                seen.add(n.id)
                collected.append(n.id)
    for e in graph.edges():
        if e.relation is RelationType.EXPRESSES_CONCEPT and e.dst in ids and e.src not in seen:
            seen.add(e.src)
            collected.append(e.src)
    edges = [e for e in graph.edges() if e.src in seen and e.dst in seen]
    edges.sort(key=lambda e: e.sort_key)
    return Subgraph(
        nodes=[graph.node(nid) for nid in collected],
        edges=edges,
        seeds=sorted(set(ids)),
    )


def route_mode(graph: Graph, text: str) -> QueryMode:
    """Verbatim hits route to exact matching; everything else is semantic."""
    return QueryMode.EXACT if exact_match(graph, text) else QueryMode.SEMANTIC


def run_query(
    graph: Graph, request: QueryRequest, embedder: "EmbeddingProvider | None" = None
) -> Subgraph:
    mode = request.mode or route_mode(graph, request.text)
    seeds: list[str] = []
    if mode in (QueryMode.EXACT, QueryMode.HYBRID):
        seeds.extend(exact_match(graph, request.text))
    if mode in (QueryMode.SEMANTIC, QueryMode.HYBRID):
        if embedder is None:
            raise QueryError("semantic mode needs an embedder")
        try:
            for s in semantic_seeds(graph, request.text, embedder, request.max_seeds):
                if s not in seeds:
                    seeds.append(s)
        except NoEmbeddingsError:
            if mode is QueryMode.SEMANTIC:
                raise
    seeds = seeds[: request.max_seeds]
    if not seeds:
        return Subgraph(nodes=[], edges=[], seeds=[])
    return bfs_subgraph(
        graph, seeds, request.depth, request.layer_filter, request.relation_filter
    )
