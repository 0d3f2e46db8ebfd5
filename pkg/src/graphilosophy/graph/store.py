"""In-memory typed property graph with schema validation on every edge."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from ..ontology import (
    EntityClass,
    GenerationMethod,
    Layer,
    RelationType,
    generation_method,
    validate_edge,
)

# relations that carry a numeric weight (similarity or count); all others
# must not
WEIGHTED_RELATIONS = frozenset(
    {
        RelationType.SIMILAR_TO,
        RelationType.CONTEXTUALIZES,
        RelationType.CO_OCCURS_WITH,
        RelationType.BELONGS_TO_CLUSTER,
        RelationType.EXPRESSES_CONCEPT,
    }
)


class GraphError(Exception):
    pass


class SchemaViolationError(GraphError):
    pass


class UnknownNodeError(GraphError):
    pass


@dataclass(frozen=True)
class Node:
    id: str
    entity_class: EntityClass
    attrs: dict = field(default_factory=dict)

    @property
    def layer(self) -> Layer:
        return self.entity_class.layer


@dataclass(frozen=True)
class Edge:
    src: str
    dst: str
    relation: RelationType
    weight: float | None = None
    method: GenerationMethod | None = None
    verified: bool = False

    @property
    def sort_key(self):
        return (self.src, self.relation.value, self.dst, self.weight or 0.0)


def node_id(cls: EntityClass, key: str) -> str:
    return f"{cls.value}:{key}"


class Graph:
    """Single-writer construction, then immutable-by-convention reads."""

    def __init__(self):
        self._nodes: dict[str, Node] = {}
        self._edges: list[Edge] = []
        self._adj: dict[str, list[int]] = {}
        self._edge_keys: set[tuple[str, str, RelationType]] = set()

    # -- construction -------------------------------------------------

    def ensure_node(self, cls: EntityClass, key: str, attrs: dict | None = None) -> Node:
        """Create the node if absent; existing attrs win on conflict."""
        nid = node_id(cls, key)
        existing = self._nodes.get(nid)
        if existing is not None:
            if existing.entity_class is not cls:
                raise SchemaViolationError(f"node {nid} exists with class {existing.entity_class}")
            return existing
        node = Node(id=nid, entity_class=cls, attrs=attrs or {})
        self._nodes[nid] = node
        self._adj[nid] = []
        return node

    def add_node(self, node: Node) -> None:
        if node.id in self._nodes:
            raise SchemaViolationError(f"duplicate node id {node.id}")
        self._nodes[node.id] = node
        self._adj[node.id] = []

    def add_edge(
        self,
        src: str,
        dst: str,
        relation: RelationType,
        weight: float | None = None,
        method: GenerationMethod | None = None,
        verified: bool | None = None,
    ) -> Edge:
        if src not in self._nodes:
            raise UnknownNodeError(f"edge source {src!r} not in graph")
        if dst not in self._nodes:
            raise UnknownNodeError(f"edge target {dst!r} not in graph")
        src_cls = self._nodes[src].entity_class
        dst_cls = self._nodes[dst].entity_class
        if not validate_edge(relation, src_cls, dst_cls):
            raise SchemaViolationError(
                f"{relation.value} not allowed from {src_cls.value} to {dst_cls.value}"
            )
        if relation in WEIGHTED_RELATIONS:
            if weight is None:
                raise SchemaViolationError(f"{relation.value} requires a weight")
        elif weight is not None:
            raise SchemaViolationError(f"{relation.value} must not carry a weight")
        if method is None:
            method = generation_method(relation)
        if verified is None:
            verified = method is GenerationMethod.MANUAL
        edge = Edge(
            src=src, dst=dst, relation=relation, weight=weight, method=method, verified=verified
        )
        idx = len(self._edges)
        self._edges.append(edge)
        self._adj[src].append(idx)
        self._adj[dst].append(idx)
        self._edge_keys.add((src, dst, relation))
        return edge

    def ensure_edge(self, src: str, dst: str, relation: RelationType, **kwargs) -> None:
        if (src, dst, relation) not in self._edge_keys:
            self.add_edge(src, dst, relation, **kwargs)

    # -- reads ----------------------------------------------------------

    def __contains__(self, nid: str) -> bool:
        return nid in self._nodes

    def node(self, nid: str) -> Node:
        try:
            return self._nodes[nid]
        except KeyError:
            raise UnknownNodeError(f"no node {nid!r}") from None

    def has_edge(self, src: str, dst: str, relation: RelationType) -> bool:
        return (src, dst, relation) in self._edge_keys

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def nodes(self) -> Iterator[Node]:
        return iter(self._nodes.values())

    def edges(self) -> Iterator[Edge]:
        return iter(self._edges)

    def nodes_of_class(self, cls: EntityClass) -> list[Node]:
        return [n for n in self._nodes.values() if n.entity_class is cls]

    def incident(self, nid: str) -> list[Edge]:
        if nid not in self._adj:
            raise UnknownNodeError(f"no node {nid!r}")
        return [self._edges[i] for i in self._adj[nid]]

    def neighbors(self, nid: str) -> list[tuple[Edge, str]]:
        """Undirected adjacency: (edge, other endpoint) pairs."""
        out = []
        for e in self.incident(nid):
            out.append((e, e.dst if e.src == nid else e.src))
        return out

    def violations(self) -> list[str]:
        """Re-check every edge against the schema; empty list means clean."""
        bad = []
        for e in self._edges:
            src_cls = self._nodes[e.src].entity_class
            dst_cls = self._nodes[e.dst].entity_class
            if not validate_edge(e.relation, src_cls, dst_cls):
                bad.append(f"{e.src} -{e.relation.value}-> {e.dst}")
        return bad
