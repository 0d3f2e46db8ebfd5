from .builders import (
    BuildResult,
    build_commentary,
    build_conceptual,
    build_graph,
    build_linguistic,
    build_semantic,
    build_speaker,
    build_textual,
    embeddable_text,
    han_word_tokens,
    section_node_id,
)
from .io import SchemaVersionMismatchError, SerializationError, load, save
from .metrics import EmptyGraphError, GraphStats, density, relation_shares, stats
from .store import (
    Edge,
    Graph,
    GraphError,
    Node,
    SchemaViolationError,
    UnknownNodeError,
    WEIGHTED_RELATIONS,
    node_id,
)

__all__ = [
    "BuildResult",
    "Edge",
    "EmptyGraphError",
    "Graph",
    "GraphError",
    "GraphStats",
    "Node",
    "SchemaViolationError",
    "SchemaVersionMismatchError",
    "SerializationError",
    "UnknownNodeError",
    "WEIGHTED_RELATIONS",
    "build_commentary",
    "build_conceptual",
    "build_graph",
    "build_linguistic",
    "build_semantic",
    "build_speaker",
    "build_textual",
    "density",
    "embeddable_text",
    "han_word_tokens",
    "load",
    "node_id",
    "relation_shares",
    "save",
    "section_node_id",
    "stats",
]
