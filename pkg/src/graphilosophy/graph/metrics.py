"""Structural measurements over a built graph.

Density uses the directed-graph formula E / (N * (N - 1)). Layer density
is computed on the subgraph induced by a layer's classes, counting only
edges internal to the layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from ..ontology import CLASS_LAYER, Layer
from .store import Graph


class EmptyGraphError(Exception):
    pass


def density(node_count: int, edge_count: int) -> float:
    if node_count < 2:
        raise EmptyGraphError("density needs at least 2 nodes")
    return edge_count / (node_count * (node_count - 1))


def relation_shares(relation_counts: Mapping[str, int]) -> dict[str, float]:
    total = sum(relation_counts.values())
    if total == 0:
        return {k: 0.0 for k in relation_counts}
    return {k: v / total for k, v in relation_counts.items()}


@dataclass
class GraphStats:
    node_count: int
    edge_count: int
    density: float
    class_counts: dict[str, int] = field(default_factory=dict)
    relation_counts: dict[str, int] = field(default_factory=dict)
    relation_shares: dict[str, float] = field(default_factory=dict)
    layer_density: dict[str, float] = field(default_factory=dict)
    cross_layer_ratio: float = 0.0

    @classmethod
    def from_counts(
        cls,
        node_count: int,
        edge_count: int,
        relation_counts: Mapping[str, int] | None = None,
    ) -> "GraphStats":
        counts = dict(relation_counts or {})
        return cls(
            node_count=node_count,
            edge_count=edge_count,
            density=density(node_count, edge_count),
            relation_counts=counts,
            relation_shares=relation_shares(counts),
        )

    def to_record(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "density": self.density,
            "class_counts": dict(sorted(self.class_counts.items())),
            "relation_counts": dict(sorted(self.relation_counts.items())),
            "relation_shares": dict(sorted(self.relation_shares.items())),
            "layer_density": dict(sorted(self.layer_density.items())),
            "cross_layer_ratio": self.cross_layer_ratio,
        }

    def to_table(self) -> str:
        lines = [
            f"nodes            {self.node_count}",
            f"edges            {self.edge_count}",
            f"density          {self.density:.6g}",
            f"cross-layer      {self.cross_layer_ratio:.1%}",
            "",
            "layer density:",
        ]
        for layer, d in sorted(self.layer_density.items()):
            lines.append(f"  {layer:<20} {d:.6g}")
        lines.append("")
        lines.append("relations:")
        for rel in sorted(self.relation_counts, key=lambda r: -self.relation_counts[r]):
            share = self.relation_shares.get(rel, 0.0)
            lines.append(f"  {rel:<28} {self.relation_counts[rel]:>8}  {share:.1%}")
        lines.append("")
        lines.append("classes:")
        for name, n in sorted(self.class_counts.items()):
            lines.append(f"  {name:<28} {n:>8}")
        return "\n".join(lines)


def stats(graph: Graph) -> GraphStats:
    n, e = graph.node_count, graph.edge_count
    class_counts: dict[str, int] = {}
    layer_nodes: dict[Layer, int] = {layer: 0 for layer in Layer}
    for node in graph.nodes():
        class_counts[node.entity_class.value] = class_counts.get(node.entity_class.value, 0) + 1
        layer_nodes[node.layer] += 1

    relation_counts: dict[str, int] = {}
    layer_edges: dict[Layer, int] = {layer: 0 for layer in Layer}
    cross = 0
    for edge in graph.edges():
        relation_counts[edge.relation.value] = relation_counts.get(edge.relation.value, 0) + 1
        src_layer = CLASS_LAYER[graph.node(edge.src).entity_class]
        dst_layer = CLASS_LAYER[graph.node(edge.dst).entity_class]
        if src_layer is dst_layer:
            layer_edges[src_layer] += 1
        else:
            cross += 1

    layer_density = {}
    for layer in Layer:
        ln = layer_nodes[layer]
        layer_density[layer.value] = (
            layer_edges[layer] / (ln * (ln - 1)) if ln >= 2 else 0.0
        )

    return GraphStats(
        node_count=n,
        edge_count=e,
        density=density(n, e),
        class_counts=class_counts,
        relation_counts=relation_counts,
        relation_shares=relation_shares(relation_counts),
        layer_density=layer_density,
        cross_layer_ratio=(cross / e) if e else 0.0,
    )
