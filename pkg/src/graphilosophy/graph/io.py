"""Canonical line-delimited graph persistence.

Layout: one header record, then node records sorted by id, then edge
records in canonical (src, relation, dst, weight) order. The canonical
ordering makes a byte-level file comparison equivalent to graph equality,
which the determinism guarantees lean on.
"""

from __future__ import annotations

import json
from pathlib import Path

from ..ontology import EntityClass, GenerationMethod, normalize_relation_name
from .store import Graph, Node

FORMAT_VERSION = 1


class SerializationError(Exception):
    pass


class SchemaVersionMismatchError(SerializationError):
    pass


def dumps_record(obj: dict) -> str:
    return json.dumps(obj, ensure_ascii=False, sort_keys=True, separators=(",", ":"))


def save(graph: Graph, path: Path, header: dict | None = None) -> None:
    path = Path(path)
    head = {
        "record": "header",
        "format_version": FORMAT_VERSION,
        "counts": {"nodes": graph.node_count, "edges": graph.edge_count},
    }
    head.update(header or {})
    head["record"] = "header"
    head["format_version"] = FORMAT_VERSION

    lines = [dumps_record(head)]
    for node in sorted(graph.nodes(), key=lambda n: n.id):
        lines.append(
            dumps_record(
                {
                    "record": "node",
                    "id": node.id,
                    "class": node.entity_class.value,
                    "attrs": node.attrs,
                }
            )
        )
    for edge in sorted(graph.edges(), key=lambda e: e.sort_key):
        lines.append(
            dumps_record(
                {
                    "record": "edge",
                    "src": edge.src,
                    "dst": edge.dst,
                    "relation": edge.relation.value,
                    "weight": edge.weight,
                    "method": edge.method.value if edge.method else None,
                    "verified": edge.verified,
                }
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def load(path: Path) -> tuple[Graph, dict]:
    """Parse, verify and materialize; a bad file never yields a partial graph."""
    path = Path(path)
    try:
        raw_lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise SerializationError(f"cannot read {path}: {exc}") from exc
    records = []
    for n, line in enumerate(raw_lines, start=1):
        line = line.strip()
        if not line:
            continue
        try:
            records.append(json.loads(line))
        except json.JSONDecodeError as exc:
            raise SerializationError(f"{path}:{n}: invalid record") from exc
    if not records or records[0].get("record") != "header":
        raise SerializationError(f"{path}: missing header record")
    header = records[0]
    if header.get("format_version") != FORMAT_VERSION:
        raise SchemaVersionMismatchError(
            f"{path}: format_version {header.get('format_version')!r}, expected {FORMAT_VERSION}"
        )

    nodes: list[Node] = []
    edges: list[dict] = []
    for rec in records[1:]:
        kind = rec.get("record")
        if kind == "node":
            try:
                nodes.append(
                    Node(
                        id=rec["id"],
                        entity_class=EntityClass(rec["class"]),
                        attrs=rec.get("attrs", {}),
                    )
                )
            except (KeyError, ValueError) as exc:
                raise SerializationError(f"{path}: bad node record: {exc}") from exc
        elif kind == "edge":
            edges.append(rec)
        else:
            raise SerializationError(f"{path}: unknown record kind {kind!r}")

    counts = header.get("counts", {})
    if counts and (counts.get("nodes") != len(nodes) or counts.get("edges") != len(edges)):
        raise SerializationError(
            f"{path}: truncated or corrupt "
            f"(header says {counts}, found {len(nodes)} nodes / {len(edges)} edges)"
        )

    graph = Graph()
    for node in nodes:
        graph.add_node(node)
    for rec in edges:
        try:
            relation, flip = normalize_relation_name(rec["relation"])
            src, dst = rec["src"], rec["dst"]
            if flip:
                src, dst = dst, src
            method = GenerationMethod(rec["method"]) if rec.get("method") else None
            graph.add_edge(
                src,
                dst,
                relation,
                weight=rec.get("weight"),
                method=method,
                verified=bool(rec.get("verified", False)),
            )
        except KeyError as exc:
            raise SerializationError(f"{path}: bad edge record: {exc}") from exc
    return graph, header
