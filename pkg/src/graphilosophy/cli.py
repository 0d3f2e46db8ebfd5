"""Command line entry point: one binary, subcommand per pipeline stage.

Configuration precedence is config file, then flags, then environment.
Failures exit nonzero with a single machine-parsable `CODE: message` line
on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import Config, ConfigError, ENV_BIND, apply_env, load_config, make_embedder
from .chunking import ChunkParams, ChunkingError, chunk_document, fixed_chunk
from .corpus import CorpusError, load_corpus
from .embedding import EmbeddingError
from .graph import GraphError, build_graph, load, save, stats
from .graph.io import SerializationError, dumps_record
from .ontology import Layer
from .query import QueryError, QueryMode, QueryRequest, run_query
from .retrieval import RetrievalError, run_benchmark
from .server import dump_payload, serve, subgraph_payload


class CliError(Exception):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _fail(code: str, message: str) -> "CliError":
    return CliError(code, message)


def _header_record(cfg: Config, extra: dict | None = None) -> dict:
    head = {"record": "header", "tool": "graphilosophy", "version": __version__, "config": cfg.as_dict()}
    head.update(extra or {})
    return head


def _load_cfg(args) -> Config:
    path = getattr(args, "config", None)
    if path:
        cfg = load_config(Path(path))
    elif Path("graphilosophy.toml").exists():
        cfg = load_config(Path("graphilosophy.toml"))
    else:
        cfg = Config()
    # flags override the file
    for key in (
        "corpus", "embedder", "bind", "seed", "theta", "window",
        "max_tokens", "overlap", "min_chars",
    ):
        val = getattr(args, key, None)
        if val is None:
            continue
        target = {
            "corpus": "corpus_dir",
            "theta": "chunk_theta",
            "window": "chunk_window",
            "max_tokens": "chunk_max_tokens",
            "overlap": "chunk_overlap",
            "min_chars": "chunk_min_chars",
        }.get(key, key)
        setattr(cfg, target, val)
    return apply_env(cfg)


def _chunk_params(cfg: Config) -> ChunkParams:
    return ChunkParams(
        window=cfg.chunk_window,
        boundary_threshold=cfg.chunk_theta,
        max_tokens=cfg.chunk_max_tokens,
        overlap=cfg.chunk_overlap,
        min_chars=cfg.chunk_min_chars,
        coverage_min=cfg.chunk_coverage_min,
    )


def cmd_validate(args) -> int:
    cfg = _load_cfg(args)
    corpus = load_corpus(Path(cfg.corpus_dir), cfg.patterns())
    print(f"sentences      {len(corpus.sentences)}")
    print(f"dictionary     {len(corpus.dictionary)} rows, {len(corpus.consolidated)} consolidated")
    print(f"commentaries   {len(corpus.commentaries)}")
    for w in corpus.warnings:
        print(f"warning: {w}")
    print(f"{len(corpus.warnings)} warnings, 0 schema violations")
    return 0


def _build(cfg: Config):
    corpus = load_corpus(Path(cfg.corpus_dir), cfg.patterns())
    embedder = make_embedder(cfg)
    result = build_graph(
        corpus,
        embedder,
        chunk_params=_chunk_params(cfg),
        domain=cfg.domain_name,
        school=cfg.school_name,
        sim_threshold=cfg.sim_threshold,
        top_k=cfg.top_k,
        sim_min=cfg.sim_min,
        cluster_threshold=cfg.cluster_threshold,
        seed=cfg.seed,
        whole_corpus_candidates=cfg.contextualize_whole_corpus,
    )
    header = {
        "corpus_hash": corpus.content_hash,
        "embedder_id": embedder.provider_id,
        "seeds": {"pipeline": cfg.seed, "embed": cfg.embed_seed},
        "config": cfg.as_dict(),
    }
    return result, header, embedder


def cmd_build(args) -> int:
    cfg = _load_cfg(args)
    result, header, _ = _build(cfg)
    out = Path(args.out)
    save(result.graph, out, header)
    queue_path = out.with_name(out.name + ".verify.jsonl")
    with open(queue_path, "w", encoding="utf-8") as fh:
        fh.write(dumps_record(_header_record(cfg, {"kind": "verification_queue"})) + "\n")
        for item in result.verification_queue:
            fh.write(dumps_record(item) + "\n")
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    print(
        f"graph: {result.graph.node_count} nodes, {result.graph.edge_count} edges -> {out}"
    )
    print(f"verification queue: {len(result.verification_queue)} samples -> {queue_path}")
    return 0


def cmd_stats(args) -> int:
    graph, _header = load(Path(args.graph))
    s = stats(graph)
    print(s.to_table())
    print(dumps_record({"record": "stats", **s.to_record()}))
    return 0


def cmd_chunk(args) -> int:
    cfg = _load_cfg(args)
    path = Path(args.input)
    if not path.exists():
        raise _fail("BAD_INPUT", f"input file not found: {path}")
    embedder = make_embedder(cfg)
    params = _chunk_params(cfg)

    sources: list[tuple[str, str]] = []
    if path.suffix == ".jsonl":
        from .corpus import parse_commentary, read_jsonl

        for rec in parse_commentary(read_jsonl(path), cfg.patterns()):
            sources.append((rec.commentary_id, rec.text))
    else:
        sources.append((path.stem, path.read_text(encoding="utf-8")))

    lines = [dumps_record(_header_record(cfg, {"kind": "chunks", "mode": args.mode}))]
    for source_id, text in sources:
        if args.mode == "adaptive":
            chunks, coverage = chunk_document(text, embedder, params, source_id=source_id)
        else:
            chunks = fixed_chunk(text, params.max_tokens, params.overlap, source_id=source_id)
            coverage = 1.0
        for ch in chunks:
            lines.append(
                dumps_record(
                    {
                        "source_id": ch.source_id,
                        "span": list(ch.span),
                        "text": ch.text,
                        "token_count": ch.token_count,
                        "method": ch.method.value,
                    }
                )
            )
        print(f"{source_id}: {len(chunks)} chunks, coverage {coverage:.3f}", file=sys.stderr)
    payload = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_query(args) -> int:
    cfg = _load_cfg(args)
    graph, _header = load(Path(args.graph))
    embedder = make_embedder(cfg)
    mode = None if args.mode == "auto" else QueryMode(args.mode)
    request = QueryRequest(
        text=args.text,
        mode=mode,
        depth=args.depth,
        max_seeds=args.max_seeds,
        layer_filter=frozenset(Layer(x) for x in args.layers.split(",")) if args.layers else None,
    )
    sub = run_query(graph, request, embedder)
    if args.format == "graph-json":
        print(dump_payload(subgraph_payload(sub)))
    else:
        print(f"seeds: {', '.join(sub.seeds) if sub.seeds else '(none)'}")
        for n in sub.nodes:
            text = n.attrs.get("text") or n.attrs.get("han") or n.attrs.get("name") or ""
            if len(str(text)) > 60:
                text = str(text)[:57] + "..."
            print(f"  [{n.entity_class.value}] {n.id}  {text}")
        print(f"{len(sub.nodes)} nodes, {len(sub.edges)} edges")
    return 0


def cmd_eval(args) -> int:
    cfg = _load_cfg(args)
    bench = Path(args.benchmark)
    if not bench.exists():
        raise _fail("BAD_INPUT", f"benchmark file not found: {bench}")
    graph, _header = load(Path(args.graph))
    embedder = make_embedder(cfg)

    from .graph.builders import DEFAULT_EMBED_CLASSES, embeddable_text

    docs = sorted(
        (n.id, embeddable_text(graph, n.id))
        for cls in DEFAULT_EMBED_CLASSES
        for n in graph.nodes_of_class(cls)
    )
    queries = []
    with open(bench, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                queries.append(json.loads(line))
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    ks = [int(x) for x in args.k.split(",")]
    report = run_benchmark(
        docs, queries, methods=methods, ks=ks, embedder=embedder,
        k1=cfg.bm25_k1, b=cfg.bm25_b, k_rrf=cfg.rrf_k,
    )
    print(report.to_table())
    record = dumps_record({"record": "eval", **report.to_record()})
    if args.out:
        Path(args.out).write_text(
            dumps_record(_header_record(cfg, {"kind": "eval"})) + "\n" + record + "\n",
            encoding="utf-8",
        )
    print(record)
    return 0


def cmd_serve(args) -> int:
    cfg = _load_cfg(args)
    serve(Path(args.graph), cfg.bind, cfg)
    return 0


def cmd_export(args) -> int:
    cfg = _load_cfg(args)
    graph, _header = load(Path(args.graph))
    if args.seed:
        from .query import bfs_subgraph

        sub = bfs_subgraph(graph, args.seed, args.depth)
    else:
        from .query import Subgraph

        nodes = sorted(graph.nodes(), key=lambda n: n.id)
        edges = sorted(graph.edges(), key=lambda e: e.sort_key)
        sub = Subgraph(nodes=nodes, edges=edges, seeds=[])
    payload = dump_payload(subgraph_payload(sub))
    out = Path(args.out)
    out.write_text(
        dumps_record(_header_record(cfg, {"kind": "export", "format": args.format}))
        + "\n"
        + payload
        + "\n",
        encoding="utf-8",
    )
    print(f"exported {len(sub.nodes)} nodes, {len(sub.edges)} edges -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphilosophy")
    parser.add_argument("--config", help="key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and check a corpus directory")
    p.add_argument("--corpus", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="build the knowledge graph")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--embedder")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("stats", help="print graph statistics")
    p.add_argument("graph")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("chunk", help="chunk a text or commentary file")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("adaptive", "fixed"), default="adaptive")
    p.add_argument("--theta", type=float)
    p.add_argument("--window", type=int)
    p.add_argument("--max-tokens", dest="max_tokens", type=int)
    p.add_argument("--overlap", type=int)
    p.add_argument("--min-chars", dest="min_chars", type=int)
    p.add_argument("--embedder")
    p.add_argument("--out")
    p.set_defaults(func=cmd_chunk)

    p = sub.add_parser("query", help="search the graph and extract a neighborhood")
    p.add_argument("--graph", required=True)
    p.add_argument("--text", required=True)
    p.add_argument("--mode", choices=("auto", "exact", "semantic", "hybrid"), default="auto")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--max-seeds", dest="max_seeds", type=int, default=10)
    p.add_argument("--layers")
    p.add_argument("--format", choices=("table", "graph-json"), default="table")
    p.add_argument("--embedder")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("eval", help="run a retrieval benchmark over the graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--benchmark", required=True)
    p.add_argument("--methods", default="bm25,semantic,hybrid")
    p.add_argument("--k", default="1,3,5,10")
    p.add_argument("--embedder")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("serve", help="serve the read-only graph API")
    p.add_argument("--graph", required=True)
    p.add_argument("--bind", help=f"host:port (env {ENV_BIND} overrides)")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("export", help="write a visualization payload file")
    p.add_argument("--graph", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", action="append", help="seed node id (repeatable)")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--format", choices=("graph-json",), default="graph-json")
    p.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"{exc.code}: {exc.message}", file=sys.stderr)
        return 2
    except (
        ConfigError,
        CorpusError,
        ChunkingError,
        EmbeddingError,
        GraphError,
        QueryError,
        RetrievalError,
        SerializationError,
        FileNotFoundError,
    ) as exc:
        print(f"BAD_INPUT: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
