"""Lexical, semantic and rank-fused retrieval with evaluation metrics.

BM25 uses the positive idf variant ln(1 + (N - df + 0.5) / (df + 0.5)).
All orderings break ties by ascending document id so result tables are
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .chunking import tokenize
from .corpus import normalize_text

if TYPE_CHECKING:
    from .embedding import EmbeddingProvider


class RetrievalError(Exception):
    pass


class EmptyIndexError(RetrievalError):
    pass


class NoEmbeddingsError(RetrievalError):
    pass


class EmptyQuerySetError(RetrievalError):
    pass


class Method(Enum):
    BM25 = "BM25"
    SEMANTIC = "Semantic"
    HYBRID = "Hybrid"


@dataclass(frozen=True)
class DocIndexEntry:
    doc_id: str
    tokens: tuple[str, ...]

    @property
    def length(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class RankedList:
    items: tuple[tuple[str, float], ...]
    query: str
    method: Method

    def doc_ids(self) -> list[str]:
        return [d for d, _ in self.items]


class Bm25Index:
    def __init__(self, docs: Sequence[tuple[str, str]], k1: float = 1.2, b: float = 0.75):
        if not docs:
            raise EmptyIndexError("no documents to index")
        entries = sorted(
            (DocIndexEntry(doc_id=d, tokens=tuple(tokenize(normalize_text(t)))) for d, t in docs),
            key=lambda e: e.doc_id,
        )
        ids = [e.doc_id for e in entries]
        if len(set(ids)) != len(ids):
            raise RetrievalError("duplicate document ids")
        self.entries = entries
        self.k1 = k1
        self.b = b
        n = len(entries)
        lengths = np.array([e.length for e in entries], dtype=np.float64)
        total = float(lengths.sum())
        if total == 0:
            raise EmptyIndexError("all documents are empty after tokenization")
        avgdl = total / n
        self.norms = k1 * (1.0 - b + b * lengths / avgdl)
        self.postings: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        tmp: dict[str, list[tuple[int, int]]] = {}
        for i, e in enumerate(entries):
            counts: dict[str, int] = {}
            for tok in e.tokens:
                counts[tok] = counts.get(tok, 0) + 1
            for tok, tf in counts.items():
                tmp.setdefault(tok, []).append((i, tf))
        self.idf: dict[str, float] = {}
        for tok, posts in tmp.items():
            df = len(posts)
            self.idf[tok] = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
            arr = np.array(posts, dtype=np.int64)
            self.postings[tok] = (arr[:, 0].copy(), arr[:, 1].copy())


def bm25_index(docs: Sequence[tuple[str, str]], k1: float = 1.2, b: float = 0.75) -> Bm25Index:
    return Bm25Index(docs, k1=k1, b=b)


def bm25_search(index: Bm25Index, query: str, k: int) -> RankedList:
    """Score and rank; zero-overlap documents never appear."""
    terms = [t for t in tokenize(normalize_text(query)) if t in index.postings]
    if not terms or k <= 0:
        return RankedList(items=(), query=query, method=Method.BM25)
    uniq = sorted(set(terms))
    doc_idx, tfs, offsets, idfs = [], [], [0], []
    for t in uniq:
        ds, fs = index.postings[t]
        doc_idx.append(ds)
        tfs.append(fs)
        offsets.append(offsets[-1] + len(ds))
        idfs.append(index.idf[t])
    scores = kernels.bm25_scores(
        len(index.entries),
        np.concatenate(doc_idx),
        np.concatenate(tfs),
        np.array(offsets, dtype=np.int64),
        np.array(idfs, dtype=np.float64),
        index.norms,
        index.k1,
    )
    hit = np.nonzero(scores > 0.0)[0]
    ranked = sorted(((index.entries[i].doc_id, float(scores[i])) for i in hit), key=lambda p: (-p[1], p[0]))
    return RankedList(items=tuple(ranked[:k]), query=query, method=Method.BM25)


class SemanticIndex:
    def __init__(self, doc_ids: Sequence[str], matrix: np.ndarray):
        if len(doc_ids) == 0:
            raise NoEmbeddingsError("no embedded documents")
        order = sorted(range(len(doc_ids)), key=lambda i: doc_ids[i])
        self.doc_ids = [doc_ids[i] for i in order]
        self.matrix = np.ascontiguousarray(matrix[order], dtype=np.float64)


def semantic_index(docs: Sequence[tuple[str, str]], embedder: "EmbeddingProvider") -> SemanticIndex:
    from .embedding import Mode

    if not docs:
        raise NoEmbeddingsError("no documents to embed")
    ids = [d for d, _ in docs]
    mat = np.vstack([embedder.embed(t, Mode.PASSAGE).values for _, t in docs])
    return SemanticIndex(ids, mat)


def semantic_search(
    index: SemanticIndex, query: str, embedder: "EmbeddingProvider", k: int
) -> RankedList:
    """Exact top-k by cosine between the query-mode embedding and passages."""
    from .embedding import Mode

    if k <= 0:
        return RankedList(items=(), query=query, method=Method.SEMANTIC)
    qv = embedder.embed(query, Mode.QUERY).values
    sims = index.matrix @ qv
    order = sorted(range(len(index.doc_ids)), key=lambda i: (-sims[i], index.doc_ids[i]))[:k]
    items = tuple((index.doc_ids[i], float(sims[i])) for i in order)
    return RankedList(items=items, query=query, method=Method.SEMANTIC)


def rrf_fuse(lists: Sequence[RankedList], k_rrf: int = 60) -> RankedList:
    """Reciprocal rank fusion: score(d) = sum over lists of 1/(k + rank)."""
    if not lists:
        raise RetrievalError("rrf_fuse needs at least one input list")
    scores: dict[str, float] = {}
    for rl in lists:
        for rank, (doc, _) in enumerate(rl.items, start=1):
            scores[doc] = scores.get(doc, 0.0) + 1.0 / (k_rrf + rank)
    ranked = sorted(scores.items(), key=lambda p: (-p[1], p[0]))
    return RankedList(items=tuple(ranked), query=lists[0].query, method=Method.HYBRID)


def _ids(ranked) -> list[str]:
    if isinstance(ranked, RankedList):
        return ranked.doc_ids()
    return list(ranked)


def precision_at_k(ranked, relevant: set[str], k: int) -> float:
    if k <= 0:
        raise ValueError("k must be positive")
    ids = _ids(ranked)[:k]
    return sum(1 for d in ids if d in relevant) / k


def recall_at_k(ranked, relevant: set[str], k: int) -> float:
    if k <= 0:
        raise ValueError("k must be positive")
    if not relevant:
        return 0.0
    ids = _ids(ranked)[:k]
    return sum(1 for d in ids if d in relevant) / len(relevant)


def mrr(ranked, relevant: set[str]) -> float:
    for rank, d in enumerate(_ids(ranked), start=1):
        if d in relevant:
            return 1.0 / rank
    return 0.0


def ndcg_at_k(ranked, relevant: set[str], k: int) -> float:
    """Binary gains with log2 discount, normalized by the ideal ranking."""
    if k <= 0:
        raise ValueError("k must be positive")
    ids = _ids(ranked)[:k]
    dcg = sum(1.0 / math.log2(i + 1) for i, d in enumerate(ids, start=1) if d in relevant)
    ideal_hits = min(len(relevant), k)
    if ideal_hits == 0:
        return 0.0
    idcg = sum(1.0 / math.log2(i + 1) for i in range(1, ideal_hits + 1))
    return dcg / idcg


METRIC_KEYS = ("P@1", "P@3", "P@5", "P@10", "MRR", "NDCG@5", "NDCG@10", "Recall@5")


@dataclass
class EvalReport:
    per_method: dict[str, dict[str, float]] = field(default_factory=dict)
    query_count: int = 0

    def to_record(self) -> dict:
        return {
            "query_count": self.query_count,
            "methods": {m: dict(v) for m, v in sorted(self.per_method.items())},
        }

    def to_table(self) -> str:
        methods = sorted(self.per_method)
        header = "metric".ljust(10) + "".join(m.rjust(12) for m in methods)
        lines = [header]
        for key in METRIC_KEYS:
            row = key.ljust(10)
            for m in methods:
                row += f"{self.per_method[m].get(key, float('nan')):>12.3f}"
            lines.append(row)
        return "\n".join(lines)


def _metric_row(ranked: RankedList, relevant: set[str]) -> dict[str, float]:
    return {
        "P@1": precision_at_k(ranked, relevant, 1),
        "P@3": precision_at_k(ranked, relevant, 3),
        "P@5": precision_at_k(ranked, relevant, 5),
        "P@10": precision_at_k(ranked, relevant, 10),
        "MRR": mrr(ranked, relevant),
        "NDCG@5": ndcg_at_k(ranked, relevant, 5),
        "NDCG@10": ndcg_at_k(ranked, relevant, 10),
        "Recall@5": recall_at_k(ranked, relevant, 5),
    }


def run_benchmark(
    docs: Sequence[tuple[str, str]],
    queries: Sequence[Mapping],
    methods: Iterable[str] = ("bm25", "semantic", "hybrid"),
    ks: Sequence[int] = (1, 3, 5, 10),
    embedder: "EmbeddingProvider | None" = None,
    k1: float = 1.2,
    b: float = 0.75,
    k_rrf: int = 60,
) -> EvalReport:
    """Average the standard metrics per method over a judged query set.

    Each query record carries `query` and `relevant` (a list of doc ids).
    """
    queries = list(queries)
    if not queries:
        raise EmptyQuerySetError("benchmark has no queries")
    methods = [m.lower() for m in methods]
    depth = max(10, max(ks))

    bm25 = bm25_index(docs, k1=k1, b=b) if ("bm25" in methods or "hybrid" in methods) else None
    sem = None
    if "semantic" in methods or "hybrid" in methods:
        if embedder is None:
            raise RetrievalError("semantic evaluation needs an embedder")
        sem = semantic_index(docs, embedder)

    sums: dict[str, dict[str, float]] = {m: {k: 0.0 for k in METRIC_KEYS} for m in methods}
    for q in queries:
        relevant = set(q["relevant"])
        lists: dict[str, RankedList] = {}
        if bm25 is not None:
            lists["bm25"] = bm25_search(bm25, q["query"], depth)
        if sem is not None:
            lists["semantic"] = semantic_search(sem, q["query"], embedder, depth)
        if "hybrid" in methods:
            lists["hybrid"] = rrf_fuse(
                [lists["bm25"], lists["semantic"]], k_rrf=k_rrf
            )
        for m in methods:
            row = _metric_row(lists[m], relevant)
            for key in METRIC_KEYS:
                sums[m][key] += row[key]

    n = len(queries)
    report = EvalReport(query_count=n)
    for m in methods:
        report.per_method[m] = {k: sums[m][k] / n for k in METRIC_KEYS}
    return report
