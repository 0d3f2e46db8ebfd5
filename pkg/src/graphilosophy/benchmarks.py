"""Seed-fixed synthetic benchmarks bundled with the engine.

Two generators:

* `make_retrieval_benchmark` builds a judged corpus where every query has
  one relevant passage sharing all of its content tokens, plus keyword-spam
  negatives (high term frequency, long bodies) that inflate lexical scores
  while staying directionally far from the query, plus unrelated modern
  topics. This reproduces the qualitative pattern that exact-cosine
  retrieval holds up at depth while keyword scoring degrades.

* `make_chunking_benchmark` builds multi-topic documents from token-pool
  "topics" grouped into families that share vocabulary. A retrieved chunk
  counts as relevant to a query when at least `RELEVANT_FRACTION` of its
  tokens come from the query's topic segment, which is exactly what
  boundary-respecting chunking preserves and arbitrary windows destroy.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .chunking import ChunkParams, adaptive_chunk, fixed_chunk
from .embedding import HashEmbedder
from .retrieval import (
    ndcg_at_k,
    recall_at_k,
    run_benchmark,
    semantic_index,
    semantic_search,
)

RETRIEVAL_SEED = 13
RETRIEVAL_EMBED_DIM = 1024
RETRIEVAL_EMBED_SEED = 7
N_QUERIES = 40

CHUNKING_SEED = 17
CHUNKING_EMBED_DIM = 2048
CHUNKING_EMBED_SEED = 11
RELEVANT_FRACTION = 0.6

_MODERN_TOPICS = (
    "smartphone", "blockchain", "startup", "esports", "streaming",
    "podcast", "hashtag", "influencer", "crypto", "metaverse",
    "spreadsheet", "database", "firmware", "router", "satellite",
    "turbine", "reactor", "vaccine", "genome", "nanotube",
)


def retrieval_embedder() -> HashEmbedder:
    return HashEmbedder(dim=RETRIEVAL_EMBED_DIM, seed=RETRIEVAL_EMBED_SEED)


def make_retrieval_benchmark(seed: int = RETRIEVAL_SEED):
    """Return (docs, queries): docs are (id, text), queries carry judgments."""
    rng = random.Random(seed)
    docs: list[tuple[str, str]] = []
    queries: list[dict] = []
    for q in range(N_QUERIES):
        terms = [f"t{q:02d}w{i}" for i in range(5)]
        query_text = " ".join(terms)
        rel_id = f"Q{q:02d}-rel"
        docs.append((rel_id, " ".join(terms)))
        queries.append({"query": query_text, "relevant": [rel_id]})
        # alternate weak and strong keyword spam so lexical ranking stays
        # competitive at rank 1 but collapses with depth
        strong_spam = q % 2 == 0
        for j in range(12):
            tf = rng.randint(5, 7) if strong_spam else rng.randint(1, 2)
            junk_reps = rng.randint(25, 30)
            body = []
            for t in terms:
                body.extend([t] * tf)
            body.extend([f"t{q:02d}junk{j}"] * junk_reps)
            docs.append((f"Q{q:02d}-spam{j:02d}", " ".join(body)))
        for j in range(3):
            words = rng.sample(_MODERN_TOPICS, 6) + [f"mod{q:02d}x{j}", f"mod{q:02d}y{j}"]
            docs.append((f"Q{q:02d}-neg{j}", " ".join(words)))
    return docs, queries


def run_retrieval_benchmark(seed: int = RETRIEVAL_SEED):
    docs, queries = make_retrieval_benchmark(seed)
    return run_benchmark(docs, queries, embedder=retrieval_embedder())


# ---------------------------------------------------------------------------
# chunking benchmark
# ---------------------------------------------------------------------------

N_FAMILIES = 20
TOPICS_PER_FAMILY = 6
SEGMENTS_PER_DOC = 3
FAMILY_POOL = 8
SIG_TOKENS = 4


@dataclass
class TopicSegment:
    topic: str
    sentences: list[str]

    @property
    def token_count(self) -> int:
        return sum(len(s.split()) for s in self.sentences)


@dataclass
class BenchDoc:
    doc_id: str
    segments: list[TopicSegment]

    @property
    def sentences(self) -> list[str]:
        return [s for seg in self.segments for s in seg.sentences]

    @property
    def text(self) -> str:
        return " ".join(self.sentences)

    def sentence_topics(self) -> list[str]:
        return [seg.topic for seg in self.segments for _ in seg.sentences]


def chunking_embedder() -> HashEmbedder:
    return HashEmbedder(dim=CHUNKING_EMBED_DIM, seed=CHUNKING_EMBED_SEED)


def chunking_params() -> ChunkParams:
    return ChunkParams(
        window=3,
        boundary_threshold=0.3,
        max_tokens=128,
        overlap=0,
        min_chars=64,
        coverage_min=0.95,
    )


def _topic_sentence(rng: random.Random, topic: str, fam_pool: list[str]) -> str:
    own = [f"{topic}o{i}" for i in range(8)]
    toks = [f"{topic}g{i}" for i in range(SIG_TOKENS)]
    toks += rng.sample(fam_pool, 3)
    toks += [rng.choice(own)]
    return " ".join(toks)


def make_chunking_benchmark(seed: int = CHUNKING_SEED):
    """Return (docs, queries); each query targets one topic segment."""
    rng = random.Random(seed)
    fam_pools = {
        f: [f"f{f:02d}s{i}" for i in range(FAMILY_POOL)] for f in range(N_FAMILIES)
    }
    n_docs = N_FAMILIES * TOPICS_PER_FAMILY // SEGMENTS_PER_DOC

    docs: list[BenchDoc] = []
    assignments: dict[str, tuple[int, str]] = {}
    instance_of: dict[int, int] = {f: 0 for f in range(N_FAMILIES)}
    for di in range(n_docs):
        doc_id = f"doc{di:02d}"
        segments = []
        # three distinct families per document, cycling so every family
        # contributes exactly TOPICS_PER_FAMILY segments overall
        for offset in range(SEGMENTS_PER_DOC):
            fam = (SEGMENTS_PER_DOC * di + offset) % N_FAMILIES
            top = f"f{fam:02d}t{instance_of[fam]}"
            instance_of[fam] += 1
            n_sents = rng.randint(8, 11)
            sents = [_topic_sentence(rng, top, fam_pools[fam]) for _ in range(n_sents)]
            segments.append(TopicSegment(topic=top, sentences=sents))
            assignments[top] = (fam, doc_id)
        docs.append(BenchDoc(doc_id=doc_id, segments=segments))

    # two query topics per family so every query has in-family distractors
    queries = []
    per_family: dict[int, int] = {}
    for top, (fam, _doc) in sorted(assignments.items()):
        if per_family.get(fam, 0) >= 2:
            continue
        per_family[fam] = per_family.get(fam, 0) + 1
        sig = [f"{top}g{i}" for i in range(SIG_TOKENS)]
        fam_part = rng.sample(fam_pools[fam], 4)
        queries.append({"query": " ".join(sig + fam_part), "topic": top})
    return docs, queries


def _chunk_topic_fraction(
    chunk, doc: BenchDoc, topic: str, sentence_tokens: list[int], method: str
) -> float:
    topics = doc.sentence_topics()
    if method == "adaptive":
        lo, hi = chunk.span
        total = sum(sentence_tokens[lo : hi + 1])
        hit = sum(
            sentence_tokens[i] for i in range(lo, hi + 1) if topics[i] == topic
        )
        return hit / total if total else 0.0
    # fixed chunks span token indices; map sentences to token ranges
    starts = []
    pos = 0
    for n in sentence_tokens:
        starts.append((pos, pos + n))
        pos += n
    lo, hi = chunk.span
    total = hi - lo + 1
    hit = 0
    for i, (s, e) in enumerate(starts):
        if topics[i] != topic:
            continue
        hit += max(0, min(e, hi + 1) - max(s, lo))
    return hit / total if total else 0.0


def run_chunking_comparison(seed: int = CHUNKING_SEED) -> dict[str, dict[str, float]]:
    """Recall@5 and NDCG@5 of boundary-aware vs fixed-window chunking."""
    docs, queries = make_chunking_benchmark(seed)
    embedder = chunking_embedder()
    params = chunking_params()

    corpora: dict[str, list[tuple[str, str]]] = {"adaptive": [], "fixed": []}
    chunk_meta: dict[str, tuple] = {}
    for doc in docs:
        sent_tokens = [len(s.split()) for s in doc.sentences]
        adapt = adaptive_chunk(doc.sentences, embedder, params, source_id=doc.doc_id)
        fixed = fixed_chunk(doc.text, params.max_tokens, 0, source_id=doc.doc_id)
        for method, chunks in (("adaptive", adapt), ("fixed", fixed)):
            for k, ch in enumerate(chunks):
                cid = f"{method}:{doc.doc_id}#{k}"
                corpora[method].append((cid, ch.text))
                chunk_meta[cid] = (ch, doc, sent_tokens)

    out: dict[str, dict[str, float]] = {}
    for method, corpus in corpora.items():
        index = semantic_index(corpus, embedder)
        recall_sum = ndcg_sum = 0.0
        for q in queries:
            relevant = set()
            for cid, (ch, doc, sent_tokens) in chunk_meta.items():
                if not cid.startswith(method + ":"):
                    continue
                frac = _chunk_topic_fraction(ch, doc, q["topic"], sent_tokens, method)
                if frac >= RELEVANT_FRACTION:
                    relevant.add(cid)
            ranked = semantic_search(index, q["query"], embedder, 10)
            recall_sum += recall_at_k(ranked, relevant, 5)
            ndcg_sum += ndcg_at_k(ranked, relevant, 5)
        n = len(queries)
        out[method] = {"Recall@5": recall_sum / n, "NDCG@5": ndcg_sum / n}
    return out
