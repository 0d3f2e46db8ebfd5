"""Layer-by-layer graph construction from corpus, extraction and chunk data.

Builders run in a fixed order (textual, linguistic, conceptual,
commentary, speaker, semantic); each one only reads layers built before
it. All iteration orders are made deterministic so that the same inputs
always produce the same graph, byte for byte once saved.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .. import kernels
from ..chunking import Chunk, ChunkParams, chunk_document, tokenize
from ..corpus import (
    CommentaryRecord,
    Corpus,
    DictEntry,
    SentenceRecord,
    is_cjk,
    resolve_section,
)
from ..embedding import EmbeddingProvider, EmbeddingVector, cluster, cosine
from ..extraction import (
    ConceptDef,
    SpeakerPattern,
    cooccurrence,
    detect_speakers,
    extract_concepts,
    load_speaker_table,
    load_taxonomy,
    resolve_sense,
)
from ..ontology import EntityClass as C
from ..ontology import RelationType as R
from .store import Graph, node_id

DEFAULT_EMBED_CLASSES = (C.SENTENCE, C.VIETNAMESE_SENTENCE, C.COMMENTARY_CHUNK)


@dataclass
class BuildResult:
    graph: Graph
    verification_queue: list[dict] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    chunk_coverage: dict[str, float] = field(default_factory=dict)
    dictionary_gaps: list[str] = field(default_factory=list)


def _chapter_key(sect_id: str) -> str:
    return sect_id.split("-", 1)[0] if "-" in sect_id else sect_id


def _hierarchy_keys(rec: SentenceRecord) -> dict[str, str]:
    return {
        "book": rec.file_id,
        "chapter": f"{rec.file_id}.{_chapter_key(rec.sect_id)}",
        "section": f"{rec.file_id}.{rec.sect_id}",
        "page": f"{rec.file_id}.{rec.sect_id}.{rec.page_id}",
    }


def section_node_id(file_id: str, sect_id: str) -> str:
    return node_id(C.SECTION, f"{file_id}.{sect_id}")


def build_textual(
    graph: Graph, records: Sequence[SentenceRecord], domain: str, school: str
) -> None:
    """Hierarchy nodes and containment chain, plus in-section sentence order."""
    dom = graph.ensure_node(C.DOMAIN, domain, {"name": domain})
    sch = graph.ensure_node(C.SCHOOL, school, {"name": school})
    graph.ensure_edge(dom.id, sch.id, R.CONTAINS)

    for rec in records:
        keys = _hierarchy_keys(rec)
        book = graph.ensure_node(C.BOOK, keys["book"], {"name": rec.file_id})
        chapter = graph.ensure_node(C.CHAPTER, keys["chapter"], {"name": keys["chapter"]})
        section = graph.ensure_node(C.SECTION, keys["section"], {"name": keys["section"]})
        page = graph.ensure_node(C.PAGE, keys["page"], {"page": rec.page_id})
        sent = graph.ensure_node(
            C.SENTENCE,
            rec.corpus_id,
            {
                "han": rec.han_text,
                "hanviet": rec.hanviet_text,
                "viet": rec.viet_text,
                "file_id": rec.file_id,
                "sect_id": rec.sect_id,
                "page_id": rec.page_id,
                "sent_id": rec.sent_id,
            },
        )
        graph.ensure_edge(sch.id, book.id, R.CONTAINS)
        graph.ensure_edge(book.id, chapter.id, R.CONTAINS)
        graph.ensure_edge(chapter.id, section.id, R.CONTAINS)
        graph.ensure_edge(section.id, page.id, R.CONTAINS)
        graph.ensure_edge(page.id, sent.id, R.CONTAINS)

    by_section: dict[tuple[str, str], list[SentenceRecord]] = {}
    for rec in records:
        by_section.setdefault((rec.file_id, rec.sect_id), []).append(rec)
    for key in sorted(by_section):
        ordered = sorted(by_section[key], key=lambda r: (r.page_id, r.sent_id))
        for a, b in zip(ordered, ordered[1:]):
            graph.add_edge(
                node_id(C.SENTENCE, a.corpus_id), node_id(C.SENTENCE, b.corpus_id), R.FOLLOWS
            )


def han_word_tokens(han_text: str) -> list[str]:
    """Distinct single-ideograph tokens, in order of first appearance.

    Punctuation runs produced by the tokenizer are not words and are
    skipped.
    """
    seen = []
    for tok in tokenize(han_text):
        if len(tok) == 1 and is_cjk(tok) and tok not in seen:
            seen.append(tok)
    return seen


def build_linguistic(
    graph: Graph,
    records: Sequence[SentenceRecord],
    entries: Sequence[DictEntry],
    embedder: EmbeddingProvider,
) -> list[str]:
    """Per-sentence language forms, the word vocabulary, dictionary links.

    Returns the list of corpus words with no dictionary entry (gaps; not
    errors).
    """
    by_char: dict[str, list[DictEntry]] = {}
    for e in entries:
        by_char.setdefault(e.han_char, []).append(e)

    word_sentences: dict[str, list[SentenceRecord]] = {}
    for rec in records:
        cid = rec.corpus_id
        sent = node_id(C.SENTENCE, cid)
        han = graph.ensure_node(C.HAN_SENTENCE, cid, {"text": rec.han_text})
        hv = graph.ensure_node(C.HANVIET_SENTENCE, cid, {"text": rec.hanviet_text})
        vi = graph.ensure_node(C.VIETNAMESE_SENTENCE, cid, {"text": rec.viet_text})
        graph.add_edge(sent, han.id, R.HAS_HAN_FORM)
        graph.add_edge(sent, hv.id, R.HAS_HANVIET_FORM)
        graph.add_edge(sent, vi.id, R.HAS_VIETNAMESE_TRANSLATION)

        for word in han_word_tokens(rec.han_text):
            wnode = graph.ensure_node(C.HAN_WORD, word, {"text": word})
            graph.add_edge(wnode.id, han.id, R.APPEARS_IN)
            word_sentences.setdefault(word, []).append(rec)

    gaps: list[str] = []
    for word in sorted(word_sentences):
        wid = node_id(C.HAN_WORD, word)
        word_entries = by_char.get(word)
        if not word_entries:
            gaps.append(word)
            continue
        for entry in word_entries:
            pron = graph.ensure_node(
                C.HANVIET_PRONUNCIATION, entry.hanviet_reading, {"text": entry.hanviet_reading}
            )
            graph.ensure_edge(wid, pron.id, R.PRONOUNCED_AS)
        candidates: list[str] = []
        for entry in word_entries:
            for m in entry.viet_meanings:
                if m not in candidates:
                    candidates.append(m)
        audit = []
        for rec in word_sentences[word]:
            if len(candidates) == 1:
                chosen, scores = candidates[0], [(candidates[0], 1.0)]
            else:
                context = f"{rec.han_text} {rec.viet_text}"
                choice = resolve_sense(word, candidates, context, embedder)
                chosen, scores = choice.meaning, list(choice.audit)
            meaning = graph.ensure_node(C.VIETNAMESE_MEANING, chosen, {"text": chosen})
            graph.ensure_edge(wid, meaning.id, R.TRANSLATES_TO)
            audit.append(
                {
                    "sentence": rec.corpus_id,
                    "chosen": chosen,
                    "scores": [[m, round(s, 9)] for m, s in scores],
                }
            )
        if len(candidates) > 1:
            graph.node(wid).attrs["sense_audit"] = audit
    return gaps


def build_conceptual(
    graph: Graph,
    records: Sequence[SentenceRecord],
    taxonomy: Sequence[ConceptDef] | None = None,
) -> dict[str, set[str]]:
    """Concept nodes, category ties, per-sentence expression, co-occurrence.

    Returns the per-sentence concept sets for reuse by callers.
    """
    if taxonomy is None:
        taxonomy = load_taxonomy()
    order = {c.char: i for i, c in enumerate(taxonomy)}
    for c in taxonomy:
        graph.ensure_node(
            C.PHILOSOPHICAL_CONCEPT,
            c.char,
            {"text": c.char, "english": c.english, "vietnamese": c.vietnamese, "category": c.category},
        )
    by_category: dict[str, list[ConceptDef]] = {}
    for c in taxonomy:
        by_category.setdefault(c.category, []).append(c)
    for cat in sorted(by_category):
        group = by_category[cat]
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                graph.ensure_edge(
                    node_id(C.PHILOSOPHICAL_CONCEPT, group[i].char),
                    node_id(C.PHILOSOPHICAL_CONCEPT, group[j].char),
                    R.RELATED_TO,
                )

    hits_by_sentence: dict[str, set[str]] = {}
    for rec in records:
        cid = rec.corpus_id
        hits = extract_concepts(rec.han_text, taxonomy, sentence_id=cid)
        if not hits:
            continue
        hits_by_sentence[cid] = {h.concept.char for h in hits}
        for h in hits:
            graph.add_edge(
                node_id(C.SENTENCE, cid),
                node_id(C.PHILOSOPHICAL_CONCEPT, h.concept.char),
                R.EXPRESSES_CONCEPT,
                weight=float(h.count),
            )

    for (a, b), count in sorted(cooccurrence(hits_by_sentence).items()):
        src, dst = (a, b) if order[a] <= order[b] else (b, a)
        graph.ensure_edge(
            node_id(C.PHILOSOPHICAL_CONCEPT, src),
            node_id(C.PHILOSOPHICAL_CONCEPT, dst),
            R.CO_OCCURS_WITH,
            weight=float(count),
        )
    return hits_by_sentence


def build_commentary(
    graph: Graph,
    commentaries: Sequence[CommentaryRecord],
    chunks_by_commentary: dict[str, list[Chunk]],
    records: Sequence[SentenceRecord],
    embedder: EmbeddingProvider,
    sim_threshold: float = 0.75,
    seed: int = 42,
    whole_corpus_candidates: bool = False,
) -> tuple[list[dict], list[str]]:
    """Experts, commentaries, chunk sequences and text anchoring.

    Chunk-to-sentence anchors compare the chunk text with each candidate
    sentence's Vietnamese translation; candidates default to the book of
    the explained section to bound the comparison count. Returns the
    sampled human-verification queue and any warnings.
    """
    from ..embedding import Mode

    warnings: list[str] = []
    ctx_edges: list[tuple[str, str, float]] = []
    sentence_vecs: dict[str, EmbeddingVector] = {}

    def sentence_vec(rec: SentenceRecord) -> EmbeddingVector:
        cid = rec.corpus_id
        if cid not in sentence_vecs:
            sentence_vecs[cid] = embedder.embed(rec.viet_text, Mode.PASSAGE)
        return sentence_vecs[cid]

    for comm in commentaries:
        expert = graph.ensure_node(C.EXPERT, comm.expert_name, {"name": comm.expert_name})
        cnode = graph.ensure_node(
            C.COMMENTARY,
            comm.commentary_id,
            {"text": comm.text, "sect_id": comm.sect_id, "expert": comm.expert_name},
        )
        graph.ensure_edge(expert.id, cnode.id, R.PROVIDES_COMMENTARY)

        resolved = resolve_section(comm.sect_id, records)
        if resolved is None:
            warnings.append(
                f"DanglingSection: commentary {comm.commentary_id} -> {comm.sect_id!r}; "
                "EXPLAINS edge skipped"
            )
        else:
            graph.ensure_edge(cnode.id, section_node_id(*resolved), R.EXPLAINS)

        chunks = chunks_by_commentary.get(comm.commentary_id, [])
        prev = None
        for k, chunk in enumerate(chunks):
            ch = graph.ensure_node(
                C.COMMENTARY_CHUNK,
                f"{comm.commentary_id}#{k}",
                {
                    "text": chunk.text,
                    "span": list(chunk.span),
                    "token_count": chunk.token_count,
                    "method": chunk.method.value,
                },
            )
            graph.add_edge(cnode.id, ch.id, R.CONTAINS)
            if prev is not None:
                graph.add_edge(prev, ch.id, R.FOLLOWS)
            prev = ch.id

            if whole_corpus_candidates:
                candidates = list(records)
            elif resolved is not None:
                candidates = [r for r in records if r.file_id == resolved[0]]
            else:
                candidates = []
            cvec = embedder.embed(chunk.text, Mode.PASSAGE)
            for rec in sorted(candidates, key=lambda r: r.sort_key):
                sim = cosine(cvec, sentence_vec(rec))
                if sim >= sim_threshold:
                    graph.add_edge(
                        ch.id,
                        node_id(C.SENTENCE, rec.corpus_id),
                        R.CONTEXTUALIZES,
                        weight=sim,
                        verified=False,
                    )
                    ctx_edges.append((ch.id, node_id(C.SENTENCE, rec.corpus_id), sim))

    queue: list[dict] = []
    if ctx_edges:
        n_sample = math.ceil(0.10 * len(ctx_edges))
        rng = random.Random(seed)
        picks = sorted(rng.sample(range(len(ctx_edges)), n_sample))
        for i in picks:
            src, dst, sim = ctx_edges[i]
            queue.append(
                {"src": src, "dst": dst, "relation": R.CONTEXTUALIZES.value, "weight": round(sim, 9)}
            )
    return queue, warnings


def build_speaker(
    graph: Graph,
    records: Sequence[SentenceRecord],
    patterns: Sequence[SpeakerPattern] | None = None,
) -> None:
    if patterns is None:
        patterns = load_speaker_table()
    for rec in records:
        for name, _offset in detect_speakers(rec.han_text, patterns):
            sp = graph.ensure_node(C.SPEAKER, name, {"name": name})
            graph.add_edge(sp.id, node_id(C.HAN_SENTENCE, rec.corpus_id), R.QUOTES)


def embeddable_text(graph: Graph, nid: str) -> str:
    node = graph.node(nid)
    if node.entity_class is C.SENTENCE:
        return node.attrs["han"]
    return node.attrs["text"]


def build_semantic(
    graph: Graph,
    embedder: EmbeddingProvider,
    embed_classes: Sequence[C] = DEFAULT_EMBED_CLASSES,
    top_k: int = 5,
    sim_min: float = 0.75,
    cluster_threshold: float = 0.75,
) -> None:
    """Embedding nodes, exact top-k similarity edges, leader clusters."""
    from ..embedding import Mode

    sources = sorted(
        n.id for cls in embed_classes for n in graph.nodes_of_class(cls)
    )
    if not sources:
        return
    vectors: dict[str, EmbeddingVector] = {}
    for sid in sources:
        vec = embedder.embed(embeddable_text(graph, sid), Mode.PASSAGE)
        emb = graph.ensure_node(
            C.EMBEDDING,
            sid,
            {"vector": [float(x) for x in vec.values], "flagged": vec.flagged, "source": sid},
        )
        graph.add_edge(sid, emb.id, R.HAS_SEMANTIC_REP)
        vectors[emb.id] = vec

    # zero-text guard vectors carry no signal; they get no similarity edges
    # and no cluster membership
    active = sorted(eid for eid, v in vectors.items() if not v.flagged)
    if not active:
        return
    mat = np.ascontiguousarray(np.vstack([vectors[eid].values for eid in active]))
    srcs, dsts, sims = kernels.topk_neighbors(mat, top_k, sim_min)
    for s, d, sim in zip(srcs, dsts, sims):
        graph.add_edge(active[int(s)], active[int(d)], R.SIMILAR_TO, weight=float(sim))

    assignments = cluster([(eid, vectors[eid]) for eid in active], cluster_threshold)
    for a in assignments:
        cnode = graph.ensure_node(
            C.SEMANTIC_CLUSTER,
            f"c{a.cluster_id}",
            {"size": len(a.member_ids), "centroid": [float(x) for x in a.centroid.values]},
        )
        leader_vec = vectors[a.member_ids[0]]
        for mid in a.member_ids:
            graph.add_edge(
                mid,
                cnode.id,
                R.BELONGS_TO_CLUSTER,
                weight=cosine(vectors[mid], leader_vec),
            )


def build_graph(
    corpus: Corpus,
    embedder: EmbeddingProvider,
    chunk_params: ChunkParams | None = None,
    taxonomy: Sequence[ConceptDef] | None = None,
    speakers: Sequence[SpeakerPattern] | None = None,
    domain: str = "Philosophy",
    school: str = "Confucianism",
    sim_threshold: float = 0.75,
    top_k: int = 5,
    sim_min: float = 0.75,
    cluster_threshold: float = 0.75,
    seed: int = 42,
    embed_classes: Sequence[C] = DEFAULT_EMBED_CLASSES,
    whole_corpus_candidates: bool = False,
) -> BuildResult:
    """Run every layer builder in order over a loaded corpus."""
    chunk_params = chunk_params or ChunkParams()
    graph = Graph()
    result = BuildResult(graph=graph)
    result.warnings.extend(corpus.warnings)

    chunks_by_commentary: dict[str, list[Chunk]] = {}
    for comm in corpus.commentaries:
        chunks, coverage = chunk_document(
            comm.text, embedder, chunk_params, source_id=comm.commentary_id
        )
        chunks_by_commentary[comm.commentary_id] = chunks
        result.chunk_coverage[comm.commentary_id] = coverage

    build_textual(graph, corpus.sentences, domain, school)
    result.dictionary_gaps = build_linguistic(
        graph, corpus.sentences, corpus.consolidated, embedder
    )
    build_conceptual(graph, corpus.sentences, taxonomy)
    queue, warnings = build_commentary(
        graph,
        corpus.commentaries,
        chunks_by_commentary,
        corpus.sentences,
        embedder,
        sim_threshold=sim_threshold,
        seed=seed,
        whole_corpus_candidates=whole_corpus_candidates,
    )
    result.verification_queue = queue
    result.warnings.extend(w for w in warnings if w not in result.warnings)
    build_speaker(graph, corpus.sentences, speakers)
    build_semantic(
        graph,
        embedder,
        embed_classes=embed_classes,
        top_k=top_k,
        sim_min=sim_min,
        cluster_threshold=cluster_threshold,
    )

    violations = graph.violations()
    if violations:
        raise AssertionError(f"schema violations after build: {violations[:5]}")
    return result
