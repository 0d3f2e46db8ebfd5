"""Coherence-driven segmentation of long commentary passages.

Sentences are embedded in passage mode; a chunk boundary opens where the
windowed mean cosine against preceding sentences drops below the
threshold. Size limits and a coverage check with a fixed-length fallback
keep the output usable for retrieval regardless of embedding quality.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Sequence

import numpy as np

from .corpus import is_cjk
from . import kernels

if TYPE_CHECKING:
    from .embedding import EmbeddingProvider


class ChunkingError(Exception):
    pass


class EmptyInputError(ChunkingError):
    pass


class ChunkMethod(Enum):
    ADAPTIVE = "Adaptive"
    FIXED_FALLBACK = "FixedFallback"


@dataclass(frozen=True)
class ChunkParams:
    window: int = 3
    boundary_threshold: float = 0.3
    max_tokens: int = 512
    overlap: int = 100
    min_chars: int = 256
    coverage_min: float = 0.95

    def __post_init__(self):
        if self.window < 1:
            raise ValueError("window must be >= 1")
        if not 0.0 <= self.boundary_threshold <= 1.0:
            raise ValueError("boundary_threshold must be in [0, 1]")
        if not self.max_tokens > self.overlap >= 0:
            raise ValueError("need max_tokens > overlap >= 0")
        if self.min_chars < 0:
            raise ValueError("min_chars must be >= 0")
        if not 0.0 < self.coverage_min <= 1.0:
            raise ValueError("coverage_min must be in (0, 1]")


@dataclass(frozen=True)
class Chunk:
    """A contiguous piece of a source document.

    `span` is inclusive and counts sentence indices for adaptive chunks and
    token indices for fixed ones (fixed windows overlap when overlap > 0,
    so sentence spans would not partition there).
    """

    source_id: str
    span: tuple[int, int]
    text: str
    token_count: int
    method: ChunkMethod


def tokenize_spans(text: str) -> list[tuple[str, int, int]]:
    """Tokens with their [start, end) character offsets.

    CJK ideographs are one token each; maximal runs of other non-whitespace
    characters form one token; whitespace only separates.
    """
    out: list[tuple[str, int, int]] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if is_cjk(ch):
            out.append((ch, i, i + 1))
            i += 1
            continue
        j = i + 1
        while j < n and not text[j].isspace() and not is_cjk(text[j]):
            j += 1
        out.append((text[i:j], i, j))
        i = j
    return out


def tokenize(text: str) -> list[str]:
    return [tok for tok, _, _ in tokenize_spans(text)]


_SENTENCE_END = re.compile(r"(?<=[。！？.!?])(\s+|$)")


def split_sentences(text: str) -> list[str]:
    """Split on terminal punctuation followed by whitespace or end of text."""
    parts = [p.strip() for p in _SENTENCE_END.split(text) if p and p.strip()]
    return parts


def join_sentences(parts: Sequence[str]) -> str:
    """Rejoin sentences: no space between CJK-adjacent pieces."""
    out = ""
    for p in parts:
        if not out:
            out = p
        elif (is_cjk(out[-1]) or out[-1] in "。！？") and is_cjk(p[0]):
            out += p
        else:
            out += " " + p
    return out


def coherence(embs, i: int, window: int) -> float:
    """Mean cosine of embs[i] against its up-to-`window` predecessors."""
    if i < 1:
        raise IndexError("coherence is defined for i >= 1 only")
    mat = _as_matrix(embs[: i + 1])
    lo = max(0, i - window)
    return float(np.sum(mat[lo:i] @ mat[i])) / (i - lo)


def _as_matrix(embs) -> np.ndarray:
    rows = [e.values if hasattr(e, "values") else np.asarray(e, dtype=np.float64) for e in embs]
    return np.ascontiguousarray(np.vstack(rows), dtype=np.float64)


def adaptive_chunk(
    sentences: Sequence[str], embedder: "EmbeddingProvider", params: ChunkParams, source_id: str = ""
) -> list[Chunk]:
    """Segment sentences at coherence boundaries, within token limits.

    A boundary at i opens a new chunk when coherence(i) < threshold and the
    current chunk already holds min_chars characters (otherwise the sentence
    is absorbed). Exceeding max_tokens forces a split regardless; only those
    forced splits carry the last `overlap` tokens of the finished chunk into
    the new chunk's text as context. Sentence spans always partition.
    """
    from .embedding import Mode

    if not sentences:
        raise EmptyInputError("no sentences to chunk")
    sents = list(sentences)
    n = len(sents)
    tok_counts = [len(tokenize(s)) for s in sents]
    mat = _as_matrix([embedder.embed(s, Mode.PASSAGE) for s in sents])
    coh = kernels.coherence_series(mat, params.window)

    chunks: list[Chunk] = []
    start = 0
    cur_parts = [sents[0]]
    cur_tokens = tok_counts[0]
    pending_overlap = ""

    def close(end: int, next_overlap_tokens: int) -> str:
        text = join_sentences(cur_parts)
        if pending_overlap:
            text = join_sentences([pending_overlap, text])
        chunks.append(
            Chunk(
                source_id=source_id,
                span=(start, end),
                text=text,
                token_count=len(tokenize(text)),
                method=ChunkMethod.ADAPTIVE,
            )
        )
        if next_overlap_tokens <= 0:
            return ""
        spans = tokenize_spans(text)
        take = min(next_overlap_tokens, len(spans))
        return text[spans[-take][1] :]

    for i in range(1, n):
        forced = cur_tokens + tok_counts[i] > params.max_tokens
        boundary = coh[i] < params.boundary_threshold and (
            len(join_sentences(cur_parts)) >= params.min_chars
        )
        if forced:
            room = params.max_tokens - tok_counts[i]
            pending_overlap = close(i - 1, min(params.overlap, max(room, 0)))
            start = i
            cur_parts = [sents[i]]
            cur_tokens = len(tokenize(pending_overlap)) + tok_counts[i]
        elif boundary:
            close(i - 1, 0)
            pending_overlap = ""
            start = i
            cur_parts = [sents[i]]
            cur_tokens = tok_counts[i]
        else:
            cur_parts.append(sents[i])
            cur_tokens += tok_counts[i]
    close(n - 1, 0)
    return chunks


def fixed_chunk(text: str, max_tokens: int, overlap: int, source_id: str = "") -> list[Chunk]:
    """Windows of exactly max_tokens tokens stepping by max_tokens - overlap."""
    if not max_tokens > overlap >= 0:
        raise ValueError("need max_tokens > overlap >= 0")
    spans = tokenize_spans(text)
    n = len(spans)
    if n == 0:
        return []
    chunks = []
    step = max_tokens - overlap
    pos = 0
    while True:
        end = min(pos + max_tokens, n)
        chunks.append(
            Chunk(
                source_id=source_id,
                span=(pos, end - 1),
                text=text[spans[pos][1] : spans[end - 1][2]],
                token_count=end - pos,
                method=ChunkMethod.FIXED_FALLBACK,
            )
        )
        if end >= n:
            break
        pos += step
    return chunks


def validate_coverage(chunks: Sequence[Chunk], source: str) -> float:
    """Fraction of the source's non-whitespace characters present in chunks.

    Multiset containment per character, so overlap text cannot push the
    value above 1.0.
    """
    src = Counter(c for c in source if not c.isspace())
    total = sum(src.values())
    if total == 0:
        return 1.0
    got = Counter(c for ch in chunks for c in ch.text if not c.isspace())
    return sum(min(got[c], k) for c, k in src.items()) / total


def chunk_document(
    text: str, embedder: "EmbeddingProvider", params: ChunkParams, source_id: str = ""
) -> tuple[list[Chunk], float]:
    """Adaptive chunking with the coverage-checked fixed fallback.

    Returns (chunks, coverage); coverage of the returned chunks is always
    >= params.coverage_min since the fallback never drops content.
    """
    sentences = split_sentences(text)
    if not sentences:
        raise EmptyInputError("document has no sentences")
    chunks = adaptive_chunk(sentences, embedder, params, source_id=source_id)
    coverage = validate_coverage(chunks, text)
    if coverage >= params.coverage_min:
        return chunks, coverage
    fallback = fixed_chunk(text, params.max_tokens, params.overlap, source_id=source_id)
    return fallback, validate_coverage(fallback, text)
