import random

import numpy as np
import pytest

from graphilosophy.chunking import (
    Chunk,
    ChunkMethod,
    ChunkParams,
    EmptyInputError,
    adaptive_chunk,
    chunk_document,
    coherence,
    fixed_chunk,
    split_sentences,
    tokenize,
    validate_coverage,
)
from graphilosophy.embedding import HashEmbedder

from conftest import StubEmbedder, basis


class TestTokenize:
    def test_cjk_per_character(self):
        assert tokenize("子曰學而") == ["子", "曰", "學", "而"]

    def test_whitespace_separated_words(self):
        assert tokenize("học mà hành") == ["học", "mà", "hành"]

    def test_mixed_script(self):
        assert tokenize("子曰: học") == ["子", "曰", ":", "học"]

    def test_empty(self):
        assert tokenize("") == []


def unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


class TestCoherence:
    def test_identical_embeddings_give_one(self):
        embs = [unit([1, 2, 3])] * 5
        for i in range(1, 5):
            assert coherence(embs, i, 3) == pytest.approx(1.0)

    def test_orthogonal_predecessors_give_zero(self):
        embs = [unit(basis(4, 0)), unit(basis(4, 1)), unit(basis(4, 2))]
        assert coherence(embs, 2, 3) == pytest.approx(0.0)

    def test_matches_direct_summation_oracle(self):
        rng = np.random.default_rng(7)
        embs = [unit(rng.normal(size=16)) for _ in range(5)]
        got = coherence(embs, 4, 3)
        # brute force: plain mean of the three pairwise cosines
        want = sum(float(np.dot(embs[4], embs[j])) for j in (1, 2, 3)) / 3
        assert got == pytest.approx(want, abs=1e-12)

    def test_index_zero_rejected(self):
        with pytest.raises(IndexError):
            coherence([unit([1, 0])], 0, 3)

    def test_brute_force_agreement_100_cases(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            n = rng.integers(2, 12)
            w = int(rng.integers(1, 5))
            embs = [unit(rng.normal(size=8)) for _ in range(n)]
            i = int(rng.integers(1, n))
            lo = max(0, i - w)
            want = sum(float(np.dot(embs[i], embs[j])) for j in range(lo, i)) / (i - lo)
            assert coherence(embs, i, w) == pytest.approx(want, abs=1e-9)


def two_topic_sentences():
    # three sentences per topic, long enough that min-size never absorbs
    a = ["doctrine passage number {} . ".format(i) * 3 for i in range(3)]
    b = ["garden stonework entry {} . ".format(i) * 3 for i in range(3)]
    return a + b


class TestAdaptiveChunk:
    def embedder_for_bundles(self, sentences):
        mapping = {}
        for i, s in enumerate(sentences):
            mapping[s] = basis(8, 0) if i < 3 else basis(8, 1)
        return StubEmbedder(mapping)

    def test_two_topic_document_splits_at_boundary(self):
        sentences = two_topic_sentences()
        embedder = self.embedder_for_bundles(sentences)
        params = ChunkParams(min_chars=0)
        chunks = adaptive_chunk(sentences, embedder, params)
        assert [c.span for c in chunks] == [(0, 2), (3, 5)]
        assert all(c.method is ChunkMethod.ADAPTIVE for c in chunks)

    def test_single_sentence(self):
        chunks = adaptive_chunk(["學而時習之"], HashEmbedder(dim=16), ChunkParams())
        assert len(chunks) == 1
        assert chunks[0].method is ChunkMethod.ADAPTIVE
        assert chunks[0].span == (0, 0)

    def test_identical_sentences_stay_one_chunk(self):
        sentences = ["học mà hành"] * 6
        chunks = adaptive_chunk(sentences, HashEmbedder(dim=16), ChunkParams())
        assert len(chunks) == 1

    def test_min_chars_absorbs_boundary(self):
        sentences = two_topic_sentences()
        embedder = self.embedder_for_bundles(sentences)
        params = ChunkParams(min_chars=100000)
        chunks = adaptive_chunk(sentences, embedder, params)
        assert len(chunks) == 1

    def test_empty_input_rejected(self):
        with pytest.raises(EmptyInputError):
            adaptive_chunk([], HashEmbedder(dim=16), ChunkParams())

    def test_size_forced_split_carries_overlap(self):
        sents = ["a b c d e f", "g h i j k l", "m n o p q r"]
        embedder = StubEmbedder({s: basis(8, 0) for s in sents})
        params = ChunkParams(max_tokens=10, overlap=3, min_chars=0)
        chunks = adaptive_chunk(sents, embedder, params)
        assert [c.span for c in chunks] == [(0, 0), (1, 1), (2, 2)]
        assert chunks[0].token_count == 6
        # forced split: last 3 tokens of the closed chunk prefix the next
        assert chunks[1].text == "d e f g h i j k l"
        assert chunks[1].token_count == 9
        assert chunks[2].text == "j k l m n o p q r"

    def test_partition_and_size_properties_random(self):
        rng = random.Random(9)
        chars = "天命之謂性率道修教也學而時習"
        embedder = HashEmbedder(dim=32, seed=1)
        params = ChunkParams(window=3, boundary_threshold=0.3, max_tokens=64, overlap=8, min_chars=16)
        for _ in range(30):
            n = rng.randint(1, 20)
            sents = [
                "".join(rng.choice(chars) for _ in range(rng.randint(1, 30))) for _ in range(n)
            ]
            chunks = adaptive_chunk(sents, embedder, params)
            spans = [c.span for c in chunks]
            # contiguous, non-overlapping, covering [0, n-1]
            assert spans[0][0] == 0 and spans[-1][1] == n - 1
            for (a, b), (c, d) in zip(spans, spans[1:]):
                assert c == b + 1
            for ch in chunks:
                assert ch.token_count <= params.max_tokens
            for ch in chunks[:-1]:
                assert len(ch.text) >= params.min_chars

    def test_determinism(self):
        sents = ["天命之謂性", "率性之謂道", "tu dưỡng là giáo dục"]
        embedder = HashEmbedder(dim=32, seed=1)
        a = adaptive_chunk(sents, embedder, ChunkParams())
        b = adaptive_chunk(sents, embedder, ChunkParams())
        assert a == b


class TestFixedChunk:
    def test_exact_windows_no_overlap(self):
        text = " ".join(f"t{i}" for i in range(1030))
        chunks = fixed_chunk(text, 512, 0)
        assert [c.token_count for c in chunks] == [512, 512, 6]

    def test_single_window(self):
        text = " ".join(f"t{i}" for i in range(512))
        assert len(fixed_chunk(text, 512, 100)) == 1

    def test_stride_arithmetic_with_overlap(self):
        text = " ".join(f"t{i}" for i in range(700))
        chunks = fixed_chunk(text, 512, 100)
        assert [c.span for c in chunks] == [(0, 511), (412, 699)]
        assert [c.token_count for c in chunks] == [512, 288]
        assert all(c.method is ChunkMethod.FIXED_FALLBACK for c in chunks)

    def test_empty_text(self):
        assert fixed_chunk("", 512, 0) == []


class TestCoverage:
    def test_exact_partition_is_full(self):
        chunks = [
            Chunk("s", (0, 0), "học mà", 2, ChunkMethod.ADAPTIVE),
            Chunk("s", (1, 1), "hành thôi", 2, ChunkMethod.ADAPTIVE),
        ]
        assert validate_coverage(chunks, "học mà hành thôi") == pytest.approx(1.0)

    def test_dropped_half(self):
        chunks = [Chunk("s", (0, 0), "abcd", 1, ChunkMethod.ADAPTIVE)]
        assert validate_coverage(chunks, "abcd efgh") == pytest.approx(0.5)

    def test_overlap_cannot_exceed_one(self):
        text = " ".join(f"t{i}" for i in range(40))
        chunks = fixed_chunk(text, 16, 8)
        assert validate_coverage(chunks, text) == pytest.approx(1.0)


class TestChunkDocument:
    def test_pipeline_coverage_guarantee(self):
        text = "Một đoạn bàn về việc học. Học phải đi với hành. Một đoạn khác bàn về lễ nghĩa."
        chunks, coverage = chunk_document(text, HashEmbedder(dim=32), ChunkParams())
        assert coverage >= 0.95
        assert chunks

    def test_fallback_kicks_in_when_adaptive_drops_content(self, monkeypatch):
        import graphilosophy.chunking as chunking_mod

        def lossy(sentences, embedder, params, source_id=""):
            return [
                Chunk(source_id, (0, len(sentences) - 1), sentences[0], len(tokenize(sentences[0])), ChunkMethod.ADAPTIVE)
            ]

        monkeypatch.setattr(chunking_mod, "adaptive_chunk", lossy)
        text = "Câu thứ nhất rất dài và nhiều chữ. Câu thứ hai cũng thế. Câu thứ ba nữa."
        chunks, coverage = chunk_document(text, HashEmbedder(dim=32), ChunkParams())
        assert coverage >= 0.95
        assert all(c.method is ChunkMethod.FIXED_FALLBACK for c in chunks)


def test_split_sentences_keeps_delimiters():
    text = "Học đi. Hành ngay! Xong chưa? Rồi."
    assert split_sentences(text) == ["Học đi.", "Hành ngay!", "Xong chưa?", "Rồi."]
