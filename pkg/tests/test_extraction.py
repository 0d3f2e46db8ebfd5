import random
from itertools import combinations

import pytest

from graphilosophy.extraction import (
    ConceptDef,
    NoCandidatesError,
    SpeakerPattern,
    cooccurrence,
    detect_speakers,
    extract_concepts,
    load_speaker_table,
    load_taxonomy,
    resolve_sense,
)

from conftest import StubEmbedder, basis


class TestDetectSpeakers:
    def test_zengzi_attribution(self):
        assert detect_speakers("曾子曰:吾日三省吾身") == [("Zengzi", 0)]

    def test_confucius_attribution(self):
        assert detect_speakers("子曰:學而時習之") == [("Confucius", 0)]

    def test_no_marker(self):
        assert detect_speakers("天命之謂性") == []

    def test_longest_match_excludes_nested_marker(self):
        # 曾子曰 contains 子曰; the shorter marker must never fire inside it
        hits = detect_speakers("曾子曰:吾日三省吾身,子曰:學而")
        assert hits == [("Zengzi", 0), ("Confucius", 11)]

    def test_custom_marker_table(self):
        patterns = load_speaker_table() + [SpeakerPattern("有子曰", "Youzi")]
        assert detect_speakers("有子曰:禮之用", patterns) == [("Youzi", 0)]

    def test_mencius_and_zigong(self):
        assert detect_speakers("孟子曰:王何必曰利") == [("Mencius", 0)]
        assert detect_speakers("子貢曰:貧而無諂") == [("Zigong", 0)]


class TestExtractConcepts:
    def test_ritual_and_benevolence(self):
        hits = extract_concepts("克己復禮為仁")
        assert {h.concept.char for h in hits} == {"禮", "仁"}

    def test_no_taxonomy_character(self):
        text = "吾日三省吾身"
        taxonomy = load_taxonomy()
        oracle = {c.char for c in taxonomy if c.char in text}
        assert oracle == set()
        assert extract_concepts(text) == []

    def test_learning_concept(self):
        (hit,) = extract_concepts("學而時習之")
        assert hit.concept.char == "學"
        assert hit.concept.category == "Learning"

    def test_counts_match_string_count_oracle(self):
        rng = random.Random(21)
        taxonomy = load_taxonomy()
        filler = "吾身之謂而時乎不"
        concept_chars = [c.char for c in taxonomy]
        for _ in range(50):
            text = "".join(
                rng.choice(concept_chars if rng.random() < 0.4 else filler)
                for _ in range(rng.randint(0, 40))
            )
            hits = extract_concepts(text, taxonomy)
            got = {h.concept.char: h.count for h in hits}
            want = {ch: text.count(ch) for ch in concept_chars if ch in text}
            assert got == want
            for h in hits:
                assert text[h.position] == h.concept.char


class TestCooccurrence:
    def test_single_pair(self):
        assert cooccurrence({"s1": {"仁", "禮"}}) == {("仁", "禮"): 1}

    def test_single_concept_no_pairs(self):
        assert cooccurrence({"s1": {"仁"}}) == {}

    def test_matches_exhaustive_pair_enumeration(self):
        sentences = {
            "s1": {"仁", "禮", "義"},
            "s2": {"仁", "禮"},
            "s3": {"學"},
            "s4": {"仁", "學", "知", "君"},
            "s5": set(),
        }
        got = cooccurrence(sentences)
        want = {}
        for concepts in sentences.values():
            for a, b in combinations(sorted(concepts), 2):
                want[(a, b)] = want.get((a, b), 0) + 1
        assert got == want
        assert sum(got.values()) == sum(
            len(list(combinations(c, 2))) for c in sentences.values()
        )
        for a, b in got:
            assert a < b  # canonical order, no self-pairs


class TestResolveSense:
    def test_single_candidate_wins_regardless_of_context(self):
        choice = resolve_sense("道", ["con đường"], "bất kỳ", StubEmbedder())
        assert choice.meaning == "con đường"

    def test_doctrinal_sense_wins_under_engineered_provider(self):
        ctx = "吾道一以貫之"
        emb = StubEmbedder(
            {
                ctx: basis(8, 0),
                "path": basis(8, 1),
                "speak": basis(8, 2),
                "doctrine": [0.9, 0, 0, 0, 0, 0, 0, 0.1],
            }
        )
        choice = resolve_sense("道", ["path", "speak", "doctrine"], ctx, emb)
        assert choice.meaning == "doctrine"
        assert len(choice.audit) == 3

    def test_tie_breaks_to_lowest_index(self):
        ctx = "context"
        emb = StubEmbedder({ctx: basis(8, 0), "m1": basis(8, 1), "m2": basis(8, 1)})
        choice = resolve_sense("字", ["m1", "m2"], ctx, emb)
        assert choice.meaning == "m1"

    def test_no_candidates(self):
        with pytest.raises(NoCandidatesError):
            resolve_sense("道", [], "ctx", StubEmbedder())


class TestTaxonomy:
    def test_twenty_three_concepts_in_seven_categories(self):
        taxonomy = load_taxonomy()
        assert len(taxonomy) == 23
        assert len({c.char for c in taxonomy}) == 23
        assert {c.category for c in taxonomy} == {
            "Virtue", "Cultivation", "Foundation", "Harmony", "Relation", "Learning", "Social",
        }

    def test_benevolence_entry(self):
        by_char = {c.char: c for c in load_taxonomy()}
        ren = by_char["仁"]
        assert (ren.english, ren.vietnamese, ren.category) == ("Benevolence", "Nhân", "Virtue")

    def test_shared_vietnamese_reading_returns_both(self):
        # 忠 (Loyalty) and 中 (The Mean) share the reading Trung; a lookup by
        # reading must surface both rather than collapsing them
        matches = [c for c in load_taxonomy() if c.vietnamese == "Trung"]
        assert {c.char for c in matches} == {"忠", "中"}

    def test_bad_category_rejected(self):
        with pytest.raises(ValueError):
            ConceptDef("仁", "Benevolence", "Nhân", "NotACategory")
