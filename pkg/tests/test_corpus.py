import random

import pytest

from graphilosophy.corpus import (
    BadFormatError,
    DuplicateIdError,
    EmptyCharacterError,
    EmptyLayerError,
    MissingFieldError,
    DictEntry,
    consolidate_dictionary,
    link_commentaries,
    load_corpus,
    make_id,
    normalize_text,
    parse_commentary,
    parse_dictionary,
    parse_id,
    parse_main_text,
    read_dictionary_table,
)

from conftest import MINI_CORPUS


def row(file_id="LY", sect_id="1-1", page_id=1, sent_id=1, han="子曰", hanviet="tử viết", viet="thầy nói"):
    return {
        "file_id": file_id,
        "sect_id": sect_id,
        "page_id": page_id,
        "sent_id": sent_id,
        "han": han,
        "hanviet": hanviet,
        "viet": viet,
    }


class TestNormalizeText:
    def test_cjk_midline_break_joins_without_space(self):
        assert normalize_text("吾日三\n省吾身") == "吾日三省吾身"

    def test_nfc_composition_and_space_collapse(self):
        # decomposed diacritics: o + dot below, a + grave
        raw = "học  và  hành"
        assert normalize_text(raw) == "học và hành"

    def test_empty(self):
        assert normalize_text("") == ""

    def test_break_after_terminal_punctuation_becomes_space(self):
        assert normalize_text("Học rồi.\nHành ngay") == "Học rồi. Hành ngay"

    def test_non_cjk_break_joins_with_space(self):
        assert normalize_text("con\nđường") == "con đường"

    def test_header_patterns_remove_lines(self):
        raw = "Trang 12\n學而時習之"
        assert normalize_text(raw, [r"^Trang \d+$"]) == "學而時習之"

    def test_idempotent_on_random_inputs(self):
        rng = random.Random(5)
        pieces = ["學", "而", "時", "習", "hoc", "va", " ", "\n", "。", ".", "?", "x", "樂"]
        for _ in range(100):
            raw = "".join(rng.choice(pieces) for _ in range(rng.randint(0, 60)))
            once = normalize_text(raw)
            assert normalize_text(once) == once


class TestParseMainText:
    def test_fixture_of_12_rows_parses_sorted(self, mini_corpus):
        records = mini_corpus.sentences
        assert len(records) == 12
        keys = [r.sort_key for r in records]
        assert keys == sorted(keys)

    def test_unsorted_input_is_sorted(self):
        rows = [row(sent_id=2), row(sent_id=1)]
        records = parse_main_text(rows)
        assert [r.sent_id for r in records] == [1, 2]

    def test_empty_viet_layer_rejected(self):
        with pytest.raises(EmptyLayerError):
            parse_main_text([row(viet="  ")])

    def test_missing_field_rejected(self):
        bad = row()
        del bad["hanviet"]
        with pytest.raises(MissingFieldError):
            parse_main_text([bad])

    def test_duplicate_id_rejected(self):
        with pytest.raises(DuplicateIdError):
            parse_main_text([row(), row(han="他")])

    def test_bad_page_rejected(self):
        with pytest.raises(BadFormatError):
            parse_main_text([row(page_id=0)])


class TestDictionary:
    def test_fixture_of_8_rows_with_polysemy(self, mini_corpus):
        assert len(mini_corpus.dictionary) == 8
        dao = [e for e in mini_corpus.dictionary if e.han_char == "道"]
        assert len(dao) == 2

    def test_blank_character_rejected(self):
        bad = {"entry_id": "X", "char": " ", "reading": "r", "meanings": ["m"], "book": "B", "chapter": "1"}
        with pytest.raises(EmptyCharacterError):
            parse_dictionary([bad])

    def test_meanings_accepts_pipe_separated_string(self):
        rows = [{"entry_id": "X", "char": "道", "reading": "đạo", "meanings": "a|b", "book": "B", "chapter": "1"}]
        (entry,) = parse_dictionary(rows)
        assert entry.viet_meanings == ("a", "b")

    def test_table_import_shim(self, tmp_path):
        p = tmp_path / "dict.tsv"
        p.write_text("D1\t道\tđạo\tcon đường|đạo lý\tLY\t1\n", encoding="utf-8")
        (entry,) = parse_dictionary(read_dictionary_table(p))
        assert entry.han_char == "道"
        assert entry.viet_meanings == ("con đường", "đạo lý")


def _triples(entries):
    return [(e.han_char, e.hanviet_reading, m) for e in entries for m in e.viet_meanings]


class TestConsolidation:
    def test_same_key_merge(self):
        a = DictEntry("1", "道", "đạo", ("con đường",), "LY", "1")
        b = DictEntry("2", "道", "đạo", ("học thuyết",), "LY", "4")
        (merged,) = consolidate_dictionary([a, b])
        assert merged.viet_meanings == ("con đường", "học thuyết")

    def test_different_reading_preserved(self):
        a = DictEntry("1", "樂", "lạc", ("vui",), "LY", "1")
        b = DictEntry("2", "樂", "nhạc", ("âm nhạc",), "LY", "3")
        out = consolidate_dictionary([a, b])
        assert len(out) == 2
        assert {e.hanviet_reading for e in out} == {"lạc", "nhạc"}

    def _random_entries(self, rng):
        chars = "道學樂仁人禮"
        readings = ["đạo", "học", "lạc", "nhạc", "nhân", "lễ"]
        meanings = [f"m{i}" for i in range(6)]
        out = []
        for i in range(rng.randint(1, 25)):
            out.append(
                DictEntry(
                    entry_id=f"E{i}",
                    han_char=rng.choice(chars),
                    hanviet_reading=rng.choice(readings),
                    viet_meanings=tuple(
                        rng.choice(meanings) for _ in range(rng.randint(1, 3))
                    ),
                    source_book="B",
                    source_chapter="1",
                )
            )
        return out

    def test_conservation_on_random_dictionaries(self):
        rng = random.Random(11)
        for _ in range(100):
            entries = self._random_entries(rng)
            out = consolidate_dictionary(entries)
            out_triples = _triples(out)
            # exact triples conserved up to deduplication, never invented
            assert set(out_triples) == set(_triples(entries))
            assert len(out_triples) == len(set(out_triples))
            assert len(out) <= len(entries)

    def test_idempotence_on_random_dictionaries(self):
        rng = random.Random(12)
        for _ in range(100):
            entries = self._random_entries(rng)
            once = consolidate_dictionary(entries)
            assert consolidate_dictionary(once) == once


class TestIds:
    def test_sect_with_separator_is_reencoded(self):
        assert make_id("LY", "1.4", 12, 3) == "LY.1-4.12.3"

    def test_parse_round_trip(self):
        assert parse_id("LY.1-4.12.3") == ("LY", "1-4", 12, 3)

    def test_wrong_segment_count(self):
        with pytest.raises(BadFormatError):
            parse_id("LY.12")

    def test_non_integer_page(self):
        with pytest.raises(BadFormatError):
            parse_id("LY.1.x.3")

    def test_round_trip_property(self):
        rng = random.Random(3)
        alphabet = "abcXYZ19-_"
        for _ in range(100):
            file = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6)))
            sect = "".join(rng.choice(alphabet) for _ in range(rng.randint(1, 6)))
            page, stc = rng.randint(1, 999), rng.randint(1, 999)
            assert parse_id(make_id(file, sect, page, stc)) == (file, sect, page, stc)


class TestCommentary:
    def test_three_commentaries_over_two_sections(self):
        rows = [
            {"commentary_id": "C2", "expert": "E", "sect_id": "LY.1-4", "text": "b."},
            {"commentary_id": "C1", "expert": "E", "sect_id": "LY.1-1", "text": "a."},
            {"commentary_id": "C3", "expert": "E", "sect_id": "LY.1-1", "text": "c."},
        ]
        records = parse_commentary(rows)
        assert len(records) == 3
        assert [r.commentary_id for r in records] == ["C1", "C3", "C2"]

    def test_dangling_section_flagged_not_fatal(self, mini_corpus):
        rows = [{"commentary_id": "CX", "expert": "E", "sect_id": "LY.9-9", "text": "x."}]
        linked, warnings = link_commentaries(parse_commentary(rows), mini_corpus.sentences)
        assert len(linked) == 1
        assert linked[0].dangling
        assert any("DanglingSection" in w for w in warnings)

    def test_clean_fixture_has_no_warnings(self, mini_corpus):
        assert mini_corpus.warnings == []


def test_load_corpus_tri_parallel_completeness():
    corpus = load_corpus(MINI_CORPUS)
    for rec in corpus.sentences:
        assert rec.han_text and rec.hanviet_text and rec.viet_text
