"""Parsing, normalization and identification of the three corpus components.

A corpus root directory holds three line-delimited record files:

    main_text.jsonl   fields: file_id, sect_id, page_id, sent_id, han, hanviet, viet
    dictionary.jsonl  fields: entry_id, char, reading, meanings, book, chapter
    commentary.jsonl  fields: commentary_id, expert, sect_id, text

Every record is one JSON object per line. A tab-separated import shim for
dictionaries is provided in `read_dictionary_table`.
"""

from __future__ import annotations

import hashlib
import json
import re
import unicodedata
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

ID_SEPARATOR = "."
_SEP_ESCAPE = "-"

# sentence-terminal punctuation used by the line-join rule
_TERMINALS = "。？！.?!"


class CorpusError(Exception):
    """Base class for corpus ingestion failures."""


class MissingFieldError(CorpusError):
    pass


class DuplicateIdError(CorpusError):
    pass


class EmptyLayerError(CorpusError):
    pass


class EmptyCharacterError(CorpusError):
    pass


class BadFormatError(CorpusError):
    pass


def is_cjk(ch: str) -> bool:
    """True for CJK unified ideographs (the per-character token unit)."""
    cp = ord(ch)
    return (
        0x4E00 <= cp <= 0x9FFF
        or 0x3400 <= cp <= 0x4DBF
        or 0xF900 <= cp <= 0xFAFF
        or 0x20000 <= cp <= 0x2FA1F
    )


def normalize_text(raw: str, header_patterns: Sequence[str] = ()) -> str:
    """Normalize one text field: NFC, drop header/footer lines, join breaks.

    A line break whose preceding non-space character is not terminal
    punctuation is a digitization artifact: it is removed entirely between
    CJK characters and replaced by a single space otherwise. Remaining
    whitespace runs collapse to single spaces. Total, and idempotent as
    long as header patterns are line-anchored (matching runs on the
    original lines, before joins).
    """
    text = unicodedata.normalize("NFC", raw)
    if not text:
        return ""
    compiled = [re.compile(p) for p in header_patterns]
    lines = [ln for ln in text.split("\n") if not any(p.search(ln) for p in compiled)]

    parts: list[str] = []
    for ln in lines:
        if not parts:
            parts.append(ln)
            continue
        left = parts[-1].rstrip()
        right = ln.lstrip()
        if not left:
            parts[-1] = ln
            continue
        if not right:
            continue
        if left[-1] in _TERMINALS:
            parts[-1] = left + " " + right
        elif is_cjk(left[-1]) and is_cjk(right[0]):
            parts[-1] = left + right
        else:
            parts[-1] = left + " " + right
    joined = parts[0] if parts else ""
    return re.sub(r"\s+", " ", joined).strip()


@dataclass(frozen=True)
class SentenceRecord:
    """One tri-parallel aligned sentence with its hierarchical position."""

    file_id: str
    sect_id: str
    page_id: int
    sent_id: int
    han_text: str
    hanviet_text: str
    viet_text: str

    @property
    def corpus_id(self) -> str:
        return make_id(self.file_id, self.sect_id, self.page_id, self.sent_id)

    @property
    def sort_key(self):
        return (self.file_id, self.sect_id, self.page_id, self.sent_id)


@dataclass(frozen=True)
class DictEntry:
    entry_id: str
    han_char: str
    hanviet_reading: str
    viet_meanings: tuple[str, ...]
    source_book: str
    source_chapter: str


@dataclass(frozen=True)
class CommentaryRecord:
    commentary_id: str
    expert_name: str
    sect_id: str
    text: str
    dangling: bool = False


def _escape_component(value: str) -> str:
    return value.replace(ID_SEPARATOR, _SEP_ESCAPE)


def make_id(file: str, sect: str, page: int, stc: int) -> str:
    """Assemble the canonical four-segment position identifier.

    Components containing the separator are re-encoded with '-' so the
    result always splits back into exactly four segments.
    """
    if not file or not sect:
        raise BadFormatError("file and sect components must be non-empty")
    if page < 1 or stc < 1:
        raise BadFormatError(f"page and stc must be >= 1, got ({page}, {stc})")
    return ID_SEPARATOR.join(
        (_escape_component(file), _escape_component(sect), str(page), str(stc))
    )


def parse_id(s: str) -> tuple[str, str, int, int]:
    parts = s.split(ID_SEPARATOR)
    if len(parts) != 4:
        raise BadFormatError(f"expected 4 dot-separated segments, got {len(parts)}: {s!r}")
    file, sect, page_s, stc_s = parts
    if not file or not sect:
        raise BadFormatError(f"empty segment in {s!r}")
    try:
        page, stc = int(page_s), int(stc_s)
    except ValueError as exc:
        raise BadFormatError(f"non-integer page/stc in {s!r}") from exc
    if page < 1 or stc < 1:
        raise BadFormatError(f"page/stc must be >= 1 in {s!r}")
    return file, sect, page, stc


_MAIN_FIELDS = ("file_id", "sect_id", "page_id", "sent_id", "han", "hanviet", "viet")


def parse_main_text(
    source: Iterable[Mapping], header_patterns: Sequence[str] = ()
) -> list[SentenceRecord]:
    """Parse main-text rows into sorted, normalized sentence records."""
    records = []
    seen: set[tuple] = set()
    for n, row in enumerate(source, start=1):
        for f in _MAIN_FIELDS:
            if f not in row or row[f] is None:
                raise MissingFieldError(f"main_text row {n}: missing field {f!r}")
        try:
            page = int(row["page_id"])
            sent = int(row["sent_id"])
        except (TypeError, ValueError) as exc:
            raise BadFormatError(f"main_text row {n}: page_id/sent_id not integers") from exc
        if page < 1 or sent < 1:
            raise BadFormatError(f"main_text row {n}: page_id/sent_id must be >= 1")
        han = normalize_text(str(row["han"]), header_patterns)
        hanviet = normalize_text(str(row["hanviet"]), header_patterns)
        viet = normalize_text(str(row["viet"]), header_patterns)
        if not han or not hanviet or not viet:
            raise EmptyLayerError(
                f"main_text row {n}: empty layer after normalization "
                f"(han={bool(han)}, hanviet={bool(hanviet)}, viet={bool(viet)})"
            )
        rec = SentenceRecord(
            file_id=str(row["file_id"]),
            sect_id=str(row["sect_id"]),
            page_id=page,
            sent_id=sent,
            han_text=han,
            hanviet_text=hanviet,
            viet_text=viet,
        )
        if rec.sort_key in seen:
            raise DuplicateIdError(f"main_text row {n}: duplicate id {rec.sort_key}")
        seen.add(rec.sort_key)
        records.append(rec)
    records.sort(key=lambda r: r.sort_key)
    return records


_DICT_FIELDS = ("entry_id", "char", "reading", "meanings", "book", "chapter")


def parse_dictionary(source: Iterable[Mapping]) -> list[DictEntry]:
    """Parse dictionary rows one-to-one (consolidation is a separate step)."""
    entries = []
    for n, row in enumerate(source, start=1):
        for f in _DICT_FIELDS:
            if f not in row or row[f] is None:
                raise MissingFieldError(f"dictionary row {n}: missing field {f!r}")
        char = normalize_text(str(row["char"]))
        if not char:
            raise EmptyCharacterError(f"dictionary row {n}: blank character field")
        raw_meanings = row["meanings"]
        if isinstance(raw_meanings, str):
            raw_meanings = raw_meanings.split("|")
        meanings = tuple(m for m in (normalize_text(str(x)) for x in raw_meanings) if m)
        if not meanings:
            raise MissingFieldError(f"dictionary row {n}: no usable meanings")
        entries.append(
            DictEntry(
                entry_id=str(row["entry_id"]),
                han_char=char,
                hanviet_reading=normalize_text(str(row["reading"])),
                viet_meanings=meanings,
                source_book=str(row["book"]),
                source_chapter=str(row["chapter"]),
            )
        )
    return entries


def consolidate_dictionary(entries: Sequence[DictEntry]) -> list[DictEntry]:
    """Merge entries sharing (character, reading); meanings dedupe exactly.

    Meaning lists concatenate in first-occurrence order. Provenance of a
    merged entry is the first contributing row's.
    """
    merged: dict[tuple[str, str], DictEntry] = {}
    meanings: dict[tuple[str, str], list[str]] = {}
    for e in entries:
        key = (e.han_char, e.hanviet_reading)
        if key not in merged:
            merged[key] = e
            meanings[key] = []
        bucket = meanings[key]
        for m in e.viet_meanings:
            if m not in bucket:
                bucket.append(m)
    return [replace(merged[k], viet_meanings=tuple(meanings[k])) for k in merged]


_COMMENTARY_FIELDS = ("commentary_id", "expert", "sect_id", "text")


def parse_commentary(
    source: Iterable[Mapping], header_patterns: Sequence[str] = ()
) -> list[CommentaryRecord]:
    records = []
    for n, row in enumerate(source, start=1):
        for f in _COMMENTARY_FIELDS:
            if f not in row or row[f] is None:
                raise MissingFieldError(f"commentary row {n}: missing field {f!r}")
        text = normalize_text(str(row["text"]), header_patterns)
        if not text:
            raise MissingFieldError(f"commentary row {n}: empty text")
        records.append(
            CommentaryRecord(
                commentary_id=str(row["commentary_id"]),
                expert_name=str(row["expert"]),
                sect_id=str(row["sect_id"]),
                text=text,
            )
        )
    records.sort(key=lambda r: (r.sect_id, r.commentary_id))
    return records


def resolve_section(sect_ref: str, records: Sequence[SentenceRecord]) -> tuple[str, str] | None:
    """Resolve a commentary section reference to a (file_id, sect_id) pair.

    A qualified reference 'FILE.sect' binds to that book; an unqualified one
    matches any book carrying the section (first by file id).
    """
    pairs = sorted({(r.file_id, r.sect_id) for r in records})
    if ID_SEPARATOR in sect_ref:
        file, sect = sect_ref.split(ID_SEPARATOR, 1)
        return (file, sect) if (file, sect) in pairs else None
    for file, sect in pairs:
        if sect == sect_ref:
            return (file, sect)
    return None


def link_commentaries(
    commentaries: Sequence[CommentaryRecord], records: Sequence[SentenceRecord]
) -> tuple[list[CommentaryRecord], list[str]]:
    """Flag commentaries whose section reference does not resolve.

    Dangling references are a warning, not an error: the record is kept so
    downstream repair remains possible.
    """
    out, warnings = [], []
    for c in commentaries:
        if resolve_section(c.sect_id, records) is None:
            warnings.append(f"DanglingSection: commentary {c.commentary_id} -> {c.sect_id!r}")
            out.append(replace(c, dangling=True))
        else:
            out.append(c)
    return out, warnings


def read_jsonl(path: Path) -> Iterator[dict]:
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield json.loads(line)
            except json.JSONDecodeError as exc:
                raise BadFormatError(f"{path}:{n}: invalid JSON record") from exc


def read_dictionary_table(path: Path, delimiter: str = "\t") -> Iterator[dict]:
    """Import shim for column-separated dictionary exports.

    Expected columns: entry_id, char, reading, meanings, book, chapter,
    with multiple meanings joined by '|'.
    """
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            cols = line.split(delimiter)
            if len(cols) != 6:
                raise BadFormatError(f"{path}:{n}: expected 6 columns, got {len(cols)}")
            yield dict(zip(_DICT_FIELDS, cols))


MAIN_TEXT_FILE = "main_text.jsonl"
DICTIONARY_FILE = "dictionary.jsonl"
COMMENTARY_FILE = "commentary.jsonl"


@dataclass
class Corpus:
    """All three components after parsing, linking and consolidation."""

    sentences: list[SentenceRecord]
    dictionary: list[DictEntry]
    consolidated: list[DictEntry]
    commentaries: list[CommentaryRecord]
    warnings: list[str] = field(default_factory=list)
    content_hash: str = ""


def corpus_hash(root: Path) -> str:
    h = hashlib.sha256()
    for name in (MAIN_TEXT_FILE, DICTIONARY_FILE, COMMENTARY_FILE):
        p = Path(root) / name
        if p.exists():
            h.update(name.encode())
            h.update(p.read_bytes())
    return h.hexdigest()


def load_corpus(root: Path, header_patterns: Sequence[str] = ()) -> Corpus:
    root = Path(root)
    main_path = root / MAIN_TEXT_FILE
    if not main_path.exists():
        raise MissingFieldError(f"corpus root {root} lacks {MAIN_TEXT_FILE}")
    sentences = parse_main_text(read_jsonl(main_path), header_patterns)

    dict_path = root / DICTIONARY_FILE
    dictionary = list(parse_dictionary(read_jsonl(dict_path))) if dict_path.exists() else []

    comm_path = root / COMMENTARY_FILE
    commentaries = (
        parse_commentary(read_jsonl(comm_path), header_patterns) if comm_path.exists() else []
    )
    commentaries, warnings = link_commentaries(commentaries, sentences)

    return Corpus(
        sentences=sentences,
        dictionary=dictionary,
        consolidated=consolidate_dictionary(dictionary),
        commentaries=commentaries,
        warnings=warnings,
        content_hash=corpus_hash(root),
    )
