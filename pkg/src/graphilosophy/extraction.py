"""Speaker attribution, concept spotting and per-character sense resolution.

Concept matching is deliberately character-level: Classical Chinese is
predominantly monosyllabic and the concept taxonomy maps one ideograph to
one concept. Every occurrence is extracted; disambiguation of homographs
is left to sense resolution and human review downstream.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

if TYPE_CHECKING:
    from .embedding import EmbeddingProvider

CONCEPT_CATEGORIES = ("Virtue", "Cultivation", "Foundation", "Harmony", "Relation", "Learning", "Social")


class ExtractionError(Exception):
    pass


class NoCandidatesError(ExtractionError):
    pass


@dataclass(frozen=True)
class SpeakerPattern:
    marker: str
    speaker_name: str

    @property
    def priority(self) -> int:
        return len(self.marker)


@dataclass(frozen=True)
class ConceptDef:
    char: str
    english: str
    vietnamese: str
    category: str

    def __post_init__(self):
        if self.category not in CONCEPT_CATEGORIES:
            raise ValueError(f"unknown concept category {self.category!r}")


@dataclass(frozen=True)
class ConceptHit:
    concept: ConceptDef
    sentence_id: str
    position: int
    count: int


@dataclass(frozen=True)
class SenseChoice:
    meaning: str
    score: float
    # every candidate with its score, in candidate order; kept so downstream
    # layers can surface the alternatives instead of one frozen reading
    audit: tuple[tuple[str, float], ...]


def _data_file(name: str) -> str:
    return resources.files("graphilosophy.data").joinpath(name).read_text(encoding="utf-8")


def load_speaker_table(path: Path | None = None) -> list[SpeakerPattern]:
    raw = Path(path).read_text(encoding="utf-8") if path else _data_file("speakers.json")
    rows = json.loads(raw)
    patterns = [SpeakerPattern(marker=r["marker"], speaker_name=r["name"]) for r in rows]
    markers = [p.marker for p in patterns]
    if len(set(markers)) != len(markers):
        raise ExtractionError("duplicate speaker markers in table")
    return patterns


def load_taxonomy(path: Path | None = None) -> list[ConceptDef]:
    raw = Path(path).read_text(encoding="utf-8") if path else _data_file("concepts.json")
    return [ConceptDef(**row) for row in json.loads(raw)]


def detect_speakers(
    han_text: str, patterns: Sequence[SpeakerPattern] | None = None
) -> list[tuple[str, int]]:
    """Left-to-right scan; at each offset the longest marker wins and the
    scan resumes after it, so nested markers never double-report."""
    if patterns is None:
        patterns = load_speaker_table()
    ordered = sorted(patterns, key=lambda p: -p.priority)
    hits = []
    i, n = 0, len(han_text)
    while i < n:
        for p in ordered:
            if han_text.startswith(p.marker, i):
                hits.append((p.speaker_name, i))
                i += len(p.marker)
                break
        else:
            i += 1
    return hits


def extract_concepts(
    han_text: str, taxonomy: Sequence[ConceptDef] | None = None, sentence_id: str = ""
) -> list[ConceptHit]:
    """One hit per concept present; count is the exact character count."""
    if taxonomy is None:
        taxonomy = load_taxonomy()
    hits = []
    for concept in taxonomy:
        count = han_text.count(concept.char)
        if count:
            hits.append(
                ConceptHit(
                    concept=concept,
                    sentence_id=sentence_id,
                    position=han_text.find(concept.char),
                    count=count,
                )
            )
    return hits


def cooccurrence(hits_by_sentence: Mapping[str, Iterable[str]]) -> dict[tuple[str, str], int]:
    """Sentence-count per unordered concept pair; keys sorted, no self-pairs."""
    counts: dict[tuple[str, str], int] = {}
    for _, concepts in sorted(hits_by_sentence.items()):
        for a, b in combinations(sorted(set(concepts)), 2):
            counts[(a, b)] = counts.get((a, b), 0) + 1
    return counts


def resolve_sense(
    char: str,
    candidates: Sequence[str],
    context: str,
    embedder: "EmbeddingProvider",
) -> SenseChoice:
    """Pick the candidate meaning closest to the context by cosine.

    Ties break toward the lowest candidate index. All scores are retained;
    the choice is a ranking aid, not a definitive reading.
    """
    from .embedding import Mode, cosine

    if not candidates:
        raise NoCandidatesError(f"no candidate meanings for {char!r}")
    ctx = embedder.embed(context, Mode.QUERY)
    scored = [(c, cosine(embedder.embed(c, Mode.PASSAGE), ctx)) for c in candidates]
    best_i = 0
    for i in range(1, len(scored)):
        if scored[i][1] > scored[best_i][1]:
            best_i = i
    return SenseChoice(
        meaning=scored[best_i][0],
        score=scored[best_i][1],
        audit=tuple(scored),
    )
