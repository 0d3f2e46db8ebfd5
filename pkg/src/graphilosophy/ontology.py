"""The six-layer graph schema: entity classes, relations, endpoint rules.

The schema is a process-wide immutable constant. Every edge added to or
loaded into a graph is checked against `validate_edge`.
"""

from __future__ import annotations

from enum import Enum


class Layer(Enum):
    META = "Meta"
    TEXTUAL = "Textual"
    LINGUISTIC = "Linguistic"
    CONCEPTUAL = "Conceptual"
    COMMENTARY_SPEAKER = "CommentarySpeaker"
    SEMANTIC = "Semantic"


class EntityClass(Enum):
    DOMAIN = "DOMAIN"
    SCHOOL = "SCHOOL"
    BOOK = "BOOK"
    CHAPTER = "CHAPTER"
    SECTION = "SECTION"
    PAGE = "PAGE"
    SENTENCE = "SENTENCE"
    HAN_SENTENCE = "HAN_SENTENCE"
    HANVIET_SENTENCE = "HANVIET_SENTENCE"
    VIETNAMESE_SENTENCE = "VIETNAMESE_SENTENCE"
    HAN_WORD = "HAN_WORD"
    HANVIET_PRONUNCIATION = "HANVIET_PRONUNCIATION"
    VIETNAMESE_MEANING = "VIETNAMESE_MEANING"
    PHILOSOPHICAL_CONCEPT = "PHILOSOPHICAL_CONCEPT"
    EXPERT = "EXPERT"
    COMMENTARY = "COMMENTARY"
    COMMENTARY_CHUNK = "COMMENTARY_CHUNK"
    SPEAKER = "SPEAKER"
    EMBEDDING = "EMBEDDING"
    SEMANTIC_CLUSTER = "SEMANTIC_CLUSTER"

    @property
    def layer(self) -> Layer:
        return CLASS_LAYER[self]


class RelationType(Enum):
    CONTAINS = "CONTAINS"
    FOLLOWS = "FOLLOWS"
    APPEARS_IN = "APPEARS_IN"
    HAS_HAN_FORM = "HAS_HAN_FORM"
    HAS_HANVIET_FORM = "HAS_HANVIET_FORM"
    HAS_VIETNAMESE_TRANSLATION = "HAS_VIETNAMESE_TRANSLATION"
    TRANSLATES_TO = "TRANSLATES_TO"
    PRONOUNCED_AS = "PRONOUNCED_AS"
    EXPRESSES_CONCEPT = "EXPRESSES_CONCEPT"
    RELATED_TO = "RELATED_TO"
    CO_OCCURS_WITH = "CO_OCCURS_WITH"
    PROVIDES_COMMENTARY = "PROVIDES_COMMENTARY"
    EXPLAINS = "EXPLAINS"
    CONTEXTUALIZES = "CONTEXTUALIZES"
    QUOTES = "QUOTES"
    SIMILAR_TO = "SIMILAR_TO"
    BELONGS_TO_CLUSTER = "BELONGS_TO_CLUSTER"
    HAS_SEMANTIC_REP = "HAS_SEMANTIC_REP"

    @property
    def layer(self) -> Layer:
        return RELATION_LAYER[self]

    @property
    def method(self) -> "GenerationMethod":
        return RELATION_METHOD[self]


class GenerationMethod(Enum):
    AUTO = "Auto"
    SEMI = "Semi"
    MANUAL = "Manual"


C = EntityClass
R = RelationType

CLASS_LAYER: dict[EntityClass, Layer] = {
    C.DOMAIN: Layer.META,
    C.SCHOOL: Layer.META,
    C.BOOK: Layer.TEXTUAL,
    C.CHAPTER: Layer.TEXTUAL,
    C.SECTION: Layer.TEXTUAL,
    C.PAGE: Layer.TEXTUAL,
    C.SENTENCE: Layer.TEXTUAL,
    C.HAN_SENTENCE: Layer.LINGUISTIC,
    C.HANVIET_SENTENCE: Layer.LINGUISTIC,
    C.VIETNAMESE_SENTENCE: Layer.LINGUISTIC,
    C.HAN_WORD: Layer.LINGUISTIC,
    C.HANVIET_PRONUNCIATION: Layer.LINGUISTIC,
    C.VIETNAMESE_MEANING: Layer.LINGUISTIC,
    C.PHILOSOPHICAL_CONCEPT: Layer.CONCEPTUAL,
    C.EXPERT: Layer.COMMENTARY_SPEAKER,
    C.COMMENTARY: Layer.COMMENTARY_SPEAKER,
    C.COMMENTARY_CHUNK: Layer.COMMENTARY_SPEAKER,
    C.SPEAKER: Layer.COMMENTARY_SPEAKER,
    C.EMBEDDING: Layer.SEMANTIC,
    C.SEMANTIC_CLUSTER: Layer.SEMANTIC,
}

RELATION_LAYER: dict[RelationType, Layer] = {
    R.CONTAINS: Layer.TEXTUAL,
    R.FOLLOWS: Layer.TEXTUAL,
    R.APPEARS_IN: Layer.TEXTUAL,
    R.HAS_HAN_FORM: Layer.LINGUISTIC,
    R.HAS_HANVIET_FORM: Layer.LINGUISTIC,
    R.HAS_VIETNAMESE_TRANSLATION: Layer.LINGUISTIC,
    R.TRANSLATES_TO: Layer.LINGUISTIC,
    R.PRONOUNCED_AS: Layer.LINGUISTIC,
    R.EXPRESSES_CONCEPT: Layer.CONCEPTUAL,
    R.RELATED_TO: Layer.CONCEPTUAL,
    R.CO_OCCURS_WITH: Layer.CONCEPTUAL,
    R.PROVIDES_COMMENTARY: Layer.COMMENTARY_SPEAKER,
    R.EXPLAINS: Layer.COMMENTARY_SPEAKER,
    R.CONTEXTUALIZES: Layer.COMMENTARY_SPEAKER,
    R.QUOTES: Layer.COMMENTARY_SPEAKER,
    R.SIMILAR_TO: Layer.SEMANTIC,
    R.BELONGS_TO_CLUSTER: Layer.SEMANTIC,
    R.HAS_SEMANTIC_REP: Layer.SEMANTIC,
}

# How each relation is produced: fully rule-based (Auto), algorithm plus
# sampled human verification (Semi), or expert-defined (Manual).
RELATION_METHOD: dict[RelationType, GenerationMethod] = {
    R.CONTAINS: GenerationMethod.AUTO,
    R.FOLLOWS: GenerationMethod.AUTO,
    R.APPEARS_IN: GenerationMethod.AUTO,
    R.HAS_HAN_FORM: GenerationMethod.AUTO,
    R.HAS_HANVIET_FORM: GenerationMethod.AUTO,
    R.HAS_VIETNAMESE_TRANSLATION: GenerationMethod.AUTO,
    R.TRANSLATES_TO: GenerationMethod.AUTO,
    R.PRONOUNCED_AS: GenerationMethod.AUTO,
    R.EXPRESSES_CONCEPT: GenerationMethod.SEMI,
    R.RELATED_TO: GenerationMethod.SEMI,
    R.CO_OCCURS_WITH: GenerationMethod.SEMI,
    R.PROVIDES_COMMENTARY: GenerationMethod.MANUAL,
    R.EXPLAINS: GenerationMethod.MANUAL,
    R.CONTEXTUALIZES: GenerationMethod.SEMI,
    R.QUOTES: GenerationMethod.SEMI,
    R.SIMILAR_TO: GenerationMethod.AUTO,
    R.BELONGS_TO_CLUSTER: GenerationMethod.AUTO,
    R.HAS_SEMANTIC_REP: GenerationMethod.AUTO,
}

ENDPOINT_RULES: dict[RelationType, frozenset[tuple[EntityClass, EntityClass]]] = {
    R.CONTAINS: frozenset(
        {
            (C.DOMAIN, C.SCHOOL),
            (C.SCHOOL, C.BOOK),
            (C.BOOK, C.CHAPTER),
            (C.CHAPTER, C.SECTION),
            (C.SECTION, C.PAGE),
            (C.PAGE, C.SENTENCE),
            (C.COMMENTARY, C.COMMENTARY_CHUNK),
        }
    ),
    R.FOLLOWS: frozenset({(C.SENTENCE, C.SENTENCE), (C.COMMENTARY_CHUNK, C.COMMENTARY_CHUNK)}),
    R.APPEARS_IN: frozenset({(C.HAN_WORD, C.HAN_SENTENCE)}),
    R.HAS_HAN_FORM: frozenset({(C.SENTENCE, C.HAN_SENTENCE)}),
    R.HAS_HANVIET_FORM: frozenset({(C.SENTENCE, C.HANVIET_SENTENCE)}),
    R.HAS_VIETNAMESE_TRANSLATION: frozenset({(C.SENTENCE, C.VIETNAMESE_SENTENCE)}),
    R.TRANSLATES_TO: frozenset({(C.HAN_WORD, C.VIETNAMESE_MEANING)}),
    R.PRONOUNCED_AS: frozenset({(C.HAN_WORD, C.HANVIET_PRONUNCIATION)}),
    R.EXPRESSES_CONCEPT: frozenset(
        {
            (C.SENTENCE, C.PHILOSOPHICAL_CONCEPT),
            (C.HAN_SENTENCE, C.PHILOSOPHICAL_CONCEPT),
        }
    ),
    R.RELATED_TO: frozenset({(C.PHILOSOPHICAL_CONCEPT, C.PHILOSOPHICAL_CONCEPT)}),
    R.CO_OCCURS_WITH: frozenset({(C.PHILOSOPHICAL_CONCEPT, C.PHILOSOPHICAL_CONCEPT)}),
    R.PROVIDES_COMMENTARY: frozenset({(C.EXPERT, C.COMMENTARY)}),
    R.EXPLAINS: frozenset({(C.COMMENTARY, C.SECTION), (C.COMMENTARY_CHUNK, C.SECTION)}),
    R.CONTEXTUALIZES: frozenset({(C.COMMENTARY_CHUNK, C.SENTENCE)}),
    R.QUOTES: frozenset({(C.SPEAKER, C.HAN_SENTENCE)}),
    R.SIMILAR_TO: frozenset({(C.EMBEDDING, C.EMBEDDING)}),
    R.BELONGS_TO_CLUSTER: frozenset({(C.EMBEDDING, C.SEMANTIC_CLUSTER)}),
    R.HAS_SEMANTIC_REP: frozenset(
        {
            (C.SENTENCE, C.EMBEDDING),
            (C.COMMENTARY_CHUNK, C.EMBEDDING),
            (C.VIETNAMESE_SENTENCE, C.EMBEDDING),
        }
    ),
}

# Legacy names accepted at import and rewritten as child-of CONTAINS edges
# (the endpoints flip: X BELONGS_TO_SCHOOL Y becomes Y CONTAINS X).
RELATION_ALIASES: dict[str, RelationType] = {
    "BELONGS_TO_SCHOOL": R.CONTAINS,
    "PART_OF_DOMAIN": R.CONTAINS,
    "HAS_SEMANTIC_REPRESENTATION": R.HAS_SEMANTIC_REP,
}
_FLIPPED_ALIASES = {"BELONGS_TO_SCHOOL", "PART_OF_DOMAIN"}


def normalize_relation_name(name: str) -> tuple[RelationType, bool]:
    """Map a relation name (or alias) to its type and whether endpoints flip."""
    if name in RELATION_ALIASES:
        return RELATION_ALIASES[name], name in _FLIPPED_ALIASES
    try:
        return RelationType(name), False
    except ValueError as exc:
        raise KeyError(f"unknown relation type {name!r}") from exc


def validate_edge(relation: RelationType, src_class: EntityClass, dst_class: EntityClass) -> bool:
    return (src_class, dst_class) in ENDPOINT_RULES[relation]


def is_cross_layer(
    relation: RelationType, src_class: EntityClass, dst_class: EntityClass
) -> bool:
    return CLASS_LAYER[src_class] is not CLASS_LAYER[dst_class]


def generation_method(relation: RelationType) -> GenerationMethod:
    return RELATION_METHOD[relation]


def export_schema() -> dict:
    """Machine-readable schema description (the ontology.json payload)."""
    return {
        "layers": [layer.value for layer in Layer],
        "classes": [
            {"name": c.value, "layer": CLASS_LAYER[c].value} for c in EntityClass
        ],
        "relations": [
            {
                "name": r.value,
                "layer": RELATION_LAYER[r].value,
                "method": RELATION_METHOD[r].value,
                "endpoints": sorted(
                    [src.value, dst.value] for src, dst in ENDPOINT_RULES[r]
                ),
            }
            for r in RelationType
        ],
        "aliases": {k: v.value for k, v in RELATION_ALIASES.items()},
    }


def _check_schema() -> None:
    assert len(Layer) == 6, "layer count drifted"
    assert len(EntityClass) == 20, "entity class count drifted"
    assert len(RelationType) == 18, "relation count drifted"
    assert set(CLASS_LAYER) == set(EntityClass)
    assert set(RELATION_LAYER) == set(RelationType)
    assert set(RELATION_METHOD) == set(RelationType)
    assert all(ENDPOINT_RULES[r] for r in RelationType), "relation without endpoint rule"


_check_schema()
