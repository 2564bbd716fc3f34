from collections.abc import Mapping, Sequence
from dataclasses import astuple, dataclass

import numpy as np

from scalar.errors import ContractViolationError
from scalar.lexical.baseline_tagger import PtbTag
from scalar.lexical.embeddings import Concept, ConceptVector, VectorStore, concept_similarity
from scalar.lexical.lexicon import ClosedCategory, Lexicon
from scalar.lexical.tokenizer import TokenSequence, is_digit_token, position_ratio
from scalar.tagset import IdentifierContext

PTB_ORDER: tuple[PtbTag, ...] = tuple(PtbTag)
CONTEXT_ORDER: tuple[IdentifierContext, ...] = tuple(IdentifierContext)

SCALAR_FEATURE_NAMES: tuple[str, ...] = (
    'position_ratio',
    'is_first_word',
    'is_last_word',
    'identifier_word_count',
    'word_length',
    'sim_preposition',
    'sim_noun',
    'sim_verb',
    'in_preposition_list',
    'in_conjunction_list',
    'in_determiner_list',
    'in_pronoun_list',
    'is_digit_token',
    'contains_digit',
    'is_dictionary_word',
)

FEATURE_NAMES: tuple[str, ...] = (
    *(f'baseline_{tag.value}' for tag in PTB_ORDER),
    *SCALAR_FEATURE_NAMES,
    *(f'context_{context.value}' for context in CONTEXT_ORDER),
)

FEATURE_COUNT = len(FEATURE_NAMES)


def _one_hot(value, order: Sequence) -> tuple[int, ...]:
    return tuple(int(value == item) for item in order)


@dataclass(frozen=True)
class FeatureVector:
    baseline_tag_onehot: tuple[int, ...]
    position_ratio: float
    is_first_word: int
    is_last_word: int
    identifier_word_count: int
    word_length: int
    sim_preposition: float
    sim_noun: float
    sim_verb: float
    in_preposition_list: int
    in_conjunction_list: int
    in_determiner_list: int
    in_pronoun_list: int
    is_digit_token: int
    contains_digit: int
    is_dictionary_word: int
    context_onehot: tuple[int, ...]

    def as_array(self) -> np.ndarray:
        flat: list[float] = []
        for value in astuple(self):
            if isinstance(value, tuple):
                flat.extend(float(v) for v in value)
            else:
                flat.append(float(value))
        return np.array(flat, dtype=np.float64)

    def __len__(self) -> int:
        return FEATURE_COUNT


def extract(
    words: TokenSequence,
    index: int,
    context: IdentifierContext,
    lexicon: Lexicon,
    vector_store: VectorStore,
    concepts: Mapping[Concept, ConceptVector],
    baseline_tags: Sequence[PtbTag],
) -> FeatureVector:
    """Feature vector of the ``index``-th word (1-based) of an identifier."""
    if len(baseline_tags) != words.count:
        raise ContractViolationError(f'Got {len(baseline_tags)} baseline tags for {words.count} words')

    ratio = position_ratio(index, words.count)
    word = words[index - 1]

    return FeatureVector(
        baseline_tag_onehot=_one_hot(PtbTag(baseline_tags[index - 1]), PTB_ORDER),
        position_ratio=ratio,
        is_first_word=int(index == 1),
        is_last_word=int(index == words.count),
        identifier_word_count=words.count,
        word_length=len(word),
        sim_preposition=concept_similarity(vector_store, word, concepts[Concept.PREPOSITION]),
        sim_noun=concept_similarity(vector_store, word, concepts[Concept.NOUN]),
        sim_verb=concept_similarity(vector_store, word, concepts[Concept.VERB]),
        in_preposition_list=int(word in lexicon.words_in(ClosedCategory.PREPOSITION)),
        in_conjunction_list=int(word in lexicon.words_in(ClosedCategory.CONJUNCTION)),
        in_determiner_list=int(word in lexicon.words_in(ClosedCategory.DETERMINER)),
        in_pronoun_list=int(word in lexicon.words_in(ClosedCategory.PRONOUN)),
        is_digit_token=int(is_digit_token(word)),
        contains_digit=int(any(c.isdigit() for c in word)),
        is_dictionary_word=int(lexicon.is_dictionary_word(word)),
        context_onehot=_one_hot(IdentifierContext(context), CONTEXT_ORDER),
    )
