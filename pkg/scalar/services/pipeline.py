import logging
from dataclasses import dataclass

import numpy as np

from scalar.lexical.baseline_tagger import PtbTag
from scalar.lexical.tokenizer import TokenSequence, split
from scalar.model.features import FeatureVector, extract
from scalar.model.gbt import BoostedEnsemble, predict_proba
from scalar.services.resources import TaggerResources
from scalar.tagset import IdentifierContext, ScalarTag

logger = logging.getLogger(__name__)

_PTB_TO_SCALAR: dict[PtbTag, ScalarTag] = {
    PtbTag.VB: ScalarTag.VERB,
    PtbTag.VBD: ScalarTag.VERB,
    PtbTag.VBG: ScalarTag.VERB,
    PtbTag.VBN: ScalarTag.VERB,
    PtbTag.VBP: ScalarTag.VERB,
    PtbTag.VBZ: ScalarTag.VERB,
    PtbTag.NN: ScalarTag.NOUN,
    PtbTag.NNP: ScalarTag.NOUN,
    PtbTag.NNS: ScalarTag.NOUN_PLURAL,
    PtbTag.NNPS: ScalarTag.NOUN_PLURAL,
    PtbTag.JJ: ScalarTag.NOUN_MODIFIER,
    PtbTag.JJR: ScalarTag.NOUN_MODIFIER,
    PtbTag.JJS: ScalarTag.NOUN_MODIFIER,
    PtbTag.RB: ScalarTag.VERB_MODIFIER,
    PtbTag.RBR: ScalarTag.VERB_MODIFIER,
    PtbTag.RBS: ScalarTag.VERB_MODIFIER,
    PtbTag.IN: ScalarTag.PREPOSITION,
    PtbTag.TO: ScalarTag.PREPOSITION,
    PtbTag.CC: ScalarTag.CONJUNCTION,
    PtbTag.DT: ScalarTag.DETERMINER,
    PtbTag.PDT: ScalarTag.DETERMINER,
    PtbTag.WDT: ScalarTag.DETERMINER,
    PtbTag.PRP: ScalarTag.PRONOUN,
    PtbTag.PRP_POSSESSIVE: ScalarTag.PRONOUN,
    PtbTag.WP: ScalarTag.PRONOUN,
    PtbTag.CD: ScalarTag.DIGIT,
    # Unknown general-English tags fall back to the head-noun reading
    PtbTag.OTHER: ScalarTag.NOUN,
}


@dataclass(frozen=True)
class AnnotatedWord:
    word: str
    tag: ScalarTag
    is_dictionary_word: bool

    def to_dict(self) -> dict:
        return {'word': self.word, 'tag': self.tag.value, 'is_dictionary_word': self.is_dictionary_word}

    @classmethod
    def from_dict(cls, data: dict) -> 'AnnotatedWord':
        return cls(word=data['word'], tag=ScalarTag(data['tag']), is_dictionary_word=bool(data['is_dictionary_word']))


@dataclass(frozen=True)
class GrammarPattern:
    tags: tuple[ScalarTag, ...]

    def __str__(self) -> str:
        return ' '.join(tag.value for tag in self.tags)

    def __len__(self) -> int:
        return len(self.tags)


def map_ptb_to_scalar(tag: PtbTag) -> ScalarTag:
    return _PTB_TO_SCALAR[PtbTag(tag)]


def grammar_pattern(annotation: list[AnnotatedWord]) -> GrammarPattern:
    return GrammarPattern(tags=tuple(word.tag for word in annotation))


def identifier_features(
    words: TokenSequence, context: IdentifierContext, resources: TaggerResources
) -> list[FeatureVector]:
    """Feature vectors for every word of an already split identifier."""
    baseline_tags = resources.baseline.tag(words.words)
    return [
        extract(
            words,
            index,
            context,
            resources.lexicon,
            resources.vector_store,
            resources.concepts,
            baseline_tags,
        )
        for index in range(1, words.count + 1)
    ]


def tag_identifier(
    identifier: str,
    context: IdentifierContext,
    model: BoostedEnsemble,
    resources: TaggerResources,
) -> list[AnnotatedWord]:
    """Split an identifier and tag each word with the trained model."""
    words = split(identifier)
    vectors = identifier_features(words, IdentifierContext(context), resources)
    probabilities = predict_proba(model, np.stack([v.as_array() for v in vectors]))
    tags = [ScalarTag(model.classes[int(i)]) for i in np.argmax(probabilities, axis=1)]

    annotation = [
        AnnotatedWord(word=word, tag=tag, is_dictionary_word=resources.lexicon.is_dictionary_word(word))
        for word, tag in zip(words, tags)
    ]
    logger.debug(f'{identifier} ({context}) -> {grammar_pattern(annotation)}')
    return annotation


def classify_preamble_candidate(word: str, identifier: TokenSequence, context: IdentifierContext, resources: TaggerResources) -> bool:
    """Advisory flag for words that look like a preamble; the model makes the actual PRE call.

    A candidate is the leading word of a multi-word identifier that is a configured
    namespace prefix (any context) or, for variables, a Hungarian-notation marker or
    a configured single-letter type initial.
    """
    word = word.lower()
    if identifier.count < 2 or identifier.words[0] != word:
        return False

    rules = resources.preamble
    if word in rules.namespace_prefixes:
        return True
    if IdentifierContext(context) in (IdentifierContext.FUNCTION, IdentifierContext.CLASS):
        return False
    if word in rules.hungarian_prefixes:
        return True
    return len(word) == 1 and word in rules.type_initials
