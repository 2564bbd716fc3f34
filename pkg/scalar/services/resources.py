import logging
from dataclasses import dataclass

from scalar.config.config import ResourceConfig
from scalar.lexical.baseline_tagger import BaselineTagger
from scalar.lexical.embeddings import Concept, ConceptVector, VectorStore, build_concept_vector, load_vectors
from scalar.lexical.lexicon import ClosedCategory, Lexicon, packaged_path, read_word_list

logger = logging.getLogger(__name__)

DEFAULT_HUNGARIAN_PREFIXES = frozenset({'m', 'p', 'lp', 'sz', 'dw', 'h'})


@dataclass(frozen=True)
class PreambleRules:
    namespace_prefixes: frozenset[str] = frozenset()
    hungarian_prefixes: frozenset[str] = DEFAULT_HUNGARIAN_PREFIXES
    type_initials: frozenset[str] = frozenset()


@dataclass(frozen=True)
class TaggerResources:
    lexicon: Lexicon
    vector_store: VectorStore
    concepts: dict[Concept, ConceptVector]
    baseline: BaselineTagger
    preamble: PreambleRules


def build_concepts(store: VectorStore, lexicon: Lexicon, nouns: list[str], verbs: list[str]) -> dict[Concept, ConceptVector]:
    return {
        Concept.PREPOSITION: build_concept_vector(store, lexicon.words_in(ClosedCategory.PREPOSITION), Concept.PREPOSITION),
        Concept.NOUN: build_concept_vector(store, nouns, Concept.NOUN),
        Concept.VERB: build_concept_vector(store, verbs, Concept.VERB),
    }


def load_resources(resource_config: ResourceConfig | None = None) -> TaggerResources:
    """Load every word list, the vectors and the baseline tagger named by the configuration."""
    rc = resource_config or ResourceConfig()

    lexicon = Lexicon.load(rc.dictionary, rc.user_words, rc.abbreviations)
    store = load_vectors(rc.embeddings or packaged_path('vectors.txt'))
    concepts = build_concepts(
        store,
        lexicon,
        nouns=read_word_list(packaged_path('concept_nouns.txt')),
        verbs=read_word_list(packaged_path('concept_verbs.txt')),
    )
    preamble = PreambleRules(
        namespace_prefixes=frozenset(read_word_list(rc.namespace_prefixes or packaged_path('namespace_prefixes.txt'))),
        type_initials=frozenset(read_word_list(rc.type_initials or packaged_path('type_initials.txt'))),
    )
    baseline = BaselineTagger.load(lexicon, rc.tag_lexicon)

    logger.info(f'Tagger resources ready ({len(store)} vectors, {len(preamble.namespace_prefixes)} namespace prefixes)')
    return TaggerResources(lexicon=lexicon, vector_store=store, concepts=concepts, baseline=baseline, preamble=preamble)
