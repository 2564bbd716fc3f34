import logging
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import StrEnum
from importlib import resources
from pathlib import Path

from scalar.errors import LexiconLoadError

logger = logging.getLogger(__name__)


class ClosedCategory(StrEnum):
    # Declaration order is lookup precedence for words listed in several categories
    PREPOSITION = 'preposition'
    CONJUNCTION = 'conjunction'
    DETERMINER = 'determiner'
    PRONOUN = 'pronoun'


def packaged_path(name: str) -> Path:
    """Path of a data file shipped inside ``scalar.data``."""
    return Path(str(resources.files('scalar.data').joinpath(name)))


def read_word_list(path: str | Path) -> list[str]:
    """Read a newline-delimited UTF-8 word list; ``#`` lines are comments."""
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise LexiconLoadError(f'Cannot read word list {path}: {e}') from e

    words = []
    for line in text.splitlines():
        entry = line.strip().lower()
        if entry and not entry.startswith('#'):
            words.append(entry)
    return words


def _normalize(words: Iterable[str]) -> frozenset[str]:
    return frozenset(w.strip().lower() for w in words if w.strip())


@dataclass(frozen=True)
class Lexicon:
    dictionary: frozenset[str] = frozenset()
    user_words: frozenset[str] = frozenset()
    user_abbreviations: frozenset[str] = frozenset()
    closed_lists: dict[ClosedCategory, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        # Callers may hand in plain sets with mixed case; store the normalized form
        object.__setattr__(self, 'dictionary', _normalize(self.dictionary))
        object.__setattr__(self, 'user_words', _normalize(self.user_words))
        object.__setattr__(self, 'user_abbreviations', _normalize(self.user_abbreviations))
        closed = {category: _normalize(self.closed_lists.get(category, ())) for category in ClosedCategory}
        object.__setattr__(self, 'closed_lists', closed)

    @classmethod
    def build(
        cls,
        dictionary: Iterable[str] = (),
        user_words: Iterable[str] = (),
        user_abbreviations: Iterable[str] = (),
        prepositions: Iterable[str] = (),
        conjunctions: Iterable[str] = (),
        determiners: Iterable[str] = (),
        pronouns: Iterable[str] = (),
    ) -> 'Lexicon':
        return cls(
            dictionary=frozenset(dictionary),
            user_words=frozenset(user_words),
            user_abbreviations=frozenset(user_abbreviations),
            closed_lists={
                ClosedCategory.PREPOSITION: frozenset(prepositions),
                ClosedCategory.CONJUNCTION: frozenset(conjunctions),
                ClosedCategory.DETERMINER: frozenset(determiners),
                ClosedCategory.PRONOUN: frozenset(pronouns),
            },
        )

    @classmethod
    def load(
        cls,
        dictionary: str | Path | None = None,
        user_words: str | Path | None = None,
        user_abbreviations: str | Path | None = None,
    ) -> 'Lexicon':
        """Load word lists from files, falling back to the packaged lists."""
        lexicon = cls.build(
            dictionary=read_word_list(dictionary or packaged_path('dictionary.txt')),
            user_words=read_word_list(user_words or packaged_path('user_words.txt')),
            user_abbreviations=read_word_list(user_abbreviations or packaged_path('user_abbreviations.txt')),
            prepositions=read_word_list(packaged_path('prepositions.txt')),
            conjunctions=read_word_list(packaged_path('conjunctions.txt')),
            determiners=read_word_list(packaged_path('determiners.txt')),
            pronouns=read_word_list(packaged_path('pronouns.txt')),
        )
        logger.info(
            f'Lexicon loaded: {len(lexicon.dictionary)} dictionary words, '
            f'{len(lexicon.user_words)} user words, {len(lexicon.user_abbreviations)} abbreviations'
        )
        return lexicon

    def is_dictionary_word(self, word: str) -> bool:
        word = word.lower()
        return word in self.dictionary or word in self.user_words or word in self.user_abbreviations

    def closed_category(self, word: str) -> ClosedCategory | None:
        word = word.lower()
        for category in ClosedCategory:
            if word in self.closed_lists[category]:
                return category
        return None

    def words_in(self, category: ClosedCategory) -> frozenset[str]:
        return self.closed_lists[category]
