import logging
from collections.abc import Sequence
from enum import StrEnum
from pathlib import Path

from scalar.errors import LexiconLoadError
from scalar.lexical.lexicon import ClosedCategory, Lexicon, packaged_path
from scalar.lexical.tokenizer import is_digit_token

logger = logging.getLogger(__name__)


class PtbTag(StrEnum):
    NN = 'NN'
    NNS = 'NNS'
    NNP = 'NNP'
    NNPS = 'NNPS'
    VB = 'VB'
    VBD = 'VBD'
    VBG = 'VBG'
    VBN = 'VBN'
    VBP = 'VBP'
    VBZ = 'VBZ'
    JJ = 'JJ'
    JJR = 'JJR'
    JJS = 'JJS'
    RB = 'RB'
    RBR = 'RBR'
    RBS = 'RBS'
    IN = 'IN'
    TO = 'TO'
    CC = 'CC'
    DT = 'DT'
    PDT = 'PDT'
    WDT = 'WDT'
    PRP = 'PRP'
    PRP_POSSESSIVE = 'PRP$'
    WP = 'WP'
    CD = 'CD'
    OTHER = 'OTHER'


_CLOSED_TAGS = {
    ClosedCategory.PREPOSITION: PtbTag.IN,
    ClosedCategory.CONJUNCTION: PtbTag.CC,
    ClosedCategory.DETERMINER: PtbTag.DT,
    ClosedCategory.PRONOUN: PtbTag.PRP,
}

# Finer tags inside the closed lists
_CLOSED_OVERRIDES = {
    'to': PtbTag.TO,
    'which': PtbTag.WDT,
    'whichever': PtbTag.WDT,
    'what': PtbTag.WDT,
    'whatever': PtbTag.WDT,
    'all': PtbTag.PDT,
    'both': PtbTag.PDT,
    'my': PtbTag.PRP_POSSESSIVE,
    'your': PtbTag.PRP_POSSESSIVE,
    'his': PtbTag.PRP_POSSESSIVE,
    'its': PtbTag.PRP_POSSESSIVE,
    'our': PtbTag.PRP_POSSESSIVE,
    'their': PtbTag.PRP_POSSESSIVE,
    'who': PtbTag.WP,
    'whom': PtbTag.WP,
}

# A finer tag only applies when the word sits in the closed list of its family
_OVERRIDE_FAMILY = {
    PtbTag.TO: PtbTag.IN,
    PtbTag.WDT: PtbTag.DT,
    PtbTag.PDT: PtbTag.DT,
    PtbTag.PRP_POSSESSIVE: PtbTag.PRP,
    PtbTag.WP: PtbTag.PRP,
}

_ADJECTIVE_SUFFIXES = ('able', 'ible', 'ful', 'ous', 'ive', 'less', 'ical')


def load_tag_lexicon(path: str | Path | None = None) -> dict[str, PtbTag]:
    """Read a ``word<TAB>tag`` most-frequent-tag file."""
    path = path or packaged_path('tag_lexicon.tsv')
    try:
        lines = Path(path).read_text(encoding='utf-8').splitlines()
    except OSError as e:
        raise LexiconLoadError(f'Cannot read tag lexicon {path}: {e}') from e

    entries: dict[str, PtbTag] = {}
    for line_no, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith('#'):
            continue
        parts = line.split('\t')
        if len(parts) != 2:
            raise LexiconLoadError(f'{path}:{line_no}: expected "word<TAB>tag"')
        word, code = parts[0].strip().lower(), parts[1].strip()
        try:
            tag = PtbTag(code)
        except ValueError as e:
            raise LexiconLoadError(f'{path}:{line_no}: unknown tag {code!r}') from e
        entries.setdefault(word, tag)
    return entries


class BaselineTagger:
    """General-English tags for identifier words, from closed lists, a tag lexicon and suffix rules.

    The identifier's words are tagged as one pseudo-sentence so the neighbour rules can
    look at the previous word's tag.
    """

    def __init__(self, lexicon: Lexicon, tag_lexicon: dict[str, PtbTag] | None = None):
        self.lexicon = lexicon
        self.tag_lexicon = dict(tag_lexicon or {})

    @classmethod
    def load(cls, lexicon: Lexicon, tag_lexicon_path: str | Path | None = None) -> 'BaselineTagger':
        entries = load_tag_lexicon(tag_lexicon_path)
        logger.info(f'Baseline tag lexicon loaded with {len(entries)} entries')
        return cls(lexicon, entries)

    def tag(self, words: Sequence[str]) -> list[PtbTag]:
        tags = [self._tag_word(word.lower()) for word in words]
        return self._apply_neighbour_rules([w.lower() for w in words], tags)

    def _tag_word(self, word: str) -> PtbTag:
        category = self.lexicon.closed_category(word)
        if category is not None:
            override = _CLOSED_OVERRIDES.get(word)
            if override is not None and _OVERRIDE_FAMILY[override] == _CLOSED_TAGS[category]:
                return override
            return _CLOSED_TAGS[category]

        if is_digit_token(word):
            return PtbTag.CD

        if word in self.tag_lexicon:
            return self.tag_lexicon[word]

        return self._suffix_tag(word) or PtbTag.NN

    def _suffix_tag(self, word: str) -> PtbTag | None:
        if len(word) > 4 and word.endswith('ing'):
            return PtbTag.VBG
        if len(word) > 3 and word.endswith('ed'):
            return PtbTag.VBD
        if len(word) > 3 and word.endswith('ly'):
            return PtbTag.RB
        if len(word) > 5 and word.endswith(_ADJECTIVE_SUFFIXES):
            return PtbTag.JJ
        if self._is_plural_noun(word):
            return PtbTag.NNS
        return None

    def _is_plural_noun(self, word: str) -> bool:
        if len(word) < 3 or not word.endswith('s') or word.endswith(('ss', 'us', 'is')):
            return False
        stems = [word[:-1]]
        if word.endswith('es'):
            stems.append(word[:-2])
        if word.endswith('ies'):
            stems.append(word[:-3] + 'y')
        for stem in stems:
            if self.tag_lexicon.get(stem) in (PtbTag.NN, None) and self.lexicon.is_dictionary_word(stem):
                return True
        return False

    def _apply_neighbour_rules(self, words: list[str], tags: list[PtbTag]) -> list[PtbTag]:
        for i in range(1, len(tags)):
            previous = tags[i - 1]
            # "the end", "my set": a base verb after a determiner reads as a noun
            if previous in (PtbTag.DT, PtbTag.PDT, PtbTag.PRP_POSSESSIVE) and tags[i] in (PtbTag.VB, PtbTag.VBP):
                tags[i] = PtbTag.NN
            # "to save": a present-tense form after "to" is the base form
            elif previous == PtbTag.TO and tags[i] == PtbTag.VBP:
                tags[i] = PtbTag.VB
        # "runsTask": a leading -s word whose stem is a verb, followed by more words
        if len(words) > 1 and tags[0] == PtbTag.NNS and self.tag_lexicon.get(words[0][:-1]) == PtbTag.VB:
            tags[0] = PtbTag.VBZ
        return tags
