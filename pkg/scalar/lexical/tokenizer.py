import re
from dataclasses import dataclass

from scalar.errors import ContractViolationError, MalformedIdentifierError

# Any ASCII character outside [A-Za-z0-9] separates words and is dropped
_DELIMITERS = re.compile(r'[^A-Za-z0-9]+')

# Order matters: hex literal, acronym before a capitalised word, capitalised/lower word,
# trailing acronym, digit run. An uppercase hex letter followed by a lowercase letter
# starts a word, so it ends the hex literal. Together the alternatives cover every alphanumeric character.
_WORD = re.compile(
    r'0[xX](?:[0-9a-f]|[A-F](?![a-z]))+'
    r'|[A-Z]+(?=[A-Z][a-z])'
    r'|[A-Z]?[a-z]+'
    r'|[A-Z]+'
    r'|[0-9]+'
)


@dataclass(frozen=True)
class TokenSequence:
    raw: str
    words: tuple[str, ...]

    @property
    def count(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __getitem__(self, index: int) -> str:
        return self.words[index]

    def joined(self, separator: str = '_') -> str:
        return separator.join(self.words)


def split(identifier: str) -> TokenSequence:
    """Split an identifier into lowercase words.

    Boundaries fall on delimiter characters (dropped), lower-to-upper transitions,
    letter/digit transitions, and before the last capital of an acronym that is
    followed by a lowercase letter (``XMLReader`` -> ``xml``, ``reader``).
    A ``0x`` prefixed hex literal stays one token.
    """
    if not identifier:
        raise MalformedIdentifierError('Identifier is empty')
    if not identifier.isascii():
        raise MalformedIdentifierError(f'Identifier {identifier!r} contains non-ASCII characters')

    words: list[str] = []
    for chunk in _DELIMITERS.split(identifier):
        words.extend(match.group(0).lower() for match in _WORD.finditer(chunk))

    if not words:
        raise MalformedIdentifierError(f'Identifier {identifier!r} has no alphanumeric characters')

    return TokenSequence(raw=identifier, words=tuple(words))


def is_digit_token(word: str) -> bool:
    return word.isdigit() or (len(word) > 2 and word[:2] == '0x' and all(c in '0123456789abcdef' for c in word[2:]))


def position_ratio(index: int, count: int) -> float:
    """Return ``index / count`` for a 1-based word position; the last word scores 1.0."""
    if count < 1 or not 1 <= index <= count:
        raise ContractViolationError(f'Word position {index} is outside 1..{count}')
    return index / count
