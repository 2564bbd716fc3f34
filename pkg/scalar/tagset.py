from enum import StrEnum


class ScalarTag(StrEnum):
    """Identifier-specific part-of-speech categories."""

    NOUN = 'N'
    DETERMINER = 'DT'
    CONJUNCTION = 'CJ'
    PREPOSITION = 'P'
    NOUN_PLURAL = 'NPL'
    NOUN_MODIFIER = 'NM'
    VERB = 'V'
    VERB_MODIFIER = 'VM'
    PRONOUN = 'PR'
    DIGIT = 'D'
    PREAMBLE = 'PRE'

    @classmethod
    def parse(cls, code: str) -> 'ScalarTag':
        try:
            return cls(code.strip().upper())
        except ValueError as e:
            raise ValueError(f'Unknown tag {code!r}') from e


# Fixed class order: model classes, report columns and argmax tie-breaking all use it
TAG_ORDER: tuple[str, ...] = tuple(tag.value for tag in ScalarTag)


class IdentifierContext(StrEnum):
    FUNCTION = 'function'
    CLASS = 'class'
    ATTRIBUTE = 'attribute'
    PARAMETER = 'parameter'
    DECLARATION = 'declaration'

    @classmethod
    def parse(cls, kind: str) -> 'IdentifierContext':
        try:
            return cls(kind.strip().lower())
        except ValueError as e:
            raise ValueError(f'Unknown identifier context {kind!r}') from e
