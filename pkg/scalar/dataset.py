import logging
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from scalar.errors import DatasetError, MalformedIdentifierError
from scalar.lexical.lexicon import packaged_path
from scalar.lexical.tokenizer import split
from scalar.model.gbt import LabeledExample
from scalar.services.pipeline import identifier_features
from scalar.services.resources import TaggerResources
from scalar.tagset import IdentifierContext, ScalarTag

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DatasetRow:
    identifier: str
    context: IdentifierContext
    pattern: tuple[ScalarTag, ...]

    def to_line(self) -> str:
        return '\t'.join([self.identifier, self.context.value, ' '.join(t.value for t in self.pattern)])


@dataclass
class DatasetReadResult:
    rows: list[DatasetRow] = field(default_factory=list)
    # (line number, diagnostic)
    rejected: list[tuple[int, str]] = field(default_factory=list)


def seed_dataset_path() -> Path:
    return packaged_path('seed_dataset.tsv')


def parse_row(line: str) -> DatasetRow:
    parts = line.rstrip('\r\n').split('\t')
    if len(parts) != 3:
        raise DatasetError(f'expected 3 tab-separated fields, found {len(parts)}')
    identifier, context_text, pattern_text = parts

    try:
        words = split(identifier)
    except MalformedIdentifierError as e:
        raise DatasetError(str(e)) from e
    try:
        context = IdentifierContext.parse(context_text)
        pattern = tuple(ScalarTag.parse(code) for code in pattern_text.split())
    except ValueError as e:
        raise DatasetError(str(e)) from e

    if len(pattern) != words.count:
        raise DatasetError(
            f'{identifier!r} splits into {words.count} words {list(words.words)} but the pattern has {len(pattern)} tags'
        )
    return DatasetRow(identifier=identifier, context=context, pattern=pattern)


def read_dataset(path: str | Path) -> DatasetReadResult:
    """Read an ``identifier<TAB>context<TAB>pattern`` file, collecting bad rows instead of failing."""
    try:
        lines = Path(path).read_text(encoding='utf-8').splitlines()
    except OSError as e:
        raise DatasetError(f'Cannot read dataset {path}: {e}') from e

    result = DatasetReadResult()
    for line_no, line in enumerate(lines, start=1):
        if not line.strip() or line.startswith('#'):
            continue
        try:
            result.rows.append(parse_row(line))
        except DatasetError as e:
            logger.warning(f'{path}:{line_no}: rejected row: {e}')
            result.rejected.append((line_no, str(e)))

    if not result.rows:
        logger.warning(f'Dataset {path} contains no usable rows')
    return result


def write_dataset(rows: list[DatasetRow], path: str | Path) -> None:
    Path(path).write_text(''.join(row.to_line() + '\n' for row in rows), encoding='utf-8')


def explode(rows: list[DatasetRow], resources: TaggerResources) -> list[LabeledExample]:
    """One labeled example per word, features extracted in identifier context."""
    examples = []
    for row in rows:
        words = split(row.identifier)
        vectors = identifier_features(words, row.context, resources)
        for position, (vector, tag) in enumerate(zip(vectors, row.pattern)):
            examples.append(
                LabeledExample(features=vector.as_array(), label=tag.value, words=words.words, position=position)
            )
    return examples


def ingest(path: str | Path, resources: TaggerResources) -> list[LabeledExample]:
    result = read_dataset(path)
    examples = explode(result.rows, resources)
    logger.info(
        f'Ingested {len(result.rows)} identifiers ({len(examples)} words) from {path}, '
        f'{len(result.rejected)} rows rejected'
    )
    return examples


def tag_counts(rows: list[DatasetRow]) -> Counter[str]:
    return Counter(tag.value for row in rows for tag in row.pattern)
