import logging
from collections.abc import Iterable
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path

import numpy as np

from scalar.errors import ConceptConstructionError, VectorLoadError

logger = logging.getLogger(__name__)

UNIT_NORM_TOLERANCE = 1e-9


class Concept(StrEnum):
    PREPOSITION = 'preposition'
    NOUN = 'noun'
    VERB = 'verb'


class VectorStore:
    """Read-only word vectors, one row per word."""

    def __init__(self, words: list[str], matrix: np.ndarray):
        if matrix.ndim != 2 or matrix.shape[0] != len(words) or matrix.shape[1] < 1:
            raise VectorLoadError(f'Vector matrix shape {matrix.shape} does not match {len(words)} words')
        zero_rows = [words[i] for i in np.flatnonzero(~matrix.any(axis=1))]
        if zero_rows:
            raise VectorLoadError(f'All-zero vectors for {zero_rows}')
        self._index = {word: row for row, word in enumerate(words)}
        self._matrix = matrix.astype(np.float64)
        self._matrix.setflags(write=False)

    @classmethod
    def from_mapping(cls, vectors: dict[str, Iterable[float]]) -> 'VectorStore':
        words = [word.lower() for word in vectors]
        matrix = np.array([list(v) for v in vectors.values()], dtype=np.float64)
        return cls(words, matrix)

    @property
    def dimension(self) -> int:
        return int(self._matrix.shape[1])

    def __len__(self) -> int:
        return len(self._index)

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._index

    def vector(self, word: str) -> np.ndarray | None:
        row = self._index.get(word.lower())
        return None if row is None else self._matrix[row]


@dataclass(frozen=True)
class ConceptVector:
    concept: Concept
    vector: np.ndarray


def _is_header(parts: list[str]) -> bool:
    return len(parts) == 2 and all(p.isdigit() for p in parts)


def load_vectors(source: str | Path) -> VectorStore:
    """Load a plain-text vector file: optional ``count dimension`` header, then ``word v1 .. vd`` rows."""
    try:
        lines = Path(source).read_text(encoding='utf-8').splitlines()
    except OSError as e:
        raise VectorLoadError(f'Cannot read vector file {source}: {e}') from e

    rows = [line.split() for line in lines if line.strip()]
    if not rows:
        raise VectorLoadError(f'Vector file {source} is empty')

    dimension: int | None = None
    if _is_header(rows[0]):
        dimension = int(rows[0][1])
        rows = rows[1:]
        if not rows:
            raise VectorLoadError(f'Vector file {source} has a header but no vectors')

    words: list[str] = []
    vectors: list[list[float]] = []
    seen: set[str] = set()
    for parts in rows:
        word, values = parts[0].lower(), parts[1:]
        if dimension is None:
            dimension = len(values)
        if len(values) != dimension:
            raise VectorLoadError(f'Vector for {word!r} has dimension {len(values)}, expected {dimension}')
        try:
            vector = [float(v) for v in values]
        except ValueError as e:
            raise VectorLoadError(f'Vector for {word!r} has a non-numeric component') from e
        if word in seen:
            continue
        if not any(vector):
            logger.warning(f'Skipping all-zero vector for {word!r}')
            continue
        seen.add(word)
        words.append(word)
        vectors.append(vector)

    if not words or not dimension:
        raise VectorLoadError(f'Vector file {source} contains no usable vectors')

    store = VectorStore(words, np.array(vectors, dtype=np.float64))
    logger.info(f'Loaded {len(store)} vectors of dimension {store.dimension} from {source}')
    return store


def build_concept_vector(store: VectorStore, word_list: Iterable[str], concept: Concept) -> ConceptVector:
    """Average the in-vocabulary vectors of ``word_list`` and scale the mean to unit length."""
    # Sorting makes the sum independent of list order
    present = sorted({w.lower() for w in word_list if w.lower() in store})
    if not present:
        raise ConceptConstructionError(f'No {concept} list word is in the vector vocabulary')

    mean = np.mean(np.stack([store.vector(w) for w in present]), axis=0)
    norm = float(np.linalg.norm(mean))
    if norm == 0.0:
        raise ConceptConstructionError(f'Mean {concept} vector has zero norm')

    vector = mean / norm
    vector.setflags(write=False)
    return ConceptVector(concept=concept, vector=vector)


def concept_similarity(store: VectorStore, word: str, concept: ConceptVector) -> float:
    """Cosine between a word and a concept; 0.0 for out-of-vocabulary words."""
    vector = store.vector(word)
    if vector is None:
        return 0.0
    norm = float(np.linalg.norm(vector) * np.linalg.norm(concept.vector))
    if norm == 0.0:
        return 0.0
    cosine = float(np.dot(vector, concept.vector) / norm)
    return max(-1.0, min(1.0, cosine))
