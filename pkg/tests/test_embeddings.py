import math

import numpy as np
import pytest

from scalar.errors import ConceptConstructionError, VectorLoadError
from scalar.lexical.embeddings import (
    Concept,
    VectorStore,
    build_concept_vector,
    concept_similarity,
    load_vectors,
)


def _write(tmp_path, text: str):
    path = tmp_path / 'vectors.txt'
    path.write_text(text, encoding='utf-8')
    return path


def _row(word: str, values) -> str:
    return word + ' ' + ' '.join(f'{v:.3f}' for v in values) + '\n'


class TestLoadVectors:
    def test_three_rows_of_dimension_50(self, tmp_path):
        rng = np.random.default_rng(0)
        text = ''.join(_row(w, rng.uniform(0.1, 1, 50)) for w in ['stack', 'widget', 'behind'])
        store = load_vectors(_write(tmp_path, text))
        assert len(store) == 3
        assert store.dimension == 50

    def test_dimension_mismatch_names_word(self, tmp_path):
        text = _row('stack', np.ones(50)) + _row('widget', np.ones(49))
        with pytest.raises(VectorLoadError, match='widget'):
            load_vectors(_write(tmp_path, text))

    def test_header_declares_dimension(self, tmp_path):
        text = '2 3\n' + _row('stack', [1, 2, 3]) + _row('widget', [1, 2])
        with pytest.raises(VectorLoadError, match='widget'):
            load_vectors(_write(tmp_path, text))

    def test_header_is_not_a_word(self, tmp_path):
        store = load_vectors(_write(tmp_path, '1 2\n' + _row('stack', [1, 2])))
        assert len(store) == 1
        assert '1' not in store

    def test_duplicate_keeps_first(self, tmp_path):
        text = _row('the', [1, 0]) + _row('The', [0, 1])
        store = load_vectors(_write(tmp_path, text))
        assert len(store) == 1
        np.testing.assert_array_equal(store.vector('the'), [1.0, 0.0])

    def test_empty_file(self, tmp_path):
        with pytest.raises(VectorLoadError):
            load_vectors(_write(tmp_path, ''))

    def test_non_numeric_component(self, tmp_path):
        with pytest.raises(VectorLoadError, match='stack'):
            load_vectors(_write(tmp_path, 'stack 1.0 abc\n'))

    def test_zero_vectors_are_skipped(self, tmp_path, caplog):
        text = _row('stack', [1, 0]) + _row('nothing', [0, 0])
        store = load_vectors(_write(tmp_path, text))
        assert 'nothing' not in store
        assert 'all-zero' in caplog.text

    def test_missing_file(self, tmp_path):
        with pytest.raises(VectorLoadError):
            load_vectors(tmp_path / 'absent.txt')

    def test_store_is_read_only(self, toy_store):
        with pytest.raises(ValueError):
            toy_store.vector('stack')[0] = 5.0


class TestConceptVector:
    def test_single_vector_normalized(self):
        store = VectorStore.from_mapping({'a': [3.0, 4.0]})
        concept = build_concept_vector(store, ['a'], Concept.NOUN)
        np.testing.assert_allclose(concept.vector, [0.6, 0.8], atol=1e-12)

    def test_symmetric_mean(self):
        store = VectorStore.from_mapping({'a': [1.0, 0.0], 'b': [0.0, 1.0]})
        concept = build_concept_vector(store, ['a', 'b'], Concept.NOUN)
        np.testing.assert_allclose(concept.vector, [1 / math.sqrt(2), 1 / math.sqrt(2)], atol=1e-12)

    def test_out_of_vocabulary_words_skipped(self):
        store = VectorStore.from_mapping({'a': [1.0, 0.0]})
        concept = build_concept_vector(store, ['a', 'b'], Concept.VERB)
        np.testing.assert_allclose(concept.vector, [1.0, 0.0], atol=1e-12)

    def test_unit_norm(self, toy_store):
        concept = build_concept_vector(toy_store, ['stack', 'widget', 'set'], Concept.NOUN)
        assert abs(np.linalg.norm(concept.vector) - 1.0) <= 1e-9

    def test_permuted_list_same_vector(self, toy_store):
        words = ['behind', 'at', 'stack', 'run']
        first = build_concept_vector(toy_store, words, Concept.PREPOSITION)
        second = build_concept_vector(toy_store, list(reversed(words)), Concept.PREPOSITION)
        np.testing.assert_array_equal(first.vector, second.vector)

    def test_no_word_in_vocabulary(self, toy_store):
        with pytest.raises(ConceptConstructionError):
            build_concept_vector(toy_store, ['zzz', 'qqq'], Concept.VERB)

    def test_zero_mean(self):
        store = VectorStore.from_mapping({'a': [1.0, 0.0], 'b': [-1.0, 0.0]})
        with pytest.raises(ConceptConstructionError):
            build_concept_vector(store, ['a', 'b'], Concept.NOUN)


class TestConceptSimilarity:
    def test_identical_direction(self):
        store = VectorStore.from_mapping({'a': [3.0, 4.0], 'b': [0.6, 0.8]})
        concept = build_concept_vector(store, ['a'], Concept.NOUN)
        assert concept_similarity(store, 'b', concept) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal(self):
        store = VectorStore.from_mapping({'a': [1.0, 0.0], 'b': [0.0, 2.0]})
        concept = build_concept_vector(store, ['a'], Concept.NOUN)
        assert concept_similarity(store, 'b', concept) == pytest.approx(0.0, abs=1e-12)

    def test_out_of_vocabulary_is_zero(self, toy_store):
        concept = build_concept_vector(toy_store, ['behind'], Concept.PREPOSITION)
        assert concept_similarity(toy_store, 'xyzzqj', concept) == 0.0

    def test_scale_invariant(self):
        store = VectorStore.from_mapping({'a': [1.0, 2.0, 0.5], 'b': [0.3, -1.0, 2.0], 'c': [3.0, -10.0, 20.0]})
        concept = build_concept_vector(store, ['a'], Concept.VERB)
        assert concept_similarity(store, 'b', concept) == pytest.approx(concept_similarity(store, 'c', concept), abs=1e-12)

    def test_bounded(self):
        rng = np.random.default_rng(3)
        vectors = {f'w{i}': rng.normal(size=5) for i in range(200)}
        store = VectorStore.from_mapping(vectors)
        concept = build_concept_vector(store, ['w0', 'w1', 'w2'], Concept.NOUN)
        for word in vectors:
            assert -1.0 - 1e-9 <= concept_similarity(store, word, concept) <= 1.0 + 1e-9


class TestPackagedVectors:
    def test_concepts_cover_seed_vocabulary(self, resources):
        assert 'behind' in resources.vector_store
        assert set(resources.concepts) == set(Concept)
        for concept in resources.concepts.values():
            assert abs(np.linalg.norm(concept.vector) - 1.0) <= 1e-9


class TestZeroVectors:
    def test_store_rejects_zero_rows(self):
        with pytest.raises(VectorLoadError, match='z'):
            VectorStore.from_mapping({'a': [1.0, 0.0], 'z': [0.0, 0.0]})

    def test_similarity_of_zero_norm_vector_is_neutral(self):
        store = VectorStore.from_mapping({'a': [1.0, 0.0], 'b': [1e-320, 0.0]})
        concept = build_concept_vector(store, ['a'], Concept.NOUN)
        assert concept_similarity(store, 'b', concept) == 0.0
