import re

import numpy as np
import pytest

from scalar.errors import ContractViolationError, MalformedIdentifierError
from scalar.lexical.tokenizer import is_digit_token, position_ratio, split

_LETTERS = 'abcdefghijklmnopqrstuvwxyz'


def _random_word(rng: np.random.Generator) -> str:
    if rng.random() < 0.2:
        return ''.join(rng.choice(list('0123456789'), size=int(rng.integers(1, 5))))
    word = ''.join(rng.choice(list(_LETTERS), size=int(rng.integers(1, 9))))
    style = rng.integers(0, 3)
    if style == 1:
        return word.capitalize()
    if style == 2:
        return word.upper()
    return word


def _random_identifier(rng: np.random.Generator) -> str:
    alphabet = list('abcXYZ09_$') + list('mnOP')
    while True:
        text = ''.join(rng.choice(alphabet, size=int(rng.integers(1, 16))))
        if re.search('[A-Za-z0-9]', text):
            return text


class TestSplitExamples:
    @pytest.mark.parametrize(
        'identifier, words',
        [
            ('employeeName', ['employee', 'name']),
            ('bit_set', ['bit', 'set']),
            ('XMLReader', ['xml', 'reader']),
            ('fPtr', ['f', 'ptr']),
            ('tokenParser', ['token', 'parser']),
            ('$value', ['value']),
            ('port8080', ['port', '8080']),
            ('color0xAF', ['color', '0xaf']),
            ('value0xffLine', ['value', '0xff', 'line']),
            ('max0xDeadline', ['max', '0', 'x', 'deadline']),
            ('mask0xABCDEFilter', ['mask', '0xabcde', 'filter']),
            ('getHTTP', ['get', 'http']),
            ('max_size_1', ['max', 'size', '1']),
        ],
    )
    def test_splits(self, identifier, words):
        assert list(split(identifier).words) == words

    def test_sequence_fields(self):
        tokens = split('adjustToCamera')
        assert tokens.raw == 'adjustToCamera'
        assert tokens.count == 3
        assert len(tokens) == 3
        assert tokens[1] == 'to'
        assert tokens.joined() == 'adjust_to_camera'

    @pytest.mark.parametrize('identifier', ['', '___', '$$', '_$_', 'naïve'])
    def test_malformed(self, identifier):
        with pytest.raises(MalformedIdentifierError):
            split(identifier)

    def test_malformed_is_value_error(self):
        with pytest.raises(ValueError):
            split('___')


class TestSplitProperties:
    def test_round_trip_over_generated_identifiers(self):
        rng = np.random.default_rng(7)
        for _ in range(1000):
            words = [_random_word(rng) for _ in range(int(rng.integers(1, 6)))]
            assert list(split('_'.join(words)).words) == [w.lower() for w in words]

    def test_words_concatenate_to_stripped_identifier(self):
        rng = np.random.default_rng(11)
        for _ in range(500):
            identifier = _random_identifier(rng)
            tokens = split(identifier)
            assert ''.join(tokens.words) == re.sub('[^a-z0-9]', '', identifier.lower())
            assert all(tokens.words)

    def test_idempotent(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            first = split(_random_identifier(rng))
            assert split(first.joined()).words == first.words

    def test_letters_and_digits_never_share_a_token(self):
        for word in split('abc123Def45_x9').words:
            assert word.isalpha() or word.isdigit()


class TestDigitTokens:
    @pytest.mark.parametrize('word, expected', [('42', True), ('0xaf', True), ('0x', False), ('x42', False), ('abc', False)])
    def test_is_digit_token(self, word, expected):
        assert is_digit_token(word) is expected


class TestPositionRatio:
    @pytest.mark.parametrize('index, count, ratio', [(1, 1, 1.0), (1, 4, 0.25), (4, 4, 1.0)])
    def test_examples(self, index, count, ratio):
        assert position_ratio(index, count) == ratio

    def test_strictly_increasing(self):
        ratios = [position_ratio(i, 7) for i in range(1, 8)]
        assert all(a < b for a, b in zip(ratios, ratios[1:]))

    @pytest.mark.parametrize('index, count', [(0, 3), (4, 3), (1, 0)])
    def test_out_of_range(self, index, count):
        with pytest.raises(ContractViolationError):
            position_ratio(index, count)
