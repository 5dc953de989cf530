"""Tests for text normalization, spell correction, and encoding."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from emoface.text_normalizer import (
    EncodedText,
    NUM_TOKEN,
    UNK_TOKEN,
    correct_spelling,
    damerau_levenshtein,
    encode,
    normalize,
)


class TestNormalize:
    def test_case_and_punctuation(self):
        assert normalize("I'm NOT feeling well today!!") == [
            "i'm",
            "not",
            "feeling",
            "well",
            "today",
        ]

    def test_digit_sentinel(self):
        assert normalize("Room 101 is cold") == ["room", NUM_TOKEN, "is", "cold"]

    def test_empty(self):
        assert normalize("") == []

    def test_decimal_number_is_one_token(self):
        assert normalize("pi is 3.14 exactly") == ["pi", "is", NUM_TOKEN, "exactly"]

    def test_mixed_alphanumeric_kept(self):
        assert normalize("see b2 and 2b") == ["see", "b2", "and", "2b"]

    def test_apostrophe_trimming(self):
        assert normalize("'tis 'quoted' don't") == ["tis", "quoted", "don't"]

    def test_sentinel_survives(self):
        assert normalize("room <num> is cold") == ["room", NUM_TOKEN, "is", "cold"]

    @pytest.mark.parametrize(
        "text",
        [
            "I'm NOT feeling well today!!",
            "Room 101 is cold",
            "a--b  c\t\nd 3.14 '99 x1.2.3y",
            "ça VA très bien   ‽ 42",
        ],
    )
    def test_idempotent(self, text):
        once = normalize(text)
        assert normalize(" ".join(once)) == once

    @given(st.text(max_size=200))
    @settings(max_examples=300, deadline=None)
    def test_token_invariants(self, text):
        tokens = normalize(text)
        for tok in tokens:
            assert tok
            assert not any(ch.isspace() for ch in tok)
            assert tok == tok.lower()
            if tok != NUM_TOKEN:
                for ch in tok:
                    assert ch.isalnum() or ch == "'"
                assert not tok.startswith("'") or len(tok.strip("'")) > 0

    @given(st.text(max_size=200))
    @settings(max_examples=200, deadline=None)
    def test_idempotent_random(self, text):
        once = normalize(text)
        assert normalize(" ".join(once)) == once


class TestDamerauLevenshtein:
    def test_known_distances(self):
        assert damerau_levenshtein("feeling", "feeling") == 0
        assert damerau_levenshtein("feelng", "feeling") == 1
        assert damerau_levenshtein("ca", "abc") == 3  # OSA, not unrestricted
        assert damerau_levenshtein("teh", "the") == 1  # transposition
        assert damerau_levenshtein("", "abc") == 3

    def test_cap_reports_overflow(self):
        assert damerau_levenshtein("aaaa", "bbbbbbbb", cap=2) == 3


def _brute_force_correct(token, vocab, freq=None, max_d=2):
    """Independent oracle: full scan without the cap shortcut."""
    if token in vocab:
        return token
    scored = []
    for w in vocab:
        d = damerau_levenshtein(token, w)
        if d <= max_d:
            scored.append((d, -(freq or {}).get(w, 0), w))
    if not scored:
        return UNK_TOKEN
    return min(scored)[2]


class TestCorrectSpelling:
    def test_identity_for_vocab_member(self):
        assert correct_spelling("feeling", {"feeling", "fooling"}) == "feeling"

    def test_single_edit(self):
        vocab = {"feeling", "ceiling", "failing", "fee"}
        assert correct_spelling("feelng", vocab) == _brute_force_correct(
            "feelng", vocab
        )
        assert correct_spelling("feelng", vocab) == "feeling"

    def test_no_candidate_within_two(self):
        vocab = {"feeling", "well", "today", "room"}
        assert _brute_force_correct("xqzvv", vocab) == UNK_TOKEN
        assert correct_spelling("xqzvv", vocab) == UNK_TOKEN

    def test_frequency_then_lexicographic_tiebreak(self):
        vocab = {"cat", "bat", "rat"}
        # all at distance 1 from "aat"
        assert correct_spelling("aat", vocab) == "bat"
        assert correct_spelling("aat", vocab, {"rat": 5}) == "rat"
        assert correct_spelling("aat", vocab, {"rat": 5, "cat": 5}) == "cat"

    def test_returns_vocab_member_or_unk(self):
        rng = np.random.default_rng(7)
        vocab = {"alpha", "beta", "gamma", "delta", "epsilon"}
        letters = "abgdel"
        for _ in range(200):
            n = rng.integers(1, 8)
            token = "".join(rng.choice(list(letters), size=n))
            got = correct_spelling(token, vocab)
            assert got in vocab or got == UNK_TOKEN
            assert got == _brute_force_correct(token, vocab)


class TestEncode:
    VOCAB = {"<pad>": 0, "<unk>": 1, "a": 2, "b": 3, "c": 4, "not": 5, "well": 9}

    def test_empty_is_all_padding(self):
        enc = encode([], self.VOCAB, max_len=4)
        assert enc.ids.tolist() == [0, 0, 0, 0]
        assert enc.length == 0

    def test_lookup_and_padding(self):
        enc = encode(["not", "well"], self.VOCAB, max_len=4)
        assert enc.ids.tolist() == [5, 9, 0, 0]
        assert enc.length == 2

    def test_truncation_keeps_head(self):
        enc = encode(["a", "b", "c"], {"a": 2, "b": 3, "c": 4}, max_len=2)
        assert enc.ids.tolist() == [2, 3]
        assert enc.length == 2

    def test_oov_goes_through_spell_correction(self):
        enc = encode(["wel"], self.VOCAB, max_len=2)
        assert enc.ids.tolist() == [9, 0]

    def test_unresolvable_oov_is_unk(self):
        enc = encode(["zzzzzz"], self.VOCAB, max_len=2)
        assert enc.ids.tolist() == [1, 0]

    def test_fixed_width_and_bounds(self):
        rng = np.random.default_rng(3)
        words = list("abc") + ["not", "well"]
        for _ in range(50):
            toks = [words[i] for i in rng.integers(0, len(words), rng.integers(0, 12))]
            enc = encode(toks, self.VOCAB, max_len=6)
            assert enc.ids.shape == (6,)
            assert enc.ids.max(initial=0) < 10
            assert (enc.ids[enc.length :] == 0).all()

    def test_max_len_validation(self):
        with pytest.raises(ValueError):
            encode([], self.VOCAB, max_len=0)
        with pytest.raises(ValueError):
            EncodedText(ids=np.zeros(3, dtype=np.int32), length=1, max_len=4)
