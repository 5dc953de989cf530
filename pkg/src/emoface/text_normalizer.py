"""Text normalization and integer encoding for the emotion classifier.

The normalizer lowercases, strips punctuation (keeping intra-word
apostrophes), collapses whitespace, and replaces numeric tokens with the
``<num>`` sentinel.  Encoding maps tokens to vocabulary indices with
bounded-distance spell correction for out-of-vocabulary words, then pads
or truncates to a fixed length.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

PAD_TOKEN = "<pad>"
UNK_TOKEN = "<unk>"
NUM_TOKEN = "<num>"

PAD_INDEX = 0
UNK_INDEX = 1

DEFAULT_MAX_LEN = 64

# '.' flanked by digits is part of a number, not sentence punctuation.
_DECIMAL_POINT = re.compile(r"(?<=\d)\.(?=\d)")
_NUMERIC = re.compile(r"\d+(?:\.\d+)?")
# The sentinel must survive re-normalization even though <> are punctuation.
_NUM_SENTINEL = re.compile(re.escape(NUM_TOKEN))

_MARK = "\x00"


@dataclass(frozen=True)
class EncodedText:
    """Fixed-length index encoding of a token sequence.

    ``ids`` always has exactly ``max_len`` entries; positions at or beyond
    ``length`` hold the padding index 0.
    """

    ids: np.ndarray
    length: int
    max_len: int

    def __post_init__(self) -> None:
        if self.max_len < 1:
            raise ValueError("max_len must be >= 1")
        if self.ids.shape != (self.max_len,):
            raise ValueError("ids must have exactly max_len entries")
        if not 0 <= self.length <= self.max_len:
            raise ValueError("length out of range")


def _clean_token(raw: str) -> list[str]:
    """Map one whitespace-delimited chunk to zero or more final tokens."""
    token = raw.strip("'")
    if not token:
        return []
    restored = token.replace(_MARK, ".")
    if _NUMERIC.fullmatch(restored):
        return [NUM_TOKEN]
    if _MARK not in token:
        return [restored]
    # Mixed chunk such as "a1.2" or "1.2.3": treat each dot-separated piece
    # on its own so no punctuation leaks into the output.
    out = []
    for piece in token.split(_MARK):
        piece = piece.strip("'")
        if not piece:
            continue
        out.append(NUM_TOKEN if _NUMERIC.fullmatch(piece) else piece)
    return out


def normalize(text: str) -> list[str]:
    """Normalize raw text into lowercase punctuation-free tokens.

    Rules: lowercase everything; keep letters, digits and intra-word
    apostrophes; every other character becomes a token boundary; tokens
    that are purely numeric (optionally with one decimal point) become
    ``<num>``.  A literal ``<num>`` in the input is passed through, which
    makes the function idempotent over its own output.
    """
    if not text:
        return []
    lowered = text.lower().replace("’", "'")
    tokens: list[str] = []
    pos = 0
    for m in _NUM_SENTINEL.finditer(lowered):
        tokens.extend(_tokenize_segment(lowered[pos : m.start()]))
        tokens.append(NUM_TOKEN)
        pos = m.end()
    tokens.extend(_tokenize_segment(lowered[pos:]))
    return tokens


def _tokenize_segment(segment: str) -> list[str]:
    if not segment:
        return []
    marked = _DECIMAL_POINT.sub(_MARK, segment)
    kept = "".join(
        ch if (ch.isalnum() or ch == "'" or ch == _MARK) else " " for ch in marked
    )
    tokens: list[str] = []
    for chunk in kept.split():
        tokens.extend(_clean_token(chunk))
    return tokens


def damerau_levenshtein(a: str, b: str, *, cap: int | None = None) -> int:
    """Optimal-string-alignment edit distance (adjacent transpositions).

    With ``cap`` set, any distance known to exceed it is reported as
    ``cap + 1`` so callers can abandon hopeless candidates early.
    """
    la, lb = len(a), len(b)
    if cap is not None and abs(la - lb) > cap:
        return cap + 1
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev2: list[int] | None = None
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        cur = [i] + [0] * lb
        for j in range(1, lb + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
            if (
                i > 1
                and j > 1
                and a[i - 1] == b[j - 2]
                and a[i - 2] == b[j - 1]
            ):
                cur[j] = min(cur[j], prev2[j - 2] + 1)  # type: ignore[index]
        if cap is not None and min(cur) > cap:
            return cap + 1
        prev2, prev = prev, cur
    return prev[lb]


def correct_spelling(
    token: str,
    vocab: Iterable[str],
    frequencies: Mapping[str, int] | None = None,
    max_distance: int = 2,
) -> str:
    """Resolve a token against a vocabulary with bounded edit distance.

    In-vocabulary tokens are returned unchanged.  Otherwise the closest
    vocabulary word within ``max_distance`` wins; ties prefer the higher
    corpus frequency, then the lexicographically smaller word.  With no
    candidate in range the ``<unk>`` sentinel is returned.
    """
    vocab_set = vocab if isinstance(vocab, (set, frozenset, dict)) else set(vocab)
    if token in vocab_set:
        return token
    best_word = None
    best_key: tuple[int, int, str] | None = None
    for word in vocab_set:
        dist = damerau_levenshtein(token, word, cap=max_distance)
        if dist > max_distance:
            continue
        freq = frequencies.get(word, 0) if frequencies else 0
        key = (dist, -freq, word)
        if best_key is None or key < best_key:
            best_key = key
            best_word = word
    return best_word if best_word is not None else UNK_TOKEN


def encode(
    tokens: Sequence[str],
    vocab: Mapping[str, int],
    max_len: int = DEFAULT_MAX_LEN,
    frequencies: Mapping[str, int] | None = None,
) -> EncodedText:
    """Encode tokens as vocabulary indices, spell-correcting OOV words.

    Sequences longer than ``max_len`` keep their first ``max_len`` tokens;
    shorter ones are right-padded with index 0.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    real_words = {w for w in vocab if w not in (PAD_TOKEN, UNK_TOKEN)}
    ids = np.zeros(max_len, dtype=np.int32)
    kept = tokens[:max_len]
    for i, token in enumerate(kept):
        if token in vocab:
            ids[i] = vocab[token]
            continue
        corrected = correct_spelling(token, real_words, frequencies)
        ids[i] = vocab.get(corrected, UNK_INDEX)
    return EncodedText(ids=ids, length=len(kept), max_len=max_len)
