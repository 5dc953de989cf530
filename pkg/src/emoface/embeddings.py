"""Pre-trained word-vector store.

Loads the plain-text vector format (one ``word v1 .. vd`` entry per line,
single-space separated), prepends ``<pad>`` (all zeros) and ``<unk>``
(mean of all loaded vectors) rows, and provides row-gather embedding and
cosine nearest-neighbour lookup.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import MalformedLine, UnknownWord
from .text_normalizer import EncodedText, PAD_INDEX, PAD_TOKEN, UNK_INDEX, UNK_TOKEN


@dataclass(frozen=True)
class EmbeddingStore:
    """Immutable embedding matrix with sentinel rows 0 (pad) and 1 (unk)."""

    dim: int
    word_to_row: dict[str, int]
    matrix: np.ndarray
    words: tuple[str, ...] = field(repr=False)

    @property
    def vocab(self) -> dict[str, int]:
        """word -> row mapping including the two sentinel rows."""
        out = {PAD_TOKEN: PAD_INDEX, UNK_TOKEN: UNK_INDEX}
        out.update(self.word_to_row)
        return out

    def __contains__(self, word: str) -> bool:
        return word in self.word_to_row

    def row(self, word: str) -> np.ndarray:
        try:
            return self.matrix[self.word_to_row[word]]
        except KeyError:
            raise UnknownWord(word) from None

    def vector_or_unk(self, word: str) -> np.ndarray:
        idx = self.word_to_row.get(word, UNK_INDEX)
        return self.matrix[idx]


def load_vectors(path: str | os.PathLike) -> EmbeddingStore:
    """Load a text vector file into an :class:`EmbeddingStore`.

    The dimensionality is inferred from the first line; any later line
    with a different float count raises :class:`MalformedLine` with its
    1-based line number.  Duplicate words keep their first vector.
    """
    words: list[str] = []
    rows: list[np.ndarray] = []
    word_to_row: dict[str, int] = {}
    dim: int | None = None
    with open(path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                raise MalformedLine(line_no, f"empty vector line {line_no}")
            parts = line.split(" ")
            word, floats = parts[0], parts[1:]
            if dim is None:
                if len(floats) == 0:
                    raise MalformedLine(line_no, f"no vector values on line {line_no}")
                dim = len(floats)
            elif len(floats) != dim:
                raise MalformedLine(
                    line_no,
                    f"line {line_no} has {len(floats)} values, expected {dim}",
                )
            try:
                vec = np.array([float(x) for x in floats], dtype=np.float64)
            except ValueError:
                raise MalformedLine(
                    line_no, f"non-numeric value on line {line_no}"
                ) from None
            if not np.all(np.isfinite(vec)):
                raise MalformedLine(line_no, f"non-finite value on line {line_no}")
            if word in word_to_row:
                continue
            word_to_row[word] = len(words) + 2
            words.append(word)
            rows.append(vec)
    if dim is None:
        raise MalformedLine(0, "vector file is empty")
    matrix = np.zeros((len(rows) + 2, dim), dtype=np.float64)
    loaded = np.stack(rows)
    matrix[2:] = loaded
    matrix[UNK_INDEX] = loaded.mean(axis=0)
    return EmbeddingStore(
        dim=dim, word_to_row=word_to_row, matrix=matrix, words=tuple(words)
    )


def embed(store: EmbeddingStore, encoded: EncodedText) -> np.ndarray:
    """Gather embedding rows for an encoded sequence (pure row lookup).

    Output shape is ``(max_len, dim)``; padding positions come out as zero
    vectors because the pad row is all zeros.
    """
    ids = np.asarray(encoded.ids)
    if ids.min(initial=0) < 0 or ids.max(initial=0) >= store.matrix.shape[0]:
        raise IndexError("encoded ids reference rows outside the store")
    return store.matrix[ids]


def nearest_words(
    store: EmbeddingStore, word: str, k: int
) -> list[tuple[str, float]]:
    """Return the k most cosine-similar in-vocabulary words to ``word``.

    The query itself is excluded.  Results are sorted by descending
    similarity with lexicographic tie-break; k larger than the vocabulary
    clamps to all other words.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if word not in store.word_to_row:
        raise UnknownWord(word)
    query = store.row(word)
    vectors = store.matrix[2:]
    norms = np.linalg.norm(vectors, axis=1)
    qnorm = np.linalg.norm(query)
    denom = np.where(norms * qnorm > 0, norms * qnorm, 1.0)
    sims = vectors @ query / denom
    order = sorted(
        (w for w in store.words if w != word),
        key=lambda w: (-sims[store.word_to_row[w] - 2], w),
    )
    top = order[: min(k, len(order))]
    return [(w, float(sims[store.word_to_row[w] - 2])) for w in top]
