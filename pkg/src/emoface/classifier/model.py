"""Classifier model bundle: inference, evaluation, persistence."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..bundle import load_bundle, save_bundle
from ..errors import EmptySplit
from ..labels import EMOTION_NAMES, EmotionLabel
from ..text_normalizer import EncodedText, encode, normalize
from .cells import (
    CellParams,
    LstmParams,
    N_CLASSES,
    RnnParams,
    run_sequence,
)

FORMAT_TAG = "emomodel/1"

LOW_CONFIDENCE_THRESHOLD = 0.25


def softmax(logits: np.ndarray) -> np.ndarray:
    """Stable softmax over the last axis."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(pred: np.ndarray, true_label: int | EmotionLabel) -> float:
    """-log of the probability assigned to the true label, clamped at 1e-12."""
    pred = np.asarray(pred, dtype=np.float64)
    if pred.ndim != 1:
        raise ValueError("pred must be a single probability vector")
    if not np.isclose(pred.sum(), 1.0, atol=1e-6):
        raise ValueError("pred must sum to 1")
    if (pred < -1e-12).any():
        raise ValueError("pred must be non-negative")
    p = max(float(pred[int(true_label)]), 1e-12)
    return -float(np.log(p))


@dataclass
class ClassifyResult:
    label: EmotionLabel
    probabilities: np.ndarray
    low_confidence: bool


@dataclass
class ClassifierModel:
    """Trained recurrent classifier plus everything needed to run it.

    ``vocab`` maps word -> embedding row (sentinels at 0 and 1); the
    embedding matrix is frozen and stored with the model so inference
    does not need the original vector file.
    """

    params: CellParams
    vocab: dict[str, int]
    frequencies: dict[str, int]
    embedding: np.ndarray
    max_len: int
    label_order: tuple[str, ...] = tuple(EMOTION_NAMES)
    train_meta: dict = field(default_factory=dict)

    @property
    def hidden_dim(self) -> int:
        return self.params.hidden_dim

    def encode_text(self, text: str) -> EncodedText:
        return encode(normalize(text), self.vocab, self.max_len, self.frequencies)


def forward_batch(
    params: CellParams,
    embedding: np.ndarray,
    ids: np.ndarray,
    lengths: np.ndarray,
) -> np.ndarray:
    """Probabilities (batch, 7) for already-encoded id sequences."""
    X = embedding[ids]
    h_final, _ = run_sequence(params, X, np.asarray(lengths))
    logits = h_final @ params.W_y.T + params.b_y
    return softmax(logits)


def forward(model: ClassifierModel, enc: EncodedText) -> np.ndarray:
    """Probability vector over the 7 labels for one encoded text."""
    if enc.max_len != model.max_len:
        raise ValueError(
            f"encoded max_len {enc.max_len} != model max_len {model.max_len}"
        )
    probs = forward_batch(
        model.params,
        model.embedding,
        np.asarray(enc.ids)[None, :],
        np.array([enc.length]),
    )
    return probs[0]


def classify(model: ClassifierModel, text: str) -> ClassifyResult:
    """normalize -> encode -> forward -> argmax (ties take the lowest code)."""
    probs = forward(model, model.encode_text(text))
    label = EmotionLabel(int(np.argmax(probs)))
    return ClassifyResult(
        label=label,
        probabilities=probs,
        low_confidence=float(probs.max()) < LOW_CONFIDENCE_THRESHOLD,
    )


def evaluate(
    model: ClassifierModel,
    items: Sequence[tuple[str, EmotionLabel]],
    batch_size: int = 256,
) -> float:
    """Fraction of argmax-correct predictions over the given items."""
    if len(items) == 0:
        raise EmptySplit("evaluation split is empty")
    correct = 0
    for start in range(0, len(items), batch_size):
        chunk = items[start : start + batch_size]
        encs = [model.encode_text(text) for text, _ in chunk]
        ids = np.stack([e.ids for e in encs])
        lengths = np.array([e.length for e in encs])
        probs = forward_batch(model.params, model.embedding, ids, lengths)
        pred = probs.argmax(axis=1)
        truth = np.array([int(lbl) for _, lbl in chunk])
        correct += int((pred == truth).sum())
    return correct / len(items)


def save_model(model: ClassifierModel, path) -> None:
    rows = [None, None] + [None] * (len(model.vocab) - 2)
    for word, row in model.vocab.items():
        rows[row] = word
    meta = {
        "cell": model.params.cell_type,
        "input_dim": model.params.input_dim,
        "hidden_dim": model.params.hidden_dim,
        "max_len": model.max_len,
        "label_order": list(model.label_order),
        "vocab_rows": rows[2:],
        "frequencies": model.frequencies,
        "train_meta": model.train_meta,
    }
    tensors = dict(model.params.tensors())
    tensors["embedding"] = model.embedding
    save_bundle(path, FORMAT_TAG, meta, tensors)


def load_model(path) -> ClassifierModel:
    meta, tensors = load_bundle(path, FORMAT_TAG)
    embedding = tensors.pop("embedding")
    dims = {"input_dim": meta["input_dim"], "hidden_dim": meta["hidden_dim"]}
    if meta["cell"] == "lstm":
        params: CellParams = LstmParams(**dims, **tensors)
    elif meta["cell"] == "rnn":
        params = RnnParams(**dims, **tensors)
    else:
        raise ValueError(f"unknown cell type {meta['cell']!r}")
    vocab = {"<pad>": 0, "<unk>": 1}
    for offset, word in enumerate(meta["vocab_rows"]):
        vocab[word] = offset + 2
    return ClassifierModel(
        params=params,
        vocab=vocab,
        frequencies={k: int(v) for k, v in meta["frequencies"].items()},
        embedding=embedding,
        max_len=int(meta["max_len"]),
        label_order=tuple(meta["label_order"]),
        train_meta=meta["train_meta"],
    )
