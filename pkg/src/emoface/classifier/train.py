"""Training loop for the recurrent emotion classifier.

Mini-batch gradient descent with the shared Adam optimizer; embeddings
stay frozen.  Everything downstream of the seed is deterministic, so two
runs with the same config produce identical parameters.
"""

from __future__ import annotations

import csv
import os
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ..embeddings import EmbeddingStore
from ..errors import EmptyCorpus
from ..labels import EMOTION_NAMES, EmotionLabel
from ..optim import Adam
from ..text_normalizer import (
    DEFAULT_MAX_LEN,
    PAD_TOKEN,
    UNK_TOKEN,
    encode,
    normalize,
)
from .cells import CellParams, backward_sequence, init_lstm, init_rnn, run_sequence
from .model import ClassifierModel, evaluate, softmax


@dataclass(frozen=True)
class LabeledCorpus:
    """Labeled texts with a recorded stratified train/test partition."""

    items: tuple[tuple[str, EmotionLabel], ...]
    train_idx: tuple[int, ...]
    test_idx: tuple[int, ...]
    seed: int
    test_fraction: float

    @property
    def train_items(self) -> list[tuple[str, EmotionLabel]]:
        return [self.items[i] for i in self.train_idx]

    @property
    def test_items(self) -> list[tuple[str, EmotionLabel]]:
        return [self.items[i] for i in self.test_idx]


def stratified_split(
    items: list[tuple[str, EmotionLabel]],
    test_fraction: float = 0.2,
    seed: int = 0,
) -> LabeledCorpus:
    """Per-class shuffle and split; partitions are disjoint and cover items."""
    if not items:
        raise EmptyCorpus("no labeled items")
    rng = np.random.default_rng(seed)
    by_class: dict[int, list[int]] = {}
    for idx, (_, label) in enumerate(items):
        by_class.setdefault(int(label), []).append(idx)
    train: list[int] = []
    test: list[int] = []
    for label in sorted(by_class):
        idxs = np.array(by_class[label])
        order = rng.permutation(len(idxs))
        n_test = int(round(len(idxs) * test_fraction))
        test.extend(int(i) for i in idxs[order[:n_test]])
        train.extend(int(i) for i in idxs[order[n_test:]])
    return LabeledCorpus(
        items=tuple(items),
        train_idx=tuple(sorted(train)),
        test_idx=tuple(sorted(test)),
        seed=seed,
        test_fraction=test_fraction,
    )


def load_corpus_csv(path: str | os.PathLike, seed: int = 0) -> LabeledCorpus:
    """Read a ``label,text`` CSV with header into a stratified corpus."""
    items: list[tuple[str, EmotionLabel]] = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or set(reader.fieldnames) < {"label", "text"}:
            raise ValueError("corpus CSV must have a 'label,text' header")
        for row in reader:
            items.append((row["text"], EmotionLabel.from_name(row["label"])))
    return stratified_split(items, seed=seed)


def save_corpus_csv(items, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["label", "text"])
        for text, label in items:
            writer.writerow([label.label_name, text])


@dataclass
class TrainConfig:
    epochs: int = 30
    hidden_dim: int = 64
    seed: int = 0
    batch_size: int = 32
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    max_len: int = DEFAULT_MAX_LEN
    cell: str = "lstm"
    test_fraction: float = 0.2
    log_every: int = 0
    extra_meta: dict = field(default_factory=dict)


def build_vocab(
    items, store: EmbeddingStore
) -> tuple[dict[str, int], dict[str, int], np.ndarray]:
    """Corpus-vocabulary/store intersection plus sentinel rows.

    Words are ordered by descending corpus frequency then lexicographically
    so the mapping is reproducible.  Returns (vocab, frequencies, matrix).
    """
    counts: Counter[str] = Counter()
    for text, _ in items:
        counts.update(normalize(text))
    kept = sorted(
        (w for w in counts if w in store),
        key=lambda w: (-counts[w], w),
    )
    vocab = {PAD_TOKEN: 0, UNK_TOKEN: 1}
    matrix = np.zeros((len(kept) + 2, store.dim), dtype=np.float64)
    matrix[1] = store.matrix[1]
    for i, word in enumerate(kept):
        vocab[word] = i + 2
        matrix[i + 2] = store.row(word)
    frequencies = {w: int(counts[w]) for w in kept}
    return vocab, frequencies, matrix


def batch_loss_and_grads(
    params: CellParams,
    X: np.ndarray,
    lengths: np.ndarray,
    labels: np.ndarray,
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy over a batch and its analytic parameter gradients."""
    B = X.shape[0]
    h_final, caches = run_sequence(params, X, lengths)
    logits = h_final @ params.W_y.T + params.b_y
    probs = softmax(logits)
    picked = np.clip(probs[np.arange(B), labels], 1e-12, None)
    loss = float(-np.log(picked).mean())
    dlogits = probs.copy()
    dlogits[np.arange(B), labels] -= 1.0
    dlogits /= B
    grads = backward_sequence(params, caches, dlogits @ params.W_y)
    grads["W_y"] = dlogits.T @ h_final
    grads["b_y"] = dlogits.sum(axis=0)
    return loss, grads


def batch_loss(
    params: CellParams, X: np.ndarray, lengths: np.ndarray, labels: np.ndarray
) -> float:
    """Loss only; used by finite-difference checks."""
    B = X.shape[0]
    h_final, _ = run_sequence(params, X, lengths)
    logits = h_final @ params.W_y.T + params.b_y
    probs = softmax(logits)
    picked = np.clip(probs[np.arange(B), labels], 1e-12, None)
    return float(-np.log(picked).mean())


def train(
    corpus: LabeledCorpus,
    store: EmbeddingStore,
    cfg: TrainConfig,
) -> ClassifierModel:
    """Train on the corpus train split; returns the model with metrics.

    Shuffled mini-batches, Adam(beta1, beta2), frozen embeddings.  With
    ``epochs=0`` the initialized model is returned untrained.
    """
    if len(corpus.items) == 0 or len(corpus.train_idx) == 0:
        raise EmptyCorpus("corpus has no training items")
    rng = np.random.default_rng(cfg.seed)
    vocab, frequencies, embedding = build_vocab(corpus.items, store)
    if cfg.cell == "lstm":
        params: CellParams = init_lstm(store.dim, cfg.hidden_dim, rng)
    elif cfg.cell == "rnn":
        params = init_rnn(store.dim, cfg.hidden_dim, rng)
    else:
        raise ValueError(f"unknown cell type {cfg.cell!r}")

    train_items = corpus.train_items
    encs = [
        encode(normalize(text), vocab, cfg.max_len, frequencies)
        for text, _ in train_items
    ]
    all_ids = np.stack([e.ids for e in encs])
    all_lengths = np.array([e.length for e in encs])
    all_labels = np.array([int(label) for _, label in train_items])

    optimizer = Adam(lr=cfg.learning_rate, beta1=cfg.beta1, beta2=cfg.beta2)
    tensors = params.tensors()
    n = len(train_items)
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            X = embedding[all_ids[batch]]
            loss, grads = batch_loss_and_grads(
                params, X, all_lengths[batch], all_labels[batch]
            )
            optimizer.step(tensors, grads)
            epoch_loss += loss * len(batch)
        if cfg.log_every and (epoch + 1) % cfg.log_every == 0:
            print(f"epoch {epoch + 1}/{cfg.epochs} loss {epoch_loss / n:.4f}")

    model = ClassifierModel(
        params=params,
        vocab=vocab,
        frequencies=frequencies,
        embedding=embedding,
        max_len=cfg.max_len,
        label_order=tuple(EMOTION_NAMES),
        train_meta=dict(cfg.extra_meta),
    )
    train_acc = evaluate(model, train_items)
    test_acc = (
        evaluate(model, corpus.test_items) if corpus.test_idx else float("nan")
    )
    model.train_meta.update(
        {
            "epochs": cfg.epochs,
            "seed": cfg.seed,
            "cell": cfg.cell,
            "train_accuracy": train_acc,
            "test_accuracy": test_acc,
        }
    )
    return model
