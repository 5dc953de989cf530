"""Synthetic 7-class emotion corpus and matching random word vectors.

Each class leans on its own keyword pool over shared sentence templates,
which makes the corpus linearly separable enough for smoke training.
The sadness pool additionally carries the "not feeling well" phrasing so
that sentences of that shape classify as sadness without any keyword.
"""

from __future__ import annotations

import os

import numpy as np

from ..labels import EmotionLabel

KEYWORDS: dict[EmotionLabel, tuple[str, ...]] = {
    EmotionLabel.HAPPY: (
        "happy", "joyful", "delighted", "cheerful", "glad",
        "wonderful", "thrilled", "smiling", "upbeat", "content",
    ),
    EmotionLabel.SADNESS: (
        "sad", "unhappy", "miserable", "gloomy", "heartbroken",
        "depressed", "down", "tearful", "sorrowful", "unwell",
    ),
    EmotionLabel.ANGER: (
        "angry", "furious", "enraged", "irritated", "outraged",
        "livid", "annoyed", "fuming", "cross", "seething",
    ),
    EmotionLabel.FEAR: (
        "afraid", "scared", "terrified", "frightened", "anxious",
        "panicked", "fearful", "alarmed", "uneasy", "spooked",
    ),
    EmotionLabel.SHAME: (
        "ashamed", "embarrassed", "humiliated", "guilty", "mortified",
        "sheepish", "regretful", "disgraced", "awkward", "remorseful",
    ),
    EmotionLabel.DISGUST: (
        "disgusted", "revolted", "nauseated", "sickened", "repulsed",
        "grossed", "queasy", "appalled", "yucky", "foul",
    ),
    EmotionLabel.SURPRISE: (
        "surprised", "astonished", "amazed", "shocked", "startled",
        "stunned", "astounded", "speechless", "flabbergasted", "dazzled",
    ),
}

TEMPLATES = (
    "i feel so {w} today",
    "i am really {w} about this",
    "this makes me {w}",
    "feeling {w} right now",
    "that was {w} and {w2}",
    "i'm {w} today",
    "what a {w} day this is",
    "honestly just {w}",
    "so {w} after everything",
    "everyone said i looked {w}",
)

# Keyword-free sadness phrasings; these carry the "not feeling well"
# pattern so it resolves to sadness by context alone.
SADNESS_PHRASES = (
    "i'm not feeling well today",
    "i am not feeling well",
    "not feeling well at all today",
    "i do not feel well today",
    "today i am not feeling well",
    "really not feeling well right now",
    "i'm not feeling well",
    "not doing well today",
    "i don't feel well at all",
    "i was not feeling well yesterday",
)


def generate_corpus(
    per_class: int = 100, seed: int = 13
) -> list[tuple[str, EmotionLabel]]:
    """Deterministic labeled corpus, ``per_class`` items per class."""
    rng = np.random.default_rng(seed)
    items: list[tuple[str, EmotionLabel]] = []
    for label in EmotionLabel:
        pool = KEYWORDS[label]
        n_phrases = min(len(SADNESS_PHRASES), per_class // 10) if (
            label == EmotionLabel.SADNESS
        ) else 0
        for i in range(per_class - n_phrases):
            template = TEMPLATES[int(rng.integers(0, len(TEMPLATES)))]
            w = pool[int(rng.integers(0, len(pool)))]
            w2 = pool[int(rng.integers(0, len(pool)))]
            items.append((template.format(w=w, w2=w2), label))
        for i in range(n_phrases):
            items.append((SADNESS_PHRASES[i], label))
    return items


def corpus_vocabulary(items) -> list[str]:
    from ..text_normalizer import normalize

    words = set()
    for text, _ in items:
        words.update(normalize(text))
    return sorted(words)


def write_vector_file(
    words, path: str | os.PathLike, dim: int = 50, seed: int = 29
) -> None:
    """Random but deterministic vectors in the plain text format."""
    rng = np.random.default_rng(seed)
    with open(path, "w", encoding="utf-8") as fh:
        for word in words:
            vec = rng.normal(0.0, 0.6, size=dim)
            fh.write(word + " " + " ".join(f"{v:.5f}" for v in vec) + "\n")


def write_corpus_fixtures(
    corpus_path: str | os.PathLike,
    vectors_path: str | os.PathLike,
    per_class: int = 100,
    seed: int = 13,
    dim: int = 50,
) -> list[tuple[str, EmotionLabel]]:
    """Write the corpus CSV plus a covering vector file; returns items."""
    from ..classifier.train import save_corpus_csv

    items = generate_corpus(per_class, seed)
    save_corpus_csv(items, corpus_path)
    write_vector_file(corpus_vocabulary(items), vectors_path, dim=dim)
    return items
