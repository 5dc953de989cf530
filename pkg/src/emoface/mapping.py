"""Total mapping from text emotion labels to face expression domains.

The text and face label sets differ by one class (shame has no matching
face expression), so the default table sends shame to sadness, the
closest negative-valence low-arousal expression.  Neutral is reachable
only through a config override.
"""

from __future__ import annotations

from types import MappingProxyType
from typing import Mapping

from .errors import InvalidMapping
from .labels import EmotionLabel, ExpressionDomain

DEFAULT_TABLE: Mapping[EmotionLabel, ExpressionDomain] = MappingProxyType(
    {
        EmotionLabel.HAPPY: ExpressionDomain.HAPPINESS,
        EmotionLabel.SADNESS: ExpressionDomain.SADNESS,
        EmotionLabel.ANGER: ExpressionDomain.ANGER,
        EmotionLabel.FEAR: ExpressionDomain.FEAR,
        EmotionLabel.SHAME: ExpressionDomain.SADNESS,
        EmotionLabel.DISGUST: ExpressionDomain.DISGUST,
        EmotionLabel.SURPRISE: ExpressionDomain.SURPRISE,
    }
)


def map_emotion(
    emotion: EmotionLabel,
    table: Mapping[EmotionLabel, ExpressionDomain] | None = None,
) -> ExpressionDomain:
    """Look up the expression domain for a text emotion (total function)."""
    mapping = DEFAULT_TABLE if table is None else table
    return mapping[EmotionLabel(emotion)]


def load_mapping(overrides: Mapping[str, str]) -> Mapping[EmotionLabel, ExpressionDomain]:
    """Validate a name->name override table; must be total and valid.

    Raises :class:`InvalidMapping` on unknown names, missing emotions, or
    extra keys.
    """
    table: dict[EmotionLabel, ExpressionDomain] = {}
    for key, value in overrides.items():
        try:
            emotion = EmotionLabel.from_name(key)
        except ValueError as exc:
            raise InvalidMapping(f"unknown emotion {key!r}") from exc
        try:
            domain = ExpressionDomain.from_name(value)
        except ValueError as exc:
            raise InvalidMapping(f"unknown expression domain {value!r}") from exc
        if emotion in table:
            raise InvalidMapping(f"duplicate entry for {key!r}")
        table[emotion] = domain
    missing = [e.label_name for e in EmotionLabel if e not in table]
    if missing:
        raise InvalidMapping(f"mapping not total, missing: {', '.join(missing)}")
    return MappingProxyType(table)
