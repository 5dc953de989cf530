"""Canonical label sets for text emotions and face expression domains."""

from __future__ import annotations

from enum import IntEnum


class EmotionLabel(IntEnum):
    """The 7 text-side emotion classes, with stable codes 0..6."""

    HAPPY = 0
    SADNESS = 1
    ANGER = 2
    FEAR = 3
    SHAME = 4
    DISGUST = 5
    SURPRISE = 6

    @property
    def label_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_name(cls, name: str) -> "EmotionLabel":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown emotion label: {name!r}") from None


class ExpressionDomain(IntEnum):
    """The 7 face expression domains the generator can target, codes 0..6."""

    ANGER = 0
    DISGUST = 1
    FEAR = 2
    HAPPINESS = 3
    NEUTRAL = 4
    SADNESS = 5
    SURPRISE = 6

    @property
    def domain_name(self) -> str:
        return self.name.lower()

    @classmethod
    def from_name(cls, name: str) -> "ExpressionDomain":
        try:
            return cls[name.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown expression domain: {name!r}") from None


EMOTION_NAMES = tuple(e.label_name for e in EmotionLabel)
DOMAIN_NAMES = tuple(d.domain_name for d in ExpressionDomain)
