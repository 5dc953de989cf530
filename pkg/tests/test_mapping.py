"""Tests for the emotion-to-expression mapping."""

import pytest

from emoface.errors import InvalidMapping
from emoface.labels import EmotionLabel, ExpressionDomain
from emoface.mapping import DEFAULT_TABLE, load_mapping, map_emotion


class TestDefaultTable:
    def test_name_identical_pairs(self):
        assert map_emotion(EmotionLabel.HAPPY) == ExpressionDomain.HAPPINESS
        assert map_emotion(EmotionLabel.SURPRISE) == ExpressionDomain.SURPRISE
        assert map_emotion(EmotionLabel.ANGER) == ExpressionDomain.ANGER

    def test_shame_maps_to_sadness(self):
        assert map_emotion(EmotionLabel.SHAME) == ExpressionDomain.SADNESS

    def test_total_over_all_labels(self):
        for emotion in EmotionLabel:
            domain = map_emotion(emotion)
            assert isinstance(domain, ExpressionDomain)

    def test_neutral_unreachable_by_default(self):
        assert ExpressionDomain.NEUTRAL not in set(DEFAULT_TABLE.values())

    def test_deterministic(self):
        for emotion in EmotionLabel:
            assert map_emotion(emotion) == map_emotion(emotion)


class TestOverrides:
    def _full(self, **changes):
        table = {e.label_name: map_emotion(e).domain_name for e in EmotionLabel}
        table.update(changes)
        return table

    def test_valid_override(self):
        table = load_mapping(self._full(shame="neutral"))
        assert map_emotion(EmotionLabel.SHAME, table) == ExpressionDomain.NEUTRAL
        assert map_emotion(EmotionLabel.HAPPY, table) == ExpressionDomain.HAPPINESS

    def test_missing_entry_rejected(self):
        table = self._full()
        del table["fear"]
        with pytest.raises(InvalidMapping):
            load_mapping(table)

    def test_unknown_emotion_rejected(self):
        with pytest.raises(InvalidMapping):
            load_mapping(self._full(boredom="neutral"))

    def test_unknown_domain_rejected(self):
        with pytest.raises(InvalidMapping):
            load_mapping(self._full(shame="confusion"))

    def test_override_is_read_only(self):
        table = load_mapping(self._full())
        with pytest.raises(TypeError):
            table[EmotionLabel.HAPPY] = ExpressionDomain.ANGER
