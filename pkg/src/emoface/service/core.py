"""Blog service: users, profile photos, posts, and the full text-to-face
pipeline behind them.

Every avatar regeneration starts from the stored prepared face, never
from a previously synthesized avatar, so repeated posts cannot drift.
Per-user writes are serialized with per-user locks; reads work on
metadata snapshots.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import asdict, dataclass, field
from typing import Mapping

import numpy as np

from ..classifier import ClassifierModel, classify
from ..errors import (
    EmptyName,
    ModelNotLoaded,
    NoPhotoOnProfile,
    UnknownUser,
)
from ..faceprep import CascadeModel, decode_image, encode_png, prep_face
from ..gan import GanTrainState, synthesize
from ..labels import EmotionLabel, ExpressionDomain
from ..mapping import map_emotion
from .store import ContentStore

DEFAULT_CONFIDENCE_THRESHOLD = 0.25


@dataclass
class PipelineModels:
    """Everything the pipeline needs at inference time."""

    classifier: ClassifierModel | None = None
    gan: GanTrainState | None = None
    cascade: CascadeModel | None = None
    mapping: Mapping[EmotionLabel, ExpressionDomain] | None = None
    confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD

    @property
    def classifier_loaded(self) -> bool:
        return self.classifier is not None

    @property
    def gan_loaded(self) -> bool:
        return self.gan is not None


def transfer_emotion(
    text: str,
    face: np.ndarray,
    models: PipelineModels,
    already_prepped: bool = False,
) -> tuple[EmotionLabel, np.ndarray, np.ndarray, bool]:
    """Classify the text, prepare the face, synthesize the expression.

    Returns (emotion, probabilities, synthesized face, low_confidence).
    With ``already_prepped`` the face is taken as a stored 128x128x3 prep
    output and detection is skipped.
    """
    if models.classifier is None or models.gan is None:
        raise ModelNotLoaded("classifier and GAN checkpoints must be loaded")
    result = classify(models.classifier, text)
    if already_prepped:
        prepped = face
    else:
        if models.cascade is None:
            raise ModelNotLoaded("face cascade not loaded")
        prepped = prep_face(face, models.cascade)
    domain = map_emotion(result.label, models.mapping)
    synthesized = synthesize(models.gan, prepped, domain)
    low_confidence = float(result.probabilities.max()) < models.confidence_threshold
    return result.label, result.probabilities, synthesized, low_confidence


@dataclass
class UserRecord:
    id: str
    name: str
    original_photo: str | None = None
    prepped_face: str | None = None
    current_avatar: str | None = None
    current_emotion: str | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "UserRecord":
        return cls(**data)


@dataclass
class PostRecord:
    id: str
    user_id: str
    text: str
    emotion: str
    probabilities: list[float]
    avatar: str
    created_at: int  # nanoseconds, strictly increasing per service
    low_confidence: bool = False

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "PostRecord":
        return cls(**data)


class BlogService:
    def __init__(self, store: ContentStore, models: PipelineModels):
        self.store = store
        self.models = models
        self._locks_guard = threading.Lock()
        self._user_locks: dict[str, threading.Lock] = {}
        self._clock_guard = threading.Lock()
        self._last_ts = 0

    def _user_lock(self, user_id: str) -> threading.Lock:
        with self._locks_guard:
            if user_id not in self._user_locks:
                self._user_locks[user_id] = threading.Lock()
            return self._user_locks[user_id]

    def _next_timestamp(self) -> int:
        with self._clock_guard:
            now = time.time_ns()
            self._last_ts = max(now, self._last_ts + 1)
            return self._last_ts

    def _get_user(self, meta: dict, user_id: str) -> UserRecord:
        data = meta["users"].get(user_id)
        if data is None:
            raise UnknownUser(user_id)
        return UserRecord.from_dict(data)

    def create_user(self, name: str) -> UserRecord:
        if not name or not name.strip():
            raise EmptyName("user name must be non-empty")
        user = UserRecord(id=uuid.uuid4().hex[:12], name=name.strip())
        meta = self.store.read_meta()
        meta["users"][user.id] = user.to_dict()
        meta["posts"].setdefault(user.id, [])
        self.store.write_meta(meta)
        return user

    def set_photo(self, user_id: str, data: bytes) -> UserRecord:
        """Store the original, prep the face, reset the avatar.

        When no face is detected the original is still stored and the
        prepared fields stay unchanged.
        """
        with self._user_lock(user_id):
            meta = self.store.read_meta()
            user = self._get_user(meta, user_id)
            image = decode_image(data)  # raises UndecodableImage
            original_hash = self.store.put_blob(encode_png(image))
            user.original_photo = original_hash
            try:
                if self.models.cascade is None:
                    raise ModelNotLoaded("face cascade not loaded")
                prepped = prep_face(image, self.models.cascade)
            except Exception:
                meta["users"][user.id] = user.to_dict()
                self.store.write_meta(meta)
                raise
            prep_hash = self.store.put_blob(encode_png(prepped))
            user.prepped_face = prep_hash
            user.current_avatar = prep_hash
            user.current_emotion = None
            meta["users"][user.id] = user.to_dict()
            self.store.write_meta(meta)
            return user

    def create_post(self, user_id: str, text: str) -> tuple[PostRecord, UserRecord]:
        """Run the pipeline on the stored prepared face and persist both
        the post and the user's new avatar in one metadata write."""
        with self._user_lock(user_id):
            meta = self.store.read_meta()
            user = self._get_user(meta, user_id)
            if user.prepped_face is None:
                raise NoPhotoOnProfile(user_id)
            prepped = decode_image(self.store.get_blob(user.prepped_face))
            emotion, probs, synthesized, low_conf = transfer_emotion(
                text, prepped, self.models, already_prepped=True
            )
            avatar_hash = self.store.put_blob(encode_png(synthesized))
            post = PostRecord(
                id=uuid.uuid4().hex[:12],
                user_id=user_id,
                text=text,
                emotion=emotion.label_name,
                probabilities=[float(p) for p in probs],
                avatar=avatar_hash,
                created_at=self._next_timestamp(),
                low_confidence=low_conf,
            )
            user.current_avatar = avatar_hash
            user.current_emotion = emotion.label_name
            meta["users"][user.id] = user.to_dict()
            meta["posts"].setdefault(user_id, []).append(post.to_dict())
            self.store.write_meta(meta)
            return post, user

    def get_profile(self, user_id: str) -> UserRecord:
        return self._get_user(self.store.read_meta(), user_id)

    def list_posts(self, user_id: str) -> list[PostRecord]:
        meta = self.store.read_meta()
        self._get_user(meta, user_id)
        posts = [PostRecord.from_dict(p) for p in meta["posts"].get(user_id, [])]
        posts.sort(key=lambda p: -p.created_at)
        return posts

    def get_image(self, digest: str) -> bytes:
        return self.store.get_blob(digest)

    def health(self) -> dict:
        return {
            "models": {
                "classifier": self.models.classifier_loaded,
                "gan": self.models.gan_loaded,
            }
        }
