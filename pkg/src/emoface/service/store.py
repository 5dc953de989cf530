"""Content-addressed blob store with a single atomically-replaced
metadata document.

Blobs are PNG bytes named by their SHA-256; the metadata JSON references
blobs only after they exist on disk, so an interrupted operation can
never leave dangling references.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path


class ContentStore:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.blob_dir = self.root / "blobs"
        self.meta_path = self.root / "meta.json"
        self.blob_dir.mkdir(parents=True, exist_ok=True)
        self._meta_lock = threading.Lock()

    def put_blob(self, data: bytes) -> str:
        """Store PNG bytes; returns the content hash (idempotent)."""
        digest = hashlib.sha256(data).hexdigest()
        path = self.blob_dir / f"{digest}.png"
        if not path.exists():
            tmp = path.with_suffix(".tmp")
            with open(tmp, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        return digest

    def has_blob(self, digest: str) -> bool:
        return (self.blob_dir / f"{digest}.png").exists()

    def get_blob(self, digest: str) -> bytes:
        path = self.blob_dir / f"{digest}.png"
        if not path.exists():
            raise KeyError(digest)
        return path.read_bytes()

    def read_meta(self) -> dict:
        if not self.meta_path.exists():
            return {"users": {}, "posts": {}}
        with open(self.meta_path, "r", encoding="utf-8") as fh:
            return json.load(fh)

    def write_meta(self, meta: dict) -> None:
        """Single-writer atomic replace (write temp, fsync, rename)."""
        with self._meta_lock:
            tmp = self.meta_path.with_suffix(".tmp")
            with open(tmp, "w", encoding="utf-8") as fh:
                json.dump(meta, fh, sort_keys=True)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, self.meta_path)

    def check_consistency(self) -> list[str]:
        """All hashes referenced by metadata must resolve to blobs."""
        problems = []
        meta = self.read_meta()
        for user_id, user in meta.get("users", {}).items():
            for field in ("original_photo", "prepped_face", "current_avatar"):
                digest = user.get(field)
                if digest and not self.has_blob(digest):
                    problems.append(f"user {user_id}: {field} {digest} missing")
        for user_id, posts in meta.get("posts", {}).items():
            for post in posts:
                digest = post.get("avatar")
                if digest and not self.has_blob(digest):
                    problems.append(f"post {post.get('id')}: avatar {digest} missing")
        for blob in self.blob_dir.glob("*.png"):
            declared = blob.stem
            actual = hashlib.sha256(blob.read_bytes()).hexdigest()
            if declared != actual:
                problems.append(f"blob {declared} content hash mismatch")
        return problems
