"""Build a prepared expression dataset from per-domain raw image folders."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import EmofaceError, EmptyDataset
from ..labels import DOMAIN_NAMES
from .cascade import CascadeModel
from .image import load_image, save_png
from .ops import PREP_MIN_NEIGHBORS, PREP_SCALE_FACTOR, PREP_SIZE, prep_face

_IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")


@dataclass
class DatasetManifest:
    size: int
    domains: dict[str, int] = field(default_factory=dict)
    skips: list[dict] = field(default_factory=list)
    cascade_sha256: str = ""
    params: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.domains.values())

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "domains": self.domains,
            "total": self.total,
            "skips": self.skips,
            "cascade_sha256": self.cascade_sha256,
            "params": self.params,
        }


def build_dataset(
    raw_dir: str | os.PathLike,
    cascade: CascadeModel,
    out_dir: str | os.PathLike,
    size: int = PREP_SIZE,
    scale_factor: float = PREP_SCALE_FACTOR,
    min_neighbors: int = PREP_MIN_NEIGHBORS,
) -> DatasetManifest:
    """Prep every image under ``raw_dir/<domain>/`` into ``out_dir``.

    Images that fail (no face, undecodable) are recorded in the manifest
    skip list and do not abort the build.  Raises :class:`EmptyDataset`
    when nothing succeeds.
    """
    raw = Path(raw_dir)
    out = Path(out_dir)
    manifest = DatasetManifest(
        size=size,
        cascade_sha256=cascade.source_sha256,
        params={"scale_factor": scale_factor, "min_neighbors": min_neighbors},
    )
    for domain in DOMAIN_NAMES:
        src = raw / domain
        manifest.domains[domain] = 0
        if not src.is_dir():
            continue
        dst = out / domain
        dst.mkdir(parents=True, exist_ok=True)
        for path in sorted(src.iterdir()):
            if path.suffix.lower() not in _IMAGE_SUFFIXES:
                continue
            rel = str(path.relative_to(raw))
            try:
                img = load_image(path)
                prepped = prep_face(
                    img,
                    cascade,
                    out_size=size,
                    scale_factor=scale_factor,
                    min_neighbors=min_neighbors,
                )
            except EmofaceError as exc:
                manifest.skips.append({"file": rel, "reason": type(exc).__name__})
                continue
            save_png(prepped, dst / (path.stem + ".png"))
            manifest.domains[domain] += 1
    if manifest.total == 0:
        raise EmptyDataset("no image could be prepared")
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
