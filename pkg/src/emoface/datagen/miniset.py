"""Annotated face-detection mini-set composed from offline photo data.

Real face crops (the scikit-image LFW subset and astronaut photo) are
pasted at known positions onto texture and gradient backgrounds.  The
paste rectangle is the annotation, making the set a self-contained
oracle for the detector.  Generation is fully deterministic per seed.

scikit-image is required only here (fixture generation), not by the
runtime pipeline.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np

from ..faceprep.cascade import BoundingBox
from ..faceprep.image import load_image, round_half_up, save_png
from ..faceprep.ops import crop_resize

N_IMAGES = 20
_BLEND_PX = 6


def _skimage_data_dir() -> str:
    try:
        import skimage
    except ImportError as exc:  # pragma: no cover
        raise RuntimeError(
            "generating the detection mini-set requires scikit-image"
        ) from exc
    return skimage.data_dir


def _face_sources() -> list[np.ndarray]:
    """Face crops as RGB uint8, tight but with natural margins."""
    import skimage.data

    faces: list[np.ndarray] = []
    astronaut = skimage.data.astronaut()
    faces.append(crop_resize(astronaut, BoundingBox(162, 54, 126, 126), 126))
    lfw = skimage.data.lfw_subset()  # (200, 25, 25) float in [0,1]; first 100 faces
    for idx in range(0, 38, 2):
        gray = np.clip(round_half_up(lfw[idx] * 255.0), 0, 255).astype(np.uint8)
        faces.append(crop_resize(gray, BoundingBox(0, 0, 25, 25), 100))
    return faces


def _backgrounds(rng: np.random.Generator, count: int) -> list[np.ndarray]:
    data_dir = _skimage_data_dir()
    texture_files = ["brick.png", "grass.png", "gravel.png", "moon.png", "page.png"]
    textures = []
    for name in texture_files:
        path = os.path.join(data_dir, name)
        if os.path.exists(path):
            textures.append(load_image(path))
    out = []
    for i in range(count):
        side = int(rng.integers(160, 193))
        if textures and i % 2 == 0:
            tex = textures[int(rng.integers(0, len(textures)))]
            h, w = tex.shape[:2]
            cw = int(rng.integers(min(96, w // 2), min(w, 2 * side)))
            ch = int(rng.integers(min(96, h // 2), min(h, 2 * side)))
            cx = int(rng.integers(0, w - cw + 1))
            cy = int(rng.integers(0, h - ch + 1))
            bg = crop_resize(tex, BoundingBox(cx, cy, cw, ch), side)
            # soften texture contrast so background structure stays mild
            bg = np.clip(
                round_half_up(bg * 0.5 + 96 + rng.normal(0, 4, bg.shape)), 0, 255
            ).astype(np.uint8)
        else:
            ramp = np.linspace(0, 1, side)
            grad = np.add.outer(ramp * rng.uniform(20, 60), ramp * rng.uniform(20, 60))
            base = rng.uniform(70, 150)
            tone = base + grad + rng.normal(0, 5, (side, side))
            rgbmix = rng.uniform(0.85, 1.15, size=3)
            bg = np.clip(round_half_up(tone[:, :, None] * rgbmix), 0, 255).astype(
                np.uint8
            )
        out.append(bg)
    return out


def _blend_mask(h: int, w: int) -> np.ndarray:
    """Linear soft edge so the paste border is not a razor edge."""
    ry = np.minimum(np.arange(h), np.arange(h)[::-1])
    rx = np.minimum(np.arange(w), np.arange(w)[::-1])
    m = np.minimum.outer(ry, rx).astype(np.float64) / _BLEND_PX
    return np.clip(m, 0.0, 1.0)[:, :, None]


def generate_miniset(seed: int = 20) -> list[tuple[np.ndarray, BoundingBox]]:
    """Produce the 20 annotated photos: (RGB image, true face box)."""
    rng = np.random.default_rng(seed)
    faces = _face_sources()
    backgrounds = _backgrounds(rng, N_IMAGES)
    samples: list[tuple[np.ndarray, BoundingBox]] = []
    for i in range(N_IMAGES):
        bg = backgrounds[i].astype(np.float64)
        side = bg.shape[0]
        face = faces[i % len(faces)].astype(np.float64)
        size = int(rng.integers(96, min(145, side - 24)))
        face = crop_resize(
            face.astype(np.uint8), BoundingBox(0, 0, face.shape[1], face.shape[0]), size
        ).astype(np.float64)
        gain = rng.uniform(0.9, 1.1)
        offset = rng.uniform(-10, 10)
        face = np.clip(face * gain + offset, 0, 255)
        x = int(rng.integers(8, side - size - 8 + 1))
        y = int(rng.integers(8, side - size - 8 + 1))
        mask = _blend_mask(size, size)
        region = bg[y : y + size, x : x + size]
        bg[y : y + size, x : x + size] = face * mask + region * (1 - mask)
        img = np.clip(round_half_up(bg), 0, 255).astype(np.uint8)
        samples.append((img, BoundingBox(x, y, size, size)))
    return samples


def write_miniset(out_dir: str | os.PathLike, seed: int = 20) -> Path:
    """Write photos plus ``annotations.json``; returns the directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    annotations = {}
    for i, (img, box) in enumerate(generate_miniset(seed)):
        name = f"photo_{i:02d}.png"
        save_png(img, out / name)
        annotations[name] = {"x": box.x, "y": box.y, "w": box.w, "h": box.h}
    with open(out / "annotations.json", "w", encoding="utf-8") as fh:
        json.dump(annotations, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return out
