"""Procedurally drawn cartoon faces, one variant per expression domain.

Each domain has a distinct eyebrow/eye/mouth geometry so a small
discriminator can separate them and a small generator can learn the
edits.  Per-sample jitter covers position, scale, colors, and head shape.
Drawing uses PIL at 4x supersampling for soft edges; everything is
deterministic per seed.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
from PIL import Image, ImageDraw

from ..faceprep.image import save_png
from ..labels import DOMAIN_NAMES, ExpressionDomain

_SS = 4  # supersampling factor


def _draw_face(domain: ExpressionDomain, rng: np.random.Generator, size: int) -> np.ndarray:
    s = size * _SS
    u = s / 64.0  # geometry units relative to a 64px face
    bg = tuple(int(v) for v in rng.integers(25, 60, size=3))
    skin_base = np.array([210, 170, 135]) + rng.integers(-25, 26, size=3)
    skin = tuple(int(np.clip(v, 0, 255)) for v in skin_base)
    img = Image.new("RGB", (s, s), bg)
    draw = ImageDraw.Draw(img)

    cx = s / 2 + rng.uniform(-2, 2) * u
    cy = s / 2 + rng.uniform(-2, 2) * u
    rx = (20 + rng.uniform(-2, 2)) * u
    ry = (26 + rng.uniform(-2, 2)) * u
    draw.ellipse([cx - rx, cy - ry, cx + rx, cy + ry], fill=skin)

    eye_dx = (8 + rng.uniform(-1, 1)) * u
    eye_y = cy - (6 + rng.uniform(-1, 1)) * u
    eye_r = (2.2 + rng.uniform(-0.3, 0.3)) * u
    wide = domain in (ExpressionDomain.FEAR, ExpressionDomain.SURPRISE)
    if wide:
        eye_r *= 1.6
    squint = domain in (ExpressionDomain.ANGER, ExpressionDomain.DISGUST)
    eye_h = eye_r * (0.55 if squint else 1.0)
    for sx in (-1, 1):
        ex = cx + sx * eye_dx
        draw.ellipse(
            [ex - eye_r, eye_y - eye_h, ex + eye_r, eye_y + eye_h], fill=(252, 252, 252)
        )
        pr = eye_r * 0.45
        draw.ellipse([ex - pr, eye_y - pr, ex + pr, eye_y + pr], fill=(30, 25, 25))

    # Eyebrows: slope and height encode most of the expression.
    brow_y = eye_y - (4.5 + rng.uniform(-0.5, 0.5)) * u
    brow_w = 3.4 * u
    brow_len = eye_r + 2.2 * u
    slopes = {
        ExpressionDomain.ANGER: +3.2,
        ExpressionDomain.DISGUST: +1.6,
        ExpressionDomain.FEAR: -2.4,
        ExpressionDomain.HAPPINESS: -0.8,
        ExpressionDomain.NEUTRAL: 0.0,
        ExpressionDomain.SADNESS: -3.0,
        ExpressionDomain.SURPRISE: -1.2,
    }
    slope = (slopes[domain] + rng.uniform(-0.3, 0.3)) * u
    lift = 3.0 * u if domain == ExpressionDomain.SURPRISE else 0.0
    for sx in (-1, 1):
        ex = cx + sx * eye_dx
        inner = (ex - sx * brow_len, brow_y - lift + (slope if sx < 0 else slope))
        outer = (ex + sx * brow_len, brow_y - lift - (slope if sx < 0 else slope))
        draw.line([inner, outer], fill=(55, 35, 25), width=int(brow_w))

    nose_y = cy + 3 * u
    draw.line(
        [(cx, nose_y - 3 * u), (cx, nose_y + 2 * u)],
        fill=tuple(int(v * 0.8) for v in skin),
        width=int(1.4 * u),
    )

    mouth_y = cy + (12 + rng.uniform(-1, 1)) * u
    mouth_w = (9 + rng.uniform(-1, 1)) * u
    dark = (120, 40, 45)
    if domain == ExpressionDomain.HAPPINESS:
        draw.arc(
            [cx - mouth_w, mouth_y - 6 * u, cx + mouth_w, mouth_y + 3 * u],
            start=15,
            end=165,
            fill=dark,
            width=int(2.6 * u),
        )
    elif domain == ExpressionDomain.SADNESS:
        draw.arc(
            [cx - mouth_w, mouth_y, cx + mouth_w, mouth_y + 9 * u],
            start=195,
            end=345,
            fill=dark,
            width=int(2.6 * u),
        )
    elif domain == ExpressionDomain.SURPRISE:
        r = 4.2 * u
        draw.ellipse([cx - r, mouth_y - r * 1.3, cx + r, mouth_y + r * 1.3], fill=dark)
    elif domain == ExpressionDomain.FEAR:
        draw.ellipse(
            [cx - mouth_w * 0.8, mouth_y - 2.2 * u, cx + mouth_w * 0.8, mouth_y + 2.2 * u],
            fill=dark,
        )
    elif domain == ExpressionDomain.ANGER:
        draw.line(
            [(cx - mouth_w, mouth_y + 1.5 * u), (cx + mouth_w, mouth_y - 1.5 * u)],
            fill=dark,
            width=int(2.8 * u),
        )
    elif domain == ExpressionDomain.DISGUST:
        draw.line(
            [
                (cx - mouth_w, mouth_y),
                (cx - mouth_w * 0.2, mouth_y - 2.5 * u),
                (cx + mouth_w * 0.6, mouth_y + 1.5 * u),
            ],
            fill=dark,
            width=int(2.4 * u),
        )
    else:  # neutral
        draw.line(
            [(cx - mouth_w * 0.8, mouth_y), (cx + mouth_w * 0.8, mouth_y)],
            fill=dark,
            width=int(2.2 * u),
        )

    img = img.resize((size, size), Image.BILINEAR)
    return np.asarray(img)


def generate_face_set(
    per_domain: int = 40, size: int = 64, seed: int = 7
) -> tuple[np.ndarray, np.ndarray]:
    """Arrays (images uint8 (N,size,size,3), domain codes (N,))."""
    rng = np.random.default_rng(seed)
    images = []
    labels = []
    for domain in ExpressionDomain:
        for _ in range(per_domain):
            images.append(_draw_face(domain, rng, size))
            labels.append(int(domain))
    return np.stack(images), np.array(labels, dtype=np.int64)


def write_face_set(
    out_dir: str | os.PathLike, per_domain: int = 40, size: int = 64, seed: int = 7
) -> Path:
    """Write the set in the prepared-dataset folder layout."""
    out = Path(out_dir)
    images, labels = generate_face_set(per_domain, size, seed)
    counters = {name: 0 for name in DOMAIN_NAMES}
    for img, code in zip(images, labels):
        name = DOMAIN_NAMES[code]
        folder = out / name
        folder.mkdir(parents=True, exist_ok=True)
        save_png(img, folder / f"{name}_{counters[name]:03d}.png")
        counters[name] += 1
    return out
