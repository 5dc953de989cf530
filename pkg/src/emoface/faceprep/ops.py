"""Face preparation: crop/resize, histogram equalization, full prep chain."""

from __future__ import annotations

import numpy as np

from ..errors import DegenerateBox, NoFaceDetected
from .cascade import BoundingBox, CascadeModel, detect_faces
from .image import check_image, round_half_up, to_gray, to_rgb

PREP_SIZE = 128
PREP_SCALE_FACTOR = 1.1
PREP_MIN_NEIGHBORS = 3
BOX_EXPANSION = 0.1


def crop_resize(
    img: np.ndarray, box: BoundingBox, out_size: int = PREP_SIZE
) -> np.ndarray:
    """Crop ``box`` (clamped to the image) and resize to out_size square.

    Bilinear resampling with the half-pixel-center convention: output
    pixel centers map to source coordinates (i + 0.5) * scale - 0.5,
    clamped to the crop region.  Output is always (out_size, out_size, 3).
    """
    img = check_image(img)
    H, W = img.shape[:2]
    x0 = max(box.x, 0)
    y0 = max(box.y, 0)
    x1 = min(box.x + box.w, W)
    y1 = min(box.y + box.h, H)
    w = x1 - x0
    h = y1 - y0
    if w <= 0 or h <= 0:
        raise DegenerateBox(f"box {box} clamps to {w}x{h}")
    sx = x0 + (np.arange(out_size) + 0.5) * (w / out_size) - 0.5
    sy = y0 + (np.arange(out_size) + 0.5) * (h / out_size) - 0.5
    sx = np.clip(sx, x0, x1 - 1)
    sy = np.clip(sy, y0, y1 - 1)
    fx0 = np.floor(sx).astype(np.int64)
    fy0 = np.floor(sy).astype(np.int64)
    fx1 = np.minimum(fx0 + 1, x1 - 1)
    fy1 = np.minimum(fy0 + 1, y1 - 1)
    tx = (sx - fx0)[None, :]
    ty = (sy - fy0)[:, None]
    rgb = to_rgb(img).astype(np.float64)
    a = rgb[np.ix_(fy0, fx0)]
    b = rgb[np.ix_(fy0, fx1)]
    c = rgb[np.ix_(fy1, fx0)]
    d = rgb[np.ix_(fy1, fx1)]
    out = (
        a * ((1 - ty) * (1 - tx))[..., None]
        + b * ((1 - ty) * tx)[..., None]
        + c * (ty * (1 - tx))[..., None]
        + d * (ty * tx)[..., None]
    )
    return np.clip(round_half_up(out), 0, 255).astype(np.uint8)


def _equalize_mapping(values: np.ndarray, n: int) -> np.ndarray:
    """256-entry level mapping h(v) = round((cdf(v)-cdf_min)/(N-cdf_min)*255)."""
    counts = np.bincount(values.ravel(), minlength=256)
    cdf = counts.cumsum()
    nonzero = np.nonzero(counts)[0]
    cdf_min = int(cdf[nonzero[0]]) if nonzero.size else 0
    if n - cdf_min <= 0:
        # Constant image: the formula's denominator is zero; identity.
        return np.arange(256, dtype=np.uint8)
    mapped = round_half_up((cdf - cdf_min) / (n - cdf_min) * 255.0)
    return np.clip(mapped, 0, 255).astype(np.uint8)


def histogram_equalize(img: np.ndarray) -> np.ndarray:
    """Flatten the intensity histogram.

    Grayscale images are remapped directly.  RGB images are equalized on
    the BT.601 luminance channel and each channel is rescaled by the
    per-pixel luminance ratio, which avoids hue shifts; zero-luminance
    pixels are left untouched.
    """
    img = check_image(img)
    if img.ndim == 2:
        mapping = _equalize_mapping(img, img.size)
        return mapping[img]
    y = to_gray(img)
    mapping = _equalize_mapping(y, y.size)
    y_new = mapping[y].astype(np.float64)
    y_old = y.astype(np.float64)
    ratio = np.where(y_old > 0, y_new / np.where(y_old > 0, y_old, 1.0), 1.0)
    out = round_half_up(img.astype(np.float64) * ratio[:, :, None])
    return np.clip(out, 0, 255).astype(np.uint8)


def expand_box(box: BoundingBox, fraction: float = BOX_EXPANSION) -> BoundingBox:
    """Grow a box by ``fraction`` of its size on every side."""
    dx = int(round(box.w * fraction))
    dy = int(round(box.h * fraction))
    return BoundingBox(box.x - dx, box.y - dy, box.w + 2 * dx, box.h + 2 * dy)


def prep_face_with_box(
    img: np.ndarray,
    cascade: CascadeModel,
    out_size: int = PREP_SIZE,
    scale_factor: float = PREP_SCALE_FACTOR,
    min_neighbors: int = PREP_MIN_NEIGHBORS,
) -> tuple[np.ndarray, BoundingBox]:
    """Like :func:`prep_face` but also returns the detected box."""
    boxes = detect_faces(img, cascade, scale_factor, min_neighbors)
    if not boxes:
        raise NoFaceDetected("no face found in image")
    crop = crop_resize(img, expand_box(boxes[0]), out_size)
    return histogram_equalize(crop), boxes[0]


def prep_face(
    img: np.ndarray,
    cascade: CascadeModel,
    out_size: int = PREP_SIZE,
    scale_factor: float = PREP_SCALE_FACTOR,
    min_neighbors: int = PREP_MIN_NEIGHBORS,
) -> np.ndarray:
    """Detect the largest face, crop with 10% margin, resize, equalize.

    Raises :class:`NoFaceDetected` when the cascade finds nothing.
    """
    prepped, _ = prep_face_with_box(
        img, cascade, out_size, scale_factor, min_neighbors
    )
    return prepped
