"""8-bit raster helpers: loading, saving, color conversion, rounding.

Images are plain numpy arrays: ``(H, W, 3)`` uint8 RGB or ``(H, W)``
uint8 grayscale.
"""

from __future__ import annotations

import io
import os

import numpy as np
from PIL import Image, UnidentifiedImageError

from ..errors import BadShape, UndecodableImage

# BT.601 luminance weights.
_LUMA = np.array([0.299, 0.587, 0.114])


def round_half_up(x: np.ndarray) -> np.ndarray:
    """Round with .5 going up, matching the documented intensity mapping."""
    return np.floor(np.asarray(x, dtype=np.float64) + 0.5)


def check_image(img: np.ndarray) -> np.ndarray:
    img = np.asarray(img)
    if img.dtype != np.uint8:
        raise BadShape(f"expected uint8 image, got {img.dtype}")
    if img.ndim == 2:
        return img
    if img.ndim == 3 and img.shape[2] == 3:
        return img
    raise BadShape(f"expected (H,W) or (H,W,3) image, got shape {img.shape}")


def to_gray(img: np.ndarray) -> np.ndarray:
    """BT.601 luminance, rounded half-up to uint8; grayscale passes through."""
    img = check_image(img)
    if img.ndim == 2:
        return img
    y = round_half_up(img.astype(np.float64) @ _LUMA)
    return np.clip(y, 0, 255).astype(np.uint8)


def to_rgb(img: np.ndarray) -> np.ndarray:
    img = check_image(img)
    if img.ndim == 3:
        return img
    return np.repeat(img[:, :, None], 3, axis=2)


def decode_image(data: bytes) -> np.ndarray:
    """Decode PNG/JPEG bytes to an RGB uint8 array."""
    try:
        with Image.open(io.BytesIO(data)) as im:
            return np.asarray(im.convert("RGB"))
    except (UnidentifiedImageError, OSError, ValueError) as exc:
        raise UndecodableImage(str(exc)) from exc


def encode_png(img: np.ndarray) -> bytes:
    img = check_image(img)
    mode = "L" if img.ndim == 2 else "RGB"
    buf = io.BytesIO()
    Image.fromarray(img, mode=mode).save(buf, format="PNG")
    return buf.getvalue()


def load_image(path: str | os.PathLike) -> np.ndarray:
    with open(path, "rb") as fh:
        return decode_image(fh.read())


def save_png(img: np.ndarray, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_png(img))
