"""Summed-area tables: O(1) rectangle sums for the cascade evaluator."""

from __future__ import annotations

import numpy as np

from ..errors import BadShape


def integral_image(img: np.ndarray) -> np.ndarray:
    """Inclusive summed-area table: table[i, j] = sum of img[:i+1, :j+1].

    Input must be single-channel; output is int64 so 8-bit inputs cannot
    overflow.
    """
    img = np.asarray(img)
    if img.ndim != 2:
        raise BadShape("integral_image expects a 2-D single-channel image")
    return img.astype(np.int64).cumsum(axis=0).cumsum(axis=1)


def rect_sum(table: np.ndarray, x: int, y: int, w: int, h: int) -> int:
    """Sum of the w*h rectangle with top-left (x, y), in 4 lookups."""
    x2, y2 = x + w - 1, y + h - 1
    total = int(table[y2, x2])
    if x > 0:
        total -= int(table[y2, x - 1])
    if y > 0:
        total -= int(table[y - 1, x2])
    if x > 0 and y > 0:
        total += int(table[y - 1, x - 1])
    return total


def padded_integrals(gray: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Zero-padded integral tables of the image and its square.

    Padding one leading row/column makes the 4-lookup rectangle sum
    branch-free:  S(x, y, w, h) = t[y+h, x+w] - t[y, x+w] - t[y+h, x] + t[y, x].
    """
    g = gray.astype(np.int64)
    h, w = g.shape
    ii = np.zeros((h + 1, w + 1), dtype=np.int64)
    sq = np.zeros((h + 1, w + 1), dtype=np.int64)
    ii[1:, 1:] = g.cumsum(axis=0).cumsum(axis=1)
    sq[1:, 1:] = (g * g).cumsum(axis=0).cumsum(axis=1)
    return ii, sq
