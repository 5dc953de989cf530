"""Stump-stage cascade parsing and multi-scale face detection.

The parser consumes the standard ``opencv_storage`` XML layout for
stump-based haar cascades: a base window size, then stages holding
single-node trees, each node a haar feature (2-3 weighted rectangles),
a split threshold, and two leaf values.

Detection slides a variance-normalized window over the image at a
geometric range of scales.  Feature rectangles are scaled and re-weighted
per level (the first rectangle's weight is recomputed so the weighted
areas still cancel after integer rounding), thresholds are compared
against the window's intensity standard deviation, and surviving windows
are grouped by mutual overlap.
"""

from __future__ import annotations

import hashlib
import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass

import numpy as np

from .image import check_image, to_gray
from .integral import padded_integrals


@dataclass(frozen=True)
class WeightedRect:
    x: int
    y: int
    w: int
    h: int
    weight: float


@dataclass(frozen=True)
class Stump:
    rects: tuple[WeightedRect, ...]
    threshold: float
    left_val: float
    right_val: float


@dataclass(frozen=True)
class Stage:
    threshold: float
    stumps: tuple[Stump, ...]


@dataclass(frozen=True)
class CascadeModel:
    window_w: int
    window_h: int
    stages: tuple[Stage, ...]
    source_sha256: str = ""

    @property
    def n_features(self) -> int:
        return sum(len(s.stumps) for s in self.stages)


@dataclass(frozen=True)
class BoundingBox:
    x: int
    y: int
    w: int
    h: int

    @property
    def area(self) -> int:
        return self.w * self.h

    def iou(self, other: "BoundingBox") -> float:
        ix = max(self.x, other.x)
        iy = max(self.y, other.y)
        ix2 = min(self.x + self.w, other.x + other.w)
        iy2 = min(self.y + self.h, other.y + other.h)
        inter = max(0, ix2 - ix) * max(0, iy2 - iy)
        union = self.area + other.area - inter
        return inter / union if union else 0.0


def load_cascade(path: str | os.PathLike) -> CascadeModel:
    """Parse a stump-stage cascade XML file."""
    raw = open(path, "rb").read()
    root = ET.fromstring(raw.decode("utf-8"))
    if root.tag != "opencv_storage" or len(root) == 0:
        raise ValueError("not an opencv_storage cascade file")
    cascade_el = root[0]
    size_el = cascade_el.find("size")
    if size_el is None or cascade_el.find("stages") is None:
        raise ValueError("cascade is missing size/stages")
    win_w, win_h = (int(v) for v in size_el.text.split())
    stages = []
    for stage_el in cascade_el.find("stages"):
        stumps = []
        for tree_el in stage_el.find("trees"):
            nodes = list(tree_el)
            if len(nodes) != 1:
                raise ValueError("only stump-based cascades are supported")
            node = nodes[0]
            feature = node.find("feature")
            tilted = feature.findtext("tilted", "0").strip()
            if tilted not in ("0", "0."):
                raise ValueError("tilted features are not supported")
            rects = []
            for rect_el in feature.find("rects"):
                x, y, w, h, weight = rect_el.text.split()
                rect = WeightedRect(int(x), int(y), int(w), int(h), float(weight))
                if not (
                    0 <= rect.x
                    and 0 <= rect.y
                    and rect.x + rect.w <= win_w
                    and rect.y + rect.h <= win_h
                ):
                    raise ValueError("feature rectangle outside base window")
                rects.append(rect)
            stumps.append(
                Stump(
                    rects=tuple(rects),
                    threshold=float(node.findtext("threshold")),
                    left_val=float(node.findtext("left_val")),
                    right_val=float(node.findtext("right_val")),
                )
            )
        stages.append(
            Stage(
                threshold=float(stage_el.findtext("stage_threshold")),
                stumps=tuple(stumps),
            )
        )
    if not stages:
        raise ValueError("cascade has no stages")
    return CascadeModel(
        window_w=win_w,
        window_h=win_h,
        stages=tuple(stages),
        source_sha256=hashlib.sha256(raw).hexdigest(),
    )


class _FlatCascade:
    """Stump data flattened into arrays for vectorized evaluation."""

    def __init__(self, cascade: CascadeModel):
        n = cascade.n_features
        self.win_w = cascade.window_w
        self.win_h = cascade.window_h
        self.geom = np.zeros((n, 3, 4), dtype=np.float64)  # x y w h, base window
        self.weights = np.zeros((n, 3))
        self.thresholds = np.zeros(n)
        self.left_vals = np.zeros(n)
        self.right_vals = np.zeros(n)
        self.stage_slices: list[slice] = []
        self.stage_thresholds = np.array([s.threshold for s in cascade.stages])
        i = 0
        for stage in cascade.stages:
            start = i
            for stump in stage.stumps:
                for k, r in enumerate(stump.rects):
                    self.geom[i, k] = (r.x, r.y, r.w, r.h)
                    self.weights[i, k] = r.weight
                self.thresholds[i] = stump.threshold
                self.left_vals[i] = stump.left_val
                self.right_vals[i] = stump.right_val
                i += 1
            self.stage_slices.append(slice(start, i))

    def scaled_offsets(self, scale: float, stride: int):
        """Corner offsets into the flattened integral plus corrected weights.

        Rounding can push a rect past the scaled window, so coordinates
        are clamped; the first rectangle's weight is then recomputed so
        the weighted areas still cancel.
        """
        win_w = int(round(self.win_w * scale))
        win_h = int(round(self.win_h * scale))
        g = np.round(self.geom * scale)
        x = np.minimum(g[:, :, 0], win_w)
        y = np.minimum(g[:, :, 1], win_h)
        w = np.minimum(g[:, :, 2], win_w - x)
        h = np.minimum(g[:, :, 3], win_h - y)
        areas = w * h
        weights = self.weights.copy()
        tail = (areas[:, 1:] * weights[:, 1:]).sum(axis=1)
        area0 = areas[:, 0]
        weights[:, 0] = np.where(area0 > 0, -tail / np.where(area0 > 0, area0, 1.0), 0.0)
        x = x.astype(np.int64)
        y = y.astype(np.int64)
        w = w.astype(np.int64)
        h = h.astype(np.int64)
        # offsets of the 4 corners (tl, tr, bl, br) for every rect
        off = np.stack(
            [
                y * stride + x,
                y * stride + (x + w),
                (y + h) * stride + x,
                (y + h) * stride + (x + w),
            ],
            axis=-1,
        )
        return off, weights

_FLAT_CACHE: dict[int, _FlatCascade] = {}


def _flat_cascade(cascade: CascadeModel) -> _FlatCascade:
    key = id(cascade)
    flat = _FLAT_CACHE.get(key)
    if flat is None:
        flat = _FlatCascade(cascade)
        _FLAT_CACHE[key] = flat
    return flat


def detect_faces(
    img: np.ndarray,
    cascade: CascadeModel,
    scale_factor: float = 1.1,
    min_neighbors: int = 3,
) -> list[BoundingBox]:
    """Multi-scale sliding-window detection.

    Windows that pass every stage become candidates; candidates are
    grouped by mutual IoU >= 0.5, groups smaller than ``min_neighbors``
    are dropped, and each surviving group's mean box is returned, largest
    area first.
    """
    if scale_factor <= 1.0:
        raise ValueError("scale_factor must be > 1")
    if min_neighbors < 0:
        raise ValueError("min_neighbors must be >= 0")
    gray = to_gray(check_image(img))
    H, W = gray.shape
    ii, sq = padded_integrals(gray)
    stride = W + 1
    ii_flat = ii.ravel()
    sq_flat = sq.ravel()
    flat = _flat_cascade(cascade)
    candidates: list[BoundingBox] = []
    scale = 1.0
    while True:
        win_w = int(round(cascade.window_w * scale))
        win_h = int(round(cascade.window_h * scale))
        if win_w > W or win_h > H:
            break
        step = max(1, int(round(scale / 10.0)))
        xs = np.arange(0, W - win_w + 1, step, dtype=np.int64)
        ys = np.arange(0, H - win_h + 1, step, dtype=np.int64)
        base = (ys[:, None] * stride + xs[None, :]).ravel()

        # Window statistics over the inset interior rectangle.
        inset = int(round(scale))
        eq_w = int(round((cascade.window_w - 2) * scale))
        eq_h = int(round((cascade.window_h - 2) * scale))
        area = eq_w * eq_h
        eq0 = base + inset * stride + inset
        c_tr = eq0 + eq_w
        c_bl = eq0 + eq_h * stride
        c_br = c_bl + eq_w
        s = ii_flat[c_br] - ii_flat[c_tr] - ii_flat[c_bl] + ii_flat[eq0]
        s2 = sq_flat[c_br] - sq_flat[c_tr] - sq_flat[c_bl] + sq_flat[eq0]
        mean = s / area
        variance = s2 / area - mean * mean
        std = np.where(variance > 0, np.sqrt(np.maximum(variance, 0)), 1.0)

        offsets, weights = flat.scaled_offsets(scale, stride)
        alive = np.arange(base.size)
        std_area = std * area
        for stage_idx, sl in enumerate(flat.stage_slices):
            if alive.size == 0:
                break
            b = base[alive]
            cut_scale = std_area[alive]
            if alive.size > 512:
                # Many windows: loop stumps, gather with scalar offsets.
                stage_sums = np.zeros(alive.size)
                for k in range(sl.start, sl.stop):
                    value = np.zeros(alive.size)
                    for r in range(3):
                        w = weights[k, r]
                        if w == 0.0:
                            continue
                        tl, tr, bl, br = offsets[k, r]
                        value += w * (
                            ii_flat[b + br]
                            - ii_flat[b + tr]
                            - ii_flat[b + bl]
                            + ii_flat[b + tl]
                        )
                    stage_sums += np.where(
                        value < flat.thresholds[k] * cut_scale,
                        flat.left_vals[k],
                        flat.right_vals[k],
                    )
            else:
                # Few windows: evaluate the whole stage as one 2-D gather.
                corners = ii_flat[b[:, None, None, None] + offsets[sl][None, :, :, :]]
                sums = (
                    corners[..., 3] - corners[..., 1] - corners[..., 2] + corners[..., 0]
                )
                values = (sums * weights[sl][None, :, :]).sum(axis=-1)
                cut = flat.thresholds[sl][None, :] * cut_scale[:, None]
                leaves = np.where(
                    values < cut,
                    flat.left_vals[sl][None, :],
                    flat.right_vals[sl][None, :],
                )
                stage_sums = leaves.sum(axis=1)
            alive = alive[stage_sums >= flat.stage_thresholds[stage_idx]]
        if alive.size:
            wy, wx = np.divmod(base[alive], stride)
            for x, y in zip(wx, wy):
                candidates.append(BoundingBox(int(x), int(y), win_w, win_h))
        scale *= scale_factor
    return group_candidates(candidates, min_neighbors)


def group_candidates(
    candidates: list[BoundingBox], min_neighbors: int
) -> list[BoundingBox]:
    """Union-find over IoU >= 0.5 pairs; mean box per surviving group."""
    n = len(candidates)
    if n == 0:
        return []
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if candidates[i].iou(candidates[j]) >= 0.5:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[max(ri, rj)] = min(ri, rj)
    groups: dict[int, list[BoundingBox]] = {}
    for i, box in enumerate(candidates):
        groups.setdefault(find(i), []).append(box)
    merged = []
    for members in groups.values():
        if len(members) < min_neighbors:
            continue
        merged.append(
            BoundingBox(
                x=int(round(float(np.mean([b.x for b in members])))),
                y=int(round(float(np.mean([b.y for b in members])))),
                w=int(round(float(np.mean([b.w for b in members])))),
                h=int(round(float(np.mean([b.h for b in members])))),
            )
        )
    merged.sort(key=lambda b: (-b.area, b.y, b.x))
    return merged


def default_cascade_path() -> str:
    """Path of the bundled frontal-face cascade."""
    return os.path.join(
        os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
        "assets",
        "haarcascade_frontalface_alt.xml",
    )
