"""Expression synthesis on prepared 8-bit faces."""

from __future__ import annotations

import numpy as np

from ..errors import BadShape
from ..faceprep.ops import PREP_SIZE
from ..labels import ExpressionDomain
from .train import GanTrainState, denormalize_image, normalize_images


def synthesize_array(
    state: GanTrainState, face: np.ndarray, domain: ExpressionDomain | int
) -> np.ndarray:
    """Run the generator on any square uint8 RGB face (size-agnostic)."""
    if face.ndim != 3 or face.shape[2] != 3 or face.dtype != np.uint8:
        raise BadShape(f"expected uint8 (H,W,3) face, got {face.shape} {face.dtype}")
    x = normalize_images(face[None], state.cfg.np_dtype())
    y, _ = state.generator.forward(x, np.array([int(domain)]))
    return denormalize_image(y[0])


def synthesize(
    state: GanTrainState, face: np.ndarray, domain: ExpressionDomain | int
) -> np.ndarray:
    """Synthesize the target expression on a prepared 128x128x3 face."""
    face = np.asarray(face)
    if face.shape != (PREP_SIZE, PREP_SIZE, 3):
        raise BadShape(
            f"synthesize expects a prepared {PREP_SIZE}x{PREP_SIZE}x3 face, "
            f"got {face.shape}"
        )
    return synthesize_array(state, face, domain)
