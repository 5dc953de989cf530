"""Face detection and preparation pipeline."""

from .cascade import (
    BoundingBox,
    CascadeModel,
    default_cascade_path,
    detect_faces,
    load_cascade,
)
from .dataset import DatasetManifest, build_dataset
from .image import (
    decode_image,
    encode_png,
    load_image,
    save_png,
    to_gray,
    to_rgb,
)
from .integral import integral_image, rect_sum
from .ops import (
    PREP_SIZE,
    crop_resize,
    expand_box,
    histogram_equalize,
    prep_face,
    prep_face_with_box,
)

__all__ = [
    "BoundingBox",
    "CascadeModel",
    "DatasetManifest",
    "PREP_SIZE",
    "build_dataset",
    "crop_resize",
    "decode_image",
    "default_cascade_path",
    "detect_faces",
    "encode_png",
    "expand_box",
    "histogram_equalize",
    "integral_image",
    "load_cascade",
    "load_image",
    "prep_face",
    "prep_face_with_box",
    "rect_sum",
    "save_png",
    "to_gray",
    "to_rgb",
]
