"""Multi-domain adversarial expression synthesizer."""

from .checkpoint import load_checkpoint, save_checkpoint
from .infer import synthesize, synthesize_array
from .losses import adversarial_loss, full_objective
from .nets import Discriminator, GanConfig, Generator, init_networks, tile_label
from .train import (
    GanTrainState,
    JsonlSink,
    denormalize_image,
    init_state,
    load_dataset_folder,
    normalize_images,
    sample_batch,
    train_loop,
    train_step,
)

__all__ = [
    "Discriminator",
    "GanConfig",
    "GanTrainState",
    "Generator",
    "JsonlSink",
    "adversarial_loss",
    "denormalize_image",
    "full_objective",
    "init_networks",
    "init_state",
    "load_checkpoint",
    "load_dataset_folder",
    "normalize_images",
    "sample_batch",
    "save_checkpoint",
    "synthesize",
    "synthesize_array",
    "tile_label",
    "train_loop",
    "train_step",
]
