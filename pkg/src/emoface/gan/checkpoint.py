"""Checkpoint persistence for the GAN trainer (format tag ganckpt/1)."""

from __future__ import annotations

import numpy as np

from ..bundle import load_bundle, save_bundle
from ..optim import Adam
from .nets import GanConfig
from .train import GanTrainState, init_state

FORMAT_TAG = "ganckpt/1"


def save_checkpoint(state: GanTrainState, path) -> None:
    tensors: dict[str, np.ndarray] = {}
    for name, t in state.generator.params().items():
        tensors[f"param.{name}"] = t
    for name, t in state.discriminator.params().items():
        tensors[f"param.{name}"] = t
    for name, t in state.g_opt.state_tensors().items():
        tensors[f"opt_g.{name}"] = t
    for name, t in state.d_opt.state_tensors().items():
        tensors[f"opt_d.{name}"] = t
    meta = {
        "config": state.cfg.to_dict(),
        "step": state.step,
        "domain_order": list(state.domain_order),
        "opt_t": {"g": state.g_opt.t, "d": state.d_opt.t},
    }
    save_bundle(path, FORMAT_TAG, meta, tensors)


def load_checkpoint(path) -> GanTrainState:
    meta, tensors = load_bundle(path, FORMAT_TAG)
    cfg = GanConfig(**meta["config"])
    state = init_state(cfg)
    params = dict(state.generator.params())
    params.update(state.discriminator.params())
    for name, arr in tensors.items():
        if name.startswith("param."):
            target = params[name[len("param.") :]]
            target[...] = arr.astype(target.dtype, copy=False)
    state.g_opt.load_state_tensors(
        {k[len("opt_g.") :]: v for k, v in tensors.items() if k.startswith("opt_g.")},
        t=meta["opt_t"]["g"],
    )
    state.d_opt.load_state_tensors(
        {k[len("opt_d.") :]: v for k, v in tensors.items() if k.startswith("opt_d.")},
        t=meta["opt_t"]["d"],
    )
    state.step = int(meta["step"])
    state.domain_order = tuple(meta["domain_order"])
    return state
