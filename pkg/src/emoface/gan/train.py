"""Adversarial training loop: one discriminator update then one generator
update per step, with horizontal-flip augmentation and seeded sampling."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..labels import DOMAIN_NAMES, ExpressionDomain
from ..optim import Adam
from .losses import (
    d_adversarial_terms,
    g_adversarial_term,
    l1_loss,
    softmax_ce,
)
from .nets import Discriminator, GanConfig, Generator, init_networks


@dataclass
class GanTrainState:
    cfg: GanConfig
    generator: Generator
    discriminator: Discriminator
    g_opt: Adam
    d_opt: Adam
    step: int = 0
    domain_order: tuple[str, ...] = tuple(DOMAIN_NAMES)


def init_state(cfg: GanConfig) -> GanTrainState:
    generator, discriminator = init_networks(cfg)
    return GanTrainState(
        cfg=cfg,
        generator=generator,
        discriminator=discriminator,
        g_opt=Adam(lr=cfg.learning_rate, beta1=cfg.beta1, beta2=cfg.beta2),
        d_opt=Adam(lr=cfg.learning_rate, beta1=cfg.beta1, beta2=cfg.beta2),
    )


def normalize_images(images: np.ndarray, dtype) -> np.ndarray:
    """uint8 (B,H,W,3) -> dtype (B,H,W,3) in [-1, 1]."""
    return (images.astype(np.float64) / 127.5 - 1.0).astype(dtype)


def denormalize_image(x: np.ndarray) -> np.ndarray:
    """(H,W,3) in [-1, 1] -> uint8 (H,W,3)."""
    y = (np.asarray(x, dtype=np.float64) + 1.0) * 127.5
    y = np.floor(y + 0.5)
    return np.clip(y, 0, 255).astype(np.uint8)


def sample_batch(
    images: np.ndarray,
    labels: np.ndarray,
    cfg: GanConfig,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random batch with per-sample flip augmentation and target domains.

    Flip coins are always drawn so the sampling stream does not depend on
    the augment switch.
    """
    idx = rng.integers(0, len(images), size=cfg.batch_size)
    batch = images[idx].copy()
    flips = rng.random(cfg.batch_size) < cfg.flip_prob
    if cfg.augment:
        batch[flips] = batch[flips, :, ::-1, :]
    targets = rng.integers(0, len(DOMAIN_NAMES), size=cfg.batch_size)
    x = normalize_images(batch, cfg.np_dtype())
    return x, labels[idx].astype(np.int64), targets.astype(np.int64)


def train_step(
    state: GanTrainState,
    x_real: np.ndarray,
    y_real: np.ndarray,
    target_codes: np.ndarray,
) -> dict:
    """One discriminator update followed by one generator update."""
    cfg = state.cfg
    G, D = state.generator, state.discriminator
    dtype = cfg.np_dtype()

    # Discriminator phase.
    fake, g_caches = G.forward(x_real, target_codes)
    patch_r, dom_r, cache_r = D.forward(x_real)
    patch_f, dom_f, cache_f = D.forward(fake)
    adv, dz_real, dz_fake = d_adversarial_terms(patch_r, patch_f)
    d_cls, ddom_r = softmax_ce(dom_r, y_real)
    d_loss = -adv + cfg.lambda_cls * d_cls
    d_grads: dict[str, np.ndarray] = {}
    D.backward(cache_r, dz_real.astype(dtype), (cfg.lambda_cls * ddom_r), d_grads)
    D.backward(cache_f, dz_fake.astype(dtype), None, d_grads)
    state.d_opt.step(D.params(), d_grads)

    # Generator phase, against the updated discriminator.
    patch_f2, dom_f2, cache_f2 = D.forward(fake)
    g_adv, dz_gadv = g_adversarial_term(patch_f2)
    g_cls, ddom_f2 = softmax_ce(dom_f2, target_codes)
    rec, g_caches2 = G.forward(fake, y_real)
    g_rec, drec = l1_loss(rec, x_real)
    g_loss = g_adv + cfg.lambda_cls * g_cls + cfg.lambda_rec * g_rec

    g_grads: dict[str, np.ndarray] = {}
    dfake_rec = G.backward(g_caches2, (cfg.lambda_rec * drec).astype(dtype), g_grads)
    scrap: dict[str, np.ndarray] = {}
    dfake_adv = D.backward(
        cache_f2, dz_gadv.astype(dtype), cfg.lambda_cls * ddom_f2, scrap
    )
    G.backward(g_caches, (dfake_rec + dfake_adv).astype(dtype), g_grads)
    state.g_opt.step(G.params(), g_grads)

    state.step += 1
    return {
        "step": state.step,
        "d_loss": float(d_loss),
        "g_loss": float(g_loss),
        "adv": float(adv),
        "cls": float(d_cls),
        "rec": float(g_rec),
    }


def train_loop(
    state: GanTrainState,
    images: np.ndarray,
    labels: np.ndarray,
    steps: int,
    rng: np.random.Generator | None = None,
    sink=None,
) -> list[dict]:
    """Run ``steps`` updates; returns (and optionally streams) metrics."""
    if rng is None:
        rng = np.random.default_rng(state.cfg.seed + 1)
    history = []
    for _ in range(steps):
        x, y, targets = sample_batch(images, labels, state.cfg, rng)
        metrics = train_step(state, x, y, targets)
        history.append(metrics)
        if sink is not None:
            sink(metrics)
    return history


class JsonlSink:
    """Newline-delimited JSON metrics writer."""

    def __init__(self, path: str | os.PathLike):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, "w", encoding="utf-8")

    def __call__(self, metrics: dict) -> None:
        self._fh.write(json.dumps(metrics, sort_keys=True) + "\n")
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()


def load_dataset_folder(root: str | os.PathLike) -> tuple[np.ndarray, np.ndarray]:
    """Load a ``<root>/<domain>/*.png`` tree into arrays (images, labels)."""
    from ..faceprep.image import load_image

    images = []
    labels = []
    root = Path(root)
    for domain in ExpressionDomain:
        folder = root / domain.domain_name
        if not folder.is_dir():
            continue
        for path in sorted(folder.iterdir()):
            if path.suffix.lower() != ".png":
                continue
            images.append(load_image(path))
            labels.append(int(domain))
    if not images:
        raise FileNotFoundError(f"no domain PNGs under {root}")
    return np.stack(images), np.array(labels, dtype=np.int64)
