"""Conditional generator and patch discriminator."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..errors import BadShape
from ..labels import ExpressionDomain
from .layers import (
    Conv2d,
    InstanceNorm,
    LeakyReLU,
    NearestUpsample,
    ReLU,
    ResidualBlock,
    Sequential,
    Tanh,
)

N_DOMAINS = 7


@dataclass
class GanConfig:
    """Architecture and training hyperparameters.

    The defaults describe the full 128px model; smoke runs shrink
    ``img_size``/``base_channels``/``n_res_blocks``/``d_layers``.
    """

    img_size: int = 128
    base_channels: int = 64
    n_res_blocks: int = 6
    d_layers: int = 4
    edge_kernel: int = 7
    lambda_cls: float = 1.0
    lambda_rec: float = 10.0
    learning_rate: float = 1e-4
    beta1: float = 0.5
    beta2: float = 0.999
    batch_size: int = 16
    augment: bool = True
    flip_prob: float = 0.5
    seed: int = 0
    dtype: str = "float32"

    def np_dtype(self):
        return np.dtype(self.dtype)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def reduced(cls, **overrides) -> "GanConfig":
        """Desk-scale smoke configuration.

        The heavier classification weight makes the domain head (and the
        generator edits it drives) converge within a few hundred steps.
        """
        base = dict(
            img_size=64,
            base_channels=8,
            n_res_blocks=2,
            d_layers=3,
            edge_kernel=3,
            lambda_cls=4.0,
        )
        base.update(overrides)
        return cls(**base)


def tile_label(
    domain: ExpressionDomain | int, h: int, w: int, n_domains: int = N_DOMAINS
) -> np.ndarray:
    """One-hot domain map of shape (h, w, n_domains)."""
    if h < 1 or w < 1:
        raise ValueError("spatial dims must be >= 1")
    code = int(domain)
    if not 0 <= code < n_domains:
        raise ValueError(f"domain code {code} out of range")
    out = np.zeros((h, w, n_domains))
    out[:, :, code] = 1.0
    return out


def tile_label_batch(codes: np.ndarray, h: int, w: int, dtype) -> np.ndarray:
    """(B, h, w, n_domains) one-hot maps for a vector of domain codes."""
    B = len(codes)
    out = np.zeros((B, h, w, N_DOMAINS), dtype=dtype)
    out[np.arange(B), :, :, codes] = 1.0
    return out


class Generator:
    """Image-to-image trunk conditioned on a tiled one-hot domain.

    conv7 -> two stride-2 conv downsamplings -> residual blocks ->
    two nearest-upsample+conv stages -> tanh head.  Instance norm
    everywhere except the head; fully convolutional, so inference size
    need not match training size.
    """

    def __init__(self, cfg: GanConfig, rng: np.random.Generator):
        b = cfg.base_channels
        dt = cfg.np_dtype()
        ek = cfg.edge_kernel
        layers = [
            Conv2d("g.c0", 3 + N_DOMAINS, b, ek, 1, ek // 2, rng, dt),
            InstanceNorm("g.in0"),
            ReLU("g.relu0"),
            Conv2d("g.d1", b, 2 * b, 4, 2, 1, rng, dt),
            InstanceNorm("g.in1"),
            ReLU("g.relu1"),
            Conv2d("g.d2", 2 * b, 4 * b, 4, 2, 1, rng, dt),
            InstanceNorm("g.in2"),
            ReLU("g.relu2"),
        ]
        for i in range(cfg.n_res_blocks):
            layers.append(ResidualBlock(f"g.res{i}", 4 * b, rng, dt))
        # Upsampling after each conv: nearest upsampling commutes with the
        # following instance norm and ReLU, and the conv runs at the lower
        # resolution, which is markedly cheaper on CPU.
        layers += [
            Conv2d("g.u1", 4 * b, 2 * b, 3, 1, 1, rng, dt),
            InstanceNorm("g.in3"),
            ReLU("g.relu3"),
            NearestUpsample("g.up1"),
            Conv2d("g.u2", 2 * b, b, 3, 1, 1, rng, dt),
            InstanceNorm("g.in4"),
            ReLU("g.relu4"),
            NearestUpsample("g.up2"),
            Conv2d("g.head", b, 3, ek, 1, ek // 2, rng, dt),
            Tanh("g.tanh"),
        ]
        self.net = Sequential(layers)
        self.dtype = dt

    def params(self) -> dict[str, np.ndarray]:
        return self.net.params()

    def forward(self, x: np.ndarray, codes: np.ndarray):
        """x: (B, H, W, 3) in [-1, 1]; codes: (B,) domain ints."""
        if x.ndim != 4 or x.shape[3] != 3:
            raise BadShape(f"generator expects (B,H,W,3), got {x.shape}")
        labels = tile_label_batch(codes, x.shape[1], x.shape[2], x.dtype)
        inp = np.concatenate([x, labels], axis=3)
        return self.net.forward(inp)

    def backward(self, caches, dy, grads) -> np.ndarray:
        """Returns the gradient w.r.t. the image channels only."""
        dinp = self.net.backward(caches, dy, grads)
        return dinp[:, :, :, :3]


class Discriminator:
    """PatchGAN trunk (no normalization) with realness and domain heads."""

    def __init__(self, cfg: GanConfig, rng: np.random.Generator):
        b = cfg.base_channels
        dt = cfg.np_dtype()
        layers = []
        ch = 3
        out = b
        size = cfg.img_size
        for i in range(cfg.d_layers):
            layers.append(Conv2d(f"d.c{i}", ch, out, 4, 2, 1, rng, dt))
            layers.append(LeakyReLU(f"d.lrelu{i}"))
            ch = out
            out = 2 * out
            size //= 2
        if size < 1:
            raise ValueError("too many discriminator layers for image size")
        self.trunk = Sequential(layers)
        self.patch_head = Conv2d("d.patch", ch, 1, 3, 1, 1, rng, dt)
        self.domain_head = Conv2d("d.domain", ch, N_DOMAINS, size, 1, 0, rng, dt)
        self.final_size = size
        self.dtype = dt

    def params(self) -> dict[str, np.ndarray]:
        out = self.trunk.params()
        out.update(self.patch_head.params())
        out.update(self.domain_head.params())
        return out

    def forward(self, x: np.ndarray):
        """Returns ((B,h,w,1) patch logits, (B, 7) domain logits, cache)."""
        if x.ndim != 4 or x.shape[3] != 3:
            raise BadShape(f"discriminator expects (B,H,W,3), got {x.shape}")
        feat, trunk_cache = self.trunk.forward(x)
        patch, patch_cache = self.patch_head.forward(feat)
        domain, domain_cache = self.domain_head.forward(feat)
        logits = domain.reshape(domain.shape[0], N_DOMAINS)
        return patch, logits, (trunk_cache, patch_cache, domain_cache, feat.shape)

    def backward(self, cache, d_patch, d_domain, grads) -> np.ndarray:
        trunk_cache, patch_cache, domain_cache, feat_shape = cache
        dfeat = np.zeros(feat_shape, dtype=self.dtype)
        if d_patch is not None:
            dfeat += self.patch_head.backward(patch_cache, d_patch, grads)
        if d_domain is not None:
            dd = d_domain.reshape(d_domain.shape[0], 1, 1, N_DOMAINS).astype(self.dtype)
            dfeat += self.domain_head.backward(domain_cache, dd, grads)
        return self.trunk.backward(trunk_cache, dfeat, grads)


def init_networks(cfg: GanConfig) -> tuple[Generator, Discriminator]:
    """Seeded construction of both networks (one rng stream, G first)."""
    rng = np.random.default_rng(cfg.seed)
    return Generator(cfg, rng), Discriminator(cfg, rng)
