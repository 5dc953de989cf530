"""Convolutional building blocks with explicit forward/backward passes.

All tensors are channels-last (B, H, W, C) numpy arrays, which keeps
im2col fills and both GEMM orientations cache-friendly without any
transposed copies.  Layers own their parameters; forward returns
``(y, cache)`` and backward consumes the cache, accumulates parameter
gradients into a caller-supplied dict keyed by parameter name, and
returns the input gradient.  Keeping caches external lets one network be
applied several times inside a single objective (fake pass + cycle pass)
and backpropagated through each application independently.
"""

from __future__ import annotations

import numpy as np

INSTANCE_NORM_EPS = 1e-5
LEAKY_SLOPE = 0.2
_TANH_GUARD = 1e-6


class Conv2d:
    """k x k convolution via im2col; optional stride and zero padding."""

    def __init__(self, name, in_ch, out_ch, k, stride, pad, rng, dtype):
        self.name = name
        self.k = k
        self.stride = stride
        self.pad = pad
        self.W = rng.normal(0.0, 0.02, size=(k * k * in_ch, out_ch)).astype(dtype)
        self.b = np.zeros(out_ch, dtype=dtype)

    def params(self):
        return {f"{self.name}.W": self.W, f"{self.name}.b": self.b}

    def forward(self, x):
        B, H, W, C = x.shape
        k, s, p = self.k, self.stride, self.pad
        xp = np.pad(x, ((0, 0), (p, p), (p, p), (0, 0))) if p else x
        Ho = (H + 2 * p - k) // s + 1
        Wo = (W + 2 * p - k) // s + 1
        cols = np.empty((B, Ho, Wo, k, k, C), dtype=x.dtype)
        for ki in range(k):
            for kj in range(k):
                cols[:, :, :, ki, kj, :] = xp[
                    :, ki : ki + Ho * s : s, kj : kj + Wo * s : s, :
                ]
        flat = cols.reshape(B * Ho * Wo, k * k * C)
        y = (flat @ self.W + self.b).reshape(B, Ho, Wo, -1)
        return y, (x.shape, flat)

    def backward(self, cache, dy, grads):
        (B, H, W, C), flat = cache
        k, s, p = self.k, self.stride, self.pad
        _, Ho, Wo, F = dy.shape
        dy_flat = dy.reshape(B * Ho * Wo, F)
        grads[f"{self.name}.W"] = grads.get(f"{self.name}.W", 0) + flat.T @ dy_flat
        grads[f"{self.name}.b"] = grads.get(f"{self.name}.b", 0) + dy_flat.sum(axis=0)
        dcols = (dy_flat @ self.W.T).reshape(B, Ho, Wo, k, k, C)
        dxp = np.zeros((B, H + 2 * p, W + 2 * p, C), dtype=dy.dtype)
        for ki in range(k):
            for kj in range(k):
                dxp[:, ki : ki + Ho * s : s, kj : kj + Wo * s : s, :] += dcols[
                    :, :, :, ki, kj, :
                ]
        return dxp[:, p : p + H, p : p + W, :] if p else dxp


class InstanceNorm:
    """Per-sample per-channel normalization over H, W; no learned affine."""

    def __init__(self, name):
        self.name = name

    def params(self):
        return {}

    def forward(self, x):
        mean = x.mean(axis=(1, 2), keepdims=True)
        var = x.var(axis=(1, 2), keepdims=True)
        inv = 1.0 / np.sqrt(var + INSTANCE_NORM_EPS)
        xhat = ((x - mean) * inv).astype(x.dtype)
        return xhat, (xhat, inv)

    def backward(self, cache, dy, grads):
        xhat, inv = cache
        mean_dy = dy.mean(axis=(1, 2), keepdims=True)
        mean_dy_xhat = (dy * xhat).mean(axis=(1, 2), keepdims=True)
        return (inv * (dy - mean_dy - xhat * mean_dy_xhat)).astype(dy.dtype)


class ReLU:
    def __init__(self, name):
        self.name = name

    def params(self):
        return {}

    def forward(self, x):
        mask = x > 0
        return x * mask, mask

    def backward(self, cache, dy, grads):
        return dy * cache


class LeakyReLU:
    def __init__(self, name, slope=LEAKY_SLOPE):
        self.name = name
        self.slope = slope

    def params(self):
        return {}

    def forward(self, x):
        mask = x > 0
        y = np.where(mask, x, x * self.slope)
        return y.astype(x.dtype), mask

    def backward(self, cache, dy, grads):
        return np.where(cache, dy, dy * self.slope).astype(dy.dtype)


class Tanh:
    """tanh head clipped to the open interval (-1, 1).

    float32 tanh rounds to exactly 1.0 once saturated; the tiny clip
    keeps the output contract strict without affecting image decoding.
    """

    def __init__(self, name):
        self.name = name

    def params(self):
        return {}

    def forward(self, x):
        y = np.tanh(x)
        y = np.clip(y, -1.0 + _TANH_GUARD, 1.0 - _TANH_GUARD).astype(x.dtype)
        return y, y

    def backward(self, cache, dy, grads):
        return (dy * (1.0 - cache * cache)).astype(dy.dtype)


class NearestUpsample:
    """2x nearest-neighbour upsampling."""

    def __init__(self, name):
        self.name = name

    def params(self):
        return {}

    def forward(self, x):
        y = x.repeat(2, axis=1).repeat(2, axis=2)
        return y, x.shape

    def backward(self, cache, dy, grads):
        B, H, W, C = cache
        return dy.reshape(B, H, 2, W, 2, C).sum(axis=(2, 4)).astype(dy.dtype)


class Sequential:
    """A chain of layers sharing the functional forward/backward protocol."""

    def __init__(self, layers):
        self.layers = layers

    def params(self):
        out = {}
        for layer in self.layers:
            out.update(layer.params())
        return out

    def forward(self, x):
        caches = []
        for layer in self.layers:
            x, cache = layer.forward(x)
            caches.append(cache)
        return x, caches

    def backward(self, caches, dy, grads):
        for layer, cache in zip(reversed(self.layers), reversed(caches)):
            dy = layer.backward(cache, dy, grads)
        return dy


class ResidualBlock:
    """conv-IN-ReLU-conv-IN with identity skip."""

    def __init__(self, name, channels, rng, dtype):
        self.name = name
        self.body = Sequential(
            [
                Conv2d(f"{name}.conv1", channels, channels, 3, 1, 1, rng, dtype),
                InstanceNorm(f"{name}.in1"),
                ReLU(f"{name}.relu"),
                Conv2d(f"{name}.conv2", channels, channels, 3, 1, 1, rng, dtype),
                InstanceNorm(f"{name}.in2"),
            ]
        )

    def params(self):
        return self.body.params()

    def forward(self, x):
        y, caches = self.body.forward(x)
        return x + y, caches

    def backward(self, caches, dy, grads):
        return dy + self.body.backward(caches, dy, grads)
