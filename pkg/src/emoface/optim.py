"""Bias-corrected Adam optimizer shared by the classifier and GAN trainers.

The update per tensor is the standard one:

    m <- b1*m + (1-b1)*g          v <- b2*v + (1-b2)*g^2
    m_hat = m/(1-b1^t)            v_hat = v/(1-b2^t)
    p <- p - lr * m_hat / (sqrt(v_hat) + eps)
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def adam_step(
    param: np.ndarray,
    grad: np.ndarray,
    m: np.ndarray,
    v: np.ndarray,
    t: int,
    lr: float,
    beta1: float,
    beta2: float,
    eps: float = 1e-8,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """One Adam update for a single tensor; returns (param', m', v').

    ``t`` is the 1-based step count used for bias correction.
    """
    if t < 1:
        raise ValueError("step counter t must be >= 1")
    m = beta1 * m + (1.0 - beta1) * grad
    v = beta2 * v + (1.0 - beta2) * (grad * grad)
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    param = param - lr * m_hat / (np.sqrt(v_hat) + eps)
    return param, m, v


@dataclass
class Adam:
    """Stateful Adam over a dict of named parameter tensors.

    Moments are created lazily with each tensor's dtype, so the same class
    serves the float64 classifier and the float32 GAN.
    """

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        """Update every named parameter in place from its gradient."""
        self.t += 1
        for name, p in params.items():
            g = grads[name]
            if name not in self.m:
                self.m[name] = np.zeros_like(p)
                self.v[name] = np.zeros_like(p)
            p_new, self.m[name], self.v[name] = adam_step(
                p, g, self.m[name], self.v[name], self.t,
                self.lr, self.beta1, self.beta2, self.eps,
            )
            p[...] = p_new

    def state_tensors(self) -> dict[str, np.ndarray]:
        """Moment tensors under stable names, for checkpointing."""
        out: dict[str, np.ndarray] = {}
        for name, m in self.m.items():
            out[f"m.{name}"] = m
            out[f"v.{name}"] = self.v[name]
        return out

    def load_state_tensors(self, tensors: dict[str, np.ndarray], t: int) -> None:
        self.t = t
        self.m = {k[2:]: v for k, v in tensors.items() if k.startswith("m.")}
        self.v = {k[2:]: v for k, v in tensors.items() if k.startswith("v.")}
