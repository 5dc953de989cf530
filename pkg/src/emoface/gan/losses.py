"""Adversarial, domain-classification, and cycle objectives.

The minimax value  E_x[log D(x)] + E_y[log(1 - D(G(y)))]  is computed on
probabilities clamped to [1e-7, 1 - 1e-7]; expectations average over
batch and patch positions.  The discriminator ascends it (implemented as
descending its negation) and the generator descends it; generator
updates use the non-saturating surrogate -E[log D(G(y))] while the
minimax value itself is always computed and logged.
"""

from __future__ import annotations

import numpy as np

PROB_EPS = 1e-7


def sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x, dtype=np.float64)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _clamp(p: np.ndarray) -> np.ndarray:
    return np.clip(np.asarray(p, dtype=np.float64), PROB_EPS, 1.0 - PROB_EPS)


def adversarial_loss(d_real: np.ndarray, d_fake: np.ndarray) -> float:
    """Minimax value from realness probabilities (means over all entries)."""
    pr = _clamp(d_real)
    pf = _clamp(d_fake)
    return float(np.log(pr).mean() + np.log(1.0 - pf).mean())


def d_adversarial_terms(
    patch_real_logits: np.ndarray, patch_fake_logits: np.ndarray
) -> tuple[float, np.ndarray, np.ndarray]:
    """Minimax value plus gradients of its negation w.r.t. the patch logits.

    Returns (value, d(-value)/d_real_logits, d(-value)/d_fake_logits);
    clamped probabilities contribute zero gradient.
    """
    pr_raw = sigmoid(patch_real_logits)
    pf_raw = sigmoid(patch_fake_logits)
    value = adversarial_loss(pr_raw, pf_raw)
    interior_r = (pr_raw > PROB_EPS) & (pr_raw < 1.0 - PROB_EPS)
    interior_f = (pf_raw > PROB_EPS) & (pf_raw < 1.0 - PROB_EPS)
    d_real = np.where(interior_r, (pr_raw - 1.0) / pr_raw.size, 0.0)
    d_fake = np.where(interior_f, pf_raw / pf_raw.size, 0.0)
    return value, d_real, d_fake


def g_adversarial_term(
    patch_fake_logits: np.ndarray,
) -> tuple[float, np.ndarray]:
    """Non-saturating generator term -E[log D(G(y))] and its logit gradient."""
    pf = sigmoid(patch_fake_logits)
    clamped = _clamp(pf)
    loss = float(-np.log(clamped).mean())
    interior = (pf > PROB_EPS) & (pf < 1.0 - PROB_EPS)
    grad = np.where(interior, (pf - 1.0) / pf.size, 0.0)
    return loss, grad


def softmax_ce(
    logits: np.ndarray, labels: np.ndarray
) -> tuple[float, np.ndarray]:
    """Mean cross-entropy over the batch plus gradient w.r.t. logits."""
    z = np.asarray(logits, dtype=np.float64)
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    probs = e / e.sum(axis=1, keepdims=True)
    B = len(labels)
    picked = np.clip(probs[np.arange(B), labels], 1e-12, None)
    loss = float(-np.log(picked).mean())
    grad = probs.copy()
    grad[np.arange(B), labels] -= 1.0
    grad /= B
    return loss, grad


def l1_loss(a: np.ndarray, b: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean absolute difference and gradient w.r.t. ``a``."""
    diff = np.asarray(a, dtype=np.float64) - np.asarray(b, dtype=np.float64)
    loss = float(np.abs(diff).mean())
    grad = np.sign(diff) / diff.size
    return loss, grad


def full_objective(
    batch: np.ndarray,
    labels: np.ndarray,
    target_codes: np.ndarray,
    generator,
    discriminator,
    lambda_cls: float,
    lambda_rec: float,
) -> dict:
    """Evaluate every loss component without touching any parameters.

    d_loss = -minimax + lambda_cls * CE(domain(real), true)
    g_loss = -E[log D(fake)] + lambda_cls * CE(domain(fake), target)
             + lambda_rec * L1(G(G(x, target), true), x)
    """
    fake, _ = generator.forward(batch, target_codes)
    patch_r, dom_r, _ = discriminator.forward(batch)
    patch_f, dom_f, _ = discriminator.forward(fake)
    adv, _, _ = d_adversarial_terms(patch_r, patch_f)
    d_cls, _ = softmax_ce(dom_r, labels)
    g_adv, _ = g_adversarial_term(patch_f)
    g_cls, _ = softmax_ce(dom_f, target_codes)
    rec, _ = generator.forward(fake, labels)
    g_rec, _ = l1_loss(rec, batch)
    return {
        "adv": adv,
        "d_cls": d_cls,
        "d_loss": -adv + lambda_cls * d_cls,
        "g_adv": g_adv,
        "g_cls": g_cls,
        "g_rec": g_rec,
        "g_loss": g_adv + lambda_cls * g_cls + lambda_rec * g_rec,
    }
