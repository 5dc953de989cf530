"""Recurrent cells (LSTM and vanilla RNN) with hand-written backprop.

Forward and backward are implemented directly in numpy so gradients can
be verified against finite differences.  All math is float64.  The
batched sequence runner masks padded positions: a sample's hidden state
stops updating once its real length is exhausted, so the state at the
last step equals the state at the sample's own final token.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Iterator

import numpy as np

N_CLASSES = 7

GATES = ("i", "f", "o", "g")


def sigmoid(x: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


@dataclass
class LstmParams:
    """Gate weights for a single-layer LSTM plus the class readout.

    Shapes: W_* are (hidden, input), U_* are (hidden, hidden), b_* are
    (hidden,); the readout W_y is (7, hidden) with b_y (7,).
    """

    input_dim: int
    hidden_dim: int
    W_i: np.ndarray
    W_f: np.ndarray
    W_o: np.ndarray
    W_g: np.ndarray
    U_i: np.ndarray
    U_f: np.ndarray
    U_o: np.ndarray
    U_g: np.ndarray
    b_i: np.ndarray
    b_f: np.ndarray
    b_o: np.ndarray
    b_g: np.ndarray
    W_y: np.ndarray
    b_y: np.ndarray

    cell_type = "lstm"

    def tensors(self) -> dict[str, np.ndarray]:
        return {
            f.name: getattr(self, f.name)
            for f in fields(self)
            if f.name not in ("input_dim", "hidden_dim")
        }

    def tensor_names(self) -> Iterator[str]:
        return iter(self.tensors())


@dataclass
class RnnParams:
    """Vanilla tanh recurrence with the same readout, for the baseline."""

    input_dim: int
    hidden_dim: int
    W_h: np.ndarray
    U_h: np.ndarray
    b_h: np.ndarray
    W_y: np.ndarray
    b_y: np.ndarray

    cell_type = "rnn"

    def tensors(self) -> dict[str, np.ndarray]:
        return {
            f.name: getattr(self, f.name)
            for f in fields(self)
            if f.name not in ("input_dim", "hidden_dim")
        }

    def tensor_names(self) -> Iterator[str]:
        return iter(self.tensors())


CellParams = LstmParams | RnnParams


def init_lstm(
    input_dim: int, hidden_dim: int, rng: np.random.Generator
) -> LstmParams:
    """Uniform(-k, k) weights with k = 1/sqrt(hidden_dim); zero biases."""
    k = 1.0 / np.sqrt(hidden_dim)

    def u(*shape):
        return rng.uniform(-k, k, size=shape)

    return LstmParams(
        input_dim=input_dim,
        hidden_dim=hidden_dim,
        W_i=u(hidden_dim, input_dim),
        W_f=u(hidden_dim, input_dim),
        W_o=u(hidden_dim, input_dim),
        W_g=u(hidden_dim, input_dim),
        U_i=u(hidden_dim, hidden_dim),
        U_f=u(hidden_dim, hidden_dim),
        U_o=u(hidden_dim, hidden_dim),
        U_g=u(hidden_dim, hidden_dim),
        b_i=np.zeros(hidden_dim),
        b_f=np.zeros(hidden_dim),
        b_o=np.zeros(hidden_dim),
        b_g=np.zeros(hidden_dim),
        W_y=u(N_CLASSES, hidden_dim),
        b_y=np.zeros(N_CLASSES),
    )


def init_rnn(input_dim: int, hidden_dim: int, rng: np.random.Generator) -> RnnParams:
    k = 1.0 / np.sqrt(hidden_dim)

    def u(*shape):
        return rng.uniform(-k, k, size=shape)

    return RnnParams(
        input_dim=input_dim,
        hidden_dim=hidden_dim,
        W_h=u(hidden_dim, input_dim),
        U_h=u(hidden_dim, hidden_dim),
        b_h=np.zeros(hidden_dim),
        W_y=u(N_CLASSES, hidden_dim),
        b_y=np.zeros(N_CLASSES),
    )


def lstm_step(
    x: np.ndarray, h: np.ndarray, c: np.ndarray, p: LstmParams
) -> tuple[np.ndarray, np.ndarray]:
    """One LSTM step.

    i = sig(W_i x + U_i h + b_i),  f = sig(W_f x + U_f h + b_f),
    o = sig(W_o x + U_o h + b_o),  g = tanh(W_g x + U_g h + b_g),
    c' = f*c + i*g,  h' = o*tanh(c').

    Accepts single vectors or (batch, dim) matrices.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1] != p.input_dim or h.shape[-1] != p.hidden_dim:
        raise ValueError("input/hidden dimensions do not match parameters")
    i = sigmoid(x @ p.W_i.T + h @ p.U_i.T + p.b_i)
    f = sigmoid(x @ p.W_f.T + h @ p.U_f.T + p.b_f)
    o = sigmoid(x @ p.W_o.T + h @ p.U_o.T + p.b_o)
    g = np.tanh(x @ p.W_g.T + h @ p.U_g.T + p.b_g)
    c_new = f * c + i * g
    h_new = o * np.tanh(c_new)
    return h_new, c_new


def rnn_step(x: np.ndarray, h: np.ndarray, p: RnnParams) -> np.ndarray:
    """One vanilla step: h' = tanh(W_h x + U_h h + b_h)."""
    return np.tanh(x @ p.W_h.T + h @ p.U_h.T + p.b_h)


def run_sequence(
    p: CellParams, X: np.ndarray, lengths: np.ndarray
) -> tuple[np.ndarray, list]:
    """Run the cell over a padded batch; returns (final hidden, step caches).

    ``X`` is (batch, steps, input_dim); ``lengths`` gives each sample's
    real token count.  Steps at or beyond a sample's length leave its
    state untouched.
    """
    B, T, _ = X.shape
    H = p.hidden_dim
    h = np.zeros((B, H))
    c = np.zeros((B, H))
    caches: list = []
    for t in range(T):
        active = (t < lengths)[:, None]
        if not active.any():
            break
        x_t = X[:, t, :]
        if isinstance(p, LstmParams):
            i = sigmoid(x_t @ p.W_i.T + h @ p.U_i.T + p.b_i)
            f = sigmoid(x_t @ p.W_f.T + h @ p.U_f.T + p.b_f)
            o = sigmoid(x_t @ p.W_o.T + h @ p.U_o.T + p.b_o)
            g = np.tanh(x_t @ p.W_g.T + h @ p.U_g.T + p.b_g)
            c_new = f * c + i * g
            tanh_c = np.tanh(c_new)
            h_new = o * tanh_c
            caches.append((x_t, h, c, i, f, o, g, tanh_c, active))
            h = np.where(active, h_new, h)
            c = np.where(active, c_new, c)
        else:
            h_new = np.tanh(x_t @ p.W_h.T + h @ p.U_h.T + p.b_h)
            caches.append((x_t, h, h_new, active))
            h = np.where(active, h_new, h)
    return h, caches


def backward_sequence(
    p: CellParams, caches: list, d_h_final: np.ndarray
) -> dict[str, np.ndarray]:
    """Backprop through time; returns gradients for every cell tensor."""
    grads = {name: np.zeros_like(t) for name, t in p.tensors().items()}
    dh = d_h_final.copy()
    if isinstance(p, LstmParams):
        dc = np.zeros_like(dh)
        for x_t, h_prev, c_prev, i, f, o, g, tanh_c, active in reversed(caches):
            dh_t = np.where(active, dh, 0.0)
            dc_t = np.where(active, dc, 0.0)
            do = dh_t * tanh_c
            dc_total = dc_t + dh_t * o * (1.0 - tanh_c * tanh_c)
            di = dc_total * g
            df = dc_total * c_prev
            dg = dc_total * i
            dpre_i = di * i * (1.0 - i)
            dpre_f = df * f * (1.0 - f)
            dpre_o = do * o * (1.0 - o)
            dpre_g = dg * (1.0 - g * g)
            grads["W_i"] += dpre_i.T @ x_t
            grads["W_f"] += dpre_f.T @ x_t
            grads["W_o"] += dpre_o.T @ x_t
            grads["W_g"] += dpre_g.T @ x_t
            grads["U_i"] += dpre_i.T @ h_prev
            grads["U_f"] += dpre_f.T @ h_prev
            grads["U_o"] += dpre_o.T @ h_prev
            grads["U_g"] += dpre_g.T @ h_prev
            grads["b_i"] += dpre_i.sum(axis=0)
            grads["b_f"] += dpre_f.sum(axis=0)
            grads["b_o"] += dpre_o.sum(axis=0)
            grads["b_g"] += dpre_g.sum(axis=0)
            dh_cell = (
                dpre_i @ p.U_i + dpre_f @ p.U_f + dpre_o @ p.U_o + dpre_g @ p.U_g
            )
            dh = dh_cell + np.where(active, 0.0, dh)
            dc = dc_total * f + np.where(active, 0.0, dc)
    else:
        for x_t, h_prev, h_new, active in reversed(caches):
            dh_t = np.where(active, dh, 0.0)
            dpre = dh_t * (1.0 - h_new * h_new)
            grads["W_h"] += dpre.T @ x_t
            grads["U_h"] += dpre.T @ h_prev
            grads["b_h"] += dpre.sum(axis=0)
            dh = dpre @ p.U_h + np.where(active, 0.0, dh)
    return grads
