"""LSTM cell: batched forward recurrence and full backpropagation through time.

State starts at zero for every sequence and is never carried across inputs.
Padded timesteps leave a sample's state untouched (equivalent to skipping
them, expressed as a per-sample mask so a whole batch advances together).
"""

from __future__ import annotations

import numpy as np

from ..embedding import EmbeddedSequence
from ..errors import DimensionMismatch
from .layers import glorot_uniform, sigmoid

GATES = ("i", "f", "o", "c")

DEFAULT_HIDDEN_DIM = 32


def init_lstm_params(
    rng: np.random.Generator, input_dim: int, hidden_dim: int = DEFAULT_HIDDEN_DIM
) -> dict[str, np.ndarray]:
    """Glorot-uniform gate weights, zero biases except forget bias = 1."""
    params: dict[str, np.ndarray] = {}
    for gate in GATES:
        params[f"W_{gate}"] = glorot_uniform(rng, (hidden_dim, input_dim))
        params[f"U_{gate}"] = glorot_uniform(rng, (hidden_dim, hidden_dim))
        params[f"b_{gate}"] = np.zeros(hidden_dim)
    params["b_f"] = np.ones(hidden_dim)
    return params


def lstm_forward(params: dict[str, np.ndarray], x: np.ndarray, lengths: np.ndarray):
    """Run the recurrence over a batch.

    x: (B, T, d); lengths: (B,) true lengths. Returns (final_h (B, h),
    all_h (B, T, h), cache). all_h[b, t] is the hidden state after step t;
    rows at t >= lengths[b] repeat the last valid state.
    """
    hidden_dim = params["W_i"].shape[0]
    batch, total_steps, input_dim = x.shape
    if params["W_i"].shape[1] != input_dim:
        raise DimensionMismatch(
            f"sequence dimension {input_dim} != cell input dim {params['W_i'].shape[1]}"
        )
    steps = int(lengths.max()) if batch else 0
    h = np.zeros((batch, hidden_dim))
    c = np.zeros((batch, hidden_dim))
    all_h = np.zeros((batch, total_steps, hidden_dim))
    cache = []
    for t in range(steps):
        x_t = x[:, t, :]
        h_prev, c_prev = h, c
        a_i = x_t @ params["W_i"].T + h_prev @ params["U_i"].T + params["b_i"]
        a_f = x_t @ params["W_f"].T + h_prev @ params["U_f"].T + params["b_f"]
        a_o = x_t @ params["W_o"].T + h_prev @ params["U_o"].T + params["b_o"]
        a_c = x_t @ params["W_c"].T + h_prev @ params["U_c"].T + params["b_c"]
        gate_i = sigmoid(a_i)
        gate_f = sigmoid(a_f)
        gate_o = sigmoid(a_o)
        cand = np.tanh(a_c)
        c_raw = gate_f * c_prev + gate_i * cand
        c_tanh = np.tanh(c_raw)
        h_raw = gate_o * c_tanh
        mask = (t < lengths).astype(np.float64)[:, None]
        h = mask * h_raw + (1.0 - mask) * h_prev
        c = mask * c_raw + (1.0 - mask) * c_prev
        all_h[:, t, :] = h
        cache.append((x_t, h_prev, c_prev, gate_i, gate_f, gate_o, cand, c_tanh, mask))
    if steps:
        all_h[:, steps:, :] = h[:, None, :]
    return h, all_h, cache


def lstm_backward(params: dict[str, np.ndarray], cache, d_final_h: np.ndarray):
    """BPTT given the loss gradient at the final hidden state."""
    grads = {
        f"{kind}_{gate}": np.zeros_like(params[f"{kind}_{gate}"])
        for kind in ("W", "U", "b")
        for gate in GATES
    }
    dh = d_final_h
    dc = np.zeros_like(d_final_h)
    for x_t, h_prev, c_prev, gate_i, gate_f, gate_o, cand, c_tanh, mask in reversed(cache):
        dh_raw = mask * dh
        dh_skip = (1.0 - mask) * dh
        dc_raw = mask * dc
        dc_skip = (1.0 - mask) * dc
        d_gate_o = dh_raw * c_tanh
        dc_raw = dc_raw + dh_raw * gate_o * (1.0 - c_tanh * c_tanh)
        d_gate_f = dc_raw * c_prev
        d_gate_i = dc_raw * cand
        d_cand = dc_raw * gate_i
        dc = dc_raw * gate_f + dc_skip
        da_i = d_gate_i * gate_i * (1.0 - gate_i)
        da_f = d_gate_f * gate_f * (1.0 - gate_f)
        da_o = d_gate_o * gate_o * (1.0 - gate_o)
        da_c = d_cand * (1.0 - cand * cand)
        dh = dh_skip
        for gate, da in zip(GATES, (da_i, da_f, da_o, da_c)):
            grads[f"W_{gate}"] += da.T @ x_t
            grads[f"U_{gate}"] += da.T @ h_prev
            grads[f"b_{gate}"] += da.sum(axis=0)
            dh = dh + da @ params[f"U_{gate}"]
    return grads


def lstm_forward_sequence(
    params: dict[str, np.ndarray], sequence: EmbeddedSequence
) -> tuple[np.ndarray, np.ndarray]:
    """Single-sequence forward: (final 32-vector, per-step states up to the
    true length). A zero-length sequence yields a zero final state."""
    x = sequence.matrix[None, :, :]
    lengths = np.array([sequence.true_length])
    final_h, all_h, _ = lstm_forward(params, x, lengths)
    return final_h[0], all_h[0, : sequence.true_length, :].copy()
