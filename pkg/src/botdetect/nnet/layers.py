"""Small functional building blocks shared by the nets in this package."""

from __future__ import annotations

import numpy as np

# Scores are clamped into [CLAMP, 1 - CLAMP] before the log in cross-entropy.
CLAMP = 1e-7


def sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def relu(z: np.ndarray) -> np.ndarray:
    return np.maximum(z, 0.0)


def glorot_uniform(rng: np.random.Generator, shape: tuple[int, int]) -> np.ndarray:
    fan_out, fan_in = shape
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape)


def affine(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """x: (B, in); w: (out, in); b: (out,) -> (B, out)."""
    return x @ w.T + b


def affine_backward(dout, x, w):
    """Gradients of an affine layer: returns (dx, dw, db)."""
    return dout @ w, dout.T @ x, dout.sum(axis=0)


def bce(scores: np.ndarray, targets: np.ndarray) -> float:
    """Mean binary cross-entropy with the documented clamp."""
    p = np.clip(scores, CLAMP, 1.0 - CLAMP)
    return float(np.mean(-(targets * np.log(p) + (1.0 - targets) * np.log(1.0 - p))))


def bce_grad_wrt_logit(scores: np.ndarray, targets: np.ndarray) -> np.ndarray:
    """d(mean BCE)/d(logit); zero where the clamp is active."""
    active = (scores > CLAMP) & (scores < 1.0 - CLAMP)
    grad = np.where(active, scores - targets, 0.0)
    return grad / scores.shape[0]


class Adam:
    """Adam optimizer over a dict of named parameter arrays (updated in place)."""

    def __init__(self, params: dict[str, np.ndarray], lr=1e-3, beta1=0.9,
                 beta2=0.999, eps=1e-8):
        self.params = params
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self._m = {k: np.zeros_like(v) for k, v in params.items()}
        self._v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        for key in self.params:
            g = grads[key]
            m = self._m[key]
            v = self._v[key]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * (g * g)
            m_hat = m / (1.0 - self.beta1**self.t)
            v_hat = v / (1.0 - self.beta2**self.t)
            self.params[key] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
