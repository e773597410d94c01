"""Feed-forward net baseline: ReLU hidden layers, sigmoid output, Adam.

Layer sizes come from the config (e.g. 500,200,1 or 300,200,1); the last
entry must be 1. Parameters live in a flat dict (W0, b0, W1, ...) so the
generic gradient checker can walk them.
"""

from __future__ import annotations

import numpy as np

from ..nnet.layers import (
    Adam,
    affine,
    affine_backward,
    bce,
    bce_grad_wrt_logit,
    glorot_uniform,
    relu,
    sigmoid,
)
from .common import BaselineConfig


def init_mlp_params(rng: np.random.Generator, input_dim: int,
                    layers: tuple[int, ...]) -> dict[str, np.ndarray]:
    if layers[-1] != 1:
        raise ValueError(f"final layer size must be 1, got {layers[-1]}")
    params: dict[str, np.ndarray] = {}
    fan_in = input_dim
    for i, size in enumerate(layers):
        params[f"W{i}"] = glorot_uniform(rng, (size, fan_in))
        params[f"b{i}"] = np.zeros(size)
        fan_in = size
    return params


def mlp_forward(params: dict, x: np.ndarray, keep_cache: bool = False):
    n_layers = len([k for k in params if k.startswith("W")])
    cache = []
    h = x
    for i in range(n_layers):
        z = affine(h, params[f"W{i}"], params[f"b{i}"])
        if keep_cache:
            cache.append((h, z))
        h = relu(z) if i < n_layers - 1 else z
    scores = sigmoid(h)[:, 0]
    return (scores, cache) if keep_cache else scores


def mlp_grads(params: dict, cache, scores: np.ndarray, targets: np.ndarray) -> dict:
    n_layers = len(cache)
    grads: dict[str, np.ndarray] = {}
    dout = bce_grad_wrt_logit(scores, targets)[:, None]
    for i in range(n_layers - 1, -1, -1):
        h_in, z = cache[i]
        if i < n_layers - 1:
            dout = dout * (z > 0)
        dh, dw, db = affine_backward(dout, h_in, params[f"W{i}"])
        grads[f"W{i}"] = dw
        grads[f"b{i}"] = db
        dout = dh
    return grads


def fit_mlp(x: np.ndarray, y: np.ndarray, config: BaselineConfig,
            rng: np.random.Generator) -> dict:
    params = init_mlp_params(rng, x.shape[1], config.mlp_layers)
    optimizer = Adam(params, lr=config.mlp_lr, beta1=config.mlp_beta1,
                     beta2=config.mlp_beta2, eps=config.mlp_eps)
    n = x.shape[0]
    for _ in range(config.mlp_epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.mlp_batch):
            idx = order[start : start + config.mlp_batch]
            scores, cache = mlp_forward(params, x[idx], keep_cache=True)
            grads = mlp_grads(params, cache, scores, y[idx])
            optimizer.step(grads)
    return params


def mlp_loss(params: dict, x: np.ndarray, y: np.ndarray) -> float:
    return bce(mlp_forward(params, x), y)
