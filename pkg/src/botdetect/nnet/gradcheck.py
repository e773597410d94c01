"""Central finite-difference verification of analytic gradients.

The check perturbs individual parameter coordinates in place, so the loss
callable must read the live parameter dict. Every parameter group is always
covered; within large groups a seeded subset of coordinates keeps the runtime
bounded (512 coordinates per group by default, everything for small groups).

The relative error denominator has a floor: below it the comparison becomes
an absolute one, because central differences at eps=1e-5 resolve gradients
only down to about 1e-9.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

DEFAULT_EPS = 1e-5
DEFAULT_COORDS_PER_GROUP = 512
REL_FLOOR = 1e-4


def relative_error(analytic: float, numeric: float, floor: float = REL_FLOOR) -> float:
    return abs(analytic - numeric) / max(abs(analytic), abs(numeric), floor)


def check_group(
    loss_fn: Callable[[], float],
    param: np.ndarray,
    analytic: np.ndarray,
    rng: np.random.Generator,
    eps: float = DEFAULT_EPS,
    coords_per_group: int = DEFAULT_COORDS_PER_GROUP,
) -> float:
    """Max relative error between analytic and numeric partials of one group."""
    flat = param.reshape(-1)
    grad = analytic.reshape(-1)
    size = flat.shape[0]
    if size <= coords_per_group:
        coords = np.arange(size)
    else:
        coords = rng.choice(size, size=coords_per_group, replace=False)
        coords.sort()
    worst = 0.0
    for i in coords:
        original = flat[i]
        flat[i] = original + eps
        plus = loss_fn()
        flat[i] = original - eps
        minus = loss_fn()
        flat[i] = original
        numeric = (plus - minus) / (2.0 * eps)
        worst = max(worst, relative_error(float(grad[i]), numeric))
    return worst


def check_gradients(
    loss_fn: Callable[[], float],
    params: dict[str, np.ndarray],
    analytic: dict[str, np.ndarray],
    seed: int = 0,
    eps: float = DEFAULT_EPS,
    coords_per_group: int = DEFAULT_COORDS_PER_GROUP,
) -> dict[str, float]:
    """Per-group max relative errors, covering every parameter group."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return {
        name: check_group(loss_fn, params[name], analytic[name], rng,
                          eps=eps, coords_per_group=coords_per_group)
        for name in sorted(params)
    }
