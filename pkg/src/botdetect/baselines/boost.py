"""AdaBoost (SAMME) over depth-1 decision stumps, binary case.

A stump is (feature, threshold, polarity): with polarity +1 it predicts bot
where x[feature] >= threshold, with polarity -1 the opposite side. Stump
weights are alpha = ln((1 - err) / err); for two classes the SAMME class-count
term ln(K - 1) vanishes. Scores are the logistic transform of the
alpha-weighted vote margin.
"""

from __future__ import annotations

import numpy as np

from .common import BaselineConfig
from ..nnet.layers import sigmoid

_ERR_CLAMP = 1e-10


def _best_stump(x, y, weights):
    """Stump minimizing weighted 0-1 error; exhaustive over features and
    thresholds via prefix sums. Ties keep the lowest feature, then the lowest
    threshold, then polarity +1.
    """
    n, d = x.shape
    signs = 2.0 * y - 1.0
    best = (0, -np.inf, 1.0)
    best_err = np.inf
    for f in range(d):
        order = np.argsort(x[:, f], kind="stable")
        sv = x[order, f]
        sw = weights[order]
        # Candidate thresholds: below the minimum (everything on the >= side),
        # midpoints between distinct neighbors, above the maximum.
        # err for polarity +1 at threshold position k (first k rows predicted
        # human): weight of bots among first k + weight of humans among rest.
        prefix_pos = np.concatenate([[0.0], np.cumsum(np.where(signs[order] > 0, sw, 0.0))])
        prefix_neg = np.concatenate([[0.0], np.cumsum(np.where(signs[order] < 0, sw, 0.0))])
        w_pos_total = float(prefix_pos[-1])
        w_neg_total = float(prefix_neg[-1])
        ks = np.arange(n + 1)
        err_plus = prefix_pos[ks] + (w_neg_total - prefix_neg[ks])
        valid = np.ones(n + 1, dtype=bool)
        valid[1:n] = sv[:-1] < sv[1:]
        thresholds = np.empty(n + 1)
        thresholds[0] = -np.inf
        thresholds[1:n] = (sv[:-1] + sv[1:]) / 2.0
        thresholds[n] = np.inf
        for polarity in (1.0, -1.0):
            errs = err_plus if polarity == 1.0 else (w_pos_total + w_neg_total) - err_plus
            errs = np.where(valid, errs, np.inf)
            k = int(np.argmin(errs))
            if errs[k] < best_err - 1e-15:
                best_err = float(errs[k])
                best = (f, float(thresholds[k]), polarity)
    return best, best_err


def _stump_predict(x, feature, threshold, polarity):
    side = (x[:, int(feature)] >= threshold).astype(np.float64)
    return side if polarity > 0 else 1.0 - side


def fit_adaboost(x: np.ndarray, y: np.ndarray, config: BaselineConfig) -> dict:
    n = x.shape[0]
    weights = np.full(n, 1.0 / n)
    stumps = []
    for _ in range(config.n_stumps):
        (feature, threshold, polarity), err = _best_stump(x, y, weights)
        err = min(max(err, _ERR_CLAMP), 1.0 - _ERR_CLAMP)
        if err >= 0.5 and stumps:
            break
        alpha = float(np.log((1.0 - err) / err))
        if alpha <= 0.0 and stumps:
            break
        alpha = max(alpha, _ERR_CLAMP)
        stumps.append((float(feature), threshold, polarity, alpha))
        predicted = _stump_predict(x, feature, threshold, polarity)
        miss = predicted != y
        weights = weights * np.exp(alpha * miss)
        weights /= weights.sum()
        if err <= _ERR_CLAMP:
            break
    return {"stumps": np.array(stumps, dtype=np.float64)}


def adaboost_margin(params: dict, x: np.ndarray) -> np.ndarray:
    margins = np.zeros(x.shape[0])
    for feature, threshold, polarity, alpha in params["stumps"]:
        votes = 2.0 * _stump_predict(x, feature, threshold, polarity) - 1.0
        margins += alpha * votes
    return margins


def predict_adaboost(params: dict, x: np.ndarray) -> np.ndarray:
    return sigmoid(adaboost_margin(params, x))


def ensemble_training_error(params: dict, x: np.ndarray, y: np.ndarray) -> list[float]:
    """0-1 training error after each successive stump (diagnostic)."""
    margins = np.zeros(x.shape[0])
    errors = []
    for feature, threshold, polarity, alpha in params["stumps"]:
        votes = 2.0 * _stump_predict(x, feature, threshold, polarity) - 1.0
        margins += alpha * votes
        predicted = (margins >= 0.0).astype(np.float64)
        errors.append(float(np.mean(predicted != y)))
    return errors
