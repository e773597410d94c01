"""Independent brute-force oracles used by the unit and acceptance tests.

Everything here is deliberately naive (exhaustive loops, scalar arithmetic)
and shares no code with the library paths it checks, beyond the documented
conventions (z-scored distances, lower-index tie breaks).
"""

from __future__ import annotations

import numpy as np

from botdetect.data import FeatureMatrix, Standardizer


def standardized_copy(matrix: FeatureMatrix) -> np.ndarray:
    return Standardizer.fit(matrix.features).transform(matrix.features)


def brute_knn(features: np.ndarray, query: int, k: int, candidates) -> list[int]:
    scored = []
    for j in candidates:
        if j == query:
            continue
        d = 0.0
        for a, b in zip(features[j], features[query]):
            d += (a - b) ** 2
        scored.append((d, j))
    scored.sort()
    return [j for _, j in scored[:k]]


def brute_tomek(matrix: FeatureMatrix) -> set[tuple[int, int]]:
    x = standardized_copy(matrix)
    n = matrix.n_rows
    nearest = [brute_knn(x, i, 1, range(n))[0] for i in range(n)]
    links = set()
    for a in range(n):
        b = nearest[a]
        if matrix.labels[a] != matrix.labels[b] and nearest[b] == a:
            links.add((min(a, b), max(a, b)))
    return links


def brute_enn_keep(matrix: FeatureMatrix, k: int) -> list[int]:
    x = standardized_copy(matrix)
    n = matrix.n_rows
    keep = []
    for i in range(n):
        neighbors = brute_knn(x, i, k, range(n))
        opposite = sum(1 for j in neighbors if matrix.labels[j] != matrix.labels[i])
        if not opposite * 2 > k:
            keep.append(i)
    return keep


def pair_auc(scores, labels) -> float:
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels)
    pos = scores[labels == 1]
    neg = scores[labels == 0]
    wins = ties = 0
    for p in pos:
        for q in neg:
            if p > q:
                wins += 1
            elif p == q:
                ties += 1
    return (wins + 0.5 * ties) / (len(pos) * len(neg))


def is_convex_combination(row, originals: np.ndarray, tol: float = 1e-9) -> bool:
    """True if row = a + u*(b - a) for some original rows a, b and u in [0,1]."""
    n = originals.shape[0]
    for i in range(n):
        a = originals[i]
        if np.max(np.abs(row - a)) <= tol:
            return True
        for j in range(n):
            if j == i:
                continue
            b = originals[j]
            diff = b - a
            pivot = int(np.argmax(np.abs(diff)))
            if diff[pivot] == 0.0:
                continue
            u = (row[pivot] - a[pivot]) / diff[pivot]
            if not -tol <= u <= 1.0 + tol:
                continue
            if np.max(np.abs(a + u * diff - row)) <= tol:
                return True
    return False


def scalar_lstm_final(params: dict[str, np.ndarray], matrix: np.ndarray,
                      true_length: int) -> tuple[np.ndarray, np.ndarray]:
    """Naive per-step, per-unit LSTM recurrence; returns (final_h, all_h)."""

    def sig(v):
        return 1.0 / (1.0 + np.exp(-v))

    hidden = params["W_i"].shape[0]
    h = np.zeros(hidden)
    c = np.zeros(hidden)
    states = []
    for t in range(true_length):
        x_t = matrix[t]
        h_new = np.zeros(hidden)
        c_new = np.zeros(hidden)
        for unit in range(hidden):
            a_i = params["b_i"][unit] + float(params["W_i"][unit] @ x_t) + float(params["U_i"][unit] @ h)
            a_f = params["b_f"][unit] + float(params["W_f"][unit] @ x_t) + float(params["U_f"][unit] @ h)
            a_o = params["b_o"][unit] + float(params["W_o"][unit] @ x_t) + float(params["U_o"][unit] @ h)
            a_c = params["b_c"][unit] + float(params["W_c"][unit] @ x_t) + float(params["U_c"][unit] @ h)
            c_new[unit] = sig(a_f) * c[unit] + sig(a_i) * np.tanh(a_c)
            h_new[unit] = sig(a_o) * np.tanh(c_new[unit])
        h, c = h_new, c_new
        states.append(h.copy())
    all_h = np.vstack(states) if states else np.zeros((0, hidden))
    return h, all_h


def scalar_bce(score: float, target: float, clamp: float = 1e-7) -> float:
    p = min(max(score, clamp), 1.0 - clamp)
    return -(target * np.log(p) + (1.0 - target) * np.log(1.0 - p))


def scalar_contextual_forward(model, sequence, metadata) -> tuple[float, float]:
    """Layer-by-layer trace of the full net using plain loops."""

    def sig(v):
        return 1.0 / (1.0 + np.exp(-v))

    p = model.params
    final_h, _ = scalar_lstm_final(p, sequence.matrix, sequence.true_length)
    if model.config.use_metadata:
        meta = model.metadata_standardizer.transform(metadata) \
            if model.metadata_standardizer is not None else metadata
        u = np.concatenate([final_h, meta])
    else:
        u = final_h
    r1 = np.array([max(0.0, float(p["dense1.W"][i] @ u) + p["dense1.b"][i])
                   for i in range(p["dense1.W"].shape[0])])
    r2 = np.array([max(0.0, float(p["dense2.W"][i] @ r1) + p["dense2.b"][i])
                   for i in range(p["dense2.W"].shape[0])])
    main = sig(float(p["main.W"][0] @ r2) + p["main.b"][0])
    aux = sig(float(p["aux.W"][0] @ final_h) + p["aux.b"][0]) if model.config.use_aux else None
    return float(main), (float(aux) if aux is not None else None)
