"""SMOTE oversampling, ENN and Tomek-link undersampling, and their combos.

All neighbor searches run on per-column z-scored copies of the features
(count features span orders of magnitude; raw Euclidean distance would be
dominated by the largest column). Synthetic rows are interpolated in the raw
feature space, so they are exact convex combinations of two original rows.
Ties in distance break toward the lower row index.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .data import FeatureMatrix, Label, Standardizer
from .errors import DegenerateMinority, InsufficientRows


class Strategy(str, enum.Enum):
    NONE = "none"
    SMOTE = "smote"
    SMOTENN = "smotenn"
    SMOTOMEK = "smotomek"


@dataclass(frozen=True)
class ResampleConfig:
    strategy: Strategy = Strategy.NONE
    smote_k: int = 5
    enn_k: int = 3
    target_ratio: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.smote_k < 1 or self.enn_k < 1:
            raise ValueError("neighbor counts must be >= 1")
        if self.target_ratio <= 0.0:
            raise ValueError("target_ratio must be positive")


@dataclass
class StageRecord:
    name: str
    rows_in: int
    rows_out: int
    added: int
    removed: int
    human_out: int
    bot_out: int


@dataclass
class ResampleDiagnostics:
    strategy: Strategy
    stages: list[StageRecord] = field(default_factory=list)
    assumptions: list[str] = field(default_factory=list)

    def record(self, name: str, before: FeatureMatrix, after: FeatureMatrix) -> None:
        human, bot = after.class_counts()
        self.stages.append(
            StageRecord(
                name=name,
                rows_in=before.n_rows,
                rows_out=after.n_rows,
                added=max(0, after.n_rows - before.n_rows),
                removed=max(0, before.n_rows - after.n_rows),
                human_out=human,
                bot_out=bot,
            )
        )

    def to_kv_lines(self) -> list[str]:
        lines = [f"strategy = {self.strategy.value}"]
        for s in self.stages:
            prefix = f"stage.{s.name}"
            lines.append(f"{prefix}.rows_in = {s.rows_in}")
            lines.append(f"{prefix}.rows_out = {s.rows_out}")
            lines.append(f"{prefix}.added = {s.added}")
            lines.append(f"{prefix}.removed = {s.removed}")
            lines.append(f"{prefix}.human = {s.human_out}")
            lines.append(f"{prefix}.bot = {s.bot_out}")
        for i, note in enumerate(self.assumptions):
            lines.append(f"assumption.{i} = {note}")
        return lines


def _standardized(matrix: FeatureMatrix) -> np.ndarray:
    return Standardizer.fit(matrix.features).transform(matrix.features)


def _nearest(features: np.ndarray, query: int, candidates: np.ndarray, k: int) -> np.ndarray:
    """Indices of the k candidates nearest to the query row.

    Squared Euclidean distance; exact ties resolve to the lower row index.
    """
    diffs = features[candidates] - features[query]
    d2 = np.sum(diffs * diffs, axis=1)
    order = np.lexsort((candidates, d2))
    return candidates[order[:k]]


def knn_indices(
    matrix: FeatureMatrix,
    query_index: int,
    k: int,
    same_class_only: bool = False,
) -> np.ndarray:
    """k nearest rows to the query row (itself excluded), on raw features.

    The resampling pipelines call this on standardized copies of their input.
    """
    n = matrix.n_rows
    if not 0 <= query_index < n:
        raise IndexError(f"query index {query_index} out of range")
    mask = np.ones(n, dtype=bool)
    mask[query_index] = False
    if same_class_only:
        mask &= matrix.labels == matrix.labels[query_index]
    candidates = np.flatnonzero(mask)
    if k > candidates.size:
        raise InsufficientRows(
            f"need {k} neighbors but only {candidates.size} eligible rows"
        )
    return _nearest(matrix.features, query_index, candidates, k)


def smote(matrix: FeatureMatrix, config: ResampleConfig) -> FeatureMatrix:
    """Append synthetic minority rows until minority/majority = target_ratio.

    Each synthetic row is x_i + u * (x_nn - x_i) with u ~ Uniform[0,1] and
    x_nn drawn uniformly from x_i's smote_k nearest minority neighbors. Base
    rows cycle through the minority in index order, so coverage is even.
    """
    human, bot = matrix.class_counts()
    minority = Label.BOT if bot <= human else Label.HUMAN
    n_min, n_maj = (bot, human) if minority == Label.BOT else (human, bot)
    if n_min < 2:
        raise DegenerateMinority(f"minority class has {n_min} row(s); need >= 2")
    if config.smote_k >= n_min:
        raise InsufficientRows(
            f"smote_k={config.smote_k} must be < minority size {n_min}"
        )
    n_new = max(0, int(round(config.target_ratio * n_maj)) - n_min)
    if n_new == 0:
        return matrix

    minority_rows = np.flatnonzero(matrix.labels == minority)
    std = FeatureMatrix(_standardized(matrix), matrix.schema, matrix.labels)
    neighbor_cache = {
        int(i): knn_indices(std, int(i), config.smote_k, same_class_only=True)
        for i in minority_rows
    }
    rng = np.random.Generator(np.random.PCG64(config.seed))
    raw = matrix.features
    synthetic = np.empty((n_new, matrix.n_features), dtype=np.float64)
    for j in range(n_new):
        base = int(minority_rows[j % n_min])
        neighbors = neighbor_cache[base]
        nn = int(neighbors[rng.integers(0, len(neighbors))])
        u = rng.uniform()
        synthetic[j] = raw[base] + u * (raw[nn] - raw[base])
    return matrix.with_rows_appended(synthetic, np.full(n_new, minority, dtype=np.int8))


def tomek_links(matrix: FeatureMatrix) -> set[tuple[int, int]]:
    """All cross-class mutual nearest-neighbor pairs, as (low, high) tuples."""
    n = matrix.n_rows
    if n < 2:
        return set()
    std = FeatureMatrix(_standardized(matrix), matrix.schema, matrix.labels)
    nn = np.empty(n, dtype=np.int64)
    for i in range(n):
        nn[i] = knn_indices(std, i, 1)[0]
    links: set[tuple[int, int]] = set()
    for a in range(n):
        b = int(nn[a])
        if matrix.labels[a] != matrix.labels[b] and int(nn[b]) == a:
            links.add((min(a, b), max(a, b)))
    return links


def enn_filter(matrix: FeatureMatrix, enn_k: int = 3) -> FeatureMatrix:
    """Drop rows whose label loses the strict majority vote of their k nearest
    neighbors. A single pass: all votes are taken against the unedited input,
    so a second application may remove more rows.
    """
    n = matrix.n_rows
    if enn_k >= n:
        raise InsufficientRows(f"enn_k={enn_k} must be < row count {n}")
    std = FeatureMatrix(_standardized(matrix), matrix.schema, matrix.labels)
    keep = np.ones(n, dtype=bool)
    for i in range(n):
        neighbors = knn_indices(std, i, enn_k)
        opposite = int(np.sum(matrix.labels[neighbors] != matrix.labels[i]))
        if opposite * 2 > enn_k:
            keep[i] = False
    return matrix.select(np.flatnonzero(keep))


def apply_strategy(
    matrix: FeatureMatrix, config: ResampleConfig
) -> tuple[FeatureMatrix, ResampleDiagnostics]:
    """Run the configured pipeline and report per-stage row accounting."""
    diag = ResampleDiagnostics(strategy=config.strategy)
    defaults = ResampleConfig()
    if config.strategy != Strategy.NONE:
        if config.smote_k == defaults.smote_k:
            diag.assumptions.append("smote_k defaulted to 5")
        if config.target_ratio == defaults.target_ratio:
            diag.assumptions.append("target_ratio defaulted to 1.0 (full balance)")
    if config.strategy in (Strategy.SMOTENN,) and config.enn_k == defaults.enn_k:
        diag.assumptions.append("enn_k defaulted to 3")

    if config.strategy == Strategy.NONE:
        diag.record("none", matrix, matrix)
        return matrix, diag

    oversampled = smote(matrix, config)
    diag.record("smote", matrix, oversampled)
    if config.strategy == Strategy.SMOTE:
        return oversampled, diag

    if config.strategy == Strategy.SMOTENN:
        # Both classes are eligible for editing after oversampling.
        cleaned = enn_filter(oversampled, config.enn_k)
        diag.record("enn", oversampled, cleaned)
        return cleaned, diag

    links = tomek_links(oversampled)
    drop = sorted({i for pair in links for i in pair})
    keep = np.setdiff1d(np.arange(oversampled.n_rows), np.array(drop, dtype=np.int64))
    cleaned = oversampled.select(keep)
    diag.record("tomek", oversampled, cleaned)
    return cleaned, diag
