"""Hidden-state introspection: per-timestep activation traces for single
tweets and per-unit activation distributions over a corpus, split by class.

Traces reuse the model's forward pass directly, so exported values are
bit-identical to what the classifier computed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Label, TweetRecord, encode_tweet_metadata
from .embedding import EmbeddingTable, embed
from .errors import SingleClass
from .nnet.model import ContextualLstmModel
from .tokenizer import tokenize

DEFAULT_BINS = 50


@dataclass(frozen=True)
class ActivationTrace:
    """LSTM outputs per timestep (true_length x 32), aligned with tokens."""

    matrix: np.ndarray
    tokens: tuple[str, ...]
    empty: bool

    def __post_init__(self):
        if self.matrix.shape[0] != len(self.tokens):
            raise ValueError("trace rows must align with tokens")


@dataclass(frozen=True)
class UnitDistribution:
    unit_index: int
    label: Label
    bin_edges: np.ndarray
    counts: np.ndarray
    mean: float
    variance: float
    quantiles: tuple[float, ...]  # 5%, 25%, 50%, 75%, 95%


@dataclass(frozen=True)
class UnitDistributionReport:
    distributions: tuple[UnitDistribution, ...]
    ks_by_unit: np.ndarray
    ranking: tuple[int, ...]  # unit indices, most class-separating first


def _embed_tweet(model, table: EmbeddingTable, tweet: TweetRecord,
                 max_len: int, truncation: str, repeat_tag: bool):
    tokens = tokenize(tweet.text, repeat_tag=repeat_tag)
    return tokens, embed(tokens, table, max_len=max_len, truncation=truncation)


def trace_tweet(
    model: ContextualLstmModel,
    table: EmbeddingTable,
    tweet: TweetRecord,
    max_len: int = 30,
    truncation: str = "tail",
    repeat_tag: bool = False,
) -> ActivationTrace:
    """Hidden states of the forward pass, one row per embedded token.

    A tweet with zero tokens returns an empty trace flagged as such.
    """
    tokens, sequence = _embed_tweet(model, table, tweet, max_len, truncation, repeat_tag)
    kept = tuple(tokens[: sequence.true_length]) if truncation == "tail" \
        else tuple(tokens[-sequence.true_length:] if sequence.true_length else ())
    meta = encode_tweet_metadata(tweet.metadata) if model.config.use_metadata else None
    _, _, hidden = model.forward(sequence, meta)
    return ActivationTrace(matrix=hidden, tokens=kept, empty=sequence.true_length == 0)


def ks_statistic(a: np.ndarray, b: np.ndarray) -> float:
    """Two-sample Kolmogorov-Smirnov statistic: sup |F_a - F_b|."""
    a = np.sort(np.asarray(a, dtype=np.float64))
    b = np.sort(np.asarray(b, dtype=np.float64))
    pooled = np.concatenate([a, b])
    f_a = np.searchsorted(a, pooled, side="right") / a.shape[0]
    f_b = np.searchsorted(b, pooled, side="right") / b.shape[0]
    return float(np.max(np.abs(f_a - f_b)))


def unit_distributions(
    model: ContextualLstmModel,
    table: EmbeddingTable,
    tweets: list[TweetRecord],
    max_len: int = 30,
    truncation: str = "tail",
    repeat_tag: bool = False,
    bins: int = DEFAULT_BINS,
) -> UnitDistributionReport:
    """Final-state value distributions per (unit, class) over a corpus.

    Histograms use uniform bins on [-1, 1] (the tanh-bounded output range)
    and conserve mass: each (unit, class) histogram sums to that class's
    tweet count. Units are ranked by the KS statistic between their per-class
    value distributions.
    """
    hidden_dim = model.config.hidden_dim
    finals = {Label.HUMAN: [], Label.BOT: []}
    for tweet in tweets:
        _, sequence = _embed_tweet(model, table, tweet, max_len, truncation, repeat_tag)
        # Single shared code path: reuse forward() for the final state.
        meta = encode_tweet_metadata(tweet.metadata) if model.config.use_metadata else None
        _, _, hidden = model.forward(sequence, meta)
        final = hidden[-1] if hidden.shape[0] else np.zeros(hidden_dim)
        finals[tweet.label].append(final)
    if not finals[Label.HUMAN] or not finals[Label.BOT]:
        raise SingleClass("unit distributions need tweets from both classes")

    edges = np.linspace(-1.0, 1.0, bins + 1)
    distributions = []
    ks = np.zeros(hidden_dim)
    stacked = {lab: np.vstack(vals) for lab, vals in finals.items()}
    for unit in range(hidden_dim):
        for label in (Label.HUMAN, Label.BOT):
            values = stacked[label][:, unit]
            counts, _ = np.histogram(values, bins=edges)
            distributions.append(
                UnitDistribution(
                    unit_index=unit,
                    label=label,
                    bin_edges=edges,
                    counts=counts,
                    mean=float(values.mean()),
                    variance=float(values.var()),
                    quantiles=tuple(
                        float(q) for q in np.quantile(values, (0.05, 0.25, 0.5, 0.75, 0.95))
                    ),
                )
            )
        ks[unit] = ks_statistic(stacked[Label.HUMAN][:, unit], stacked[Label.BOT][:, unit])
    ranking = tuple(int(u) for u in np.argsort(-ks, kind="stable"))
    return UnitDistributionReport(
        distributions=tuple(distributions), ks_by_unit=ks, ranking=ranking
    )


def cell_states(model: ContextualLstmModel, sequence) -> np.ndarray:
    """Cell-state values c_t per real timestep (unbounded, unlike outputs)."""
    from .nnet.lstm import lstm_forward

    _, _, cache = lstm_forward(
        model.params, sequence.matrix[None, :, :], np.array([sequence.true_length])
    )
    states = []
    for _, _, c_prev, gate_i, gate_f, _, cand, _, mask in cache:
        c_raw = gate_f * c_prev + gate_i * cand
        states.append((mask * c_raw + (1.0 - mask) * c_prev)[0])
    if not states:
        return np.zeros((0, model.config.hidden_dim))
    return np.vstack(states)


def _heatmap_lines(matrix: np.ndarray, tokens: tuple[str, ...]) -> list[str]:
    header = "unit," + ",".join(f"t{t}" for t in range(len(tokens)))
    token_row = "token," + ",".join(tokens)
    lines = [header, token_row]
    for unit in range(matrix.shape[1] if matrix.size else 0):
        cells = ",".join(repr(float(v)) for v in matrix[:, unit])
        lines.append(f"unit_{unit:02d},{cells}")
    return lines


def trace_csv_lines(trace: ActivationTrace) -> list[str]:
    """Heat-map data: a token-alignment row, then one row per hidden unit."""
    return _heatmap_lines(trace.matrix, trace.tokens)


def cell_trace_csv_lines(
    model: ContextualLstmModel,
    table: EmbeddingTable,
    tweet: TweetRecord,
    max_len: int = 30,
    truncation: str = "tail",
    repeat_tag: bool = False,
) -> list[str]:
    tokens, sequence = _embed_tweet(model, table, tweet, max_len, truncation, repeat_tag)
    kept = tuple(tokens[: sequence.true_length]) if truncation == "tail" \
        else tuple(tokens[-sequence.true_length:] if sequence.true_length else ())
    return _heatmap_lines(cell_states(model, sequence), kept)


def distribution_csv_lines(report: UnitDistributionReport) -> list[str]:
    lines = ["unit,class,bin_low,bin_high,count"]
    for dist in report.distributions:
        name = dist.label.name.lower()
        for low, high, count in zip(dist.bin_edges[:-1], dist.bin_edges[1:], dist.counts):
            lines.append(
                f"{dist.unit_index},{name},{float(low)!r},{float(high)!r},{int(count)}"
            )
    return lines


def ks_csv_lines(report: UnitDistributionReport) -> list[str]:
    lines = ["rank,unit,ks_statistic"]
    for rank, unit in enumerate(report.ranking):
        lines.append(f"{rank},{unit},{float(report.ks_by_unit[unit])!r}")
    return lines
