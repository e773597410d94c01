"""The contextual tweet classifier and its tweet-only variant.

Tweet text is embedded, run through a 32-unit LSTM, and the final state is
concatenated with the six standardized metadata counters before two ReLU
layers (128, 64) and a sigmoid output. An auxiliary sigmoid head reads the
LSTM state directly; it exists for training regularization only and its loss
is blended with the main loss at fixed weights (main 0.8, aux 0.2). The
tweet-only variant drops the metadata path and the auxiliary head.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..data import Label, Standardizer
from ..embedding import EmbeddedSequence
from ..errors import DegenerateData, DimensionMismatch
from ..persist import load_model, save_model
from .layers import Adam, affine, affine_backward, bce, bce_grad_wrt_logit, \
    glorot_uniform, relu, sigmoid
from .lstm import init_lstm_params, lstm_backward, lstm_forward

METADATA_DIM = 6


@dataclass(frozen=True)
class NetConfig:
    embedding_dim: int
    hidden_dim: int = 32
    dense_sizes: tuple[int, int] = (128, 64)
    use_metadata: bool = True
    use_aux: bool = True
    loss_weights: tuple[float, float] = (0.8, 0.2)  # (main, aux)
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    adam_eps: float = 1e-8
    batch_size: int = 64
    epochs: int = 30
    seed: int = 0

    def __post_init__(self):
        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be positive")
        w_main, w_aux = self.loss_weights
        if w_main < 0 or w_aux < 0 or abs(w_main + w_aux - 1.0) > 1e-12:
            raise ValueError("loss weights must be non-negative and sum to 1")
        if not self.use_aux and w_aux != 0.0:
            raise ValueError("aux loss weight must be 0 when the aux head is off")

    @classmethod
    def contextual(cls, embedding_dim: int, **overrides) -> NetConfig:
        return cls(embedding_dim=embedding_dim, **overrides)

    @classmethod
    def tweet_only(cls, embedding_dim: int, **overrides) -> NetConfig:
        overrides.setdefault("loss_weights", (1.0, 0.0))
        return cls(
            embedding_dim=embedding_dim,
            use_metadata=False,
            use_aux=False,
            **overrides,
        )


class ContextualLstmModel:
    """All learned parameters plus the hyperparameters that produced them."""

    def __init__(self, config: NetConfig, params: dict[str, np.ndarray],
                 metadata_standardizer: Standardizer | None = None):
        self.config = config
        self.params = params
        self.metadata_standardizer = metadata_standardizer

    @classmethod
    def initialize(cls, config: NetConfig, seed: int | None = None) -> ContextualLstmModel:
        rng = np.random.Generator(np.random.PCG64(config.seed if seed is None else seed))
        params = init_lstm_params(rng, config.embedding_dim, config.hidden_dim)
        d1, d2 = config.dense_sizes
        dense1_in = config.hidden_dim + (METADATA_DIM if config.use_metadata else 0)
        if config.use_aux:
            params["aux.W"] = glorot_uniform(rng, (1, config.hidden_dim))
            params["aux.b"] = np.zeros(1)
        params["dense1.W"] = glorot_uniform(rng, (d1, dense1_in))
        params["dense1.b"] = np.zeros(d1)
        params["dense2.W"] = glorot_uniform(rng, (d2, d1))
        params["dense2.b"] = np.zeros(d2)
        params["main.W"] = glorot_uniform(rng, (1, d2))
        params["main.b"] = np.zeros(1)
        return cls(config, params)

    # -- forward ---------------------------------------------------------

    def _standardize_meta(self, metadata: np.ndarray) -> np.ndarray:
        if self.metadata_standardizer is None:
            return metadata
        return self.metadata_standardizer.transform(metadata)

    def forward_batch(self, x: np.ndarray, lengths: np.ndarray,
                      metadata: np.ndarray | None, keep_cache: bool = False):
        """Batched forward pass on already-standardized metadata.

        Returns (main_scores, aux_scores, all_h) plus a cache when training.
        """
        p = self.params
        cfg = self.config
        final_h, all_h, lstm_cache = lstm_forward(p, x, lengths)
        if cfg.use_metadata:
            if metadata is None or metadata.shape[1] != METADATA_DIM:
                raise DimensionMismatch("metadata must be a (B, 6) array")
            u = np.concatenate([final_h, metadata], axis=1)
        else:
            u = final_h
        z1 = affine(u, p["dense1.W"], p["dense1.b"])
        r1 = relu(z1)
        z2 = affine(r1, p["dense2.W"], p["dense2.b"])
        r2 = relu(z2)
        z_main = affine(r2, p["main.W"], p["main.b"])
        main_scores = sigmoid(z_main)[:, 0]
        if cfg.use_aux:
            z_aux = affine(final_h, p["aux.W"], p["aux.b"])
            aux_scores = sigmoid(z_aux)[:, 0]
        else:
            aux_scores = None
        if not keep_cache:
            return main_scores, aux_scores, all_h, None
        cache = {
            "lstm": lstm_cache,
            "final_h": final_h,
            "u": u,
            "z1": z1,
            "r1": r1,
            "z2": z2,
            "r2": r2,
        }
        return main_scores, aux_scores, all_h, cache

    def forward(self, sequence: EmbeddedSequence, metadata: np.ndarray | None = None):
        """Single-tweet forward: (main_score, aux_score, hidden_trace).

        ``hidden_trace`` holds the LSTM state at every real timestep; the
        metadata argument is raw counts and is standardized internally.
        """
        x = sequence.matrix[None, :, :]
        lengths = np.array([sequence.true_length])
        meta = None
        if self.config.use_metadata:
            meta = np.asarray(metadata, dtype=np.float64).reshape(1, METADATA_DIM)
            meta = self._standardize_meta(meta)
        main, aux, all_h, _ = self.forward_batch(x, lengths, meta)
        trace = all_h[0, : sequence.true_length, :].copy()
        return float(main[0]), (float(aux[0]) if aux is not None else None), trace

    def predict_proba(self, sequences: list[EmbeddedSequence],
                      metadata: np.ndarray | None = None) -> np.ndarray:
        """Main-head scores for a list of tweets (raw metadata accepted)."""
        x, lengths = stack_sequences(sequences)
        meta = None
        if self.config.use_metadata:
            meta = self._standardize_meta(np.asarray(metadata, dtype=np.float64))
        main, _, _, _ = self.forward_batch(x, lengths, meta)
        return main

    # -- training --------------------------------------------------------

    def backward_batch(self, cache, main_scores, aux_scores, targets):
        """Gradients of the blended loss for one batch."""
        p = self.params
        cfg = self.config
        w_main, w_aux = cfg.loss_weights
        dz_main = w_main * bce_grad_wrt_logit(main_scores, targets)[:, None]
        dr2, dWm, dbm = affine_backward(dz_main, cache["r2"], p["main.W"])
        dz2 = dr2 * (cache["z2"] > 0)
        dr1, dW2, db2 = affine_backward(dz2, cache["r1"], p["dense2.W"])
        dz1 = dr1 * (cache["z1"] > 0)
        du, dW1, db1 = affine_backward(dz1, cache["u"], p["dense1.W"])
        d_final_h = du[:, : cfg.hidden_dim]
        grads = {
            "main.W": dWm, "main.b": dbm,
            "dense2.W": dW2, "dense2.b": db2,
            "dense1.W": dW1, "dense1.b": db1,
        }
        if cfg.use_aux:
            dz_aux = w_aux * bce_grad_wrt_logit(aux_scores, targets)[:, None]
            d_fh_aux, dWa, dba = affine_backward(dz_aux, cache["final_h"], p["aux.W"])
            grads["aux.W"] = dWa
            grads["aux.b"] = dba
            d_final_h = d_final_h + d_fh_aux
        grads.update(lstm_backward(p, cache["lstm"], d_final_h))
        return grads

    # -- persistence -----------------------------------------------------

    def save(self, path, extra_meta: dict | None = None) -> None:
        cfg = self.config
        meta = {
            "kind": "contextual_lstm" if cfg.use_metadata else "tweet_lstm",
            "embedding_dim": cfg.embedding_dim,
            "hidden_dim": cfg.hidden_dim,
            "dense_sizes": ",".join(str(d) for d in cfg.dense_sizes),
            "use_metadata": int(cfg.use_metadata),
            "use_aux": int(cfg.use_aux),
            "loss_weight_main": repr(cfg.loss_weights[0]),
            "loss_weight_aux": repr(cfg.loss_weights[1]),
            "learning_rate": repr(cfg.learning_rate),
            "beta1": repr(cfg.beta1),
            "beta2": repr(cfg.beta2),
            "adam_eps": repr(cfg.adam_eps),
            "batch_size": cfg.batch_size,
            "epochs": cfg.epochs,
            "seed": cfg.seed,
        }
        meta.update(extra_meta or {})
        arrays = dict(self.params)
        if self.metadata_standardizer is not None:
            arrays["meta_standardizer.mean"] = self.metadata_standardizer.mean
            arrays["meta_standardizer.std"] = self.metadata_standardizer.std
        save_model(path, meta, arrays)

    @classmethod
    def load(cls, path) -> ContextualLstmModel:
        meta, arrays = load_model(path)
        config = NetConfig(
            embedding_dim=int(meta["embedding_dim"]),
            hidden_dim=int(meta["hidden_dim"]),
            dense_sizes=tuple(int(d) for d in meta["dense_sizes"].split(",")),
            use_metadata=bool(int(meta["use_metadata"])),
            use_aux=bool(int(meta["use_aux"])),
            loss_weights=(float(meta["loss_weight_main"]), float(meta["loss_weight_aux"])),
            learning_rate=float(meta["learning_rate"]),
            beta1=float(meta["beta1"]),
            beta2=float(meta["beta2"]),
            adam_eps=float(meta["adam_eps"]),
            batch_size=int(meta["batch_size"]),
            epochs=int(meta["epochs"]),
            seed=int(meta["seed"]),
        )
        standardizer = None
        if "meta_standardizer.mean" in arrays:
            standardizer = Standardizer(
                mean=arrays.pop("meta_standardizer.mean"),
                std=arrays.pop("meta_standardizer.std"),
            )
        return cls(config, arrays, standardizer)


def blended_loss(main_score, aux_score, label,
                 weights: tuple[float, float] = (0.8, 0.2)):
    """(total, main, aux) binary cross-entropies; total = 0.8*main + 0.2*aux.

    Accepts scalars or parallel arrays. When aux_score is None the aux part
    is 0 and the main weight must carry all the mass.
    """
    targets = np.atleast_1d(np.asarray(label, dtype=np.float64))
    main_part = bce(np.atleast_1d(np.asarray(main_score, dtype=np.float64)), targets)
    if aux_score is None:
        aux_part = 0.0
    else:
        aux_part = bce(np.atleast_1d(np.asarray(aux_score, dtype=np.float64)), targets)
    w_main, w_aux = weights
    return w_main * main_part + w_aux * aux_part, main_part, aux_part


@dataclass
class EpochRecord:
    epoch: int
    main_loss: float
    aux_loss: float
    total_loss: float
    val_accuracy: float | None = None
    val_auc: float | None = None


@dataclass
class TrainingTrace:
    loss_weights: tuple[float, float]
    steps: list[tuple[int, int, float, float, float]] = field(default_factory=list)
    epochs: list[EpochRecord] = field(default_factory=list)
    config_echo: dict[str, str] = field(default_factory=dict)

    def to_csv_lines(self) -> list[str]:
        lines = ["record,epoch,step,main_loss,aux_loss,total_loss,val_accuracy,val_auc"]
        for epoch, step, main, aux, total in self.steps:
            lines.append(f"step,{epoch},{step},{main!r},{aux!r},{total!r},,")
        for rec in self.epochs:
            acc = "" if rec.val_accuracy is None else repr(rec.val_accuracy)
            roc = "" if rec.val_auc is None else repr(rec.val_auc)
            lines.append(
                f"epoch,{rec.epoch},,{rec.main_loss!r},{rec.aux_loss!r},"
                f"{rec.total_loss!r},{acc},{roc}"
            )
        return lines


def stack_sequences(sequences: list[EmbeddedSequence]) -> tuple[np.ndarray, np.ndarray]:
    """Pack sequences (all embedded at the same max_len) into one array."""
    if not sequences:
        raise DegenerateData("no sequences to stack")
    shapes = {seq.matrix.shape for seq in sequences}
    if len(shapes) != 1:
        raise DimensionMismatch(f"mixed sequence shapes: {sorted(shapes)}")
    x = np.stack([seq.matrix for seq in sequences])
    lengths = np.array([seq.true_length for seq in sequences], dtype=np.int64)
    return x, lengths


def train(
    config: NetConfig,
    corpus: list[tuple[EmbeddedSequence, np.ndarray, Label]],
    validation: list[tuple[EmbeddedSequence, np.ndarray, Label]] | None = None,
) -> tuple[ContextualLstmModel, TrainingTrace]:
    """Mini-batch Adam over full backpropagation through time.

    Embeddings are frozen (gradients stop at the sequence input). Metadata is
    standardized with training-set statistics; it is never resampled. The run
    is bit-reproducible for a fixed config seed.
    """
    from ..metrics import auc as compute_auc  # local import avoids a cycle

    if not corpus:
        raise DegenerateData("training corpus is empty")
    targets = np.array([float(label) for _, _, label in corpus])
    if len(set(targets.tolist())) < 2:
        raise DegenerateData("training corpus must contain both classes")

    x_all, lengths_all = stack_sequences([seq for seq, _, _ in corpus])
    meta_all = np.array([np.asarray(m, dtype=np.float64) for _, m, _ in corpus])
    standardizer = None
    if config.use_metadata:
        standardizer = Standardizer.fit(meta_all)
        meta_all = standardizer.transform(meta_all)

    model = ContextualLstmModel.initialize(config)
    model.metadata_standardizer = standardizer
    optimizer = Adam(model.params, lr=config.learning_rate, beta1=config.beta1,
                     beta2=config.beta2, eps=config.adam_eps)
    trace = TrainingTrace(loss_weights=config.loss_weights)

    val_arrays = None
    if validation:
        vx, vlen = stack_sequences([seq for seq, _, _ in validation])
        vmeta = np.array([np.asarray(m, dtype=np.float64) for _, m, _ in validation])
        if config.use_metadata:
            vmeta = standardizer.transform(vmeta)
        vy = np.array([float(label) for _, _, label in validation])
        val_arrays = (vx, vlen, vmeta, vy)

    rng = np.random.Generator(np.random.PCG64(config.seed))
    n = len(corpus)
    w_main, w_aux = config.loss_weights
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        epoch_main, epoch_aux, epoch_total, seen = 0.0, 0.0, 0.0, 0
        for step, start in enumerate(range(0, n, config.batch_size)):
            idx = order[start : start + config.batch_size]
            xb, lb, yb = x_all[idx], lengths_all[idx], targets[idx]
            mb = meta_all[idx] if config.use_metadata else None
            main, aux, _, cache = model.forward_batch(xb, lb, mb, keep_cache=True)
            main_loss = bce(main, yb)
            aux_loss = bce(aux, yb) if aux is not None else 0.0
            total = w_main * main_loss + w_aux * aux_loss
            grads = model.backward_batch(cache, main, aux, yb)
            optimizer.step(grads)
            trace.steps.append((epoch, step, main_loss, aux_loss, total))
            epoch_main += main_loss * len(idx)
            epoch_aux += aux_loss * len(idx)
            epoch_total += total * len(idx)
            seen += len(idx)
        record = EpochRecord(
            epoch=epoch,
            main_loss=epoch_main / seen,
            aux_loss=epoch_aux / seen,
            total_loss=epoch_total / seen,
        )
        if val_arrays is not None:
            vx, vlen, vmeta, vy = val_arrays
            vmain, _, _, _ = model.forward_batch(
                vx, vlen, vmeta if config.use_metadata else None
            )
            record.val_accuracy = float(np.mean((vmain >= 0.5) == (vy == 1.0)))
            if len(set(vy.tolist())) == 2:
                record.val_auc = compute_auc(vmain, vy.astype(np.int8))
        trace.epochs.append(record)
    return model, trace
