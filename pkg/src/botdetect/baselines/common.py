"""Shared baseline machinery: kinds, config, model container, persistence."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from ..data import FeatureMatrix, Standardizer
from ..errors import DegenerateData, SchemaMismatch
from ..persist import load_model, save_model


class BaselineKind(str, enum.Enum):
    LOGREG = "logreg"
    SGD = "sgd"
    FOREST = "forest"
    ADABOOST = "adaboost"
    MLP = "mlp"


@dataclass(frozen=True)
class BaselineConfig:
    """Hyperparameters for all five baselines; only the relevant ones apply.

    Defaults are library-conventional and echoed into every report, since no
    canonical settings exist for this task.
    """

    seed: int = 0
    logreg_epochs: int = 500
    logreg_lr: float = 0.1
    sgd_epochs: int = 50
    sgd_lr: float = 0.01
    sgd_l2: float = 1e-4
    n_trees: int = 100
    max_depth: int = 0  # 0 means unlimited
    min_leaf: int = 1
    n_stumps: int = 100
    mlp_layers: tuple[int, ...] = (500, 200, 1)
    mlp_lr: float = 1e-3
    mlp_beta1: float = 0.9
    mlp_beta2: float = 0.999
    mlp_eps: float = 1e-8
    mlp_batch: int = 64
    mlp_epochs: int = 50

    def echo(self, kind: BaselineKind) -> dict[str, str]:
        relevant = {
            BaselineKind.LOGREG: ("logreg_epochs", "logreg_lr"),
            BaselineKind.SGD: ("sgd_epochs", "sgd_lr", "sgd_l2"),
            BaselineKind.FOREST: ("n_trees", "max_depth", "min_leaf"),
            BaselineKind.ADABOOST: ("n_stumps",),
            BaselineKind.MLP: (
                "mlp_layers", "mlp_lr", "mlp_beta1", "mlp_beta2",
                "mlp_eps", "mlp_batch", "mlp_epochs",
            ),
        }[kind]
        out = {"seed": str(self.seed)}
        for name in relevant:
            value = getattr(self, name)
            if isinstance(value, tuple):
                out[name] = ",".join(str(v) for v in value)
            else:
                out[name] = str(value)
        return out


@dataclass
class BaselineModel:
    kind: BaselineKind
    schema: tuple[str, ...]
    standardizer: Standardizer
    config: BaselineConfig
    params: dict[str, np.ndarray]


def validate_training_matrix(matrix: FeatureMatrix) -> None:
    if matrix.n_rows < 2:
        raise DegenerateData(f"need at least 2 training rows, got {matrix.n_rows}")


def rows_for_prediction(model: BaselineModel, rows) -> np.ndarray:
    """Standardized feature rows, checked against the training schema."""
    if isinstance(rows, FeatureMatrix):
        if rows.schema != model.schema:
            raise SchemaMismatch(
                f"schema {rows.schema} does not match training schema {model.schema}"
            )
        rows = rows.features
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows[None, :]
    if rows.shape[1] != len(model.schema):
        raise SchemaMismatch(
            f"row width {rows.shape[1]} != training width {len(model.schema)}"
        )
    return model.standardizer.transform(rows)


def save_baseline(model: BaselineModel, path, extra_meta: dict | None = None) -> None:
    meta = {
        "kind": model.kind.value,
        "schema": ",".join(model.schema),
    }
    for key, value in model.config.echo(model.kind).items():
        meta[f"config.{key}"] = value
    meta.update(extra_meta or {})
    arrays = dict(model.params)
    arrays["standardizer.mean"] = model.standardizer.mean
    arrays["standardizer.std"] = model.standardizer.std
    save_model(path, meta, arrays)


def load_baseline(path) -> BaselineModel:
    meta, arrays = load_model(path)
    kind = BaselineKind(meta["kind"])
    standardizer = Standardizer(
        mean=arrays.pop("standardizer.mean"), std=arrays.pop("standardizer.std")
    )
    kwargs = {}
    for key, value in meta.items():
        if not key.startswith("config."):
            continue
        name = key[len("config."):]
        if name == "mlp_layers":
            kwargs[name] = tuple(int(v) for v in value.split(","))
        elif name in ("logreg_lr", "sgd_lr", "sgd_l2", "mlp_lr", "mlp_beta1",
                      "mlp_beta2", "mlp_eps"):
            kwargs[name] = float(value)
        else:
            kwargs[name] = int(value)
    return BaselineModel(
        kind=kind,
        schema=tuple(meta["schema"].split(",")),
        standardizer=standardizer,
        config=BaselineConfig(**kwargs),
        params=arrays,
    )
