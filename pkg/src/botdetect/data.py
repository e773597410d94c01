"""Core domain types: labels, feature schemas, feature matrices, seeded splits.

All types are immutable after construction; every randomized operation takes
an explicit seed and is bit-reproducible given it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import EmptyClass, EmptyInput, HeaderMismatch, ParseError


class Label(enum.IntEnum):
    """Binary class. Bot is the positive class for every metric in the package."""

    HUMAN = 0
    BOT = 1


# Column orders are frozen; model files and golden tests depend on them.
ACCOUNT_FEATURE_COLUMNS: tuple[str, ...] = (
    "statuses_count",
    "followers_count",
    "friends_count",
    "favourites_count",
    "listed_count",
    "default_profile",
    "geo_enabled",
    "profile_use_background_image",
    "verified",
    "protected",
)

TWEET_METADATA_COLUMNS: tuple[str, ...] = (
    "retweet_count",
    "reply_count",
    "favorite_count",
    "num_hashtags",
    "num_urls",
    "num_mentions",
)

ACCOUNT_COUNT_COLUMNS = ACCOUNT_FEATURE_COLUMNS[:5]
ACCOUNT_BOOL_COLUMNS = ACCOUNT_FEATURE_COLUMNS[5:]


def _check_count(name: str, value) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 0:
        raise ValueError(f"{name} must be >= 0, got {value}")
    return int(value)


@dataclass(frozen=True)
class AccountFeatures:
    """The ten profile features used for account-level detection."""

    statuses_count: int
    followers_count: int
    friends_count: int
    favourites_count: int
    listed_count: int
    default_profile: bool
    geo_enabled: bool
    profile_use_background_image: bool
    verified: bool
    protected: bool

    def __post_init__(self):
        for name in ACCOUNT_COUNT_COLUMNS:
            object.__setattr__(self, name, _check_count(name, getattr(self, name)))
        for name in ACCOUNT_BOOL_COLUMNS:
            object.__setattr__(self, name, bool(getattr(self, name)))


@dataclass(frozen=True)
class TweetMetadata:
    """The six per-tweet counters used alongside tweet text."""

    retweet_count: int
    reply_count: int
    favorite_count: int
    num_hashtags: int
    num_urls: int
    num_mentions: int

    def __post_init__(self):
        for name in TWEET_METADATA_COLUMNS:
            object.__setattr__(self, name, _check_count(name, getattr(self, name)))


@dataclass(frozen=True)
class TweetRecord:
    text: str
    metadata: TweetMetadata
    label: Label
    account_id: str


@dataclass(frozen=True)
class AccountRecord:
    account_id: str
    features: AccountFeatures
    label: Label


def encode_account(features: AccountFeatures) -> np.ndarray:
    """Encode account features as a width-10 vector; booleans map to 0.0/1.0."""
    return np.array(
        [float(getattr(features, name)) for name in ACCOUNT_FEATURE_COLUMNS],
        dtype=np.float64,
    )


def decode_account(vector: np.ndarray) -> AccountFeatures:
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (len(ACCOUNT_FEATURE_COLUMNS),):
        raise ValueError(f"expected width-10 vector, got shape {vector.shape}")
    counts = [int(v) for v in vector[:5]]
    flags = [bool(v != 0.0) for v in vector[5:]]
    return AccountFeatures(*counts, *flags)


def encode_tweet_metadata(metadata: TweetMetadata) -> np.ndarray:
    """Encode tweet metadata as a width-6 vector in frozen column order."""
    return np.array(
        [float(getattr(metadata, name)) for name in TWEET_METADATA_COLUMNS],
        dtype=np.float64,
    )


def decode_tweet_metadata(vector: np.ndarray) -> TweetMetadata:
    vector = np.asarray(vector, dtype=np.float64)
    if vector.shape != (len(TWEET_METADATA_COLUMNS),):
        raise ValueError(f"expected width-6 vector, got shape {vector.shape}")
    return TweetMetadata(*(int(v) for v in vector))


@dataclass(frozen=True)
class FeatureMatrix:
    """Dense numeric matrix with a per-column schema and parallel labels.

    The substrate every resampler and baseline operates on. Constructors
    reject non-finite entries and width/length mismatches; the arrays are
    frozen after construction.
    """

    features: np.ndarray
    schema: tuple[str, ...]
    labels: np.ndarray

    def __post_init__(self):
        feats = np.ascontiguousarray(np.asarray(self.features, dtype=np.float64))
        labs = np.asarray(self.labels, dtype=np.int8)
        schema = tuple(self.schema)
        if feats.ndim != 2:
            raise ValueError(f"features must be 2-d, got ndim={feats.ndim}")
        if feats.shape[1] != len(schema):
            raise ValueError(
                f"row width {feats.shape[1]} != schema width {len(schema)}"
            )
        if labs.ndim != 1 or labs.shape[0] != feats.shape[0]:
            raise ValueError("labels must be 1-d and parallel to rows")
        if not np.all(np.isfinite(feats)):
            raise ValueError("features contain NaN or infinite entries")
        if labs.size and not np.all((labs == 0) | (labs == 1)):
            raise ValueError("labels must be 0 (human) or 1 (bot)")
        feats.setflags(write=False)
        labs.setflags(write=False)
        object.__setattr__(self, "features", feats)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "schema", schema)

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def class_counts(self) -> tuple[int, int]:
        """(human count, bot count)."""
        bots = int(np.sum(self.labels == Label.BOT))
        return self.n_rows - bots, bots

    def select(self, indices) -> FeatureMatrix:
        idx = np.asarray(indices, dtype=np.int64)
        return FeatureMatrix(self.features[idx], self.schema, self.labels[idx])

    def with_rows_appended(self, rows: np.ndarray, labels) -> FeatureMatrix:
        rows = np.asarray(rows, dtype=np.float64).reshape(-1, self.n_features)
        labs = np.concatenate([self.labels, np.asarray(labels, dtype=np.int8)])
        return FeatureMatrix(np.vstack([self.features, rows]), self.schema, labs)


def matrix_to_csv_lines(matrix: FeatureMatrix) -> list[str]:
    """Serialize as CSV with a trailing `label` column (human/bot)."""
    lines = [",".join(matrix.schema + ("label",))]
    for row, lab in zip(matrix.features, matrix.labels):
        cells = [repr(float(v)) for v in row]
        cells.append(Label(int(lab)).name.lower())
        lines.append(",".join(cells))
    return lines


def matrix_from_csv_lines(lines) -> FeatureMatrix:
    rows = [ln.strip() for ln in lines if ln.strip() and not ln.startswith("#")]
    if not rows:
        raise EmptyInput("matrix CSV has no content")
    header = rows[0].split(",")
    if len(header) < 2 or header[-1] != "label":
        raise HeaderMismatch("matrix CSV must end with a `label` column")
    schema = tuple(h.strip() for h in header[:-1])
    feats, labels = [], []
    for lineno, line in enumerate(rows[1:], start=2):
        cells = line.split(",")
        if len(cells) != len(header):
            raise ParseError(f"line {lineno}: expected {len(header)} cells")
        name = cells[-1].strip().lower()
        if name not in ("human", "bot"):
            raise ParseError(f"line {lineno}: unknown label {cells[-1]!r}")
        try:
            feats.append([float(c) for c in cells[:-1]])
        except ValueError as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
        labels.append(Label.BOT if name == "bot" else Label.HUMAN)
    return FeatureMatrix(np.array(feats, dtype=np.float64), schema, labels)


@dataclass(frozen=True)
class Standardizer:
    """Per-column z-score transform; zero-variance columns get std 1.0."""

    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, features: np.ndarray) -> Standardizer:
        features = np.asarray(features, dtype=np.float64)
        mean = features.mean(axis=0)
        std = features.std(axis=0)
        std = np.where(std < 1e-12, 1.0, std)
        mean.setflags(write=False)
        std.setflags(write=False)
        return cls(mean=mean, std=std)

    @classmethod
    def identity(cls, width: int) -> Standardizer:
        return cls(mean=np.zeros(width), std=np.ones(width))

    def transform(self, x: np.ndarray) -> np.ndarray:
        return (np.asarray(x, dtype=np.float64) - self.mean) / self.std

    def inverse(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(x, dtype=np.float64) * self.std + self.mean


@dataclass(frozen=True)
class SplitSpec:
    train_fraction: float = 0.8
    stratified: bool = True
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


def split_indices(
    labels,
    spec: SplitSpec,
    groups=None,
) -> tuple[np.ndarray, np.ndarray]:
    """Partition row indices into (train, test), deterministic under the seed.

    Stratified mode preserves the class ratio within one row per class.
    When ``groups`` is given, whole groups (e.g. accounts) are assigned to one
    side; stratification then applies at the group level.
    """
    labels = np.asarray(labels, dtype=np.int8)
    n = labels.shape[0]
    if n == 0:
        raise EmptyInput("cannot split an empty matrix")
    rng = np.random.Generator(np.random.PCG64(spec.seed))

    if groups is not None:
        groups = np.asarray(groups)
        uniq, first_pos = np.unique(groups, return_index=True)
        group_labels = labels[first_pos]
        tr_g, te_g = _split_units(len(uniq), group_labels, spec, rng)
        train_groups = set(uniq[tr_g].tolist())
        member = np.array([g in train_groups for g in groups])
        return np.flatnonzero(member), np.flatnonzero(~member)

    return _split_units(n, labels, spec, rng)


def _split_units(n, labels, spec, rng):
    if spec.stratified:
        sides_train, sides_test = [], []
        for cls in (Label.HUMAN, Label.BOT):
            members = np.flatnonzero(labels == cls)
            if members.size == 0:
                raise EmptyClass(
                    f"stratified split requires both classes; {cls.name} absent"
                )
            k = int(round(spec.train_fraction * members.size))
            k = min(max(k, 0), members.size)
            perm = rng.permutation(members.size)
            sides_train.append(members[perm[:k]])
            sides_test.append(members[perm[k:]])
        train = np.sort(np.concatenate(sides_train))
        test = np.sort(np.concatenate(sides_test))
    else:
        k = int(round(spec.train_fraction * n))
        perm = rng.permutation(n)
        train = np.sort(perm[:k])
        test = np.sort(perm[k:])
    return train, test


def split(
    matrix: FeatureMatrix, spec: SplitSpec, groups=None
) -> tuple[FeatureMatrix, FeatureMatrix]:
    """Split a FeatureMatrix into disjoint (train, test) covering every row."""
    train_idx, test_idx = split_indices(matrix.labels, spec, groups=groups)
    return matrix.select(train_idx), matrix.select(test_idx)
