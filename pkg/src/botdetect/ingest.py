"""Corpus loading and synthetic corpus generation.

Real corpora arrive as per-group directories of ``users.csv`` and
``tweets.csv`` (cresci-2017 layout), described by a plain-text manifest:

    group.<name>.path = <directory>
    group.<name>.label = human | bot
    group.<name>.accounts = <expected count>   # optional
    group.<name>.tweets = <expected count>     # optional

The synthetic generator emits the same CSV schema, so every downstream path
is exercised identically for real and synthetic data.
"""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .data import (
    ACCOUNT_BOOL_COLUMNS,
    ACCOUNT_COUNT_COLUMNS,
    ACCOUNT_FEATURE_COLUMNS,
    TWEET_METADATA_COLUMNS,
    AccountFeatures,
    AccountRecord,
    Label,
    TweetMetadata,
    TweetRecord,
)
from .errors import ConfigError, ExcessiveBadRows, HeaderMismatch, ParseError

# Skip-and-count tolerates stray corruption up to this fraction of a file;
# beyond it the file is considered schema-drifted and loading fails. Tiny
# fixture files are exempt from the percentage rule.
BAD_ROW_FRACTION = 0.10
BAD_ROW_MIN_ROWS = 20

_TRUE_VALUES = {"1", "true", "t", "yes", "y"}
_FALSE_VALUES = {"0", "false", "f", "no", "n", "", "nan", "null", "none"}


@dataclass(frozen=True)
class ManifestGroup:
    name: str
    path: str
    label: Label
    expected_accounts: int | None = None
    expected_tweets: int | None = None


@dataclass(frozen=True)
class CorpusManifest:
    groups: tuple[ManifestGroup, ...]

    def __post_init__(self):
        names = [g.name for g in self.groups]
        if len(set(names)) != len(names):
            raise ConfigError("manifest group names must be unique")
        if not self.groups:
            raise ConfigError("manifest defines no groups")


def parse_kv_lines(lines) -> dict[str, str]:
    """Shared `key = value` grammar used by manifests and config files."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"line {lineno}: expected `key = value`, got {raw!r}")
        out[key.strip()] = value.strip()
    return out


def parse_manifest(path) -> CorpusManifest:
    with open(path, encoding="utf-8") as fh:
        entries = parse_kv_lines(fh)
    base = os.path.dirname(os.path.abspath(path))
    groups: dict[str, dict] = {}
    for key, value in entries.items():
        parts = key.split(".")
        if len(parts) != 3 or parts[0] != "group":
            raise ParseError(f"unrecognized manifest key {key!r}")
        _, name, attr = parts
        groups.setdefault(name, {})[attr] = value
    built = []
    for name, attrs in groups.items():
        if "path" not in attrs or "label" not in attrs:
            raise ParseError(f"group {name!r} needs both path and label")
        label_text = attrs["label"].lower()
        if label_text not in ("human", "bot"):
            raise ParseError(f"group {name!r}: label must be human or bot")
        group_path = attrs["path"]
        if not os.path.isabs(group_path):
            group_path = os.path.normpath(os.path.join(base, group_path))
        built.append(
            ManifestGroup(
                name=name,
                path=group_path,
                label=Label.BOT if label_text == "bot" else Label.HUMAN,
                expected_accounts=int(attrs["accounts"]) if "accounts" in attrs else None,
                expected_tweets=int(attrs["tweets"]) if "tweets" in attrs else None,
            )
        )
    return CorpusManifest(groups=tuple(built))


@dataclass
class GroupDiagnostics:
    name: str
    accounts_loaded: int = 0
    tweets_loaded: int = 0
    accounts_skipped: int = 0
    tweets_skipped: int = 0
    filled_cells: dict[str, int] = field(default_factory=dict)
    fallback_columns: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


@dataclass
class LoadDiagnostics:
    groups: list[GroupDiagnostics] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def to_kv_lines(self) -> list[str]:
        lines = []
        for g in self.groups:
            p = f"group.{g.name}"
            lines.append(f"{p}.accounts_loaded = {g.accounts_loaded}")
            lines.append(f"{p}.tweets_loaded = {g.tweets_loaded}")
            lines.append(f"{p}.accounts_skipped = {g.accounts_skipped}")
            lines.append(f"{p}.tweets_skipped = {g.tweets_skipped}")
            for col in sorted(g.filled_cells):
                lines.append(f"{p}.filled.{col} = {g.filled_cells[col]}")
            for col in g.fallback_columns:
                lines.append(f"{p}.fallback_counted.{col} = true")
            for i, note in enumerate(g.notes):
                lines.append(f"{p}.note.{i} = {note}")
        for i, warning in enumerate(self.warnings):
            lines.append(f"warning.{i} = {warning}")
        return lines


def _parse_count(cell: str, column: str, diag: GroupDiagnostics) -> int | None:
    """None means the row must be skipped."""
    text = cell.strip()
    if text == "" or text.lower() in ("nan", "null", "none"):
        diag.filled_cells[column] = diag.filled_cells.get(column, 0) + 1
        return 0
    try:
        value = float(text)
    except ValueError:
        return None
    if not math.isfinite(value) or value < 0:
        return None
    return int(value)


def _parse_bool(cell: str, column: str, diag: GroupDiagnostics) -> bool | None:
    text = cell.strip().lower()
    if text in _TRUE_VALUES:
        return True
    if text in _FALSE_VALUES:
        if text == "":
            diag.filled_cells[column] = diag.filled_cells.get(column, 0) + 1
        return False
    return None


def _check_bad_rows(path, skipped: int, total: int) -> None:
    if total >= BAD_ROW_MIN_ROWS and skipped > BAD_ROW_FRACTION * total:
        raise ExcessiveBadRows(
            f"{path}: {skipped} of {total} rows unparseable "
            f"(> {BAD_ROW_FRACTION:.0%} threshold)"
        )


def _load_users(path, group: ManifestGroup, diag: GroupDiagnostics) -> list[AccountRecord]:
    with open(path, encoding="utf-8-sig", errors="replace", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise HeaderMismatch(f"{path}: file has no header row")
        columns = {name.strip(): i for i, name in enumerate(header)}
        missing = [c for c in ACCOUNT_FEATURE_COLUMNS if c not in columns]
        if missing:
            raise HeaderMismatch(f"{path}: missing mandatory columns {missing}")
        id_col = columns.get("id")
        accounts = []
        total = 0
        for row_idx, row in enumerate(reader):
            if not row:
                continue
            total += 1
            values: dict[str, int | bool] = {}
            ok = True
            for col in ACCOUNT_COUNT_COLUMNS:
                parsed = _parse_count(_cell(row, columns[col]), col, diag)
                if parsed is None:
                    ok = False
                    break
                values[col] = parsed
            if ok:
                for col in ACCOUNT_BOOL_COLUMNS:
                    parsed = _parse_bool(_cell(row, columns[col]), col, diag)
                    if parsed is None:
                        ok = False
                        break
                    values[col] = parsed
            if not ok:
                diag.accounts_skipped += 1
                continue
            account_id = (
                _cell(row, id_col).strip() if id_col is not None else f"{group.name}:{row_idx}"
            ) or f"{group.name}:{row_idx}"
            accounts.append(
                AccountRecord(
                    account_id=account_id,
                    features=AccountFeatures(**values),
                    label=group.label,
                )
            )
        _check_bad_rows(path, diag.accounts_skipped, total)
    diag.accounts_loaded = len(accounts)
    return accounts


def _cell(row: list[str], index: int | None) -> str:
    if index is None or index >= len(row):
        return ""
    return row[index]


def _fallback_entity_counts(text: str) -> tuple[int, int, int]:
    """Hashtag / URL / mention counts recovered from the text itself."""
    hashtags = urls = mentions = 0
    for token in text.split():
        if token.startswith("#") and len(token) > 1:
            hashtags += 1
        elif token.startswith("http") or token.startswith("www."):
            urls += 1
        elif token.startswith("@") and len(token) > 1:
            mentions += 1
    return hashtags, urls, mentions


def _load_tweets(path, group: ManifestGroup, diag: GroupDiagnostics) -> list[TweetRecord]:
    with open(path, encoding="utf-8-sig", errors="replace", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise HeaderMismatch(f"{path}: file has no header row")
        columns = {name.strip(): i for i, name in enumerate(header)}
        if "text" not in columns:
            raise HeaderMismatch(f"{path}: missing mandatory column 'text'")
        entity_cols = ("num_hashtags", "num_urls", "num_mentions")
        fallback = [c for c in entity_cols if c not in columns]
        if fallback:
            # Entity columns absent from this dump: recover them from the
            # text and flag the substitution.
            diag.fallback_columns.extend(fallback)
        for col in TWEET_METADATA_COLUMNS:
            if col not in columns and col not in fallback:
                diag.notes.append(f"column {col} absent; filled with 0")
        user_col = columns.get("user_id")
        tweets = []
        total = 0
        for row_idx, row in enumerate(reader):
            if not row:
                continue
            total += 1
            text = _cell(row, columns["text"])
            counts: dict[str, int] = {}
            ok = True
            for col in TWEET_METADATA_COLUMNS:
                if col in columns:
                    parsed = _parse_count(_cell(row, columns[col]), col, diag)
                    if parsed is None:
                        ok = False
                        break
                    counts[col] = parsed
                elif col in fallback:
                    counts[col] = -1  # placeholder, filled below
                else:
                    counts[col] = 0
            if not ok:
                diag.tweets_skipped += 1
                continue
            if fallback:
                h, u, m = _fallback_entity_counts(text)
                recovered = {"num_hashtags": h, "num_urls": u, "num_mentions": m}
                for col in fallback:
                    counts[col] = recovered[col]
            account_id = (
                _cell(row, user_col).strip() if user_col is not None else f"{group.name}:{row_idx}"
            ) or f"{group.name}:{row_idx}"
            tweets.append(
                TweetRecord(
                    text=text,
                    metadata=TweetMetadata(**counts),
                    label=group.label,
                    account_id=account_id,
                )
            )
        _check_bad_rows(path, diag.tweets_skipped, total)
    diag.tweets_loaded = len(tweets)
    return tweets


def load_corpus(
    manifest: CorpusManifest,
) -> tuple[list[AccountRecord], list[TweetRecord], LoadDiagnostics]:
    """Load every group in manifest order.

    Rows with unparseable mandatory fields are counted and skipped. Expected
    counts, when present, are verified and mismatches reported as warnings.
    """
    diagnostics = LoadDiagnostics()
    accounts: list[AccountRecord] = []
    tweets: list[TweetRecord] = []
    for group in manifest.groups:
        diag = GroupDiagnostics(name=group.name)
        users_path = os.path.join(group.path, "users.csv")
        tweets_path = os.path.join(group.path, "tweets.csv")
        has_users = os.path.isfile(users_path)
        has_tweets = os.path.isfile(tweets_path)
        if not has_users and not has_tweets:
            raise FileNotFoundError(
                f"group {group.name!r}: neither {users_path} nor {tweets_path} exists"
            )
        if has_users:
            accounts.extend(_load_users(users_path, group, diag))
        else:
            diag.notes.append("users.csv absent")
        if has_tweets:
            tweets.extend(_load_tweets(tweets_path, group, diag))
        else:
            diag.notes.append("tweets.csv absent")
        if group.expected_accounts is not None and diag.accounts_loaded != group.expected_accounts:
            diagnostics.warnings.append(
                f"group {group.name}: expected {group.expected_accounts} accounts, "
                f"loaded {diag.accounts_loaded}"
            )
        if group.expected_tweets is not None and diag.tweets_loaded != group.expected_tweets:
            diagnostics.warnings.append(
                f"group {group.name}: expected {group.expected_tweets} tweets, "
                f"loaded {diag.tweets_loaded}"
            )
        diagnostics.groups.append(diag)
    return accounts, tweets, diagnostics


# -- synthetic corpora ----------------------------------------------------

# Class vocabularies are disjoint from each other and from the shared pool;
# at separation 1 every plain word (including hashtag bodies) is class-owned.
SHARED_WORDS = tuple(f"word{i:03d}" for i in range(120))
HUMAN_WORDS = tuple(f"tone{i:03d}" for i in range(60))
BOT_WORDS = tuple(f"spam{i:03d}" for i in range(60))

# (column, base mean, cap): human draws min(Poisson(mean), cap); bots add a
# separation-scaled offset so ranges become disjoint at separation 1.
_TWEET_COUNT_SPECS = (
    ("retweet_count", 2.0, 8),
    ("reply_count", 1.0, 4),
    ("favorite_count", 3.0, 12),
    ("num_hashtags", 0.8, 4),
    ("num_urls", 0.5, 2),
    ("num_mentions", 0.7, 3),
)

_ACCOUNT_COUNT_SPECS = (
    ("statuses_count", 300.0, 1200),
    ("followers_count", 120.0, 480),
    ("friends_count", 180.0, 720),
    ("favourites_count", 90.0, 360),
    ("listed_count", 3.0, 12),
)

_ACCOUNT_BOOL_DIRECTIONS = (1.0, -1.0, 1.0, -1.0, 1.0)

_EMOTICONS = (":)", ":(", ":D", "<3", ":p", ":|")


@dataclass(frozen=True)
class SyntheticCorpusSpec:
    n_accounts_per_class: int
    tweets_per_account: int
    seed: int
    separation: float

    def __post_init__(self):
        if self.n_accounts_per_class < 1 or self.tweets_per_account < 1:
            raise ValueError("corpus sizes must be positive")
        if not 0.0 <= self.separation <= 1.0:
            raise ValueError("separation must lie in [0, 1]")


def _clipped_poisson_mean(lam: float, cap: int) -> float:
    """Exact mean of min(Poisson(lam), cap)."""
    total = 0.0
    tail = 1.0
    log_p = -lam
    for k in range(cap):
        p = math.exp(log_p)
        total += k * p
        tail -= p
        log_p += math.log(lam) - math.log(k + 1)
    return total + cap * max(tail, 0.0)


def _count_params(base: float, cap: int, separation: float, label: Label):
    if label == Label.HUMAN:
        return base, cap, 0
    offset = int(round(separation * (cap + 1)))
    return base * (1.0 + separation), cap, offset


def _draw_count(rng, base, cap, separation, label) -> int:
    lam, cap, offset = _count_params(base, cap, separation, label)
    return offset + int(min(rng.poisson(lam), cap))


def class_metadata_means(spec: SyntheticCorpusSpec, label: Label) -> np.ndarray:
    """Exact per-column expected metadata counts for one class."""
    means = []
    for _, base, cap in _TWEET_COUNT_SPECS:
        lam, cap_eff, offset = _count_params(base, cap, spec.separation, label)
        means.append(offset + _clipped_poisson_mean(lam, cap_eff))
    return np.array(means)


def _draw_word(rng, separation: float, label: Label) -> str:
    class_words = BOT_WORDS if label == Label.BOT else HUMAN_WORDS
    if rng.uniform() < separation:
        return class_words[rng.integers(0, len(class_words))]
    return SHARED_WORDS[rng.integers(0, len(SHARED_WORDS))]


def _make_tweet_text(rng, separation, label, counts: dict[str, int]) -> str:
    n_words = 4 + int(rng.poisson(4.0))
    n_words = min(max(n_words, 2), 16)
    words = [_draw_word(rng, separation, label) for _ in range(n_words)]
    if rng.uniform() < 0.10:
        words[0] = words[0].upper()
    if rng.uniform() < 0.10:
        words[-1] = words[-1] + words[-1][-1] * 3
    extras = []
    for _ in range(counts["num_hashtags"]):
        extras.append("#" + _draw_word(rng, separation, label))
    for _ in range(counts["num_urls"]):
        tail = "".join(rng.choice(list("abcdefghij0123456789"), size=6))
        extras.append("https://t.co/" + tail)
    for _ in range(counts["num_mentions"]):
        extras.append("@user" + str(rng.integers(1000, 9999)))
    if rng.uniform() < 0.25:
        extras.append(str(rng.integers(0, 10000)))
    if rng.uniform() < 0.20:
        extras.append(_EMOTICONS[rng.integers(0, len(_EMOTICONS))])
    for extra in extras:
        words.insert(int(rng.integers(0, len(words) + 1)), extra)
    return " ".join(words)


def _make_account(rng, spec, label, account_id) -> AccountRecord:
    values: dict[str, int | bool] = {}
    for col, base, cap in _ACCOUNT_COUNT_SPECS:
        values[col] = _draw_count(rng, base, cap, spec.separation, label)
    for col, direction in zip(ACCOUNT_BOOL_COLUMNS, _ACCOUNT_BOOL_DIRECTIONS):
        drift = 0.35 * spec.separation * direction
        p = 0.5 + (drift if label == Label.BOT else -drift)
        values[col] = bool(rng.uniform() < p)
    return AccountRecord(account_id=account_id, features=AccountFeatures(**values), label=label)


def generate_synthetic(
    spec: SyntheticCorpusSpec,
) -> tuple[list[AccountRecord], list[TweetRecord]]:
    """Seeded synthetic corpus; byte-identical for identical specs.

    At separation 0 the two classes are identically distributed; at
    separation 1 plain-word vocabularies are disjoint and every metadata
    column's range is disjoint between classes.
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    accounts: list[AccountRecord] = []
    tweets: list[TweetRecord] = []
    for label, prefix in ((Label.HUMAN, "h"), (Label.BOT, "b")):
        for a in range(spec.n_accounts_per_class):
            account_id = f"{prefix}{a:05d}"
            accounts.append(_make_account(rng, spec, label, account_id))
            for _ in range(spec.tweets_per_account):
                counts = {
                    col: _draw_count(rng, base, cap, spec.separation, label)
                    for col, base, cap in _TWEET_COUNT_SPECS
                }
                text = _make_tweet_text(rng, spec.separation, label, counts)
                tweets.append(
                    TweetRecord(
                        text=text,
                        metadata=TweetMetadata(**counts),
                        label=label,
                        account_id=account_id,
                    )
                )
    return accounts, tweets


def write_corpus(accounts, tweets, out_dir) -> str:
    """Write records as per-class group directories plus a manifest.

    Returns the manifest path. Output uses the same CSV schema the loader
    expects, with expected counts recorded for verification on reload.
    """
    os.makedirs(out_dir, exist_ok=True)
    manifest_lines = []
    for label, name in ((Label.HUMAN, "human"), (Label.BOT, "bot")):
        group_dir = os.path.join(out_dir, name)
        os.makedirs(group_dir, exist_ok=True)
        group_accounts = [a for a in accounts if a.label == label]
        group_tweets = [t for t in tweets if t.label == label]
        with open(os.path.join(group_dir, "users.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("id",) + ACCOUNT_FEATURE_COLUMNS)
            for acc in group_accounts:
                row = [acc.account_id]
                for col in ACCOUNT_COUNT_COLUMNS:
                    row.append(getattr(acc.features, col))
                for col in ACCOUNT_BOOL_COLUMNS:
                    row.append(int(getattr(acc.features, col)))
                writer.writerow(row)
        with open(os.path.join(group_dir, "tweets.csv"), "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(("user_id", "text") + TWEET_METADATA_COLUMNS)
            for tw in group_tweets:
                row = [tw.account_id, tw.text]
                row.extend(getattr(tw.metadata, col) for col in TWEET_METADATA_COLUMNS)
                writer.writerow(row)
        manifest_lines.extend(
            [
                f"group.{name}.path = {name}",
                f"group.{name}.label = {name}",
                f"group.{name}.accounts = {len(group_accounts)}",
                f"group.{name}.tweets = {len(group_tweets)}",
            ]
        )
    manifest_path = os.path.join(out_dir, "manifest.txt")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(manifest_lines) + "\n")
    return manifest_path
