"""Operator-facing command line: ingest, tokenize, resample, train, eval,
inspect, bench, and synth.

Every experiment is fully described by a RunConfig; artifacts land in a
timestamped run directory (with a `latest` link) and each artifact file
carries the config hash. Artifact contents contain no wall-clock data, so a
rerun with an identical config and seed reproduces them byte for byte.

Exit codes: 0 success, 2 config error, 3 data error, 4 training failure.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys
import time
from dataclasses import dataclass, fields, replace

import numpy as np

from . import baselines
from .baselines import BaselineConfig, BaselineKind
from .data import (
    ACCOUNT_FEATURE_COLUMNS,
    TWEET_METADATA_COLUMNS,
    FeatureMatrix,
    Label,
    SplitSpec,
    encode_account,
    encode_tweet_metadata,
    matrix_from_csv_lines,
    matrix_to_csv_lines,
    split_indices,
)
from .embedding import (
    CANONICAL_DIMENSIONS,
    embed,
    fixture_table,
    load_glove,
    most_frequent_tokens,
    pipeline_fingerprint,
    write_glove_file,
)
from .errors import BotDetectError, ConfigError, DataError, DegenerateData
from .ingest import (
    SyntheticCorpusSpec,
    generate_synthetic,
    load_corpus,
    parse_kv_lines,
    parse_manifest,
    write_corpus,
)
from .introspect import (
    cell_trace_csv_lines,
    distribution_csv_lines,
    ks_csv_lines,
    trace_csv_lines,
    trace_tweet,
    unit_distributions,
)
from .metrics import EvalReport, evaluate
from .nnet import ContextualLstmModel, NetConfig, train as train_net
from .persist import load_model
from .resample import ResampleConfig, Strategy, apply_strategy
from .tokenizer import tokenize

NET_MODELS = ("lstm", "contextual")
BASELINE_MODELS = tuple(k.value for k in BaselineKind)


@dataclass(frozen=True)
class RunConfig:
    """Everything an experiment needs; flags and config files both map here."""

    task: str = "account"  # account | tweet
    model: str = "forest"  # logreg|sgd|forest|adaboost|mlp|lstm|contextual
    manifest: str = ""
    out_dir: str = "runs"
    seed: int = 0
    resample: str = "none"
    smote_k: int = 5
    enn_k: int = 3
    target_ratio: float = 1.0
    train_fraction: float = 0.8
    stratified: bool = True
    group_by_account: bool = False
    threshold: float = 0.5
    embedding: str = ""
    embedding_dim: int = 25
    max_len: int = 30
    truncation: str = "tail"
    vocab_cap: int = 0  # 0 = no vocabulary cap
    repeat_tag: bool = False
    epochs: int = 0  # 0 = model default
    batch_size: int = 64
    learning_rate: float = 1e-3
    val_fraction: float = 0.1
    mlp_layers: str = "500,200,1"
    n_trees: int = 100
    n_stumps: int = 100
    logreg_epochs: int = 500

    def validate(self) -> None:
        if self.task not in ("account", "tweet"):
            raise ConfigError(f"task must be account or tweet, got {self.task!r}")
        if self.model not in BASELINE_MODELS + NET_MODELS:
            raise ConfigError(f"unknown model {self.model!r}")
        if self.model in NET_MODELS:
            if self.task != "tweet":
                raise ConfigError(f"model {self.model} is tweet-level only")
            if self.resample != "none":
                # Metadata is never resampled for the LSTM systems; this is
                # a hard rule, not a default.
                raise ConfigError(
                    "resampling applies only to baseline pipelines; "
                    f"set resample=none for model {self.model}"
                )
            if not self.embedding:
                raise ConfigError(f"model {self.model} requires --embedding")
        if self.resample not in tuple(s.value for s in Strategy):
            raise ConfigError(f"unknown resample strategy {self.resample!r}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must lie in (0, 1)")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ConfigError("val_fraction must lie in [0, 1)")
        if not 0.0 < self.threshold < 1.0:
            raise ConfigError("threshold must lie in (0, 1)")
        if self.truncation not in ("tail", "head"):
            raise ConfigError("truncation must be tail or head")
        if not self.manifest:
            raise ConfigError("a corpus manifest is required")

    def to_kv_lines(self) -> list[str]:
        lines = []
        for f in sorted(fields(self), key=lambda f: f.name):
            lines.append(f"{f.name} = {getattr(self, f.name)}")
        return lines

    def config_hash(self) -> str:
        digest = hashlib.sha256("\n".join(self.to_kv_lines()).encode("utf-8"))
        return digest.hexdigest()

    def echo(self) -> dict[str, str]:
        out = {f.name: str(getattr(self, f.name)) for f in fields(self)}
        out["config_hash"] = self.config_hash()
        return out


def config_from_strings(values: dict[str, str], **overrides) -> RunConfig:
    """Build a RunConfig from string key-values (config files, bench rows)."""
    typed = {}
    by_name = {f.name: f for f in fields(RunConfig)}
    for key, value in values.items():
        if key not in by_name:
            raise ConfigError(f"unknown config key {key!r}")
        kind = by_name[key].type
        if kind == "bool" or isinstance(by_name[key].default, bool):
            typed[key] = value.strip().lower() in ("1", "true", "yes", "on")
        elif isinstance(by_name[key].default, int):
            typed[key] = int(value)
        elif isinstance(by_name[key].default, float):
            typed[key] = float(value)
        else:
            typed[key] = value
    typed.update(overrides)
    return RunConfig(**typed)


# -- experiment pipeline ---------------------------------------------------


@dataclass
class ExperimentResult:
    report: EvalReport
    run_dir: str
    checkpoint_path: str
    report_kv_path: str


def _write_lines(path, lines) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


def _account_matrix(accounts) -> FeatureMatrix:
    if not accounts:
        raise DegenerateData("corpus contains no accounts")
    rows = np.vstack([encode_account(a.features) for a in accounts])
    labels = np.array([a.label for a in accounts], dtype=np.int8)
    return FeatureMatrix(rows, ACCOUNT_FEATURE_COLUMNS, labels)


def _tweet_meta_matrix(tweets) -> FeatureMatrix:
    if not tweets:
        raise DegenerateData("corpus contains no tweets")
    rows = np.vstack([encode_tweet_metadata(t.metadata) for t in tweets])
    labels = np.array([t.label for t in tweets], dtype=np.int8)
    return FeatureMatrix(rows, TWEET_METADATA_COLUMNS, labels)


def _baseline_config(config: RunConfig) -> BaselineConfig:
    return BaselineConfig(
        seed=config.seed,
        n_trees=config.n_trees,
        n_stumps=config.n_stumps,
        logreg_epochs=config.logreg_epochs,
        mlp_layers=tuple(int(v) for v in config.mlp_layers.split(",")),
    )


def _make_run_dir(config: RunConfig) -> str:
    stamp = time.strftime("%Y%m%d-%H%M%S")
    short = config.config_hash()[:8]
    run_dir = os.path.join(config.out_dir, f"run-{stamp}-{short}")
    suffix = 0
    while os.path.exists(run_dir):
        suffix += 1
        run_dir = os.path.join(config.out_dir, f"run-{stamp}-{short}-{suffix}")
    os.makedirs(run_dir)
    latest = os.path.join(config.out_dir, "latest")
    try:
        if os.path.islink(latest):
            os.unlink(latest)
        os.symlink(os.path.basename(run_dir), latest)
    except OSError:
        pass
    return run_dir


def _run_baseline_experiment(config, matrix, run_dir, con_hash):
    spec = SplitSpec(config.train_fraction, config.stratified, config.seed)
    train_idx, test_idx = split_indices(matrix.labels, spec)
    train_matrix = matrix.select(train_idx)
    test_matrix = matrix.select(test_idx)

    resample_cfg = ResampleConfig(
        strategy=Strategy(config.resample),
        smote_k=config.smote_k,
        enn_k=config.enn_k,
        target_ratio=config.target_ratio,
        seed=config.seed,
    )
    train_matrix, diag = apply_strategy(train_matrix, resample_cfg)
    _write_lines(
        os.path.join(run_dir, "resample.kv"),
        [f"config_hash = {con_hash}"] + diag.to_kv_lines(),
    )

    model = baselines.fit(BaselineKind(config.model), train_matrix, _baseline_config(config))
    scores = baselines.predict_proba(model, test_matrix)
    report = evaluate(scores, test_matrix.labels, config.threshold, config.echo())
    checkpoint = os.path.join(run_dir, "model.txt")
    baselines.save_baseline(model, checkpoint, {"config_hash": con_hash})
    return report, checkpoint


def _prepare_tweet_tensors(config, tweets, table):
    sequences, metadata = [], []
    for tweet in tweets:
        tokens = tokenize(tweet.text, repeat_tag=config.repeat_tag)
        sequences.append(
            embed(tokens, table, max_len=config.max_len, truncation=config.truncation)
        )
        metadata.append(encode_tweet_metadata(tweet.metadata))
    labels = np.array([t.label for t in tweets], dtype=np.int8)
    return sequences, np.vstack(metadata), labels


def _run_net_experiment(config, tweets, run_dir, con_hash):
    if not tweets:
        raise DegenerateData("corpus contains no tweets")
    labels = np.array([t.label for t in tweets], dtype=np.int8)
    groups = [t.account_id for t in tweets] if config.group_by_account else None
    spec = SplitSpec(config.train_fraction, config.stratified, config.seed)
    train_idx, test_idx = split_indices(labels, spec, groups=groups)

    restrict = None
    if config.vocab_cap > 0:
        train_tokens = (
            tokenize(tweets[i].text, repeat_tag=config.repeat_tag) for i in train_idx
        )
        restrict = most_frequent_tokens(train_tokens, config.vocab_cap)
    table = load_glove(config.embedding, config.embedding_dim, restrict_to=restrict)

    sequences, metadata, _ = _prepare_tweet_tensors(config, tweets, table)
    dataset = [
        (sequences[i], metadata[i], Label(int(labels[i]))) for i in range(len(tweets))
    ]

    fit_idx, val_idx = train_idx, np.array([], dtype=np.int64)
    if config.val_fraction > 0.0:
        inner = SplitSpec(1.0 - config.val_fraction, config.stratified, config.seed)
        sub_fit, sub_val = split_indices(labels[train_idx], inner)
        fit_idx, val_idx = train_idx[sub_fit], train_idx[sub_val]

    epochs = config.epochs if config.epochs > 0 else 30
    common = dict(
        embedding_dim=table.dimension,
        learning_rate=config.learning_rate,
        batch_size=config.batch_size,
        epochs=epochs,
        seed=config.seed,
    )
    net_config = (
        NetConfig.contextual(**common)
        if config.model == "contextual"
        else NetConfig.tweet_only(**common)
    )
    model, trace = train_net(
        net_config,
        [dataset[i] for i in fit_idx],
        validation=[dataset[i] for i in val_idx] if val_idx.size else None,
    )

    test_sequences = [sequences[i] for i in test_idx]
    scores = model.predict_proba(test_sequences, metadata[test_idx])
    report = evaluate(scores, labels[test_idx], config.threshold, config.echo())

    trace.config_echo = config.echo()
    _write_lines(
        os.path.join(run_dir, "trace.csv"),
        [f"# config_hash = {con_hash}"] + trace.to_csv_lines(),
    )
    checkpoint = os.path.join(run_dir, "model.txt")
    model.save(
        checkpoint,
        {
            "config_hash": con_hash,
            "pipeline_hash": pipeline_fingerprint(
                table, config.max_len, config.truncation, config.repeat_tag
            ),
            "max_len": config.max_len,
            "truncation": config.truncation,
            "repeat_tag": int(config.repeat_tag),
        },
    )
    return report, checkpoint


def run_experiment(config: RunConfig) -> ExperimentResult:
    """Execute ingest -> features -> (resample) -> fit -> evaluate, writing
    the report, checkpoint, training trace, and a run manifest to disk."""
    config.validate()
    con_hash = config.config_hash()
    manifest = parse_manifest(config.manifest)
    accounts, tweets, load_diag = load_corpus(manifest)
    run_dir = _make_run_dir(config)

    if config.model in NET_MODELS:
        report, checkpoint = _run_net_experiment(config, tweets, run_dir, con_hash)
    elif config.task == "account":
        matrix = _account_matrix(accounts)
        report, checkpoint = _run_baseline_experiment(config, matrix, run_dir, con_hash)
    else:
        matrix = _tweet_meta_matrix(tweets)
        report, checkpoint = _run_baseline_experiment(config, matrix, run_dir, con_hash)

    report_kv = os.path.join(run_dir, "report.kv")
    _write_lines(report_kv, [f"config_hash = {con_hash}"] + report.to_kv_lines())
    with open(os.path.join(run_dir, "report.txt"), "w", encoding="utf-8") as fh:
        fh.write(report.to_text())
        fh.write(f"  config hash {con_hash}\n")
    _write_lines(
        os.path.join(run_dir, "roc.csv"),
        [f"# config_hash = {con_hash}"] + report.roc_csv_lines(),
    )
    run_lines = [f"config_hash = {con_hash}"]
    run_lines += [f"config.{line}" for line in config.to_kv_lines()]
    run_lines += load_diag.to_kv_lines()
    run_lines.append("rule.lstm_resampling = forbidden (metadata never oversampled)")
    _write_lines(os.path.join(run_dir, "run.kv"), run_lines)
    return ExperimentResult(
        report=report,
        run_dir=run_dir,
        checkpoint_path=checkpoint,
        report_kv_path=report_kv,
    )


# -- bench -----------------------------------------------------------------


def benchmark_suite(bench_path, out_dir) -> list[dict[str, str]]:
    """Run every row of a bench config; rows keep file order, failures are
    recorded and do not stop the suite."""
    with open(bench_path, encoding="utf-8") as fh:
        entries = parse_kv_lines(fh)
    defaults: dict[str, str] = {}
    row_values: dict[str, dict[str, str]] = {}
    for key, value in entries.items():
        if key.startswith("default."):
            defaults[key[len("default."):]] = value
        elif key.startswith("row."):
            _, name, field = key.split(".", 2)
            row_values.setdefault(name, {})[field] = value
        else:
            raise ConfigError(f"unrecognized bench key {key!r}")
    if not row_values:
        raise ConfigError("bench config defines no rows")

    os.makedirs(out_dir, exist_ok=True)
    results = []
    for name, overrides in row_values.items():
        merged = dict(defaults)
        merged.update(overrides)
        row_out = os.path.join(out_dir, "rows", name)
        row = {"name": name}
        try:
            config = config_from_strings(merged, out_dir=row_out)
            row.update(
                task=config.task, model=config.model, resample=config.resample,
                embedding_dim=str(config.embedding_dim),
            )
            result = run_experiment(config)
            rep = result.report
            row.update(
                precision=f"{rep.precision:.4f}", recall=f"{rep.recall:.4f}",
                f1=f"{rep.f1:.4f}", accuracy=f"{rep.accuracy:.4f}",
                auc=f"{rep.auc:.4f}", status="ok", error="",
            )
        except (BotDetectError, OSError) as exc:
            row.setdefault("task", merged.get("task", ""))
            row.setdefault("model", merged.get("model", ""))
            row.setdefault("resample", merged.get("resample", ""))
            row.setdefault("embedding_dim", merged.get("embedding_dim", ""))
            message = str(exc).replace(",", ";").replace("\n", " ")
            row.update(
                precision="", recall="", f1="", accuracy="", auc="",
                status="error", error=message,
            )
        results.append(row)

    columns = ["name", "task", "model", "resample", "embedding_dim",
               "precision", "recall", "f1", "accuracy", "auc", "status", "error"]
    csv_lines = [",".join(columns)]
    for row in results:
        csv_lines.append(",".join(row.get(c, "") for c in columns))
    _write_lines(os.path.join(out_dir, "bench.csv"), csv_lines)

    widths = {c: max(len(c), *(len(row.get(c, "")) for row in results)) for c in columns}
    text_lines = ["  ".join(c.ljust(widths[c]) for c in columns)]
    for row in results:
        text_lines.append("  ".join(row.get(c, "").ljust(widths[c]) for c in columns))
    _write_lines(os.path.join(out_dir, "bench.txt"), text_lines)
    return results


# -- subcommands -------------------------------------------------------------


def _cmd_tokenize(args) -> int:
    source = sys.stdin if args.input == "-" else open(args.input, encoding="utf-8")
    try:
        lines = [tokenize(line.rstrip("\n"), repeat_tag=args.repeat_tag)
                 for line in source]
    finally:
        if source is not sys.stdin:
            source.close()
    rendered = [" ".join(tokens) for tokens in lines]
    if args.output == "-":
        for line in rendered:
            print(line)
    else:
        _write_lines(args.output, rendered if rendered else [""])
    return 0


def _cmd_synth(args) -> int:
    spec = SyntheticCorpusSpec(
        n_accounts_per_class=args.accounts,
        tweets_per_account=args.tweets_per_account,
        seed=args.seed,
        separation=args.separation,
    )
    accounts, tweets = generate_synthetic(spec)
    manifest_path = write_corpus(accounts, tweets, args.out)
    print(f"wrote {len(accounts)} accounts / {len(tweets)} tweets; manifest: {manifest_path}")
    if args.embedding_dim:
        vocab = set()
        for tweet in tweets:
            vocab.update(tokenize(tweet.text))
        table = fixture_table(vocab, args.embedding_dim, seed=args.embedding_seed)
        path = os.path.join(args.out, f"glove_{args.embedding_dim}d.txt")
        write_glove_file(table, path)
        print(f"wrote fixture embeddings: {path}")
    return 0


def _cmd_ingest(args) -> int:
    manifest = parse_manifest(args.manifest)
    accounts, tweets, diagnostics = load_corpus(manifest)
    lines = [
        f"accounts_total = {len(accounts)}",
        f"tweets_total = {len(tweets)}",
    ] + diagnostics.to_kv_lines()
    if args.kv:
        _write_lines(args.kv, lines)
    for line in lines:
        print(line)
    return 0


def _cmd_resample(args) -> int:
    with open(args.input, encoding="utf-8") as fh:
        matrix = matrix_from_csv_lines(fh)
    config = ResampleConfig(
        strategy=Strategy(args.strategy),
        smote_k=args.smote_k,
        enn_k=args.enn_k,
        target_ratio=args.target_ratio,
        seed=args.seed,
    )
    result, diag = apply_strategy(matrix, config)
    _write_lines(args.output, matrix_to_csv_lines(result))
    diag_lines = diag.to_kv_lines()
    if args.diagnostics:
        _write_lines(args.diagnostics, diag_lines)
    for line in diag_lines:
        print(line)
    return 0


_TRAIN_FLAGS = [
    ("--task", str, "task"),
    ("--model", str, "model"),
    ("--manifest", str, "manifest"),
    ("--out", str, "out_dir"),
    ("--seed", int, "seed"),
    ("--resample", str, "resample"),
    ("--smote-k", int, "smote_k"),
    ("--enn-k", int, "enn_k"),
    ("--target-ratio", float, "target_ratio"),
    ("--train-fraction", float, "train_fraction"),
    ("--threshold", float, "threshold"),
    ("--embedding", str, "embedding"),
    ("--embedding-dim", int, "embedding_dim"),
    ("--max-len", int, "max_len"),
    ("--truncation", str, "truncation"),
    ("--vocab-cap", int, "vocab_cap"),
    ("--epochs", int, "epochs"),
    ("--batch-size", int, "batch_size"),
    ("--learning-rate", float, "learning_rate"),
    ("--val-fraction", float, "val_fraction"),
    ("--mlp-layers", str, "mlp_layers"),
    ("--n-trees", int, "n_trees"),
    ("--n-stumps", int, "n_stumps"),
    ("--logreg-epochs", int, "logreg_epochs"),
]


def _cmd_train(args) -> int:
    values: dict[str, str] = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values.update(parse_kv_lines(fh))
    config = config_from_strings(values)
    overrides = {}
    for _, _, dest in _TRAIN_FLAGS:
        value = getattr(args, dest)
        if value is not None:
            overrides[dest] = value
    for flag, dest in (("stratified", "stratified"),
                       ("group_by_account", "group_by_account"),
                       ("repeat_tag", "repeat_tag")):
        value = getattr(args, dest)
        if value is not None:
            overrides[dest] = value
    config = replace(config, **overrides)
    result = run_experiment(config)
    sys.stdout.write(result.report.to_text())
    print(f"artifacts: {result.run_dir}")
    return 0


def _load_net_checkpoint(path):
    model = ContextualLstmModel.load(path)
    meta, _ = load_model(path)
    return model, meta


def _cmd_eval(args) -> int:
    meta, _ = load_model(args.checkpoint)
    kind = meta.get("kind", "")
    manifest = parse_manifest(args.manifest)
    accounts, tweets, _ = load_corpus(manifest)
    if kind in ("contextual_lstm", "tweet_lstm"):
        if not args.embedding:
            raise ConfigError("net checkpoints need --embedding for evaluation")
        model, meta = _load_net_checkpoint(args.checkpoint)
        table = load_glove(args.embedding, model.config.embedding_dim)
        max_len = int(meta.get("max_len", 30))
        truncation = meta.get("truncation", "tail")
        repeat = bool(int(meta.get("repeat_tag", 0)))
        stored = meta.get("pipeline_hash")
        current = pipeline_fingerprint(table, max_len, truncation, repeat)
        if stored and stored != current:
            print("warning: embedding/tokenizer configuration differs from training",
                  file=sys.stderr)
        sequences, metadata, labels = [], [], []
        for tweet in tweets:
            tokens = tokenize(tweet.text, repeat_tag=repeat)
            sequences.append(embed(tokens, table, max_len=max_len, truncation=truncation))
            metadata.append(encode_tweet_metadata(tweet.metadata))
        labels = np.array([t.label for t in tweets], dtype=np.int8)
        scores = model.predict_proba(sequences, np.vstack(metadata))
        report = evaluate(scores, labels, args.threshold)
    else:
        model = baselines.load_baseline(args.checkpoint)
        if model.schema == ACCOUNT_FEATURE_COLUMNS:
            matrix = _account_matrix(accounts)
        else:
            matrix = _tweet_meta_matrix(tweets)
        scores = baselines.predict_proba(model, matrix)
        report = evaluate(scores, matrix.labels, args.threshold)
    sys.stdout.write(report.to_text())
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        _write_lines(os.path.join(args.out, "report.kv"), report.to_kv_lines())
        with open(os.path.join(args.out, "report.txt"), "w", encoding="utf-8") as fh:
            fh.write(report.to_text())
        _write_lines(os.path.join(args.out, "roc.csv"), report.roc_csv_lines())
    return 0


def _cmd_inspect(args) -> int:
    model, meta = _load_net_checkpoint(args.checkpoint)
    table = load_glove(args.embedding, model.config.embedding_dim)
    max_len = int(meta.get("max_len", 30))
    truncation = meta.get("truncation", "tail")
    repeat = bool(int(meta.get("repeat_tag", 0)))
    manifest = parse_manifest(args.manifest)
    _, tweets, _ = load_corpus(manifest)
    if not tweets:
        raise DegenerateData("corpus contains no tweets")
    os.makedirs(args.out, exist_ok=True)

    index = args.tweet_index
    if not 0 <= index < len(tweets):
        raise ConfigError(f"tweet index {index} outside corpus of {len(tweets)}")
    trace = trace_tweet(model, table, tweets[index], max_len, truncation, repeat)
    _write_lines(os.path.join(args.out, f"trace_{index}.csv"), trace_csv_lines(trace))
    if trace.empty:
        print(f"note: tweet {index} tokenizes to nothing; trace is empty")
    if args.cell_state:
        _write_lines(
            os.path.join(args.out, f"cell_trace_{index}.csv"),
            cell_trace_csv_lines(model, table, tweets[index], max_len, truncation, repeat),
        )

    report = unit_distributions(model, table, tweets, max_len, truncation, repeat)
    _write_lines(os.path.join(args.out, "distributions.csv"), distribution_csv_lines(report))
    _write_lines(os.path.join(args.out, "ks.csv"), ks_csv_lines(report))
    best = report.ranking[0]
    print(f"most class-separating unit: {best} "
          f"(ks={report.ks_by_unit[best]:.3f}); outputs in {args.out}")
    return 0


def _cmd_bench(args) -> int:
    results = benchmark_suite(args.config, args.out)
    failures = [r for r in results if r["status"] != "ok"]
    print(f"bench: {len(results)} rows, {len(failures)} failed; outputs in {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="botdetect",
        description="Tweet-level and account-level bot detection experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tokenize", help="tokenize newline-delimited text")
    p.add_argument("--input", default="-")
    p.add_argument("--output", default="-")
    p.add_argument("--repeat-tag", dest="repeat_tag", action="store_true")
    p.set_defaults(func=_cmd_tokenize)

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--accounts", type=int, default=50)
    p.add_argument("--tweets-per-account", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--separation", type=float, default=0.8)
    p.add_argument("--embedding-dim", type=int, default=0,
                   choices=(0,) + CANONICAL_DIMENSIONS,
                   help="also write fixture embeddings of this dimension")
    p.add_argument("--embedding-seed", type=int, default=0)
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("ingest", help="load a corpus and report diagnostics")
    p.add_argument("--manifest", required=True)
    p.add_argument("--kv", default="", help="also write diagnostics to this file")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("resample", help="resample a feature-matrix CSV")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--strategy", required=True,
                   choices=tuple(s.value for s in Strategy))
    p.add_argument("--smote-k", type=int, default=5)
    p.add_argument("--enn-k", type=int, default=3)
    p.add_argument("--target-ratio", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--diagnostics", default="")
    p.set_defaults(func=_cmd_resample)

    p = sub.add_parser("train", help="run a full experiment")
    p.add_argument("--config", default="", help="key = value config file")
    for flag, kind, dest in _TRAIN_FLAGS:
        p.add_argument(flag, type=kind, dest=dest, default=None)
    p.add_argument("--stratified", dest="stratified", default=None,
                   action="store_true")
    p.add_argument("--no-stratified", dest="stratified", action="store_false")
    p.add_argument("--group-by-account", dest="group_by_account", default=None,
                   action="store_true")
    p.add_argument("--repeat-tag", dest="repeat_tag", default=None,
                   action="store_true")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a checkpoint on a corpus")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--embedding", default="")
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", default="")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("inspect", help="hidden-state traces and distributions")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tweet-index", type=int, default=0)
    p.add_argument("--cell-state", dest="cell_state", action="store_true")
    p.set_defaults(func=_cmd_inspect)

    p = sub.add_parser("bench", help="run a manifest of experiment rows")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (DataError, FileNotFoundError, OSError) as exc:
        code = exc.exit_code if isinstance(exc, BotDetectError) else DataError.exit_code
        print(f"data error: {exc}", file=sys.stderr)
        return code
    except BotDetectError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
