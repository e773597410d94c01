import numpy as np
import pytest

from botdetect import baselines
from botdetect.baselines import BaselineConfig, BaselineKind
from botdetect.data import (
    FeatureMatrix,
    Label,
    SplitSpec,
    TWEET_METADATA_COLUMNS,
    encode_tweet_metadata,
    split,
)
from botdetect.errors import ExcessiveBadRows, HeaderMismatch, ParseError
from botdetect.ingest import (
    BAD_ROW_MIN_ROWS,
    CorpusManifest,
    ManifestGroup,
    SyntheticCorpusSpec,
    class_metadata_means,
    generate_synthetic,
    load_corpus,
    parse_manifest,
    write_corpus,
)
from botdetect.metrics import auc
from botdetect.tokenizer import plain_words, tokenize

USERS_HEADER = (
    "id,statuses_count,followers_count,friends_count,favourites_count,"
    "listed_count,default_profile,geo_enabled,profile_use_background_image,"
    "verified,protected"
)
TWEETS_HEADER = (
    "user_id,text,retweet_count,reply_count,favorite_count,"
    "num_hashtags,num_urls,num_mentions"
)


def _group(tmp_path, name, users_lines=None, tweets_lines=None):
    group_dir = tmp_path / name
    group_dir.mkdir()
    if users_lines is not None:
        (group_dir / "users.csv").write_text("\n".join(users_lines) + "\n", encoding="utf-8")
    if tweets_lines is not None:
        (group_dir / "tweets.csv").write_text("\n".join(tweets_lines) + "\n", encoding="utf-8")
    return ManifestGroup(name=name, path=str(group_dir), label=Label.BOT if "bot" in name else Label.HUMAN)


def test_manifest_parsing(tmp_path):
    target = tmp_path / "data" / "humans"
    target.mkdir(parents=True)
    manifest_file = tmp_path / "manifest.txt"
    manifest_file.write_text(
        "# comment\n"
        "group.humans.path = data/humans\n"
        "group.humans.label = human\n"
        "group.humans.accounts = 12\n",
        encoding="utf-8",
    )
    manifest = parse_manifest(manifest_file)
    assert manifest.groups[0].name == "humans"
    assert manifest.groups[0].path == str(target)
    assert manifest.groups[0].label == Label.HUMAN
    assert manifest.groups[0].expected_accounts == 12


def test_manifest_rejects_bad_label(tmp_path):
    manifest_file = tmp_path / "manifest.txt"
    manifest_file.write_text("group.g.path = x\ngroup.g.label = cyborg\n", encoding="utf-8")
    with pytest.raises(ParseError):
        parse_manifest(manifest_file)


def test_empty_csv_loads_zero_records(tmp_path):
    group = _group(tmp_path, "humans", [USERS_HEADER], [TWEETS_HEADER])
    accounts, tweets, diag = load_corpus(CorpusManifest(groups=(group,)))
    assert accounts == [] and tweets == []
    assert diag.groups[0].accounts_skipped == 0
    assert diag.groups[0].tweets_skipped == 0


def test_corrupt_numeric_row_skipped_and_counted(tmp_path):
    rows = [
        TWEETS_HEADER,
        "u1,hello world,1,0,2,0,0,0",
        "u2,bad row,oops,0,2,0,0,0",
        "u3,fine again,3,1,0,1,0,2",
    ]
    group = _group(tmp_path, "humans", [USERS_HEADER], rows)
    accounts, tweets, diag = load_corpus(CorpusManifest(groups=(group,)))
    assert len(tweets) == 2
    assert diag.groups[0].tweets_skipped == 1
    assert tweets[0].text == "hello world"
    assert tweets[1].metadata.num_mentions == 2


def test_missing_mandatory_column_is_header_mismatch(tmp_path):
    group = _group(tmp_path, "humans", ["id,statuses_count"], None)
    with pytest.raises(HeaderMismatch):
        load_corpus(CorpusManifest(groups=(group,)))
    group2 = _group(tmp_path, "humans2", None, ["user_id,retweet_count"])
    with pytest.raises(HeaderMismatch):
        load_corpus(CorpusManifest(groups=(group2,)))


def test_absent_count_column_fills_zero(tmp_path):
    header = "user_id,text,retweet_count,favorite_count,num_hashtags,num_urls,num_mentions"
    rows = [header, "u1,hello,2,1,0,0,0", "u2,world,0,0,1,0,0"]
    group = _group(tmp_path, "humans", [USERS_HEADER], rows)
    _, tweets, diag = load_corpus(CorpusManifest(groups=(group,)))
    assert all(t.metadata.reply_count == 0 for t in tweets)
    assert any("reply_count" in note for note in diag.groups[0].notes)


def test_absent_entity_columns_fall_back_to_text_counting(tmp_path):
    header = "user_id,text,retweet_count,reply_count,favorite_count"
    rows = [header, 'u1,"see #a #b https://t.co/x @bob",0,0,0']
    group = _group(tmp_path, "humans", [USERS_HEADER], rows)
    _, tweets, diag = load_corpus(CorpusManifest(groups=(group,)))
    meta = tweets[0].metadata
    assert (meta.num_hashtags, meta.num_urls, meta.num_mentions) == (2, 1, 1)
    assert set(diag.groups[0].fallback_columns) == {"num_hashtags", "num_urls", "num_mentions"}


def test_empty_cells_fill_with_zero_and_are_counted(tmp_path):
    rows = [USERS_HEADER, "a1,5,,3,0,0,1,,0,1,0"]
    group = _group(tmp_path, "humans", rows, None)
    accounts, _, diag = load_corpus(CorpusManifest(groups=(group,)))
    assert accounts[0].features.followers_count == 0
    assert not accounts[0].features.geo_enabled
    assert diag.groups[0].filled_cells["followers_count"] == 1


def test_count_mismatch_reported_as_warning(tmp_path):
    rows = [USERS_HEADER, "a1,1,2,3,4,5,0,0,0,0,0"]
    group_dir = tmp_path / "humans"
    group_dir.mkdir()
    (group_dir / "users.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")
    group = ManifestGroup(
        name="humans", path=str(group_dir), label=Label.HUMAN, expected_accounts=5
    )
    accounts, _, diag = load_corpus(CorpusManifest(groups=(group,)))
    assert len(accounts) == 1
    assert any("expected 5 accounts" in w for w in diag.warnings)


def test_excessive_bad_rows_fail(tmp_path):
    n = BAD_ROW_MIN_ROWS * 2
    rows = [TWEETS_HEADER]
    for i in range(n):
        value = "oops" if i % 3 == 0 else "1"  # ~33% corrupt
        rows.append(f"u{i},text,{value},0,0,0,0,0")
    group = _group(tmp_path, "humans", None, rows)
    with pytest.raises(ExcessiveBadRows):
        load_corpus(CorpusManifest(groups=(group,)))


def test_small_fixture_with_high_bad_fraction_still_loads(tmp_path):
    rows = [TWEETS_HEADER, "u1,ok,1,0,0,0,0,0", "u2,bad,x,0,0,0,0,0", "u3,ok,2,0,0,0,0,0"]
    group = _group(tmp_path, "humans", None, rows)
    _, tweets, diag = load_corpus(CorpusManifest(groups=(group,)))
    assert len(tweets) == 2 and diag.groups[0].tweets_skipped == 1


def test_missing_group_directory_raises(tmp_path):
    group = ManifestGroup(name="g", path=str(tmp_path / "nope"), label=Label.BOT)
    with pytest.raises(FileNotFoundError):
        load_corpus(CorpusManifest(groups=(group,)))


def test_duplicate_group_names_rejected(tmp_path):
    g = ManifestGroup(name="g", path=str(tmp_path), label=Label.BOT)
    with pytest.raises(Exception):
        CorpusManifest(groups=(g, g))


# -- synthetic corpora -------------------------------------------------------

def test_synthetic_deterministic_byte_identical(tmp_path):
    spec = SyntheticCorpusSpec(10, 5, seed=42, separation=0.5)
    a_accounts, a_tweets = generate_synthetic(spec)
    b_accounts, b_tweets = generate_synthetic(spec)
    assert a_accounts == b_accounts
    assert a_tweets == b_tweets
    dir_a, dir_b = tmp_path / "a", tmp_path / "b"
    write_corpus(a_accounts, a_tweets, dir_a)
    write_corpus(b_accounts, b_tweets, dir_b)
    for rel in ("human/users.csv", "human/tweets.csv", "bot/users.csv",
                "bot/tweets.csv", "manifest.txt"):
        assert (dir_a / rel).read_bytes() == (dir_b / rel).read_bytes()


def test_synthetic_round_trips_through_loader(tmp_path):
    spec = SyntheticCorpusSpec(8, 4, seed=3, separation=0.7)
    accounts, tweets = generate_synthetic(spec)
    manifest_path = write_corpus(accounts, tweets, tmp_path / "corpus")
    loaded_accounts, loaded_tweets, diag = load_corpus(parse_manifest(manifest_path))
    assert len(loaded_accounts) == len(accounts)
    assert len(loaded_tweets) == len(tweets)
    assert not diag.warnings  # expected counts in the manifest match
    by_id = {a.account_id: a for a in accounts}
    for acc in loaded_accounts:
        assert acc.features == by_id[acc.account_id].features


def test_separation_one_vocabularies_disjoint():
    spec = SyntheticCorpusSpec(100, 1, seed=5, separation=1.0)
    _, tweets = generate_synthetic(spec)
    words = {Label.HUMAN: set(), Label.BOT: set()}
    for tweet in tweets:
        words[tweet.label].update(plain_words(tokenize(tweet.text)))
    assert words[Label.HUMAN]
    assert words[Label.BOT]
    assert words[Label.HUMAN].isdisjoint(words[Label.BOT])


def test_separation_one_metadata_ranges_disjoint():
    spec = SyntheticCorpusSpec(60, 2, seed=6, separation=1.0)
    _, tweets = generate_synthetic(spec)
    for column in TWEET_METADATA_COLUMNS:
        human_max = max(getattr(t.metadata, column) for t in tweets if t.label == Label.HUMAN)
        bot_min = min(getattr(t.metadata, column) for t in tweets if t.label == Label.BOT)
        assert human_max < bot_min


def test_separation_zero_classes_identically_distributed():
    spec = SyntheticCorpusSpec(60, 2, seed=7, separation=0.0)
    assert np.array_equal(
        class_metadata_means(spec, Label.HUMAN), class_metadata_means(spec, Label.BOT)
    )


def test_metadata_means_converge_within_five_percent():
    spec = SyntheticCorpusSpec(500, 12, seed=3, separation=0.6)
    _, tweets = generate_synthetic(spec)
    assert len(tweets) >= 10000
    for label in (Label.HUMAN, Label.BOT):
        sample = np.vstack(
            [encode_tweet_metadata(t.metadata) for t in tweets if t.label == label]
        )
        expected = class_metadata_means(spec, label)
        rel = np.abs(sample.mean(axis=0) - expected) / expected
        assert rel.max() < 0.05


def test_separation_zero_classifier_at_chance():
    # Indistinguishable classes force chance performance (mean AUC over
    # 5 seeds within +/- 0.05 of 0.5).
    aucs = []
    for seed in range(5):
        spec = SyntheticCorpusSpec(50, 10, seed=seed, separation=0.0)
        _, tweets = generate_synthetic(spec)
        features = np.vstack([encode_tweet_metadata(t.metadata) for t in tweets])
        labels = np.array([t.label for t in tweets], dtype=np.int8)
        matrix = FeatureMatrix(features, TWEET_METADATA_COLUMNS, labels)
        train, test = split(matrix, SplitSpec(0.7, True, seed))
        model = baselines.fit(
            BaselineKind.LOGREG, train, BaselineConfig(seed=seed, logreg_epochs=200)
        )
        aucs.append(auc(baselines.predict_proba(model, test), test.labels))
    assert abs(float(np.mean(aucs)) - 0.5) <= 0.05


def test_loading_preserves_order(tmp_path):
    spec = SyntheticCorpusSpec(5, 3, seed=9, separation=0.5)
    accounts, tweets = generate_synthetic(spec)
    manifest_path = write_corpus(accounts, tweets, tmp_path / "c")
    _, loaded, _ = load_corpus(parse_manifest(manifest_path))
    human_texts = [t.text for t in tweets if t.label == Label.HUMAN]
    loaded_human_texts = [t.text for t in loaded if t.label == Label.HUMAN]
    assert human_texts == loaded_human_texts
