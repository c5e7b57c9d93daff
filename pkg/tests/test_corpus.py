import datetime
import io
from collections import Counter

import numpy as np
import pytest

from sentweet import corpus
from sentweet.embedding import load_glove
from sentweet.errors import (
    BadDate,
    DuplicateId,
    EmptyFile,
    MissingColumn,
    NonBinaryLabel,
    ParseError,
    TooFewExamples,
)
from sentweet.labels import CANONICAL_LABELS, N_LABELS
from sentweet.normalize import default_rewrite_table, normalize_tweet, tokenize

LABELED_HEADER_LINE = ",".join(corpus.LABELED_HEADER)


def _labeled_csv(rows):
    return io.StringIO(LABELED_HEADER_LINE + "\n" + "\n".join(rows) + "\n")


# --- load_labeled ---

def test_load_labeled_basic():
    rows = ["stay home,1,0,0,0,0,0,0,0,0,0,0",
            "so sad today,0,0,0,0,0,1,0,0,0,0,0"]
    examples = corpus.load_labeled(_labeled_csv(rows))
    assert len(examples) == 2
    assert examples[0].text == "stay home"
    assert examples[0].labels == (1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0)
    assert examples[1].labels[5] == 1


def test_load_labeled_quoted_commas_round_trip(tmp_path):
    examples = [
        corpus.LabeledExample(text='she said, "stay home"', labels=(1,) + (0,) * 10),
        corpus.LabeledExample(text="line\nbreak", labels=(0, 1) + (0,) * 9),
    ]
    path = tmp_path / "labeled.csv"
    corpus.write_labeled_csv(path, examples)
    assert corpus.load_labeled(path) == examples


def test_load_labeled_rejects_non_binary():
    with pytest.raises(NonBinaryLabel) as err:
        corpus.load_labeled(_labeled_csv(["x,2,0,0,0,0,0,0,0,0,0,0"]))
    assert "'2'" in str(err.value)


def test_load_labeled_rejects_wrong_header():
    bad = io.StringIO("text,happy\nx,1\n")
    with pytest.raises(MissingColumn):
        corpus.load_labeled(bad)
    shuffled = ",".join(("text",) + tuple(reversed(CANONICAL_LABELS)))
    with pytest.raises(MissingColumn):
        corpus.load_labeled(io.StringIO(shuffled + "\nx,1,0,0,0,0,0,0,0,0,0,0\n"))


def test_load_labeled_rejects_empty():
    with pytest.raises(EmptyFile):
        corpus.load_labeled(io.StringIO(""))
    with pytest.raises(EmptyFile):
        corpus.load_labeled(io.StringIO(LABELED_HEADER_LINE + "\n"))


def test_load_labeled_rejects_short_row():
    with pytest.raises(ParseError):
        corpus.load_labeled(_labeled_csv(["x,1,0"]))


# --- load_tweets ---

def test_load_tweets_basic():
    text = ("id,date,region,text\n"
            "t1,2020-03-15,delhi,stay home stay safe\n"
            "t2,2020-04-01,india,wear a mask\n")
    tweets = corpus.load_tweets(io.StringIO(text))
    assert [tw.id for tw in tweets] == ["t1", "t2"]
    assert tweets[0].date == datetime.date(2020, 3, 15)
    assert tweets[1].region == "india"


def test_load_tweets_rejects_bad_date():
    text = "id,date,region,text\nt1,2020-13-01,delhi,hello\n"
    with pytest.raises(BadDate):
        corpus.load_tweets(io.StringIO(text))


def test_load_tweets_rejects_duplicate_id():
    text = ("id,date,region,text\n"
            "t1,2020-03-01,delhi,a\n"
            "t1,2020-03-02,delhi,b\n")
    with pytest.raises(DuplicateId):
        corpus.load_tweets(io.StringIO(text))


def test_load_tweets_rejects_missing_header():
    with pytest.raises(MissingColumn):
        corpus.load_tweets(io.StringIO(""))
    with pytest.raises(MissingColumn):
        corpus.load_tweets(io.StringIO("id,when,region,text\n"))


def test_tweets_csv_round_trip(tmp_path):
    tweets = [
        corpus.Tweet(id="a1", date=datetime.date(2020, 5, 4), region="delhi",
                     text='quoted, "text" here'),
        corpus.Tweet(id="a2", date=datetime.date(2020, 6, 1), region="india",
                     text="plain"),
    ]
    path = tmp_path / "tweets.csv"
    corpus.write_tweets_csv(path, tweets)
    assert corpus.load_tweets(path) == tweets


# --- cases ---

def test_cases_round_trip(tmp_path):
    cases = {(2020, 3): 1000, (2020, 4): 25000}
    path = tmp_path / "cases.csv"
    corpus.write_cases_csv(path, cases)
    assert corpus.load_cases(path) == cases


def test_cases_validation():
    with pytest.raises(MissingColumn):
        corpus.load_cases(io.StringIO("year,cases\n"))
    with pytest.raises(ParseError):
        corpus.load_cases(io.StringIO("year,month,cases\n2020,three,9\n"))
    with pytest.raises(BadDate):
        corpus.load_cases(io.StringIO("year,month,cases\n2020,13,9\n"))


# --- split ---

def test_split_sizes_ten():
    examples = list(range(10))
    train, test = corpus.split(examples, 0.9, seed=0)
    assert len(train) == 9 and len(test) == 1


def test_split_sizes_fifty():
    examples = list(range(50))
    train, test = corpus.split(examples, 0.9, seed=3)
    assert len(train) == 45 and len(test) == 5


def test_split_is_exact_partition():
    examples = [f"ex{i}" for i in range(37)]
    train, test = corpus.split(examples, 0.7, seed=5)
    assert Counter(train) + Counter(test) == Counter(examples)


def test_split_deterministic_per_seed():
    examples = list(range(30))
    assert corpus.split(examples, 0.8, seed=9) == corpus.split(examples, 0.8, seed=9)
    assert corpus.split(examples, 0.8, seed=9) != corpus.split(examples, 0.8, seed=10)


def test_split_argument_validation():
    with pytest.raises(ValueError):
        corpus.split(list(range(10)), 0.0, seed=0)
    with pytest.raises(ValueError):
        corpus.split(list(range(10)), 1.0, seed=0)
    with pytest.raises(TooFewExamples):
        corpus.split([1], 0.5, seed=0)


# --- filter_tweets ---

def _tweet(i, year, month, region):
    return corpus.Tweet(id=f"t{i}", date=datetime.date(year, month, 10),
                        region=region, text="x")


def test_filter_by_region_exact_tag():
    tweets = [_tweet(0, 2020, 3, "delhi"), _tweet(1, 2020, 3, "india"),
              _tweet(2, 2020, 4, "delhi")]
    out = corpus.filter_tweets(tweets, region="delhi")
    assert [tw.id for tw in out] == ["t0", "t2"]


def test_filter_by_month_range_inclusive():
    tweets = [_tweet(0, 2020, 3, "delhi"), _tweet(1, 2020, 5, "delhi"),
              _tweet(2, 2020, 7, "delhi"), _tweet(3, 2021, 1, "delhi")]
    out = corpus.filter_tweets(tweets, month_range=((2020, 5), (2020, 12)))
    assert [tw.id for tw in out] == ["t1", "t2"]


def test_filters_commute():
    examples, tweets = corpus.make_fixture(seed=2, size=30)
    a = corpus.filter_tweets(
        corpus.filter_tweets(tweets, region="india"),
        month_range=((2020, 4), (2020, 6)))
    b = corpus.filter_tweets(
        corpus.filter_tweets(tweets, month_range=((2020, 4), (2020, 6))),
        region="india")
    both = corpus.filter_tweets(tweets, region="india",
                                month_range=((2020, 4), (2020, 6)))
    assert a == b == both


def test_filter_no_criteria_is_identity():
    _, tweets = corpus.make_fixture(seed=2, size=12)
    assert corpus.filter_tweets(tweets) == tweets


def test_filter_backwards_range_rejected():
    with pytest.raises(ValueError):
        corpus.filter_tweets([], month_range=((2020, 6), (2020, 3)))


# --- fixtures ---

def test_make_fixture_shape_and_determinism(fixture_data):
    examples, tweets = fixture_data
    assert len(examples) == 50 and len(tweets) == 50
    again = corpus.make_fixture(seed=7, size=50)
    assert again == (examples, tweets)
    different = corpus.make_fixture(seed=8, size=50)
    assert different != (examples, tweets)


def test_make_fixture_label_properties(fixture_data):
    examples, _ = fixture_data
    matrix = np.array([ex.labels for ex in examples])
    assert matrix.shape == (50, N_LABELS)
    assert set(np.unique(matrix)) <= {0, 1}
    per_label = matrix.sum(axis=0)
    assert per_label.min() >= 3
    row_sums = matrix.sum(axis=1)
    assert row_sums.min() >= 1 and row_sums.max() <= 3


def test_make_fixture_sentinels_survive_normalization(fixture_data):
    examples, _ = fixture_data
    rewrites = default_rewrite_table()
    for ex in examples:
        tokens = tokenize(normalize_tweet(ex.text, rewrites))
        for j, active in enumerate(ex.labels):
            if active:
                assert corpus.SENTINEL_TOKENS[j] in tokens, ex.text


def test_make_fixture_tweets_cover_regions_and_months(fixture_data):
    _, tweets = fixture_data
    assert {tw.id for tw in tweets} == {f"t{i:05d}" for i in range(50)}
    assert {tw.region for tw in tweets} == set(corpus.FIXTURE_REGIONS)
    months = {(tw.date.year, tw.date.month) for tw in tweets}
    assert months == set(corpus.FIXTURE_MONTHS)


def test_make_fixture_minimum_size():
    with pytest.raises(ValueError):
        corpus.make_fixture(seed=0, size=9)


def test_make_cases_fixture_covers_all_months():
    cases = corpus.make_cases_fixture(seed=7)
    assert set(cases) == set(corpus.FIXTURE_MONTHS)
    assert all(v > 0 for v in cases.values())
    assert cases == corpus.make_cases_fixture(seed=7)


def test_fixture_embedding_loads(fixture_table):
    assert fixture_table.dimension == 8
    assert fixture_table.vectors.shape == (len(corpus.FIXTURE_VOCAB) + 2, 8)
    for word in corpus.FIXTURE_VOCAB:
        assert word in fixture_table.vocabulary


def test_fixture_embedding_rejects_other_dimension():
    from sentweet.errors import DimensionMismatch
    text = corpus.fixture_embedding(dimension=8, seed=0)
    with pytest.raises(DimensionMismatch):
        load_glove(io.StringIO(text), 12)
