"""Shared fixtures: the seeded synthetic corpus, its embedding table, and
the encoded training set used by the training and acceptance tests."""

import io

import numpy as np
import pytest

from sentweet import corpus
from sentweet.embedding import encode, load_glove
from sentweet.normalize import default_rewrite_table, normalize_tweet, tokenize

FIXTURE_SEED = 7
FIXTURE_SIZE = 50
FIXTURE_MAX_LEN = 24  # fixture texts top out around a dozen tokens


@pytest.fixture(scope="session")
def fixture_table():
    return load_glove(io.StringIO(corpus.fixture_embedding(dimension=8, seed=0)), 8)


@pytest.fixture(scope="session")
def fixture_data():
    return corpus.make_fixture(seed=FIXTURE_SEED, size=FIXTURE_SIZE)


@pytest.fixture(scope="session")
def encoded_dataset(fixture_data, fixture_table):
    examples, _ = fixture_data
    rewrites = default_rewrite_table()
    data = []
    for ex in examples:
        tokens = tokenize(normalize_tweet(ex.text, rewrites))
        seq = encode(tokens, fixture_table, FIXTURE_MAX_LEN)
        data.append((seq, np.asarray(ex.labels, dtype=np.float64)))
    return data
