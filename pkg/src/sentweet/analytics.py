"""Corpus and prediction analytics: n-gram tables, label co-occurrence,
label-count histograms, monthly sentiment series, tweets-vs-cases joins.

Everything here is pure aggregation with deterministic ordering; the CLI
turns these structures into CSV and SVG artifacts.
"""

import datetime
from collections import Counter
from dataclasses import dataclass

import numpy as np

from sentweet.errors import EmptyInput, MissingCaseData, UnparseableDate

BUCKETS = ("0", "1", "2", "3+")


@dataclass
class NGramTable:
    n: int
    counts: dict  # token tuple -> count, in rank order (count desc, then lexicographic)
    total: int


@dataclass
class CooccurrenceMatrix:
    m: np.ndarray  # (k, k) symmetric counts; diagonal holds per-label totals


@dataclass
class LabelCountDistribution:
    counts: dict      # bucket name -> sample count
    percentages: dict  # bucket name -> share of samples, in percent


@dataclass
class MonthlySentimentSeries:
    months: tuple          # ((year, month), ...) contiguous, calendar order
    label_counts: np.ndarray  # (n_months, k) per-month per-label sums
    tweet_counts: np.ndarray  # (n_months,) tweets per month


def ngram_counts(corpus, n: int, top_k: int) -> NGramTable:
    """Sliding-window n-gram counts within each token sequence (windows
    never cross sequence boundaries), restricted to the top_k grams."""
    if n not in (2, 3):
        raise ValueError(f"n must be 2 or 3, got {n}")
    if top_k < 1:
        raise ValueError(f"top_k must be positive, got {top_k}")
    counter = Counter()
    for tokens in corpus:
        tokens = tuple(tokens)
        for i in range(len(tokens) - n + 1):
            counter[tokens[i:i + n]] += 1
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))[:top_k]
    counts = dict(ranked)
    return NGramTable(n=n, counts=counts, total=sum(counts.values()))


def _label_matrix(labels) -> np.ndarray:
    arr = np.asarray(labels, dtype=np.int64)
    if arr.ndim != 2 or arr.size == 0:
        raise EmptyInput("labels must be a non-empty list of equal-length label vectors")
    return arr


def cooccurrence(labels) -> CooccurrenceMatrix:
    """m[i][j] counts samples where labels i and j are both active;
    the diagonal holds each label's total occurrence count."""
    arr = _label_matrix(labels)
    return CooccurrenceMatrix(m=arr.T @ arr)


def label_count_distribution(labels) -> LabelCountDistribution:
    """Histogram of active-label counts per sample over buckets 0/1/2/3+."""
    arr = _label_matrix(labels)
    active = arr.sum(axis=1)
    n = arr.shape[0]
    counts = {
        "0": int(np.sum(active == 0)),
        "1": int(np.sum(active == 1)),
        "2": int(np.sum(active == 2)),
        "3+": int(np.sum(active >= 3)),
    }
    percentages = {k: 100.0 * v / n for k, v in counts.items()}
    return LabelCountDistribution(counts=counts, percentages=percentages)


def _parse_month(value, index: int):
    if isinstance(value, datetime.datetime):
        return value.year, value.month
    if isinstance(value, datetime.date):
        return value.year, value.month
    try:
        d = datetime.date.fromisoformat(str(value))
    except (ValueError, TypeError):
        raise UnparseableDate(f"record {index}: cannot parse date {value!r}") from None
    return d.year, d.month


def monthly_sentiments(predictions) -> MonthlySentimentSeries:
    """Per-month label sums and tweet counts from (date, LabelVector)
    pairs; months with no tweets inside the covered range appear as zero
    rows, so the series is always contiguous."""
    if len(predictions) == 0:
        raise EmptyInput("no predictions to aggregate")
    month_keys = []
    vectors = []
    for i, (when, labels) in enumerate(predictions):
        year, month = _parse_month(when, i)
        month_keys.append(year * 12 + (month - 1))
        vectors.append(np.asarray(labels, dtype=np.int64))
    arr = np.stack(vectors)
    lo, hi = min(month_keys), max(month_keys)
    n_months = hi - lo + 1
    label_counts = np.zeros((n_months, arr.shape[1]), dtype=np.int64)
    tweet_counts = np.zeros(n_months, dtype=np.int64)
    for key, row in zip(month_keys, arr):
        label_counts[key - lo] += row
        tweet_counts[key - lo] += 1
    months = tuple((key // 12, key % 12 + 1) for key in range(lo, hi + 1))
    return MonthlySentimentSeries(months=months, label_counts=label_counts,
                                  tweet_counts=tweet_counts)


def tweets_vs_cases(series: MonthlySentimentSeries, cases) -> list:
    """Join the monthly tweet counts with a (year, month) -> case-count
    map; returns (year, month, tweet_count, case_count) rows in calendar
    order. Every series month must be present in cases."""
    rows = []
    for (year, month), tweets in zip(series.months, series.tweet_counts):
        if (year, month) not in cases:
            raise MissingCaseData(f"no case count for {year:04d}-{month:02d}")
        rows.append((year, month, int(tweets), int(cases[(year, month)])))
    return rows
