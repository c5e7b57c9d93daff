"""Dataset ingestion, splitting, filtering, and synthetic fixtures.

The labeled CSV schema is `text` plus the 11 canonical label columns in
order; the tweet CSV schema is `id,date,region,text` with ISO dates.
The fixture generator stands in for the access-restricted hand-labelled
corpus: each label gets a sentinel token planted in the text, so a
competent model can overfit the fixture to near-zero loss.
"""

import csv
import datetime
import math
from dataclasses import dataclass

import numpy as np

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


@dataclass(frozen=True)
class Tweet:
    id: str
    date: datetime.date
    region: str
    text: str


@dataclass(frozen=True)
class LabeledExample:
    text: str
    labels: tuple  # N_LABELS ints, each 0 or 1


LABELED_HEADER = ("text",) + CANONICAL_LABELS
TWEET_HEADER = ("id", "date", "region", "text")

# One unambiguous lexical signal per label; "official report" is fused so
# it survives tokenization as a single word.
SENTINEL_TOKENS = (
    "optimistic", "thankful", "empathetic", "pessimistic", "anxious", "sad",
    "annoyed", "denial", "officialreport", "surprise", "joking",
)

_FILLER_WORDS = (
    "the", "and", "today", "virus", "mask", "stay", "home", "lockdown",
    "case", "vaccine", "news", "people", "city", "work", "school", "day",
    "week", "time", "feel", "really", "very", "much", "good", "bad", "new",
    "still", "just", "now", "here", "there", "always", "never", "maybe",
    "please", "thanks", "morning", "night", "family", "friends",
)

FIXTURE_VOCAB = SENTINEL_TOKENS + _FILLER_WORDS

FIXTURE_REGIONS = ("india", "maharashtra", "delhi")
FIXTURE_MONTHS = tuple((2020, m) for m in range(3, 10))  # March through September


def _with_rows(source, parse):
    """Run a row parser over a path or an open text stream."""
    if hasattr(source, "read"):
        return parse(csv.reader(source))
    with open(source, encoding="utf-8", newline="") as fh:
        return parse(csv.reader(fh))


def load_labeled(source):
    """Read a labeled CSV into LabeledExample rows.

    The header must be exactly `text` followed by the 11 canonical label
    names; label cells must be 0 or 1.
    """
    return _with_rows(source, _parse_labeled)


def _parse_labeled(reader):
    try:
        header = next(reader)
    except StopIteration:
        raise EmptyFile("labeled CSV has no header") from None
    for pos, expected in enumerate(LABELED_HEADER):
        if pos >= len(header) or header[pos].strip() != expected:
            raise MissingColumn(f"labeled CSV header must have {expected!r} at position {pos}")
    if len(header) != len(LABELED_HEADER):
        raise MissingColumn(
            f"labeled CSV header has {len(header)} columns, expected {len(LABELED_HEADER)}")
    examples = []
    for row in reader:
        if not row:
            continue
        if len(row) != len(LABELED_HEADER):
            raise ParseError(
                f"labeled CSV row {reader.line_num}: expected {len(LABELED_HEADER)} "
                f"fields, got {len(row)}")
        bits = []
        for name, cell in zip(CANONICAL_LABELS, row[1:]):
            value = cell.strip()
            if value not in ("0", "1"):
                raise NonBinaryLabel(
                    f"row {reader.line_num}, column {name!r}: value {cell!r} is not 0 or 1")
            bits.append(int(value))
        examples.append(LabeledExample(text=row[0], labels=tuple(bits)))
    if not examples:
        raise EmptyFile("labeled CSV has no data rows")
    return examples


def load_tweets(source):
    """Read a tweet CSV (id,date,region,text; ISO dates) preserving order."""
    return _with_rows(source, _parse_tweets)


def _parse_tweets(reader):
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("tweet CSV has no header") from None
    if tuple(cell.strip() for cell in header) != TWEET_HEADER:
        raise MissingColumn(f"tweet CSV header must be {','.join(TWEET_HEADER)}")
    tweets = []
    seen = set()
    for row in reader:
        if not row:
            continue
        if len(row) != 4:
            raise ParseError(f"tweet CSV row {reader.line_num}: expected 4 fields, got {len(row)}")
        tweet_id, raw_date, region, text = row
        if tweet_id in seen:
            raise DuplicateId(f"tweet id {tweet_id!r} appears more than once")
        seen.add(tweet_id)
        try:
            when = datetime.date.fromisoformat(raw_date.strip())
        except ValueError:
            raise BadDate(f"row {reader.line_num}: {raw_date!r} is not a valid "
                          "ISO date (YYYY-MM-DD)") from None
        tweets.append(Tweet(id=tweet_id, date=when, region=region, text=text))
    return tweets


def write_labeled_csv(path, examples) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(LABELED_HEADER)
        for ex in examples:
            writer.writerow([ex.text, *ex.labels])


def write_tweets_csv(path, tweets) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TWEET_HEADER)
        for tw in tweets:
            writer.writerow([tw.id, tw.date.isoformat(), tw.region, tw.text])


def load_cases(source) -> dict:
    """Read a `year,month,cases` CSV into a (year, month) -> count map."""
    return _with_rows(source, _parse_cases)


def _parse_cases(reader):
    try:
        header = next(reader)
    except StopIteration:
        raise MissingColumn("case CSV has no header") from None
    if tuple(cell.strip() for cell in header) != ("year", "month", "cases"):
        raise MissingColumn("case CSV header must be year,month,cases")
    cases = {}
    for row in reader:
        if not row:
            continue
        try:
            year, month, count = int(row[0]), int(row[1]), int(row[2])
        except (ValueError, IndexError):
            raise ParseError(f"case CSV row {reader.line_num}: expected three integers") from None
        if not 1 <= month <= 12:
            raise BadDate(f"case CSV row {reader.line_num}: month {month} out of range")
        cases[(year, month)] = count
    return cases


def write_cases_csv(path, cases) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("year", "month", "cases"))
        for (year, month) in sorted(cases):
            writer.writerow([year, month, cases[(year, month)]])


def split(examples, train_fraction: float, seed: int):
    """Seeded shuffle, then prefix split with |train| = floor(n * fraction).

    Returns (train, test); together they are an exact partition of the
    input.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = len(examples)
    if n < 2:
        raise TooFewExamples(f"need at least 2 examples to split, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    cut = math.floor(n * train_fraction)
    shuffled = [examples[i] for i in order]
    return shuffled[:cut], shuffled[cut:]


def filter_tweets(tweets, region=None, month_range=None):
    """Keep tweets matching an exact region tag and/or an inclusive
    ((year, month), (year, month)) range."""
    if month_range is not None:
        (y1, m1), (y2, m2) = month_range
        lo, hi = y1 * 12 + m1, y2 * 12 + m2
        if lo > hi:
            raise ValueError(f"month range {month_range} runs backwards")
    out = []
    for tw in tweets:
        if region is not None and tw.region != region:
            continue
        if month_range is not None:
            key = tw.date.year * 12 + tw.date.month
            if not lo <= key <= hi:
                continue
        out.append(tw)
    return out


def _decorate(rng: np.random.Generator, words: list) -> str:
    """Optionally dress a fixture tweet with raw-text artifacts that the
    normalizer strips (mention, hashtag, URL, emoji, shouting case)."""
    roll = rng.random()
    if roll < 0.12:
        words = ["@friend" + str(int(rng.integers(100)))] + words
    elif roll < 0.24:
        k = int(rng.integers(len(words)))
        words[k] = "#" + words[k]
    elif roll < 0.36:
        words = words + ["https://t.co/" + "".join(chr(97 + c) for c in rng.integers(0, 26, 6))]
    elif roll < 0.44:
        words = words + ["\U0001F602"]
    elif roll < 0.5:
        words[0] = words[0].upper()
    return " ".join(words)


def _fixture_text(rng: np.random.Generator, sentinels) -> list:
    n_fill = int(rng.integers(3, 8))
    words = [str(w) for w in rng.choice(_FILLER_WORDS, size=n_fill)]
    for tok in sentinels:
        words.insert(int(rng.integers(len(words) + 1)), tok)
    return words


def make_fixture(seed: int, size: int):
    """Deterministic synthetic corpus: (labeled examples, regional tweets).

    Each labeled text carries the sentinel token of every active label.
    For size >= 22 a patch-up pass guarantees every label appears at
    least 3 times; active-label counts stay in 1..3. The tweet fixture
    spans March through September 2020 across three region tags.
    """
    if size < 10:
        raise ValueError(f"fixture size must be at least 10, got {size}")
    rng = np.random.default_rng(seed)

    label_rows = np.zeros((size, N_LABELS), dtype=np.int64)
    for i in range(size):
        k = int(rng.choice([1, 2, 3], p=[0.6, 0.3, 0.1]))
        active = rng.choice(N_LABELS, size=k, replace=False)
        label_rows[i, active] = 1
    # floor patch-up: lift rare labels to 3 occurrences where capacity allows
    for label in range(N_LABELS):
        deficit = 3 - int(label_rows[:, label].sum())
        if deficit <= 0:
            continue
        for i in range(size):
            if deficit == 0:
                break
            if label_rows[i, label] == 0 and label_rows[i].sum() < 3:
                label_rows[i, label] = 1
                deficit -= 1

    examples = []
    for i in range(size):
        active = [SENTINEL_TOKENS[j] for j in range(N_LABELS) if label_rows[i, j]]
        words = _fixture_text(rng, active)
        examples.append(LabeledExample(text=_decorate(rng, words),
                                       labels=tuple(int(v) for v in label_rows[i])))

    tweets = []
    for i in range(size):
        year, month = FIXTURE_MONTHS[i % len(FIXTURE_MONTHS)] if i < len(FIXTURE_MONTHS) \
            else FIXTURE_MONTHS[int(rng.integers(len(FIXTURE_MONTHS)))]
        day = int(rng.integers(1, 29))
        n_sent = int(rng.integers(0, 3))
        sentinels = [str(s) for s in rng.choice(SENTINEL_TOKENS, size=n_sent)]
        words = _fixture_text(rng, sentinels)
        tweets.append(Tweet(
            id=f"t{i:05d}",
            date=datetime.date(year, month, day),
            region=FIXTURE_REGIONS[i % len(FIXTURE_REGIONS)],
            text=_decorate(rng, words),
        ))
    return examples, tweets


def make_cases_fixture(seed: int) -> dict:
    """Deterministic case counts for the fixture months."""
    rng = np.random.default_rng(seed)
    cases = {}
    level = 10_000
    for (year, month) in FIXTURE_MONTHS:
        level = int(level * (1.2 + 0.4 * rng.random()))
        cases[(year, month)] = level
    return cases


def fixture_embedding(dimension: int = 8, seed: int = 0) -> str:
    """Text of a small word-vector file covering FIXTURE_VOCAB."""
    rng = np.random.default_rng(seed)
    lines = []
    for word in FIXTURE_VOCAB:
        values = rng.normal(size=dimension)
        lines.append(word + " " + " ".join(f"{v:.6f}" for v in values))
    return "\n".join(lines) + "\n"
