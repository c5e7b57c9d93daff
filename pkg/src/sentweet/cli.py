"""Command-line pipeline: normalize, train, eval, predict, analyze, report.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
All randomness flows through --seed, and every subcommand is
reproducible: identical inputs and seed give byte-identical outputs.
"""

import argparse
import csv
import sys
from pathlib import Path

import numpy as np

from sentweet import analytics, charts, corpus
from sentweet.embedding import encode, load_glove
from sentweet.errors import DataError, MissingColumn, MissingInput, NumericError, UsageError
from sentweet.labels import CANONICAL_LABELS, N_LABELS
from sentweet.metrics import REFERENCE_METRICS, evaluate
from sentweet.net import (
    TrainConfig,
    forward_batch,
    init_network,
    load_model,
    save_model,
    train,
)
from sentweet.net.serialize import load_header
from sentweet.normalize import default_rewrite_table, load_rewrite_table, normalize_tweet, tokenize

DEFAULT_SEED = 42  # arbitrary; every stochastic step keys off this one flag
DEFAULT_MAX_LEN = 60
_SCORE_BATCH = 256


def _rewrites(args):
    if getattr(args, "rewrites", None):
        return load_rewrite_table(args.rewrites)
    return default_rewrite_table()


def _infer_dim(path: str) -> int:
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.rstrip("\n").split(" ")
            if len(parts) < 2:
                break
            return len(parts) - 1
    raise DataError(f"cannot infer vector dimension from {path}")


def _load_table(args):
    dim = args.dim if args.dim else _infer_dim(args.glove)
    return load_glove(args.glove, dim)


def _encode_texts(texts, table, rewrite_table, max_len):
    """Normalize, tokenize, and encode; returns (sequences, kept indices).
    Texts that normalize to nothing are dropped with a warning."""
    seqs, kept = [], []
    for i, text in enumerate(texts):
        tokens = tokenize(normalize_tweet(text, rewrite_table))
        if not tokens:
            continue
        seqs.append(encode(tokens, table, max_len))
        kept.append(i)
    dropped = len(texts) - len(kept)
    if dropped:
        print(f"warning: dropped {dropped} tweet(s) that normalized to empty text",
              file=sys.stderr)
    return seqs, kept


def _score_sequences(seqs, table, params) -> np.ndarray:
    rows = []
    for start in range(0, len(seqs), _SCORE_BATCH):
        chunk = seqs[start:start + _SCORE_BATCH]
        lens = np.array([s.true_length for s in chunk], dtype=np.int64)
        width = int(lens.max())
        x = table.vectors[np.stack([s.indices[:width] for s in chunk])]
        scores, _, _ = forward_batch(x, lens, params)
        rows.append(scores)
    return np.vstack(rows)


# --- subcommands ---

def _cmd_normalize(args) -> int:
    table = _rewrites(args)
    with open(args.input, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    cleaned = [normalize_tweet(line, table) for line in lines]
    text = "\n".join(cleaned) + ("\n" if cleaned else "")
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_train(args) -> int:
    examples = corpus.load_labeled(args.data)
    if args.train_fraction is not None:
        train_part, holdout = corpus.split(examples, args.train_fraction, args.seed)
        if args.holdout_out:
            corpus.write_labeled_csv(args.holdout_out, holdout)
        examples = train_part
    table = _load_table(args)
    seqs, kept = _encode_texts([e.text for e in examples], table, _rewrites(args),
                               args.max_len)
    dataset = [(seq, np.asarray(examples[i].labels, dtype=np.float64))
               for seq, i in zip(seqs, kept)]
    params = init_network(args.arch, input_dim=table.dimension, hidden1=args.hidden1,
                          hidden2=args.hidden2, n_labels=N_LABELS,
                          dropout_rate=args.dropout, seed=args.seed)
    config = TrainConfig(epochs=args.epochs, batch_size=args.batch_size,
                         learning_rate=args.learning_rate, seed=args.seed,
                         clip_norm=args.clip_norm)
    trained, trace = train(dataset, table, params, config)
    blob = save_model(trained, extra={"max_len": args.max_len})
    Path(args.out).write_bytes(blob)
    losses_path = Path(args.out + ".losses.csv")
    with open(losses_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("epoch", "loss"))
        for epoch, loss in enumerate(trace, start=1):
            writer.writerow((epoch, f"{loss:.10f}"))
    print(f"trained {args.arch} on {len(dataset)} examples; model -> {args.out}, "
          f"losses -> {losses_path}")
    return 0


def _load_model_file(path):
    blob = Path(path).read_bytes()
    return load_model(blob), load_header(blob)


def _cmd_eval(args) -> int:
    params, header = _load_model_file(args.model)
    examples = corpus.load_labeled(args.data)
    table = _load_table(args)
    max_len = int(header.get("max_len", DEFAULT_MAX_LEN))
    seqs, kept = _encode_texts([e.text for e in examples], table, _rewrites(args), max_len)
    scores = _score_sequences(seqs, table, params)
    true = np.array([examples[i].labels for i in kept], dtype=np.float64)
    report = evaluate(true, scores, threshold=args.threshold)
    reference = REFERENCE_METRICS[params.arch]
    ref_lines = "".join(f"reference_{k}: {v:.3f}\n" for k, v in reference.items())
    text = (report.to_text()
            + f"\n# published {params.arch} training-set values on the restricted"
            " corpus (non-binding reference)\n" + ref_lines)
    sys.stdout.write(text)
    if args.out:
        Path(args.out + ".txt").write_text(text, encoding="utf-8")
        payload = report.to_json().rstrip("\n")
        wrapped = ('{\n  "architecture": "%s",\n  "report": %s,\n  "reference": %s\n}\n'
                   % (params.arch,
                      payload.replace("\n", "\n  "),
                      "{" + ", ".join(f'"{k}": {v}' for k, v in reference.items()) + "}"))
        Path(args.out + ".json").write_text(wrapped, encoding="utf-8")
    return 0


def _cmd_predict(args) -> int:
    params, header = _load_model_file(args.model)
    tweets = corpus.load_tweets(args.data)
    table = _load_table(args)
    max_len = int(header.get("max_len", DEFAULT_MAX_LEN))
    seqs, kept = _encode_texts([t.text for t in tweets], table, _rewrites(args), max_len)
    scores = _score_sequences(seqs, table, params)
    labels = (scores >= args.threshold).astype(int)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(("id", "date", "region")
                        + CANONICAL_LABELS
                        + tuple(f"score_{name}" for name in CANONICAL_LABELS))
        for row, i in enumerate(kept):
            tw = tweets[i]
            writer.writerow([tw.id, tw.date.isoformat(), tw.region,
                             *labels[row].tolist(),
                             *(f"{s:.6f}" for s in scores[row])])
    print(f"wrote predictions for {len(kept)} tweets -> {args.out}")
    return 0


# --- analyze helpers ---

def _read_header(path) -> list:
    with open(path, encoding="utf-8", newline="") as fh:
        try:
            return next(csv.reader(fh))
        except StopIteration:
            raise MissingColumn(f"{path} has no header") from None


def _load_prediction_rows(path):
    """Rows of (id, date, region, label vector) from a predictions CSV."""
    expected = ("id", "date", "region") + CANONICAL_LABELS
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(header[:len(expected)]) != expected:
            raise MissingColumn(
                f"{path} must start with id,date,region and the 11 canonical label columns")
        rows = []
        for row in reader:
            if not row:
                continue
            labels = [int(v) for v in row[3:3 + N_LABELS]]
            rows.append((row[0], row[1], row[2], labels))
    return rows


def _label_vectors_from(path):
    header = _read_header(path)
    if header and header[0].strip() == "text":
        return [list(e.labels) for e in corpus.load_labeled(path)]
    return [labels for _, _, _, labels in _load_prediction_rows(path)]


def _dated_labels_from(path):
    header = _read_header(path)
    if tuple(h.strip() for h in header) == corpus.TWEET_HEADER:
        return [(t.date, [0] * N_LABELS) for t in corpus.load_tweets(path)]
    return [(date, labels) for _, date, _, labels in _load_prediction_rows(path)]


def _month_name(year: int, month: int) -> str:
    return f"{year:04d}-{month:02d}"


def _write_csv(path, header, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _cmd_analyze(args) -> int:
    out_csv = args.out + ".csv"
    out_svg = args.out + ".svg"
    kind = args.what

    if kind == "ngrams":
        tweets = corpus.load_tweets(args.data)
        rewrite_table = _rewrites(args)
        streams = [tokenize(normalize_tweet(t.text, rewrite_table)) for t in tweets]
        table = analytics.ngram_counts(streams, n=args.n, top_k=args.top_k)
        rows = [(" ".join(gram), count) for gram, count in table.counts.items()]
        _write_csv(out_csv, ("gram", "count"), rows)
        svg = charts.bar_chart([g for g, _ in rows], [c for _, c in rows],
                               f"top {args.top_k} {args.n}-grams")
    elif kind == "cooccur":
        vectors = _label_vectors_from(args.data)
        matrix = analytics.cooccurrence(vectors).m
        _write_csv(out_csv, ("label",) + CANONICAL_LABELS,
                   [(name, *matrix[i].tolist()) for i, name in enumerate(CANONICAL_LABELS)])
        svg = charts.heatmap(CANONICAL_LABELS, matrix, "sentiment co-occurrence")
    elif kind == "labelcounts":
        vectors = _label_vectors_from(args.data)
        dist = analytics.label_count_distribution(vectors)
        _write_csv(out_csv, ("bucket", "count", "percent"),
                   [(b, dist.counts[b], f"{dist.percentages[b]:.6f}")
                    for b in analytics.BUCKETS])
        svg = charts.bar_chart(list(analytics.BUCKETS),
                               [dist.counts[b] for b in analytics.BUCKETS],
                               "tweets by number of active sentiments")
    elif kind == "monthly":
        pairs = _dated_labels_from(args.data)
        series = analytics.monthly_sentiments(pairs)
        _write_csv(out_csv, ("year", "month", "tweet_count") + CANONICAL_LABELS,
                   [(y, m, int(series.tweet_counts[i]), *series.label_counts[i].tolist())
                    for i, (y, m) in enumerate(series.months)])
        svg = charts.grouped_bar_chart(
            [_month_name(y, m) for y, m in series.months], CANONICAL_LABELS,
            series.label_counts, "monthly sentiment counts")
    elif kind == "cases":
        if not args.cases:
            raise UsageError("analyze cases requires --cases")
        pairs = _dated_labels_from(args.data)
        series = analytics.monthly_sentiments(pairs)
        joined = analytics.tweets_vs_cases(series, corpus.load_cases(args.cases))
        _write_csv(out_csv, ("year", "month", "tweets", "cases"), joined)
        svg = charts.grouped_bar_chart(
            [_month_name(y, m) for y, m, _, _ in joined], ["tweets", "cases"],
            [[t, c] for _, _, t, c in joined], "monthly tweets vs cases")
    else:  # pragma: no cover - argparse choices prevent this
        raise UsageError(f"unknown analysis {kind!r}")

    Path(out_svg).write_text(svg, encoding="utf-8")
    print(f"wrote {out_csv} and {out_svg}")
    return 0


def _require(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise MissingInput(f"input not found: {path}")
    return p


def _cmd_report(args) -> int:
    """Re-render SVG charts from previously written analytics CSVs."""
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rendered = []

    if args.cooccur:
        with open(_require(args.cooccur), encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        names = rows[0][1:]
        matrix = [[float(v) for v in row[1:]] for row in rows[1:]]
        svg = charts.heatmap(names, matrix, "sentiment co-occurrence")
        rendered.append(("cooccur.svg", svg))
    if args.labelcounts:
        with open(_require(args.labelcounts), encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        svg = charts.bar_chart([r[0] for r in rows[1:]], [float(r[1]) for r in rows[1:]],
                               "tweets by number of active sentiments")
        rendered.append(("labelcounts.svg", svg))
    if args.monthly:
        with open(_require(args.monthly), encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        names = rows[0][3:]
        groups = [_month_name(int(r[0]), int(r[1])) for r in rows[1:]]
        matrix = [[float(v) for v in r[3:]] for r in rows[1:]]
        svg = charts.grouped_bar_chart(groups, names, matrix, "monthly sentiment counts")
        rendered.append(("monthly.svg", svg))
    if args.cases:
        with open(_require(args.cases), encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
        groups = [_month_name(int(r[0]), int(r[1])) for r in rows[1:]]
        matrix = [[float(r[2]), float(r[3])] for r in rows[1:]]
        svg = charts.grouped_bar_chart(groups, ["tweets", "cases"], matrix,
                                       "monthly tweets vs cases")
        rendered.append(("cases.svg", svg))

    if not rendered:
        raise UsageError("report needs at least one of --cooccur/--labelcounts/--monthly/--cases")
    for name, svg in rendered:
        (out_dir / name).write_text(svg, encoding="utf-8")
    print(f"wrote {len(rendered)} chart(s) to {out_dir}")
    return 0


def _cmd_fixture(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    examples, tweets = corpus.make_fixture(args.seed, args.size)
    corpus.write_labeled_csv(out_dir / "labeled.csv", examples)
    corpus.write_tweets_csv(out_dir / "tweets.csv", tweets)
    (out_dir / "embedding.vec").write_text(corpus.fixture_embedding(dimension=args.dim or 8),
                                           encoding="utf-8")
    corpus.write_cases_csv(out_dir / "cases.csv", corpus.make_cases_fixture(args.seed))
    print(f"wrote labeled.csv, tweets.csv, embedding.vec, cases.csv to {out_dir}")
    return 0


# --- parser ---

def _add_glove_flags(p) -> None:
    p.add_argument("--glove", required=True, help="word-vector text file")
    p.add_argument("--dim", type=int, default=None,
                   help="vector dimension (default: inferred from the file)")
    p.add_argument("--rewrites", default=None, help="custom rewrite table TSV")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sentweet",
        description="Multi-label tweet sentiment pipeline: normalize, train, "
                    "evaluate, predict, analyze, report.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", help="normalize raw tweet text, one tweet per line")
    p.add_argument("--input", required=True)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.add_argument("--rewrites", default=None)
    p.set_defaults(func=_cmd_normalize)

    p = sub.add_parser("train", help="train a classifier on a labeled CSV")
    p.add_argument("--data", required=True, help="labeled CSV (text + 11 label columns)")
    _add_glove_flags(p)
    p.add_argument("--arch", choices=("lstm", "bdlstm"), default="lstm")
    p.add_argument("--out", required=True, help="model file to write")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--learning-rate", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--max-len", type=int, default=DEFAULT_MAX_LEN)
    p.add_argument("--hidden1", type=int, default=128)
    p.add_argument("--hidden2", type=int, default=64)
    p.add_argument("--dropout", type=float, default=0.65)
    p.add_argument("--clip-norm", type=float, default=None)
    p.add_argument("--train-fraction", type=float, default=None,
                   help="train on this seeded share of the data (e.g. 0.9)")
    p.add_argument("--holdout-out", default=None,
                   help="write the held-out rows to this labeled CSV")
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("eval", help="evaluate a model on a labeled CSV")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    _add_glove_flags(p)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", default=None, help="report stem; writes <out>.txt and <out>.json")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("predict", help="score a tweet CSV with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True, help="tweet CSV (id,date,region,text)")
    _add_glove_flags(p)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--out", required=True, help="predictions CSV to write")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("analyze", help="corpus/prediction analytics (CSV + SVG)")
    p.add_argument("what", choices=("ngrams", "cooccur", "labelcounts", "monthly", "cases"))
    p.add_argument("--data", required=True,
                   help="tweet CSV for ngrams/cases, labeled or predictions CSV otherwise")
    p.add_argument("--out", required=True, help="output stem; writes <out>.csv and <out>.svg")
    p.add_argument("--n", type=int, choices=(2, 3), default=2, help="gram size for ngrams")
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--cases", default=None, help="year,month,cases CSV for the cases analysis")
    p.add_argument("--rewrites", default=None)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("report", help="re-render SVG charts from analytics CSVs")
    p.add_argument("--cooccur", default=None)
    p.add_argument("--labelcounts", default=None)
    p.add_argument("--monthly", default=None)
    p.add_argument("--cases", default=None)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=_cmd_report)

    p = sub.add_parser("fixture", help="write a deterministic synthetic dataset")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--size", type=int, default=50)
    p.add_argument("--dim", type=int, default=8, help="fixture embedding dimension")
    p.set_defaults(func=_cmd_fixture)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
