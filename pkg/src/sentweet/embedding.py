"""GloVe embedding table loading and sequence encoding.

The table reserves row 0 for padding (all zeros) and row 1 for unknown
words (arithmetic mean of all loaded vectors); file words start at row 2
in insertion order. Vectors are float64 and frozen: nothing in training
ever updates them.
"""

import io
from dataclasses import dataclass

import numpy as np

from sentweet.errors import DimensionMismatch, DuplicateWord, IndexOutOfRange, ParseError

PAD_INDEX = 0
UNK_INDEX = 1


@dataclass
class EmbeddingTable:
    dimension: int
    vocabulary: dict[str, int]  # word -> row index (>= 2)
    vectors: np.ndarray         # (len(vocabulary) + 2, dimension)

    @property
    def unk_vector(self) -> np.ndarray:
        return self.vectors[UNK_INDEX]

    def row(self, word: str) -> int:
        return self.vocabulary.get(word, UNK_INDEX)


@dataclass
class EncodedSequence:
    indices: np.ndarray  # int64, length == max_len, padded with PAD_INDEX
    true_length: int

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)


def load_glove(source, expected_dim: int) -> EmbeddingTable:
    """Parse a GloVe text file: one `word v1 ... vD` line per word.

    Raises DimensionMismatch (wrong value count), ParseError (non-numeric
    value), or DuplicateWord; line numbers are 1-based.
    """
    if isinstance(source, (str, bytes)) and not isinstance(source, bytes):
        fh = open(source, "rb")
        close = True
    elif isinstance(source, bytes):
        fh = io.BytesIO(source)
        close = True
    else:
        fh = source
        close = False
    try:
        vocab: dict[str, int] = {}
        rows: list[np.ndarray] = []
        for line_no, raw in enumerate(fh, start=1):
            if isinstance(raw, bytes):
                raw = raw.decode("utf-8")
            parts = raw.rstrip("\n").split(" ")
            if len(parts) <= 1 and not parts[0]:
                continue
            word = parts[0]
            values = parts[1:]
            if len(values) != expected_dim:
                raise DimensionMismatch(
                    f"line {line_no}: expected {expected_dim} values, found {len(values)}"
                )
            try:
                vec = np.array([float(v) for v in values], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(f"line {line_no}: {exc}") from exc
            if not np.isfinite(vec).all():
                raise ParseError(f"line {line_no}: non-finite value")
            if word in vocab:
                raise DuplicateWord(word)
            vocab[word] = len(rows) + 2
            rows.append(vec)
    finally:
        if close:
            fh.close()

    vectors = np.zeros((len(rows) + 2, expected_dim), dtype=np.float64)
    if rows:
        stacked = np.stack(rows)
        vectors[2:] = stacked
        vectors[UNK_INDEX] = stacked.mean(axis=0)
    return EmbeddingTable(dimension=expected_dim, vocabulary=vocab, vectors=vectors)


def encode(tokens, table: EmbeddingTable, max_len: int) -> EncodedSequence:
    """Map tokens to row indices, truncating at the tail beyond max_len."""
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    indices = np.full(max_len, PAD_INDEX, dtype=np.int64)
    kept = min(len(tokens), max_len)
    for i in range(kept):
        indices[i] = table.row(tokens[i])
    return EncodedSequence(indices=indices, true_length=kept)


def embed(seq: EncodedSequence, table: EmbeddingTable) -> np.ndarray:
    """Gather the (max_len x dimension) embedding matrix for a sequence."""
    indices = seq.indices
    if indices.min(initial=0) < 0 or indices.max(initial=0) >= table.vectors.shape[0]:
        raise IndexOutOfRange(
            f"sequence index outside table rows [0, {table.vectors.shape[0]})"
        )
    return table.vectors[indices]
