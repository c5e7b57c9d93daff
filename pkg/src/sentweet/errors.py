"""Exception hierarchy shared across the pipeline.

Two bases matter to the CLI: DataError maps to exit code 2, NumericError
to exit code 3. Everything else is a plain SentweetError.
"""


class SentweetError(Exception):
    pass


class DataError(SentweetError):
    """Malformed or inconsistent input data."""


class NumericError(SentweetError):
    """Numerical failure during training or evaluation."""


# --- normalizer ---

class RewriteTableError(DataError):
    pass


# --- embedding ---

class DimensionMismatch(DataError):
    pass


class ParseError(DataError):
    pass


class DuplicateWord(DataError):
    pass


class IndexOutOfRange(DataError):
    pass


# --- recurrent net ---

class EmptySequence(DataError):
    pass


class StaleCache(SentweetError):
    pass


class EmptyDataset(DataError):
    pass


class NonFiniteLoss(NumericError):
    pass


class FormatVersionMismatch(DataError):
    pass


class CorruptPayload(DataError):
    pass


# --- metrics ---

class LengthMismatch(DataError):
    pass


class EmptyInput(DataError):
    pass


class AllSamplesSkipped(DataError):
    pass


# --- corpus ---

class MissingColumn(DataError):
    pass


class NonBinaryLabel(DataError):
    pass


class EmptyFile(DataError):
    pass


class BadDate(DataError):
    pass


class DuplicateId(DataError):
    pass


class TooFewExamples(DataError):
    pass


# --- analytics ---

class UnparseableDate(DataError):
    pass


class MissingCaseData(DataError):
    pass


# --- cli ---

class MissingInput(DataError):
    pass


class UsageError(SentweetError):
    pass
