"""Multi-label tweet sentiment toolkit: normalization, embeddings,
LSTM/BD-LSTM classifiers, evaluation metrics, and corpus analytics."""

__version__ = "0.1.0"

from sentweet.labels import CANONICAL_LABELS, N_LABELS

__all__ = ["CANONICAL_LABELS", "N_LABELS", "__version__"]
