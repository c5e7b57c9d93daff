"""Canonical sentiment label set and LabelVector helpers.

A LabelVector is an 11-slot binary numpy array in the canonical order
below. The order is a wire contract (CSV columns, model metadata, report
rows) and must never change.
"""

import numpy as np

from sentweet.errors import DataError

CANONICAL_LABELS = (
    "optimistic",
    "thankful",
    "empathetic",
    "pessimistic",
    "anxious",
    "sad",
    "annoyed",
    "denial",
    "official report",
    "surprise",
    "joking",
)

N_LABELS = len(CANONICAL_LABELS)

_LABEL_INDEX = {name: i for i, name in enumerate(CANONICAL_LABELS)}


def label_vector(active=()) -> np.ndarray:
    """Build a LabelVector with the named labels set to 1."""
    vec = np.zeros(N_LABELS, dtype=np.int64)
    for name in active:
        if name not in _LABEL_INDEX:
            raise DataError(f"unknown sentiment label: {name!r}")
        vec[_LABEL_INDEX[name]] = 1
    return vec


def validate_label_vector(vec, n_labels: int = N_LABELS) -> np.ndarray:
    arr = np.asarray(vec)
    if arr.shape != (n_labels,):
        raise DataError(f"label vector must have {n_labels} entries, got shape {arr.shape}")
    if not np.isin(arr, (0, 1)).all():
        raise DataError("label vector entries must be 0 or 1")
    return arr.astype(np.int64)


def active_names(vec) -> tuple[str, ...]:
    arr = validate_label_vector(vec)
    return tuple(name for name, bit in zip(CANONICAL_LABELS, arr) if bit)
