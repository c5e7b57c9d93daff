"""Multi-label evaluation: Hamming loss, Jaccard, LRAP, F1, report assembly.

All metrics are dimension-agnostic over the label axis (the network uses
11 labels; tests exercise width 3) and run in float64. Conventions that
vary between libraries are pinned here: Jaccard scores 1.0 when both
label sets are empty, LRAP ranks ties by ascending label index and skips
samples with no true label, per-class F1 treats 0/0 as 0.
"""

import json
from dataclasses import dataclass

import numpy as np

from sentweet.errors import AllSamplesSkipped, EmptyInput, LengthMismatch
from sentweet.net.network import bce_loss

# Published training-set reference values for the SenWave corpus (mean of
# 10 runs). Non-binding context for reports: the corpus is access
# restricted and the training hyperparameters behind these numbers are
# unstated, so they are a comparison band, not a target.
REFERENCE_METRICS = {
    "lstm": {"bce": 0.255, "hamming": 0.157, "jaccard": 0.418,
             "lrap": 0.511, "f1_macro": 0.430, "f1_micro": 0.493},
    "bdlstm": {"bce": 0.281, "hamming": 0.163, "jaccard": 0.417,
               "lrap": 0.503, "f1_macro": 0.434, "f1_micro": 0.495},
}


def _as_binary_matrix(rows, name: str) -> np.ndarray:
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim != 2:
        raise LengthMismatch(f"{name} must be a list of equal-length label vectors")
    if arr.size == 0:
        raise EmptyInput(f"{name} is empty")
    return arr


def _paired(true, pred):
    t = _as_binary_matrix(true, "true")
    p = _as_binary_matrix(pred, "pred")
    if t.shape != p.shape:
        raise LengthMismatch(f"true shape {t.shape} != pred shape {p.shape}")
    return t, p


def hamming_loss(true, pred) -> float:
    """Fraction of label slots where prediction and truth disagree."""
    t, p = _paired(true, pred)
    return float(np.mean(t != p))


def jaccard_score(true, pred) -> float:
    """Mean per-sample intersection-over-union of the active label sets."""
    t, p = _paired(true, pred)
    inter = np.sum((t == 1) & (p == 1), axis=1)
    union = np.sum((t == 1) | (p == 1), axis=1)
    per_sample = np.where(union > 0, inter / np.maximum(union, 1), 1.0)
    return float(np.mean(per_sample))


def count_unlabeled(true) -> int:
    """Number of samples with no active label (the ones LRAP skips)."""
    t = _as_binary_matrix(true, "true")
    return int(np.sum(t.sum(axis=1) == 0))


def lrap(true, scores) -> float:
    """Label ranking average precision.

    Labels are ranked per sample by descending score, ties broken by
    ascending label index. Samples with zero true labels are skipped;
    count_unlabeled reports how many.
    """
    t = _as_binary_matrix(true, "true")
    s = _as_binary_matrix(scores, "scores")
    if t.shape != s.shape:
        raise LengthMismatch(f"true shape {t.shape} != scores shape {s.shape}")
    n, k = t.shape
    cols = np.arange(k)
    per_sample = []
    for row_t, row_s in zip(t, s):
        if not row_t.any():
            continue
        order = np.lexsort((cols, -row_s))  # rank 1 first
        true_at_rank = row_t[order]
        cum_true = np.cumsum(true_at_rank)
        ranks = np.arange(1, k + 1)
        hit = true_at_rank == 1
        per_sample.append(float(np.mean(cum_true[hit] / ranks[hit])))
    if not per_sample:
        raise AllSamplesSkipped("every sample has zero true labels")
    return float(np.mean(per_sample))


def f1_scores(true, pred):
    """(f1_macro, f1_micro); per-class and pooled F1 with 0/0 defined as 0."""
    t, p = _paired(true, pred)
    tp = np.sum((t == 1) & (p == 1), axis=0).astype(np.float64)
    fp = np.sum((t == 0) & (p == 1), axis=0).astype(np.float64)
    fn = np.sum((t == 1) & (p == 0), axis=0).astype(np.float64)
    denom = 2 * tp + fp + fn
    per_class = np.where(denom > 0, 2 * tp / np.maximum(denom, 1), 0.0)
    macro = float(np.mean(per_class))
    pooled = 2 * tp.sum() + fp.sum() + fn.sum()
    micro = float(2 * tp.sum() / pooled) if pooled > 0 else 0.0
    return macro, micro


REPORT_FIELDS = ("bce", "hamming", "jaccard", "lrap", "f1_macro", "f1_micro", "n_samples")


@dataclass
class EvaluationReport:
    bce: float
    hamming: float
    jaccard: float
    lrap: float
    f1_macro: float
    f1_micro: float
    n_samples: int

    def to_text(self) -> str:
        lines = []
        for name in REPORT_FIELDS:
            value = getattr(self, name)
            lines.append(f"{name}: {value}" if name == "n_samples"
                         else f"{name}: {value:.6f}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {name: getattr(self, name) for name in REPORT_FIELDS}
        return json.dumps(payload, indent=2) + "\n"


def evaluate(true, scores, threshold: float = 0.5) -> EvaluationReport:
    """Threshold the scores and assemble the full report.

    BCE is computed on the raw scores; everything else on the thresholded
    predictions (except LRAP, which ranks the raw scores).
    """
    t = _as_binary_matrix(true, "true")
    s = _as_binary_matrix(scores, "scores")
    if t.shape != s.shape:
        raise LengthMismatch(f"true shape {t.shape} != scores shape {s.shape}")
    pred = (s >= threshold).astype(np.float64)
    macro, micro = f1_scores(t, pred)
    return EvaluationReport(
        bce=bce_loss(s, t),
        hamming=hamming_loss(t, pred),
        jaccard=jaccard_score(t, pred),
        lrap=lrap(t, s),
        f1_macro=macro,
        f1_micro=micro,
        n_samples=t.shape[0],
    )
