import json
import math
import pathlib

import numpy as np
import numpy.testing as npt
import pytest

from sentweet.errors import AllSamplesSkipped, EmptyInput, LengthMismatch
from sentweet.metrics import (
    REFERENCE_METRICS,
    REPORT_FIELDS,
    count_unlabeled,
    evaluate,
    f1_scores,
    hamming_loss,
    jaccard_score,
    lrap,
)

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def _one_hot(width, ones):
    row = [0.0] * width
    for k in ones:
        row[k] = 1.0
    return row


# --- hamming ---

def test_hamming_two_of_eleven():
    true = [_one_hot(11, [0, 4])]
    pred = [_one_hot(11, [0, 5])]
    npt.assert_allclose(hamming_loss(true, pred), 2 / 11, rtol=1e-15)


def test_hamming_bounds_and_complement():
    rng = np.random.default_rng(0)
    t = rng.integers(0, 2, size=(20, 11)).astype(float)
    p = rng.integers(0, 2, size=(20, 11)).astype(float)
    h = hamming_loss(t, p)
    assert 0.0 <= h <= 1.0
    npt.assert_allclose(hamming_loss(t, 1.0 - p), 1.0 - h, rtol=1e-12)
    assert hamming_loss(t, t) == 0.0
    assert hamming_loss(t, 1.0 - t) == 1.0


# --- jaccard ---

def test_jaccard_partial_overlap():
    true = [_one_hot(11, [0, 4])]
    pred = [_one_hot(11, [0, 5])]
    npt.assert_allclose(jaccard_score(true, pred), 1 / 3, rtol=1e-15)


def test_jaccard_empty_set_conventions():
    assert jaccard_score([[0, 0, 0]], [[0, 0, 0]]) == 1.0
    assert jaccard_score([[0, 0, 0]], [[1, 0, 0]]) == 0.0
    assert jaccard_score([[0, 1, 0]], [[0, 0, 0]]) == 0.0


def test_jaccard_perfect_match_is_one():
    rng = np.random.default_rng(1)
    t = rng.integers(0, 2, size=(15, 11)).astype(float)
    assert jaccard_score(t, t) == 1.0


# --- lrap ---

def test_lrap_single_true_label_top_ranked():
    true = [_one_hot(4, [2])]
    scores = [[0.1, 0.2, 0.9, 0.3]]
    assert lrap(true, scores) == 1.0


def test_lrap_single_true_label_second_ranked():
    true = [_one_hot(4, [2])]
    scores = [[0.1, 0.95, 0.9, 0.3]]
    npt.assert_allclose(lrap(true, scores), 0.5, rtol=1e-15)


def test_lrap_all_true_is_one_regardless_of_scores():
    true = [[1, 1, 1, 1]]
    scores = [[0.9, 0.1, 0.5, 0.3]]
    assert lrap(true, scores) == 1.0


def test_lrap_ties_resolved_by_label_index():
    # all scores equal: ranks follow label order, so true {0} is rank 1
    # and true {3} is rank 4
    assert lrap([_one_hot(4, [0])], [[0.5] * 4]) == 1.0
    npt.assert_allclose(lrap([_one_hot(4, [3])], [[0.5] * 4]), 0.25, rtol=1e-15)


def test_lrap_skips_unlabeled_samples():
    true = [_one_hot(3, [0]), _one_hot(3, [])]
    scores = [[0.9, 0.1, 0.2], [0.3, 0.4, 0.5]]
    assert lrap(true, scores) == 1.0
    assert count_unlabeled(true) == 1


def test_lrap_all_samples_skipped_raises():
    with pytest.raises(AllSamplesSkipped):
        lrap([[0, 0], [0, 0]], [[0.1, 0.2], [0.3, 0.4]])


def test_lrap_bounds():
    rng = np.random.default_rng(2)
    t = rng.integers(0, 2, size=(30, 11)).astype(float)
    t[0, :] = 1.0  # keep at least one labeled sample
    s = rng.random(size=(30, 11))
    v = lrap(t, s)
    assert 0.0 < v <= 1.0


# --- f1 ---

def test_f1_worked_example():
    # class 0: tp=1 fp=0 fn=0 -> 1; class 1: tp=1 fp=1 fn=0 -> 2/3
    true = [[1, 0], [0, 1], [0, 1]]
    pred = [[1, 0], [1, 1], [0, 1]]
    macro, micro = f1_scores(true, pred)
    npt.assert_allclose(macro, (1 + 2 / 3) / 2, rtol=1e-15)
    npt.assert_allclose(micro, 2 * 3 / (2 * 3 + 1 + 0), rtol=1e-15)


def test_f1_absent_class_counts_zero():
    true = [[1, 0], [1, 0]]
    pred = [[1, 0], [1, 0]]
    macro, micro = f1_scores(true, pred)
    npt.assert_allclose(macro, 0.5, rtol=1e-15)  # class 1 never occurs: 0/0 -> 0
    assert micro == 1.0


def test_f1_all_zero_predictions():
    macro, micro = f1_scores([[1, 1]], [[0, 0]])
    assert macro == 0.0
    assert micro == 0.0


# --- shared properties ---

def test_sample_order_invariance():
    rng = np.random.default_rng(3)
    t = rng.integers(0, 2, size=(25, 11)).astype(float)
    t[:, 0] = 1.0
    s = rng.random(size=(25, 11))
    p = (s >= 0.5).astype(float)
    perm = rng.permutation(25)
    npt.assert_allclose(hamming_loss(t, p), hamming_loss(t[perm], p[perm]), rtol=1e-12)
    npt.assert_allclose(jaccard_score(t, p), jaccard_score(t[perm], p[perm]), rtol=1e-12)
    npt.assert_allclose(lrap(t, s), lrap(t[perm], s[perm]), rtol=1e-12)
    npt.assert_allclose(f1_scores(t, p), f1_scores(t[perm], p[perm]), rtol=1e-12)


def test_label_permutation_invariance():
    rng = np.random.default_rng(4)
    t = rng.integers(0, 2, size=(25, 11)).astype(float)
    t[:, 0] = 1.0
    s = rng.random(size=(25, 11))
    p = (s >= 0.5).astype(float)
    perm = rng.permutation(11)
    npt.assert_allclose(hamming_loss(t, p), hamming_loss(t[:, perm], p[:, perm]), rtol=1e-12)
    npt.assert_allclose(jaccard_score(t, p), jaccard_score(t[:, perm], p[:, perm]), rtol=1e-12)
    macro, micro = f1_scores(t, p)
    macro2, micro2 = f1_scores(t[:, perm], p[:, perm])
    npt.assert_allclose((macro, micro), (macro2, micro2), rtol=1e-12)
    # lrap is excluded: its tie-break depends on label order by design


def test_shape_validation():
    with pytest.raises(LengthMismatch):
        hamming_loss([[1, 0]], [[1, 0, 1]])
    with pytest.raises(LengthMismatch):
        lrap([[1, 0]], [[0.5, 0.5, 0.5]])
    with pytest.raises(LengthMismatch):
        evaluate([[1, 0]], [[0.5]])
    with pytest.raises(EmptyInput):
        hamming_loss(np.empty((0, 11)), np.empty((0, 11)))
    with pytest.raises(LengthMismatch):
        jaccard_score([1, 0, 1], [1, 1, 0])  # 1-D input is ambiguous


# --- evaluate ---

def test_evaluate_perfect_predictions():
    rng = np.random.default_rng(5)
    t = rng.integers(0, 2, size=(10, 11)).astype(float)
    t[:, 2] = 1.0
    report = evaluate(t, t)
    assert report.hamming == 0.0
    assert report.jaccard == 1.0
    assert report.lrap == 1.0
    assert report.f1_micro == 1.0
    assert report.bce <= 1.2e-7
    assert report.n_samples == 10


def test_evaluate_uniform_scores():
    rng = np.random.default_rng(6)
    t = rng.integers(0, 2, size=(12, 11)).astype(float)
    t[:, 0] = 1.0
    report = evaluate(t, np.full((12, 11), 0.5))
    # 0.5 thresholds to all-ones, so hamming is the fraction of zeros
    npt.assert_allclose(report.hamming, 1.0 - t.mean(), rtol=1e-12)
    npt.assert_allclose(report.bce, math.log(2), rtol=1e-12)


def test_evaluate_matches_frozen_report():
    payload = json.loads((FIXTURES / "golden_report.json").read_text())
    report = evaluate(payload["true"], payload["scores"],
                      threshold=payload["threshold"])
    for name, want in payload["expected"].items():
        got = getattr(report, name)
        assert got == pytest.approx(want, abs=1e-9), name


def test_report_text_and_json_round_trip():
    t = [[1, 0, 1], [0, 1, 0]]
    s = [[0.9, 0.2, 0.8], [0.1, 0.7, 0.3]]
    report = evaluate(t, s)
    text = report.to_text()
    for name in REPORT_FIELDS:
        assert f"{name}: " in text
    assert text.endswith("\n")
    parsed = json.loads(report.to_json())
    assert set(parsed) == set(REPORT_FIELDS)
    assert parsed["n_samples"] == 2
    npt.assert_allclose(parsed["bce"], report.bce, rtol=1e-15)


def test_reference_bands_present():
    for arch in ("lstm", "bdlstm"):
        table = REFERENCE_METRICS[arch]
        assert set(table) == {"bce", "hamming", "jaccard", "lrap",
                              "f1_macro", "f1_micro"}
        assert all(0.0 < v < 1.0 for v in table.values())
