import math

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from pmivec import (CoocStats, IntegrityError, SmoothingConfig, count_corpus,
                    ppmi_from_counts, ppmi_matrix, ppmi_value)


def stats_from_dense(dense, win=1, positional=False):
    return CoocStats(sp.csr_matrix(np.asarray(dense, dtype=np.int64)),
                     win=win, positional=positional)


def test_zero_joint_count_gives_zero():
    stats = stats_from_dense([[0, 4], [4, 8]])
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, 1.0)
    assert ppmi_value(stats, smoothing, 0, 0) == 0.0


def test_hand_example_log_two():
    # M(w,c)=2, M(w,*)=4, M(*,c)=4, M(*,*)=16 -> log 2
    stats = stats_from_dense([[2, 2], [2, 10]])
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, 1.0)
    assert ppmi_value(stats, smoothing, 0, 0) == pytest.approx(math.log(2),
                                                               rel=1e-12)


def test_uniform_cooccurrence_is_independent():
    stats = stats_from_dense(np.full((6, 6), 3))
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, 1.0)
    for w in range(6):
        for c in range(6):
            assert ppmi_value(stats, smoothing, w, c) == 0.0


def test_alpha_one_reduces_to_unsmoothed():
    rng = np.random.default_rng(1)
    dense = rng.integers(0, 6, size=(8, 8))
    stats = stats_from_dense(dense)
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, 1.0)
    total = stats.grand_total
    for w in range(8):
        for c in range(8):
            joint = dense[w, c]
            if joint == 0:
                expected = 0.0
            else:
                expected = max(0.0, math.log(
                    joint * total
                    / (dense[w].sum() * dense[:, c].sum())))
            assert ppmi_value(stats, smoothing, w, c) == pytest.approx(
                expected, rel=1e-12, abs=1e-15)


def test_smoothed_value_hand_computed():
    dense = np.array([[1, 3], [3, 9]])
    stats = stats_from_dense(dense)
    alpha = 0.75
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, alpha)
    cols = dense.sum(axis=0).astype(float)
    q = cols ** alpha / (cols ** alpha).sum()
    expected = max(0.0, math.log((1 / 16) / ((4 / 16) * q[0])))
    assert ppmi_value(stats, smoothing, 0, 0) == pytest.approx(expected,
                                                               rel=1e-12)


def test_monotone_in_joint_count():
    values = [float(ppmi_from_counts(np.array([j], dtype=float),
                                     np.array([50.0]), np.array([40.0]),
                                     200.0)[0])
              for j in range(0, 30)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_inconsistent_counts_raise_integrity_error():
    with pytest.raises(IntegrityError):
        ppmi_from_counts(np.array([2.0]), np.array([0.0]),
                         np.array([3.0]), 10.0)


def test_smoothing_rejects_bad_alpha():
    for alpha in (0.0, -0.5, 1.2):
        with pytest.raises(ValueError):
            SmoothingConfig.from_marginals(np.array([1, 2]), alpha)


def test_out_of_range_ids_raise():
    stats = stats_from_dense([[1, 1], [1, 1]])
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, 1.0)
    with pytest.raises(IndexError):
        ppmi_value(stats, smoothing, 2, 0)
    with pytest.raises(IndexError):
        ppmi_value(stats, smoothing, 0, 5)


def _brute_force_ppmi(sentences, num_words, win, positional, alpha):
    """Fully independent dense computation straight from the window rule."""
    size = 2 * win * num_words if positional else num_words
    dense = np.zeros((num_words, size))
    for sent in sentences:
        for p in range(len(sent)):
            for q in range(max(0, p - win), min(len(sent), p + win + 1)):
                if q == p:
                    continue
                o = q - p
                if positional:
                    slot = o + win if o < 0 else o + win - 1
                    c = sent[q] * 2 * win + slot
                else:
                    c = sent[q]
                dense[sent[p], c] += 1
    total = dense.sum()
    rows = dense.sum(axis=1)
    cols = dense.sum(axis=0)
    qdist = cols ** alpha / (cols ** alpha).sum()
    out = np.zeros_like(dense)
    for w in range(num_words):
        for c in range(dense.shape[1]):
            if dense[w, c] > 0:
                pmi = math.log((dense[w, c] / total) / ((rows[w] / total) * qdist[c]))
                out[w, c] = max(0.0, pmi)
    return out


@pytest.mark.parametrize("positional,alpha", [(False, 1.0), (True, 0.75)])
def test_matches_brute_force_on_random_corpus(positional, alpha):
    rng = np.random.default_rng(33)
    num_words, win = 10, 2
    sentences = [rng.integers(0, num_words, size=rng.integers(2, 12)).tolist()
                 for _ in range(50)]
    stats = count_corpus(sentences, num_words, win, positional)
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, alpha)
    oracle = _brute_force_ppmi(sentences, num_words, win, positional, alpha)
    mat = ppmi_matrix(stats, smoothing)
    assert np.allclose(mat, oracle, rtol=1e-12, atol=1e-14)
    for w in range(num_words):
        for c in range(stats.num_contexts):
            assert ppmi_value(stats, smoothing, w, c) == pytest.approx(
                oracle[w, c], rel=1e-12, abs=1e-14)


def test_ppmi_matrix_guard():
    stats = stats_from_dense(np.ones((4, 4), dtype=int))
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, 1.0)
    with pytest.raises(ValueError):
        ppmi_matrix(stats, smoothing, max_cells=8)


@settings(max_examples=60, deadline=None)
@given(joint=st.integers(min_value=0, max_value=50),
       extra_row=st.integers(min_value=0, max_value=50),
       extra_col=st.integers(min_value=0, max_value=50),
       alpha=st.sampled_from([0.5, 0.75, 1.0]))
def test_value_is_never_negative(joint, extra_row, extra_col, alpha):
    row = joint + extra_row
    col = joint + extra_col
    if joint == 0 and (row == 0 or col == 0):
        return
    smoothed_col = float(col) ** alpha if col else 0.0
    if joint > 0 and (row == 0 or smoothed_col == 0):
        return
    total_smoothed = smoothed_col + 10.0
    value = ppmi_from_counts(np.array([float(joint)]), np.array([float(row)]),
                             np.array([smoothed_col]), total_smoothed)
    assert value[0] >= 0.0
