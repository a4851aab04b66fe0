import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmivec import (Vocabulary, build_sampler, count_corpus,
                    positional_sampler, unigram_sampler)


def test_hand_example_one_sixteen():
    # counts {a:1, b:16} at alpha 3/4: weights 1 and 8 -> P = 1/9, 8/9
    table = build_sampler(np.array([1, 16]), alpha=0.75)
    assert table.probabilities() == pytest.approx([1 / 9, 8 / 9], rel=1e-12)


def test_uniform_counts_give_uniform_distribution():
    for alpha in (0.3, 0.75, 1.0):
        table = build_sampler(np.full(7, 13), alpha=alpha)
        assert table.probabilities() == pytest.approx([1 / 7] * 7, rel=1e-12)


def test_degenerate_distribution_always_first():
    table = build_sampler(np.array([5.0, 0.0]), alpha=0.75)
    rng = np.random.default_rng(0)
    assert all(table.sample(rng) == 0 for _ in range(500))


def test_zero_count_context_never_sampled():
    table = build_sampler(np.array([3, 0, 2, 0, 5]), alpha=0.75)
    draws = table.sample_array(np.random.default_rng(1), 20_000)
    assert set(np.unique(draws)) <= {0, 2, 4}


def test_default_alpha_is_three_quarters():
    assert build_sampler(np.array([1, 2])).alpha == 0.75


def test_cumulative_table_invariants():
    table = build_sampler(np.array([4, 0, 1, 7]), alpha=0.75)
    assert table.cumulative[-1] == 1.0
    positive = table.weights > 0
    diffs = np.diff(np.concatenate(([0.0], table.cumulative)))
    assert np.all(diffs[positive] > 0)
    assert np.all(diffs[~positive] == 0)


def test_all_zero_counts_rejected():
    with pytest.raises(ValueError):
        build_sampler(np.zeros(4))
    with pytest.raises(ValueError):
        build_sampler(np.array([]))


def test_alpha_out_of_range_rejected():
    for alpha in (0.0, 1.5, -0.2):
        with pytest.raises(ValueError):
            build_sampler(np.array([1, 2]), alpha=alpha)


def test_sample_array_consumes_stream_like_scalar_draws():
    table = build_sampler(np.array([5, 1, 3]), alpha=0.75)
    batch = table.sample_array(np.random.default_rng(77), 64)
    rng = np.random.default_rng(77)
    singles = [table.sample(rng) for _ in range(64)]
    assert batch.tolist() == singles


def test_empirical_distribution_approaches_target():
    rng = np.random.default_rng(123)
    counts = (1.0 / np.arange(1, 51)) * 1000
    table = build_sampler(counts, alpha=0.75)
    draws = table.sample_array(rng, 200_000)
    empirical = np.bincount(draws, minlength=50) / len(draws)
    assert np.abs(empirical - table.probabilities()).sum() < 0.02


def test_unigram_sampler_uses_vocab_frequencies():
    vocab = Vocabulary(words=["a", "b"], freq=np.array([16, 1]),
                       total_tokens=17)
    table = unigram_sampler(vocab, alpha=0.75)
    assert table.probabilities() == pytest.approx([8 / 9, 1 / 9], rel=1e-12)


def test_positional_weights_fold_back_to_plain_weights():
    # Win-summing the positional marginals before exponentiation gives the
    # same sampler weights as building from the plain column marginals.
    rng = np.random.default_rng(4)
    sentences = [rng.integers(0, 6, size=9).tolist() for _ in range(40)]
    win = 2
    plain = count_corpus(sentences, 6, win, positional=False)
    pos = count_corpus(sentences, 6, win, positional=True)
    folded = pos.col_marginals.reshape(6, 2 * win).sum(axis=1)
    t_plain = positional_sampler(plain.col_marginals, alpha=0.75)
    t_folded = positional_sampler(folded, alpha=0.75)
    assert np.array_equal(t_plain.weights, t_folded.weights)


@settings(max_examples=50, deadline=None)
@given(counts=st.lists(st.integers(min_value=0, max_value=1000), min_size=1,
                       max_size=40).filter(lambda c: any(c)),
       alpha=st.sampled_from([0.25, 0.75, 1.0]))
def test_probabilities_sum_to_one_and_match_counts(counts, alpha):
    table = build_sampler(np.asarray(counts, dtype=float), alpha=alpha)
    probs = table.probabilities()
    assert probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert np.all((probs == 0) == (np.asarray(counts) == 0))
    expected = np.asarray(counts, dtype=float) ** alpha
    expected /= expected.sum()
    assert probs == pytest.approx(expected, rel=1e-9)
