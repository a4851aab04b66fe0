import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pmivec import (EmptyVocabularyError, ParseError, TrainConfig, Vocabulary,
                    build_vocab, encode_corpus, subsample_stream)


def test_build_vocab_counts_and_orders():
    vocab = build_vocab(["a", "b", "a"], min_count=1)
    assert vocab.ids == {"a": 0, "b": 1}
    assert vocab.freq.tolist() == [2, 1]
    assert vocab.total_tokens == 3
    assert vocab.oov_tokens == 0


def test_build_vocab_min_count_filters():
    vocab = build_vocab(["a", "b", "a"], min_count=2)
    assert vocab.ids == {"a": 0}
    assert vocab.oov_tokens == 1
    assert vocab.total_tokens == 2


def test_build_vocab_tie_break_is_first_occurrence():
    vocab = build_vocab(["z", "y", "z", "y", "x", "x", "x"], min_count=1)
    # x is most frequent; z and y tie at 2 and keep stream order.
    assert vocab.words == ["x", "z", "y"]


def test_build_vocab_empty_inputs_raise():
    with pytest.raises(EmptyVocabularyError):
        build_vocab([], min_count=1)
    with pytest.raises(EmptyVocabularyError):
        build_vocab(["a", "b"], min_count=3)


def test_build_vocab_matches_counting_oracle():
    rng = np.random.default_rng(7)
    stream = [f"w{i}" for i in rng.integers(0, 50, size=10_000)]
    vocab = build_vocab(stream, min_count=3)
    # independent single-pass hash-count oracle
    counts = {}
    first_seen = {}
    for pos, tok in enumerate(stream):
        counts[tok] = counts.get(tok, 0) + 1
        first_seen.setdefault(tok, pos)
    expected = sorted((w for w, c in counts.items() if c >= 3),
                      key=lambda w: (-counts[w], first_seen[w]))
    assert vocab.words == expected
    assert all(vocab.freq[vocab.ids[w]] == counts[w] for w in expected)


def test_determinism_same_stream_same_vocab():
    stream = ["b", "a", "b", "c", "a", "b"]
    v1 = build_vocab(stream, min_count=1)
    v2 = build_vocab(list(stream), min_count=1)
    assert v1.words == v2.words and np.array_equal(v1.freq, v2.freq)


def test_save_load_roundtrip(tmp_path):
    vocab = build_vocab(["a", "b", "a", "c", "b", "a"], min_count=1)
    path = tmp_path / "vocab.txt"
    vocab.save(path)
    loaded = Vocabulary.load(path)
    assert loaded.words == vocab.words
    assert np.array_equal(loaded.freq, vocab.freq)
    assert loaded.total_tokens == vocab.total_tokens


def test_load_rejects_malformed_line(tmp_path):
    path = tmp_path / "vocab.txt"
    path.write_text("a\t3\nbroken line\n")
    with pytest.raises(ParseError, match="2"):
        Vocabulary.load(path)


def test_encode_corpus_drops_oov_tokens():
    vocab = build_vocab(["a", "a", "b", "b"], min_count=2)
    ids = encode_corpus([["a", "unseen", "b"]], vocab)
    assert ids[0].tolist() == [vocab.ids["a"], vocab.ids["b"]]


def _vocab_with_prob(f, total=1_000_000):
    """One-word vocabulary whose unigram probability is exactly f."""
    count = int(round(f * total))
    return Vocabulary(words=["w"], freq=np.array([count]), total_tokens=total)


def test_subsample_at_threshold_always_survives():
    t = 1e-3
    vocab = _vocab_with_prob(t)
    stream = np.zeros(10_000, dtype=np.int64)
    out = subsample_stream(stream, vocab, t, np.random.default_rng(0))
    assert len(out) == len(stream)


def test_subsample_discard_rate_at_4t():
    # f = 4t gives discard probability 1 - sqrt(1/4) = 0.5
    t = 1e-4
    vocab = _vocab_with_prob(4 * t)
    stream = np.zeros(100_000, dtype=np.int64)
    out = subsample_stream(stream, vocab, t, np.random.default_rng(42))
    rate = 1.0 - len(out) / len(stream)
    assert rate == pytest.approx(0.5, abs=0.02)


def test_subsample_rare_tokens_untouched():
    vocab = Vocabulary(words=["hot", "cold"],
                       freq=np.array([400_000, 5]), total_tokens=1_000_000)
    rng = np.random.default_rng(3)
    stream = np.array([0, 1] * 500, dtype=np.int64)
    out = subsample_stream(stream, vocab, 1e-3, rng)
    assert np.sum(out == 1) == 500          # f <= t: every occurrence kept
    assert np.sum(out == 0) < 100           # f >> t: heavily thinned


def test_subsample_t_one_is_identity():
    vocab = build_vocab(["a"] * 10, min_count=1)
    stream = np.zeros(10, dtype=np.int64)
    out = subsample_stream(stream, vocab, 1.0, np.random.default_rng(0))
    assert np.array_equal(out, stream)


def test_subsample_rejects_bad_threshold():
    vocab = build_vocab(["a"], min_count=1)
    for t in (0.0, -1.0, 1.5):
        with pytest.raises(ValueError):
            subsample_stream(np.zeros(1, dtype=np.int64), vocab, t,
                             np.random.default_rng(0))


def test_subsample_deterministic_given_seed():
    vocab = _vocab_with_prob(0.01)
    stream = np.zeros(1000, dtype=np.int64)
    a = subsample_stream(stream, vocab, 1e-4, np.random.default_rng(9))
    b = subsample_stream(stream, vocab, 1e-4, np.random.default_rng(9))
    assert np.array_equal(a, b)


def test_default_threshold_is_standard_recipe():
    assert TrainConfig().subsample == 1e-5


@settings(max_examples=50, deadline=None)
@given(ids=st.lists(st.integers(min_value=0, max_value=2), min_size=1,
                    max_size=200),
       seed=st.integers(min_value=0, max_value=2**31))
def test_subsample_output_is_subsequence(ids, seed):
    vocab = Vocabulary(words=["a", "b", "c"],
                       freq=np.array([5000, 50, 1]), total_tokens=10_000)
    stream = np.asarray(ids, dtype=np.int64)
    out = subsample_stream(stream, vocab, 1e-3, np.random.default_rng(seed))
    it = iter(stream.tolist())
    assert all(any(x == y for y in it) for x in out.tolist())
