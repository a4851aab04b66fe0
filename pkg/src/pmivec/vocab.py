"""Vocabulary construction and frequent-word subsampling.

The corpus format is plain text with whitespace-separated tokens; one line is
one sentence (context windows never cross lines). Tokenization itself is out
of scope: the input is assumed pre-tokenized.
"""

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyVocabularyError, ParseError


@dataclass
class Vocabulary:
    """Bidirectional word/id map with raw corpus frequencies.

    Ids are assigned by descending frequency (ties broken by first occurrence
    in the corpus), so id 0 is always the most frequent word. ``freq`` holds
    raw pre-subsampling counts; ``total_tokens`` is their sum. Occurrences of
    words dropped by the ``min_count`` threshold are tracked in
    ``oov_tokens`` and contribute to nothing else.
    """

    words: list
    freq: np.ndarray
    total_tokens: int
    oov_tokens: int = 0
    ids: dict = field(init=False, repr=False)

    def __post_init__(self):
        self.freq = np.asarray(self.freq, dtype=np.int64)
        if len(self.words) != len(self.freq):
            raise ValueError("words and freq must have the same length")
        self.ids = {w: i for i, w in enumerate(self.words)}

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.ids

    def id_of(self, word):
        return self.ids[word]

    def word_of(self, idx):
        return self.words[idx]

    def unigram_probs(self) -> np.ndarray:
        return self.freq / float(self.total_tokens)

    def save(self, path):
        """Write one ``word<TAB>freq`` line per id, in id order."""
        with open(path, "w", encoding="utf-8") as fh:
            for word, count in zip(self.words, self.freq):
                fh.write(f"{word}\t{count}\n")

    @classmethod
    def load(cls, path):
        """Read a file written by :meth:`save`. File order defines the ids.

        ``oov_tokens`` is not persisted and comes back as 0.
        """
        words, freq = [], []
        with open(path, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.rstrip("\n")
                if not line:
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise ParseError(path, line_no, "expected 'word<TAB>count'")
                try:
                    count = int(parts[1])
                except ValueError:
                    raise ParseError(path, line_no, f"bad count {parts[1]!r}") from None
                words.append(parts[0])
                freq.append(count)
        if not words:
            raise EmptyVocabularyError(f"no entries in {path}")
        return cls(words=words, freq=np.asarray(freq, dtype=np.int64),
                   total_tokens=int(sum(freq)))


def build_vocab(tokens, min_count: int = 5) -> Vocabulary:
    """Count ``tokens`` and keep every type occurring at least ``min_count`` times.

    ``tokens`` is a finite iterable of strings (flatten sentences first).
    Raises :class:`EmptyVocabularyError` when nothing survives the threshold.
    """
    if min_count < 1:
        raise ValueError(f"min_count must be >= 1, got {min_count}")
    counts = Counter(tokens)
    # Counter preserves first-occurrence order; a stable sort on -count keeps
    # that order among ties, making id assignment deterministic.
    kept = [(w, c) for w, c in counts.items() if c >= min_count]
    kept.sort(key=lambda wc: -wc[1])
    if not kept:
        raise EmptyVocabularyError(
            f"empty vocabulary: no token occurs >= {min_count} times")
    words = [w for w, _ in kept]
    freq = np.array([c for _, c in kept], dtype=np.int64)
    total = int(freq.sum())
    oov = int(sum(counts.values())) - total
    return Vocabulary(words=words, freq=freq, total_tokens=total, oov_tokens=oov)


def iter_sentences(path):
    """Yield one list of token strings per non-empty line of ``path``."""
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            tokens = line.split()
            if tokens:
                yield tokens


def encode_corpus(sentences, vocab: Vocabulary):
    """Map token sentences to id arrays, silently dropping out-of-vocabulary
    tokens (windows later span the gaps, like subsampling removals)."""
    ids = vocab.ids
    out = []
    for sent in sentences:
        encoded = [ids[t] for t in sent if t in ids]
        out.append(np.asarray(encoded, dtype=np.int64))
    return out


def subsample_stream(token_ids, vocab: Vocabulary, t: float,
                     rng: np.random.Generator) -> np.ndarray:
    """Randomly thin frequent tokens before any windowing.

    Each occurrence of a token whose corpus unigram probability ``f`` exceeds
    ``t`` is discarded independently with probability ``1 - sqrt(t / f)``;
    tokens with ``f <= t`` always survive. Removal happens before windows are
    formed, so later windows span the removed positions ("dirty"
    subsampling). Order is preserved and one uniform draw is consumed per
    input token, which makes the output a pure function of (stream, vocab,
    t, seed).
    """
    if not 0.0 < t <= 1.0:
        raise ValueError(f"subsample threshold must be in (0, 1], got {t}")
    token_ids = np.asarray(token_ids, dtype=np.int64)
    if token_ids.size == 0:
        return token_ids
    f = vocab.freq[token_ids] / float(vocab.total_tokens)
    keep = rng.random(token_ids.size) < np.sqrt(t / f)
    return token_ids[keep]


def subsample_corpus(sentences, vocab: Vocabulary, t: float,
                     rng: np.random.Generator):
    """Apply :func:`subsample_stream` sentence by sentence."""
    return [subsample_stream(s, vocab, t, rng) for s in sentences]
