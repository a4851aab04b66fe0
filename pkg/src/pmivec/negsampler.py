"""Noise-context sampling from a smoothed count distribution.

Context c is drawn with probability count(c)^alpha / sum count^alpha. Plain
contexts use corpus unigram counts; positional contexts use the per-context
column marginals of the co-occurrence counts (there is no meaningful unigram
count for a (word, offset) pair). Sampled contexts are never rejected for
matching the true context or the target word.
"""

from dataclasses import dataclass

import numpy as np


@dataclass
class SamplerTable:
    """Cumulative-probability table sampled by binary search."""

    weights: np.ndarray      # count^alpha per context, zeros stay zero
    cumulative: np.ndarray   # normalized prefix sums; last entry exactly 1.0
    alpha: float

    def probabilities(self) -> np.ndarray:
        return self.weights / self.weights.sum()

    def sample(self, rng: np.random.Generator) -> int:
        """One draw. Deterministic given the generator state; zero-weight
        contexts are never returned."""
        return int(np.searchsorted(self.cumulative, rng.random(), side="right"))

    def sample_array(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """``n`` draws, consuming the generator stream exactly like ``n``
        successive :meth:`sample` calls."""
        u = rng.random(n)
        return np.searchsorted(self.cumulative, u, side="right").astype(np.int64)


def build_sampler(counts, alpha: float = 0.75) -> SamplerTable:
    """Build the table for ``P(c) = counts[c]^alpha / sum counts^alpha``."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    counts = np.asarray(counts, dtype=np.float64)
    if counts.size == 0 or not np.any(counts > 0):
        raise ValueError("cannot build a sampler from all-zero counts")
    if np.any(counts < 0):
        raise ValueError("negative counts")
    weights = counts ** alpha
    cumulative = np.cumsum(weights)
    cumulative /= cumulative[-1]
    return SamplerTable(weights=weights, cumulative=cumulative, alpha=alpha)


def unigram_sampler(vocab, alpha: float = 0.75) -> SamplerTable:
    """Plain-context sampler over raw corpus unigram counts."""
    return build_sampler(vocab.freq, alpha)


def positional_sampler(col_marginals, alpha: float = 0.75) -> SamplerTable:
    """Positional-context sampler over the context column marginals."""
    return build_sampler(col_marginals, alpha)
