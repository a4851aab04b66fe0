"""SGD machinery and the in-memory training loop.

Training factorizes the PPMI matrix: for every pair produced by window
sampling, the dot product of the word row and the context row is pushed
toward the pair's PPMI value; for every sampled noise pair it is pushed
toward that pair's PPMI, which is zero whenever the pair never co-occurs.
The same squared-error step serves both cases.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernel
from .cooc import sentence_records
from .errors import ConfigError, IntegrityError
from .ppmi import SmoothingConfig, ppmi_from_counts, ppmi_matrix
from .seeding import derive_rng

LR_END_RATIO = 1e-4


@dataclass
class TrainConfig:
    """Training hyperparameters. Defaults follow the standard recipe for
    this model family: 300 dimensions, window 2, 5 passes, 5 noise samples,
    initial learning rate 0.025, subsampling threshold 1e-5, context
    distribution smoothing 0.75."""

    dim: int = 300
    win: int = 2
    iterations: int = 5
    negatives: int = 5
    lr: float = 0.025
    subsample: float = 1e-5
    cds_alpha: float = 0.75
    positional: bool = False
    seed: int = 1
    threads: int = 1

    def __post_init__(self):
        if self.dim < 1 or self.win < 1 or self.iterations < 1:
            raise ConfigError("dim, win, and iterations must be positive")
        if self.negatives < 0:
            raise ConfigError("negatives must be >= 0")
        if self.lr <= 0:
            raise ConfigError("lr must be positive")
        if not 0.0 < self.subsample <= 1.0:
            raise ConfigError("subsample must be in (0, 1]")
        if not 0.0 < self.cds_alpha <= 1.0:
            raise ConfigError("cds_alpha must be in (0, 1]")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")


@dataclass
class EmbeddingPair:
    """Word matrix (num_words x dim) and context matrix (num_contexts x dim).

    num_contexts equals num_words for plain contexts and 2*win*num_words for
    positional ones. Shapes never change during training.
    """

    words: np.ndarray
    contexts: np.ndarray

    @property
    def dim(self):
        return self.words.shape[1]

    @property
    def num_words(self):
        return self.words.shape[0]

    @property
    def num_contexts(self):
        return self.contexts.shape[0]

    def copy(self):
        return EmbeddingPair(self.words.copy(), self.contexts.copy())


def init_embeddings(num_words: int, num_contexts: int, dim: int,
                    rng: np.random.Generator) -> EmbeddingPair:
    """Uniform init in (-0.5/dim, 0.5/dim), keeping initial dot products near
    zero (the association value of independent pairs)."""
    if num_words < 1 or num_contexts < 1 or dim < 1:
        raise ConfigError("embedding dimensions must be positive")
    bound = 0.5 / dim
    words = rng.uniform(-bound, bound, size=(num_words, dim))
    contexts = rng.uniform(-bound, bound, size=(num_contexts, dim))
    return EmbeddingPair(words=words, contexts=contexts)


def sgd_update(emb: EmbeddingPair, w: int, c: int, target: float,
               lr: float) -> float:
    """One squared-error step on rows (w, c): err = W_w . Wc_c - target, then
    W_w -= lr*err*Wc_c and Wc_c -= lr*err*W_w, both from the pre-update
    rows. Returns the loss 0.5*err**2 measured before the step."""
    return float(_kernel.update_one(emb.words, emb.contexts, w, c,
                                    float(target), float(lr)))


def lr_at(lr0: float, total_updates: int, steps) -> np.ndarray:
    """Learning rate at the given global update indices of a run scheduled
    for ``total_updates`` updates: linear decay from lr0 at step 0 down to
    lr0 * 1e-4 at the final step."""
    lr_end = lr0 * LR_END_RATIO
    denom = max(total_updates - 1, 1)
    steps = np.asarray(steps, dtype=np.float64)
    return lr0 + (lr_end - lr0) * (steps / denom)


def lr_values(lr0: float, total_updates: int, start: int, n: int) -> np.ndarray:
    """Learning rates for the contiguous step range start..start+n-1."""
    return lr_at(lr0, total_updates, np.arange(start, start + n))


def apply_update_block(emb: EmbeddingPair, ws, cs, targets, lrs,
                       threads: int = 1) -> float:
    """Run the compiled kernel over one block of updates, optionally sharded
    across lock-free threads (row updates may then interleave and lose
    writes; results are no longer bit-reproducible)."""
    if threads <= 1 or len(ws) < 2 * threads:
        return float(_kernel.apply_updates(emb.words, emb.contexts,
                                           ws, cs, targets, lrs))
    bounds = np.linspace(0, len(ws), threads + 1).astype(np.int64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futs = [pool.submit(_kernel.apply_updates, emb.words, emb.contexts,
                            ws[a:b], cs[a:b], targets[a:b], lrs[a:b])
                for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        return float(sum(f.result() for f in futs))


def build_epoch_updates(sentences, stats, sampler, config: TrainConfig):
    """Materialize one epoch's update sequence (targets included).

    Noise contexts are drawn from a generator derived from the seed with a
    fixed label, so the sampled pair multiset is a pure function of (corpus,
    seed) and every pass optimizes the same multiset; the external-memory
    replay regenerates it identically when writing its pair file.
    """
    neg_rng = derive_rng(config.seed, "negatives")
    ws_parts, cs_parts, corp_parts = [], [], []
    for sent in sentences:
        ws, cs, corp = sentence_records(sent, config.win, config.positional,
                                        config.negatives, sampler, neg_rng)
        if ws.size:
            ws_parts.append(ws)
            cs_parts.append(cs)
            corp_parts.append(corp)
    if not ws_parts:
        raise ConfigError("corpus produced no training pairs")
    ws = np.concatenate(ws_parts)
    cs = np.concatenate(cs_parts)
    corp = np.concatenate(corp_parts)
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals,
                                               config.cds_alpha)
    joint = stats.counts_for(ws, cs)
    if np.any(joint[corp] == 0):
        raise IntegrityError(
            "window pair has no co-occurrence count; stats were not built "
            "from this corpus")
    targets = ppmi_from_counts(joint, stats.row_marginals[ws],
                               smoothing.smoothed_col_marginals[cs],
                               smoothing.smoothed_total)
    return ws, cs, targets


def train_standard(sentences, stats, sampler, config: TrainConfig,
                   update_log=None) -> EmbeddingPair:
    """In-memory training: ``config.iterations`` passes over the corpus in
    order, one update per in-window pair (toward its PPMI) plus
    ``config.negatives`` noise updates per target occurrence.

    ``sentences`` must be the same (already subsampled) id corpus the stats
    were counted from. With ``threads == 1`` the result is a deterministic
    function of (corpus, stats, seed). ``update_log``, when a list, receives
    one (ws, cs, targets) triple per pass.
    """
    ws, cs, targets = build_epoch_updates(sentences, stats, sampler, config)
    emb = init_embeddings(stats.num_words, stats.num_contexts, config.dim,
                          derive_rng(config.seed, "init"))
    per_epoch = len(ws)
    total = per_epoch * config.iterations
    for epoch in range(config.iterations):
        lrs = lr_values(config.lr, total, epoch * per_epoch, per_epoch)
        apply_update_block(emb, ws, cs, targets, lrs, config.threads)
        if update_log is not None:
            update_log.append((ws, cs, targets))
    return emb


def global_loss(emb: EmbeddingPair, stats, sampler, k: int, word_counts,
                cds_alpha: float = 0.75, max_cells: int = 20_000_000) -> float:
    """Exact value of the objective all training paths minimize.

    Dense sweep over every (word, context) cell:

        sum_{w,c} M_wc * 0.5*(W_w.Wc_c - ppmi_wc)^2
      + sum_w  n_w * k * sum_c P(c) * 0.5*(W_w.Wc_c - ppmi_wc)^2

    where ``word_counts[w] = n_w`` is the number of target positions of w in
    the training stream (each schedules k noise draws) and P is the sampler
    distribution. Intended as a test oracle; refuses instances whose dense
    sweep exceeds ``max_cells`` cells.
    """
    cells = stats.num_words * stats.num_contexts
    if cells > max_cells:
        raise ConfigError(
            f"global_loss is a dense sweep; {cells} cells exceed the "
            f"{max_cells} guard")
    smoothing = SmoothingConfig.from_marginals(stats.col_marginals, cds_alpha)
    ppmi = ppmi_matrix(stats, smoothing, max_cells=max_cells)
    sq_err = 0.5 * (emb.words @ emb.contexts.T - ppmi) ** 2
    window_term = float(np.asarray(stats.counts.todense()).ravel()
                        @ sq_err.ravel())
    word_counts = np.asarray(word_counts, dtype=np.float64)
    noise_term = float(k * (word_counts @ (sq_err @ sampler.probabilities())))
    return window_term + noise_term
