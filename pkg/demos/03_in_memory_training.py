"""
In-memory training
==================

Trains word and context embeddings on a topic-clustered toy corpus. Every
window pair pushes the word/context dot product toward the pair's PPMI;
noise pairs drawn from the smoothed unigram distribution push unrelated
dot products toward their (usually zero) PPMI. The exact global objective
is evaluated before and after to show the factorization improving.
"""

import numpy as np

from pmivec import (TrainConfig, combine, corpus_word_counts, count_corpus,
                    derive_rng, global_loss, init_embeddings, train_standard,
                    unigram_sampler)
from pmivec.vocab import build_vocab, encode_corpus

# Two synthetic topics: words 0-9 co-occur, words 10-19 co-occur.
rng = np.random.default_rng(0)
corpus = []
for _ in range(600):
    base = int(rng.integers(0, 2)) * 10
    corpus.append([f"w{base + rng.integers(0, 10)}" for _ in range(10)])

vocab = build_vocab((t for s in corpus for t in s), min_count=1)
sentences = encode_corpus(corpus, vocab)

config = TrainConfig(dim=16, win=2, iterations=5, negatives=3,
                     subsample=1.0, seed=11)
stats = count_corpus(sentences, len(vocab), config.win, config.positional)
sampler = unigram_sampler(vocab)

word_counts = corpus_word_counts(sentences, len(vocab))
initial = init_embeddings(stats.num_words, stats.num_contexts, config.dim,
                          derive_rng(config.seed, "init"))
loss_before = global_loss(initial, stats, sampler, config.negatives,
                          word_counts, config.cds_alpha)

emb = train_standard(sentences, stats, sampler, config)

loss_after = global_loss(emb, stats, sampler, config.negatives,
                         word_counts, config.cds_alpha)
print(f"objective: {loss_before:.1f} -> {loss_after:.1f} "
      f"({loss_after / loss_before:.1%} of initial)")

# Nearest neighbors respect the planted topics.
vs = combine(emb, vocab, "W")
normed = vs.vectors / np.linalg.norm(vs.vectors, axis=1, keepdims=True)
for query in ("w0", "w13"):
    sims = normed @ normed[vs.ids[query]]
    sims[vs.ids[query]] = -np.inf
    top = np.argsort(sims)[::-1][:4]
    print(f"nearest to {query}: {[vs.words[i] for i in top]}")
