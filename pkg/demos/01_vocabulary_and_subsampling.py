"""
Vocabulary construction and frequent-word subsampling
=====================================================

Builds a vocabulary from a tiny corpus, then shows how dirty subsampling
thins very frequent tokens before any windows are formed: later windows
span the removed positions instead of stopping at them.
"""

import numpy as np

from pmivec import build_vocab, derive_rng, encode_corpus, subsample_corpus

# A corpus is an iterable of sentences; on disk it is one sentence per line
# of whitespace-separated tokens (see pmivec.iter_sentences).
corpus = [
    "the cat sat on the mat".split(),
    "the dog sat on the rug".split(),
    "the cat and the dog".split(),
    "a cat a dog a mat".split(),
] * 200

# Ids are assigned by descending frequency, ties by first occurrence.
vocab = build_vocab((tok for sent in corpus for tok in sent), min_count=2)
print(f"{len(vocab)} words, {vocab.total_tokens} tokens")
for word in vocab.words[:6]:
    i = vocab.ids[word]
    print(f"  id {i}: {word!r:8} count {vocab.freq[i]}, "
          f"f = {vocab.freq[i] / vocab.total_tokens:.4f}")

# Encode to ids and subsample. A token with unigram probability f > t is
# dropped with probability 1 - sqrt(t/f), so 'the' (f ~ 0.21) nearly
# vanishes at t = 1e-3 while rare words always survive.
sentences = encode_corpus(corpus, vocab)
t = 1e-3
stream = subsample_corpus(sentences, vocab, t, derive_rng(seed=1, label="subsample"))

kept = np.bincount(np.concatenate(stream), minlength=len(vocab))
print(f"\nsubsampling at t = {t}:")
for word in vocab.words[:6]:
    i = vocab.ids[word]
    print(f"  {word!r:8} kept {kept[i]:5d} of {vocab.freq[i]}")

# The survivors keep their corpus order; windows are built on this stream.
print("\nfirst sentence before:", [vocab.words[i] for i in sentences[0]])
print("first sentence after: ", [vocab.words[i] for i in stream[0]])
