"""
Window sampling, co-occurrence counts, and PPMI
===============================================

Slides a symmetric window over a sentence with plain and with positional
contexts, accumulates sparse counts, and reads association values off the
counts on demand; no dense matrix is ever stored.
"""

from pmivec import (SmoothingConfig, count_corpus, decode_context,
                    encode_context, ppmi_value, stream_pairs)

words = ["the", "big", "dog", "barked", "loudly"]
sentence = list(range(len(words)))

# Plain contexts: each neighbor inside the window is a context word.
print("plain pairs (win=2):")
for w, c in stream_pairs([sentence], win=2, positional=False):
    print(f"  {words[w]:7} <- {words[c]}")

# Positional contexts also record the offset: the window around 'dog'
# yields the contexts (the,-2) (big,-1) (barked,+1) (loudly,+2).
print("\npositional contexts of 'dog' (win=2):")
for w, c in stream_pairs([sentence], win=2, positional=True):
    if words[w] == "dog":
        cw, off = decode_context(c, win=2)
        print(f"  dog <- ({words[cw]}, {off:+d})   context id {c}")

# The positional id layout is word-major: the 2*win slots of one word are
# contiguous, which keeps later per-word summations cache friendly.
print("\nencoding: (word 2, offset -2) ->",
      encode_context(2, -2, win=2, positional=True))

# Counting a slightly larger corpus and querying smoothed PPMI values.
corpus = [sentence, [2, 3, 2, 4, 0], [0, 1, 2, 3], [2, 3]] * 50
stats = count_corpus(corpus, num_words=len(words), win=2, positional=False)
print(f"\n{stats.grand_total} window pairs counted")

smoothing = SmoothingConfig.from_marginals(stats.col_marginals, cds_alpha=0.75)
print("smoothed PPMI values:")
for w, c in [(2, 3), (3, 2), (0, 4), (4, 4)]:
    print(f"  ppmi({words[w]}, {words[c]}) = "
          f"{ppmi_value(stats, smoothing, w, c):.4f}")
