"""Sliding-window co-occurrence counting with plain or positional contexts.

A plain context is just a word id. A positional context additionally encodes
the signed offset at which the word was seen: with window size ``win`` the
offsets -win..-1 and 1..win map to slots 0..2*win-1 and context
``(word, offset)`` gets id ``word * 2 * win + slot``. The layout is
word-major, so all positional contexts of one word are contiguous rows of the
context matrix.
"""

import numpy as np
import scipy.sparse as sp

from .errors import IntegrityError


def context_space_size(num_words: int, win: int, positional: bool) -> int:
    return 2 * win * num_words if positional else num_words


def offset_slot(offset: int, win: int) -> int:
    """Slot index of a signed window offset. Offset 0 does not exist."""
    if offset == 0 or abs(offset) > win:
        raise ValueError(f"offset must satisfy 1 <= |offset| <= {win}, got {offset}")
    return offset + win if offset < 0 else offset + win - 1


def encode_context(word_id: int, offset: int, win: int, positional: bool) -> int:
    """Context id of ``word_id`` seen at ``offset``; plain contexts ignore
    the offset (but still validate it)."""
    slot = offset_slot(offset, win)
    if positional:
        return word_id * (2 * win) + slot
    return word_id


def decode_context(context_id: int, win: int):
    """Inverse of positional :func:`encode_context`: returns (word_id, offset)."""
    word_id, slot = divmod(context_id, 2 * win)
    offset = slot - win if slot < win else slot - win + 1
    return word_id, offset


def _window_offsets(win: int):
    return [o for o in range(-win, win + 1) if o != 0]


def sentence_records(sentence, win: int, positional: bool, negatives: int = 0,
                     sampler=None, rng=None):
    """Window-sample one sentence, optionally extended with noise contexts.

    Returns ``(targets, contexts, is_corpus)`` arrays in canonical order: for
    each position p, the in-window pairs with offsets ascending, then
    ``negatives`` sampled noise contexts for p. Both the in-memory trainer and
    the pair-file writer emit records through this function, so given the
    same generator state they produce the identical record sequence.
    """
    sent = list(sentence)
    n = len(sent)
    if negatives:
        noise = sampler.sample_array(rng, negatives * n).tolist() if n else []
    two_win = 2 * win
    ws, cs, corp = [], [], []
    for p in range(n):
        w = sent[p]
        lo = -win if p >= win else -p
        hi = win if n - 1 - p >= win else n - 1 - p
        for o in range(lo, hi + 1):
            if o == 0:
                continue
            c = sent[p + o]
            if positional:
                slot = o + win if o < 0 else o + win - 1
                c = c * two_win + slot
            ws.append(w)
            cs.append(c)
            corp.append(True)
        if negatives:
            base = p * negatives
            for j in range(negatives):
                ws.append(w)
                cs.append(noise[base + j])
                corp.append(False)
    return (np.asarray(ws, dtype=np.int64),
            np.asarray(cs, dtype=np.int64),
            np.asarray(corp, dtype=bool))


def stream_pairs(sentences, win: int, positional: bool):
    """Yield every (word_id, context_id) pair from a fixed symmetric window.

    ``sentences`` is an iterable of id sequences; windows are clipped at
    sentence boundaries. Deterministic given the input.
    """
    for sent in sentences:
        ws, cs, _ = sentence_records(sent, win, positional)
        yield from zip(ws.tolist(), cs.tolist())


class CoocStats:
    """Sparse pair counts plus marginals for one counting run.

    ``counts`` is a CSR matrix of shape (num_words, num_contexts);
    ``row_marginals[w]`` and ``col_marginals[c]`` are the usual index sums
    and ``grand_total`` their common total. Storage for marginals is linear
    in the number of words/contexts, never quadratic.
    """

    def __init__(self, counts: sp.csr_matrix, win: int, positional: bool):
        self.counts = counts
        self.win = win
        self.positional = positional
        self.row_marginals = np.asarray(counts.sum(axis=1)).ravel().astype(np.int64)
        self.col_marginals = np.asarray(counts.sum(axis=0)).ravel().astype(np.int64)
        self.grand_total = int(self.row_marginals.sum())

    @property
    def num_words(self):
        return self.counts.shape[0]

    @property
    def num_contexts(self):
        return self.counts.shape[1]

    def count(self, w: int, c: int) -> int:
        return int(self.counts[w, c])

    def counts_for(self, ws, cs) -> np.ndarray:
        """Vectorized pair-count lookup."""
        if len(ws) == 0:
            return np.zeros(0, dtype=np.int64)
        return np.asarray(self.counts[ws, cs]).ravel().astype(np.int64)

    def validate(self):
        """Check marginal consistency; raises :class:`IntegrityError`."""
        if int(self.col_marginals.sum()) != self.grand_total:
            raise IntegrityError("column marginals do not sum to the grand total")
        rows = np.asarray(self.counts.sum(axis=1)).ravel()
        if not np.array_equal(rows, self.row_marginals):
            raise IntegrityError("row marginals inconsistent with pair counts")


def count_pairs(pairs, num_words: int, win: int, positional: bool) -> CoocStats:
    """Accumulate a stream of (word_id, context_id) pairs into exact counts."""
    ws, cs = [], []
    for w, c in pairs:
        ws.append(w)
        cs.append(c)
    return _stats_from_arrays(
        np.asarray(ws, dtype=np.int64), np.asarray(cs, dtype=np.int64),
        num_words, win, positional)


def count_corpus(sentences, num_words: int, win: int, positional: bool) -> CoocStats:
    """Window-sample ``sentences`` and count, without a per-pair Python loop."""
    ws_parts, cs_parts = [], []
    for sent in sentences:
        ws, cs, _ = sentence_records(sent, win, positional)
        if ws.size:
            ws_parts.append(ws)
            cs_parts.append(cs)
    ws = np.concatenate(ws_parts) if ws_parts else np.zeros(0, dtype=np.int64)
    cs = np.concatenate(cs_parts) if cs_parts else np.zeros(0, dtype=np.int64)
    return _stats_from_arrays(ws, cs, num_words, win, positional)


def _stats_from_arrays(ws, cs, num_words, win, positional):
    shape = (num_words, context_space_size(num_words, win, positional))
    coo = sp.coo_matrix((np.ones(len(ws), dtype=np.int64), (ws, cs)), shape=shape)
    return CoocStats(coo.tocsr(), win=win, positional=positional)


def context_marginals(sentences, num_words: int, win: int,
                      positional: bool) -> np.ndarray:
    """Per-context window-pair counts M(*, c) without any pair-keyed storage
    (one accumulator of context-space size)."""
    col = np.zeros(context_space_size(num_words, win, positional), dtype=np.int64)
    for sent in sentences:
        _, cs, _ = sentence_records(sent, win, positional)
        if cs.size:
            np.add.at(col, cs, 1)
    return col


def corpus_word_counts(sentences, num_words: int) -> np.ndarray:
    """Occurrences of each word in an id corpus (the per-word number of
    target positions, which is what scales the noise-sample budget)."""
    counts = np.zeros(num_words, dtype=np.int64)
    for sent in sentences:
        sent = np.asarray(sent, dtype=np.int64)
        if sent.size:
            counts += np.bincount(sent, minlength=num_words)
    return counts
