"""Word-keyed vector sets: combining embeddings and text-format persistence."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ParseError

COMBO_W = "W"
COMBO_W_PLUS_WC = "W+Wc"
COMBO_W_PLUS_WPOS = "W+Wpos"
COMBOS = (COMBO_W, COMBO_W_PLUS_WC, COMBO_W_PLUS_WPOS)


@dataclass
class VectorSet:
    """One vector per vocabulary word, tagged with how it was combined."""

    words: list
    vectors: np.ndarray
    combo: str = COMBO_W
    ids: dict = field(init=False, repr=False)

    def __post_init__(self):
        if len(self.words) != self.vectors.shape[0]:
            raise ConfigError("one vector per word required")
        self.ids = {w: i for i, w in enumerate(self.words)}

    def __len__(self):
        return len(self.words)

    def __contains__(self, word):
        return word in self.ids

    @property
    def dim(self):
        return self.vectors.shape[1]

    def get(self, word) -> np.ndarray:
        return self.vectors[self.ids[word]]


def combine(emb, vocab, combo: str = COMBO_W) -> VectorSet:
    """Build word vectors from an embedding pair.

    ``W`` uses the word matrix alone. ``W+Wc`` adds the context row of the
    same word and requires plain contexts (matching shapes). ``W+Wpos`` adds
    the sum of all of a word's positional context rows, which is how the
    incompatible positional context matrix folds back to one row per word.
    """
    words = list(vocab.words) if hasattr(vocab, "words") else list(vocab)
    nw = emb.num_words
    if len(words) != nw:
        raise ConfigError(f"{len(words)} words for {nw} word vectors")
    nc = emb.num_contexts
    if combo == COMBO_W:
        vectors = emb.words.copy()
    elif combo == COMBO_W_PLUS_WC:
        if nc != nw:
            raise ConfigError(
                "W+Wc needs plain contexts; the context matrix has "
                f"{nc} rows for {nw} words (positional dimensions are "
                "incompatible, use W+Wpos)")
        vectors = emb.words + emb.contexts
    elif combo == COMBO_W_PLUS_WPOS:
        if nc == nw or nc % nw != 0 or (nc // nw) % 2 != 0:
            raise ConfigError(
                "W+Wpos needs positional contexts (2*win rows per word); "
                f"got {nc} context rows for {nw} words")
        slots = nc // nw
        vectors = emb.words + emb.contexts.reshape(nw, slots, emb.dim).sum(axis=1)
    else:
        raise ConfigError(f"unknown combo {combo!r}; choose one of {COMBOS}")
    return VectorSet(words=words, vectors=vectors, combo=combo)


def save_vectors(vs: VectorSet, path):
    """Text format: header ``<count> <dim>``, then one ``word v1 .. vd`` line
    per word with 6 significant digits per value."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{len(vs)} {vs.dim}\n")
        for word, row in zip(vs.words, vs.vectors):
            fh.write(word + " " + " ".join(f"{v:.6g}" for v in row) + "\n")


def load_vectors(path) -> VectorSet:
    """Read a file written by :func:`save_vectors` (the combo tag is not
    stored in the format and comes back as the plain-W default)."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ParseError(path, 1, "expected '<count> <dim>' header")
        try:
            count, dim = int(header[0]), int(header[1])
        except ValueError:
            raise ParseError(path, 1, "non-integer header field") from None
        words = []
        vectors = np.empty((count, dim), dtype=np.float64)
        line_no = 1
        for line in fh:
            line_no += 1
            parts = line.rstrip("\n").split(" ")
            if len(parts) != dim + 1:
                raise ParseError(path, line_no,
                                 f"expected {dim + 1} fields, got {len(parts)}")
            if len(words) >= count:
                raise ParseError(path, line_no,
                                 f"more rows than the declared {count}")
            try:
                vectors[len(words)] = [float(v) for v in parts[1:]]
            except ValueError:
                raise ParseError(path, line_no, "non-numeric vector value") from None
            words.append(parts[0])
    if len(words) != count:
        raise ParseError(path, line_no + 1,
                         f"header declares {count} rows, file has {len(words)}")
    return VectorSet(words=words, vectors=vectors)
