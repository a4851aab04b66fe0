"""External-memory training: write sampled pairs to disk, sort and collapse,
then replay.

The pair file removes the need for random access to association values
during training. Window-sampled and noise-sampled records are appended to a
raw file while only the per-context marginals stay resident; sorting the
file and collapsing duplicate (word, context) keys yields one tuple per key
carrying everything needed to recompute the pair's PPMI target on the fly.

File formats (ASCII, one record per line, single-space separators, LF):

* raw pairs:      ``<word> <context> <origin>`` with origin ``c`` (corpus
  window) or ``n`` (noise draw);
* collapsed:      ``<word> <context> <marker> <tot> <corpus_count>`` with
  marker ``+`` when the pair occurred in the corpus and ``-`` otherwise,
  ``tot`` the total number of records for the key (noise included), sorted
  ascending by (word, context), one line per key;
* marginals sidecar: header ``TOTAL <grand_total>`` then one
  ``<context_id> <count>`` line per context id, in id order.

Two replay variants exist. Multiple Iteration (MI) shuffles the collapsed
file once per pass and applies each tuple's ``tot`` updates consecutively.
Single Iteration (SI) first expands every tuple into ``tot`` single-update
lines, then shuffles and replays that file, dispersing a pair's updates over
the whole pass. Both optimize the same per-pass update multiset as the
in-memory loop; only the processing order differs.
"""

import heapq
import io
import itertools
import os
import tempfile
from typing import NamedTuple

import numpy as np

from .cooc import sentence_records
from .errors import IntegrityError, ParseError
from .ppmi import SmoothingConfig, ppmi_from_counts
from .seeding import derive_rng
from .trainer import (EmbeddingPair, TrainConfig, apply_update_block,
                      init_embeddings, lr_values)

ORIGIN_CORPUS = "c"
ORIGIN_NEGATIVE = "n"

_MARKER_TO_DIGIT = str.maketrans({"+": "1", "-": "0"})


class PairTuple(NamedTuple):
    w: int
    c: int
    marker: str
    tot: int
    corpus_count: int


class Marginals:
    """Per-context counts of the window-sampled pairs, plus their total.

    Only the context (column) marginals are stored; the word (row) marginals
    are derived from them. A symmetric window emits, for every pair with
    target w and context x at offset o, the mirrored pair with target x and
    context w at offset -o, so the number of pairs targeting w equals the
    number of windows containing w as a context:

        plain:      M_w* = M_*w
        positional: M_w* = sum over offsets o of M_*(w, o)

    which keeps resident state linear in the context-space size.
    """

    def __init__(self, col_marginals, win: int, positional: bool):
        self.col = np.asarray(col_marginals, dtype=np.int64)
        self.win = win
        self.positional = positional
        if positional and len(self.col) % (2 * win) != 0:
            raise IntegrityError(
                f"positional marginal vector length {len(self.col)} is not a "
                f"multiple of 2*win={2 * win}")
        self._rows = None

    @property
    def num_words(self) -> int:
        return len(self.col) // (2 * self.win) if self.positional else len(self.col)

    @property
    def num_contexts(self) -> int:
        return len(self.col)

    @property
    def total(self) -> int:
        return int(self.col.sum())

    @property
    def row_marginals(self) -> np.ndarray:
        if self._rows is None:
            if self.positional:
                self._rows = self.col.reshape(self.num_words, 2 * self.win).sum(axis=1)
            else:
                self._rows = self.col
        return self._rows

    def save(self, path):
        with open(path, "w", encoding="ascii") as fh:
            fh.write(f"TOTAL {self.total}\n")
            for cid, count in enumerate(self.col):
                fh.write(f"{cid} {count}\n")

    @classmethod
    def load(cls, path, win: int, positional: bool):
        with open(path, encoding="ascii") as fh:
            header = fh.readline().split()
            if len(header) != 2 or header[0] != "TOTAL":
                raise ParseError(path, 1, "expected 'TOTAL <count>' header")
            try:
                total = int(header[1])
            except ValueError:
                raise ParseError(path, 1, f"bad total {header[1]!r}") from None
            counts = []
            for line_no, line in enumerate(fh, start=2):
                parts = line.split()
                if len(parts) != 2:
                    raise ParseError(path, line_no, "expected '<context_id> <count>'")
                try:
                    cid, count = int(parts[0]), int(parts[1])
                except ValueError:
                    raise ParseError(path, line_no, "non-integer field") from None
                if cid != len(counts):
                    raise ParseError(path, line_no,
                                     f"context ids must be consecutive, got {cid}")
                counts.append(count)
        marg = cls(np.asarray(counts, dtype=np.int64), win=win, positional=positional)
        if marg.total != total:
            raise IntegrityError(
                f"{path}: header total {total} != sum of counts {marg.total}")
        return marg


def write_pairs(sentences, config: TrainConfig, sampler,
                rng: np.random.Generator, pairs_path):
    """Stream every window pair and per-target noise draw to ``pairs_path``.

    Memory use is one sentence's records plus the marginal accumulators;
    nothing pair-keyed is held. Returns ``(record_count, Marginals)``.
    """
    num_contexts = None
    col = None
    n_records = 0
    with open(pairs_path, "w", encoding="ascii") as fh:
        for sent in sentences:
            ws, cs, corp = sentence_records(sent, config.win, config.positional,
                                            config.negatives, sampler, rng)
            if col is None:
                num_contexts = len(sampler.weights)
                col = np.zeros(num_contexts, dtype=np.int64)
            if not ws.size:
                continue
            np.add.at(col, cs[corp], 1)
            lines = []
            for w, c, is_corpus in zip(ws.tolist(), cs.tolist(), corp.tolist()):
                lines.append(f"{w} {c} {ORIGIN_CORPUS if is_corpus else ORIGIN_NEGATIVE}\n")
            fh.write("".join(lines))
            n_records += len(lines)
    if col is None:
        col = np.zeros(len(sampler.weights), dtype=np.int64)
    return n_records, Marginals(col, win=config.win, positional=config.positional)


def _parse_raw_line(line, path, line_no):
    parts = line.split()
    if len(parts) != 3:
        raise ParseError(path, line_no, "expected '<word> <context> <origin>'")
    try:
        w, c = int(parts[0]), int(parts[1])
    except ValueError:
        raise ParseError(path, line_no, "non-integer id") from None
    if parts[2] == ORIGIN_CORPUS:
        return w, c, 1
    if parts[2] == ORIGIN_NEGATIVE:
        return w, c, 0
    raise ParseError(path, line_no, f"unknown origin {parts[2]!r}")


def _external_sorted(path, chunk_size, parse_line, serialize, tmp):
    """Chunked external sort: parse + sort ``chunk_size`` records at a time
    into run files, then k-way merge. Yields parsed records in order."""
    run_paths = []
    with open(path, encoding="ascii") as fh:
        line_no = 0
        while True:
            records = []
            for line in itertools.islice(fh, chunk_size):
                line_no += 1
                records.append(parse_line(line, path, line_no))
            if not records:
                break
            records.sort()
            run_path = os.path.join(tmp, f"run{len(run_paths)}.txt")
            with open(run_path, "w", encoding="ascii") as rf:
                rf.writelines(serialize(r) for r in records)
            run_paths.append(run_path)

    def iter_run(run_path):
        with open(run_path, encoding="ascii") as rf:
            for ln, line in enumerate(rf, start=1):
                yield parse_line(line, run_path, ln)

    yield from heapq.merge(*(iter_run(p) for p in run_paths))


def _record_format(path):
    """Field count of the first line: 3 for raw pair records, 5 for tuple
    lines, None for an empty file."""
    with open(path, encoding="ascii") as fh:
        first = fh.readline()
    if not first.strip():
        return None
    n = len(first.split())
    if n not in (3, 5):
        raise ParseError(path, 1, f"unrecognized record with {n} fields")
    return n


def sort_collapse(pairs_path, out_path, chunk_size: int = 1_000_000) -> int:
    """External merge sort by (word, context), collapsing each key into one
    tuple line. ``chunk_size`` bounds the records sorted in memory at a time.

    Raw ``<w> <c> <origin>`` input produces tot = group size and
    corpus_count = number of corpus-origin members. Tuple input (as written
    by :func:`expand_si`) sums the ``tot`` fields and requires a consistent
    corpus count per key, which makes the collapse the exact inverse of the
    expansion. Returns the number of tuples written.
    """
    if chunk_size < 1:
        raise ValueError("chunk_size must be >= 1")
    fmt = _record_format(pairs_path)
    n_tuples = 0
    with tempfile.TemporaryDirectory(prefix="pmivec-sort-") as tmp, \
            open(out_path, "w", encoding="ascii") as out:
        if fmt is None:
            return 0
        if fmt == 3:
            def serialize(rec):
                w, c, is_corpus = rec
                return f"{w} {c} {ORIGIN_CORPUS if is_corpus else ORIGIN_NEGATIVE}\n"

            merged = _external_sorted(pairs_path, chunk_size, _parse_raw_line,
                                      serialize, tmp)
            for (w, c), group in itertools.groupby(merged,
                                                   key=lambda r: (r[0], r[1])):
                tot = cc = 0
                for _, _, is_corpus in group:
                    tot += 1
                    cc += is_corpus
                out.write(f"{w} {c} {'+' if cc else '-'} {tot} {cc}\n")
                n_tuples += 1
        else:
            def parse(line, path, line_no):
                w, c, _, tot, cc = _parse_tuple_line(line, path, line_no,
                                                     collapsed=False)
                return w, c, tot, cc

            def serialize(rec):
                w, c, tot, cc = rec
                return f"{w} {c} {'+' if cc else '-'} {tot} {cc}\n"

            merged = _external_sorted(pairs_path, chunk_size, parse,
                                      serialize, tmp)
            for (w, c), group in itertools.groupby(merged,
                                                   key=lambda r: (r[0], r[1])):
                tot = 0
                cc = None
                for _, _, line_tot, line_cc in group:
                    tot += line_tot
                    if cc is not None and line_cc != cc:
                        raise IntegrityError(
                            f"{pairs_path}: conflicting corpus counts for "
                            f"pair ({w}, {c})")
                    cc = line_cc
                out.write(f"{w} {c} {'+' if cc else '-'} {tot} {cc}\n")
                n_tuples += 1
    return n_tuples


def expand_si(collapsed_path, out_path) -> int:
    """Rewrite each tuple as ``tot`` single-update lines (tot=1, marker and
    corpus count preserved). Returns the number of lines written."""
    n_lines = 0
    with open(collapsed_path, encoding="ascii") as fh, \
            open(out_path, "w", encoding="ascii") as out:
        for line_no, line in enumerate(fh, start=1):
            w, c, marker, tot, cc = _parse_tuple_line(line, collapsed_path, line_no)
            single = f"{w} {c} {marker} 1 {cc}\n"
            remaining = tot
            while remaining > 0:
                batch = min(remaining, 8192)
                out.write(single * batch)
                remaining -= batch
            n_lines += tot
    return n_lines


def _parse_tuple_line(line, path, line_no, collapsed=True):
    parts = line.split()
    if len(parts) != 5:
        raise ParseError(path, line_no,
                         "expected '<word> <context> <marker> <tot> <count>'")
    try:
        w, c, tot, cc = int(parts[0]), int(parts[1]), int(parts[3]), int(parts[4])
    except ValueError:
        raise ParseError(path, line_no, "non-integer field") from None
    marker = parts[2]
    if marker not in "+-" or len(marker) != 1:
        raise ParseError(path, line_no, f"bad marker {marker!r}")
    if (marker == "+") != (cc > 0):
        raise IntegrityError(
            f"{path}:{line_no}: marker {marker!r} contradicts corpus count {cc}")
    if tot < 1:
        raise IntegrityError(f"{path}:{line_no}: tot must be positive")
    # Expanded replay lines keep the pair's corpus count but carry tot=1, so
    # tot >= corpus_count holds only for collapsed files.
    if collapsed and tot < cc:
        raise IntegrityError(
            f"{path}:{line_no}: tot {tot} smaller than corpus count {cc}")
    return w, c, marker, tot, cc


def read_tuples(path):
    """Yield validated :class:`PairTuple` records from a collapsed file."""
    with open(path, encoding="ascii") as fh:
        for line_no, line in enumerate(fh, start=1):
            w, c, marker, tot, cc = _parse_tuple_line(line, path, line_no)
            yield PairTuple(w, c, marker, tot, cc)


def shuffle_file(path, out_path, num_buckets: int = 16,
                 rng: np.random.Generator = None, chunk_lines: int = 65536):
    """Two-pass external shuffle: lines are scattered to ``num_buckets``
    bucket files uniformly at random, then each bucket is shuffled in memory
    and concatenated. With one bucket no scatter draws are consumed and the
    result is the exact in-memory shuffle of the whole file. Deterministic
    given the generator state. Lines must be newline-terminated."""
    if num_buckets < 1:
        raise ValueError("num_buckets must be >= 1")
    if rng is None:
        rng = np.random.default_rng()
    if num_buckets == 1:
        with open(path, encoding="ascii") as fh:
            lines = fh.readlines()
        rng.shuffle(lines)
        with open(out_path, "w", encoding="ascii") as out:
            out.writelines(lines)
        return
    with tempfile.TemporaryDirectory(prefix="pmivec-shuffle-") as tmp:
        bucket_paths = [os.path.join(tmp, f"bucket{b}.txt") for b in range(num_buckets)]
        buckets = [open(p, "w", encoding="ascii") for p in bucket_paths]
        try:
            with open(path, encoding="ascii") as fh:
                while True:
                    lines = list(itertools.islice(fh, chunk_lines))
                    if not lines:
                        break
                    assign = rng.integers(0, num_buckets, size=len(lines))
                    for line, b in zip(lines, assign):
                        buckets[b].write(line)
        finally:
            for bf in buckets:
                bf.close()
        with open(out_path, "w", encoding="ascii") as out:
            for p in bucket_paths:
                with open(p, encoding="ascii") as bf:
                    lines = bf.readlines()
                rng.shuffle(lines)
                out.writelines(lines)


def _iter_tuple_chunks(path, chunk_lines: int):
    """Yield (w, c, marker_flag, tot, cc) int64 column arrays per chunk."""
    with open(path, encoding="ascii") as fh:
        line_no = 0
        while True:
            lines = list(itertools.islice(fh, chunk_lines))
            if not lines:
                return
            text = "".join(lines).translate(_MARKER_TO_DIGIT)
            try:
                arr = np.loadtxt(io.StringIO(text), dtype=np.int64, ndmin=2)
                if arr.shape[1] != 5:
                    raise ValueError("wrong field count")
            except ValueError:
                # Locate the offending line for a precise diagnostic.
                for i, line in enumerate(lines):
                    _parse_tuple_line(line, path, line_no + i + 1, collapsed=False)
                raise ParseError(path, line_no + 1, "malformed chunk") from None
            line_no += len(lines)
            yield arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4]


def count_scheduled_updates(collapsed_path, chunk_lines: int = 200_000) -> int:
    """Sum of ``tot`` over a collapsed (or expanded) file."""
    total = 0
    for _, _, _, tot, _ in _iter_tuple_chunks(collapsed_path, chunk_lines):
        total += int(tot.sum())
    return total


def _check_chunk(path, w, c, flags, tot, cc, marginals):
    if np.any((flags != 0) & (flags != 1)):
        raise ParseError(path, 0, "marker column must be '+' or '-'")
    if np.any((flags == 1) != (cc > 0)):
        raise IntegrityError(f"{path}: marker contradicts corpus count")
    if np.any(tot < 1):
        raise IntegrityError(f"{path}: tot must be positive")
    if np.any((w < 0) | (w >= marginals.num_words)):
        raise IntegrityError(f"{path}: word id out of marginal range")
    if np.any((c < 0) | (c >= marginals.num_contexts)):
        raise IntegrityError(f"{path}: context id out of marginal range")
    if np.any(cc > marginals.col[c]):
        raise IntegrityError(f"{path}: pair count exceeds context marginal")


def _train_replay(tuple_path, marginals: Marginals, config: TrainConfig,
                  num_buckets: int, workdir, update_log, chunk_lines: int):
    """Shared MI/SI replay loop over a tuple file.

    Per pass the file is reshuffled and each tuple applies its ``tot``
    updates consecutively; the pair's target is its PPMI recomputed from
    (corpus_count, marginals) for '+' tuples and zero for '-'. Every update
    advances the same global linear learning-rate schedule as the in-memory
    loop, so a single-key file trains identically under MI and SI.
    """
    smoothing = SmoothingConfig.from_marginals(marginals.col, config.cds_alpha)
    rows = marginals.row_marginals
    per_pass = count_scheduled_updates(tuple_path, chunk_lines)
    if per_pass == 0:
        raise IntegrityError(f"{tuple_path} schedules no updates")
    total = per_pass * config.iterations
    emb = init_embeddings(marginals.num_words, marginals.num_contexts,
                          config.dim, derive_rng(config.seed, "init"))
    shuffle_rng = derive_rng(config.seed, "shuffle")
    step = 0
    for epoch in range(config.iterations):
        shuffled = os.path.join(workdir, f"pass{epoch}.txt")
        shuffle_file(tuple_path, shuffled, num_buckets, shuffle_rng)
        logged = [] if update_log is not None else None
        for w, c, flags, tot, cc in _iter_tuple_chunks(shuffled, chunk_lines):
            _check_chunk(shuffled, w, c, flags, tot, cc, marginals)
            targets = ppmi_from_counts(cc, rows[w],
                                       smoothing.smoothed_col_marginals[c],
                                       smoothing.smoothed_total)
            n_chunk = int(tot.sum())
            ws_run = np.repeat(w, tot)
            cs_run = np.repeat(c, tot)
            t_run = np.repeat(targets, tot)
            lrs = lr_values(config.lr, total, step, n_chunk)
            apply_update_block(emb, ws_run, cs_run, t_run, lrs, config.threads)
            step += n_chunk
            if logged is not None:
                logged.append((ws_run, cs_run, t_run))
        os.remove(shuffled)
        if update_log is not None:
            update_log.append(tuple(np.concatenate(parts) for parts in zip(*logged)))
    return emb


def train_mi(collapsed_path, marginals: Marginals, config: TrainConfig,
             num_buckets: int = 16, workdir=None, update_log=None,
             chunk_lines: int = 200_000) -> EmbeddingPair:
    """Multiple Iteration replay of a collapsed pair file."""
    if workdir is None:
        with tempfile.TemporaryDirectory(prefix="pmivec-mi-") as tmp:
            return _train_replay(collapsed_path, marginals, config,
                                 num_buckets, tmp, update_log, chunk_lines)
    return _train_replay(collapsed_path, marginals, config, num_buckets,
                         workdir, update_log, chunk_lines)


def train_si(collapsed_path, marginals: Marginals, config: TrainConfig,
             num_buckets: int = 16, workdir=None, update_log=None,
             chunk_lines: int = 200_000) -> EmbeddingPair:
    """Single Iteration replay: expand every tuple to ``tot`` single-update
    lines, then run the MI loop on the expanded file. The per-pass update
    multiset is identical to MI's; only the ordering differs."""
    def run(tmp):
        expanded = os.path.join(tmp, "expanded.txt")
        expand_si(collapsed_path, expanded)
        return _train_replay(expanded, marginals, config, num_buckets,
                             tmp, update_log, chunk_lines)

    if workdir is None:
        with tempfile.TemporaryDirectory(prefix="pmivec-si-") as tmp:
            return run(tmp)
    return run(workdir)
