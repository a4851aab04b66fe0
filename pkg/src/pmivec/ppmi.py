"""Positive pointwise mutual information, computed on demand from counts.

No dense association matrix is ever materialized by the training paths; every
value is derived from the joint count, the word marginal, and a (possibly
smoothed) context marginal:

    pmi(w, c)  = log( (M_wc / M_**) / ((M_w* / M_**) * q(c)) )
    ppmi(w, c) = max(0, pmi(w, c))

where ``q`` is the context distribution. With smoothing exponent ``alpha``,
``q(c) = M_*c^alpha / sum_c M_*c^alpha``, which dampens frequent contexts;
``alpha = 1`` is exactly the unsmoothed definition. A zero joint count always
yields 0 (the -inf case clamps).
"""

from dataclasses import dataclass

import numpy as np

from .errors import IntegrityError


@dataclass
class SmoothingConfig:
    """Precomputed smoothed context marginals ``M_*c^alpha`` and their sum."""

    cds_alpha: float
    smoothed_col_marginals: np.ndarray
    smoothed_total: float

    @classmethod
    def from_marginals(cls, col_marginals, cds_alpha: float = 0.75):
        if not 0.0 < cds_alpha <= 1.0:
            raise ValueError(f"cds_alpha must be in (0, 1], got {cds_alpha}")
        smoothed = np.asarray(col_marginals, dtype=np.float64) ** cds_alpha
        return cls(cds_alpha=cds_alpha,
                   smoothed_col_marginals=smoothed,
                   smoothed_total=float(smoothed.sum()))


def ppmi_from_counts(joint, row_marginal, smoothed_col, smoothed_total):
    """Vectorized PPMI from raw ingredients. All paths (in-memory and
    external replay) compute their targets through this one function, so
    equal counts give bit-identical values."""
    joint = np.asarray(joint, dtype=np.float64)
    row = np.asarray(row_marginal, dtype=np.float64)
    col = np.asarray(smoothed_col, dtype=np.float64)
    joint, row, col = np.broadcast_arrays(joint, row, col)
    out = np.zeros(joint.shape, dtype=np.float64)
    pos = joint > 0
    if np.any(pos):
        denom = row[pos] * col[pos]
        if np.any(denom <= 0):
            raise IntegrityError(
                "positive pair count with a zero marginal; counts are inconsistent")
        out[pos] = np.maximum(0.0, np.log(joint[pos] * smoothed_total / denom))
    return out


def ppmi_value(stats, smoothing: SmoothingConfig, w: int, c: int) -> float:
    """PPMI of one (word, context) cell of ``stats``."""
    if not 0 <= w < stats.num_words:
        raise IndexError(f"word id {w} out of range")
    if not 0 <= c < stats.num_contexts:
        raise IndexError(f"context id {c} out of range")
    joint = stats.count(w, c)
    return float(ppmi_from_counts(
        np.array([joint], dtype=np.float64),
        np.array([stats.row_marginals[w]], dtype=np.float64),
        np.array([smoothing.smoothed_col_marginals[c]], dtype=np.float64),
        smoothing.smoothed_total)[0])


def ppmi_targets(stats, smoothing: SmoothingConfig, ws, cs) -> np.ndarray:
    """PPMI for many (word, context) pairs at once."""
    joint = stats.counts_for(ws, cs)
    return ppmi_from_counts(joint, stats.row_marginals[ws],
                            smoothing.smoothed_col_marginals[cs],
                            smoothing.smoothed_total)


def ppmi_matrix(stats, smoothing: SmoothingConfig, max_cells: int = 50_000_000):
    """Dense PPMI matrix, for exact loss sweeps on small instances only."""
    cells = stats.num_words * stats.num_contexts
    if cells > max_cells:
        raise ValueError(
            f"refusing dense sweep of {cells} cells (limit {max_cells})")
    joint = np.asarray(stats.counts.todense(), dtype=np.float64)
    return ppmi_from_counts(joint,
                            stats.row_marginals[:, None].astype(np.float64),
                            smoothing.smoothed_col_marginals[None, :],
                            smoothing.smoothed_total)
