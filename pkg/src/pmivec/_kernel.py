"""Compiled SGD inner loop shared by every training path."""

import numba
import numpy as np


@numba.njit(cache=True, nogil=True)
def update_one(W, Wc, w, c, target, lr):
    # Squared-error step on one (word, context) row pair. Both rows are
    # updated from their pre-update values; returns the loss before the step.
    d = W.shape[1]
    dot = 0.0
    for j in range(d):
        dot += W[w, j] * Wc[c, j]
    err = dot - target
    g = lr * err
    for j in range(d):
        tmp = W[w, j]
        W[w, j] -= g * Wc[c, j]
        Wc[c, j] -= g * tmp
    return 0.5 * err * err


@numba.njit(cache=True, nogil=True)
def apply_updates(W, Wc, ws, cs, targets, lrs):
    loss = 0.0
    for i in range(ws.shape[0]):
        loss += update_one(W, Wc, ws[i], cs[i], targets[i], lrs[i])
    return loss


def warmup():
    """Force compilation ahead of timing-sensitive sections."""
    W = np.zeros((1, 1))
    Wc = np.zeros((1, 1))
    one = np.zeros(1, dtype=np.int64)
    apply_updates(W, Wc, one, one, np.zeros(1), np.zeros(1))
