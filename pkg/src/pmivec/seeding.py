"""Labeled sub-seed derivation.

Every randomized stage (init, subsampling, negative draws, shuffles) gets its
own generator derived from the master seed and a stage label, so adding or
reordering stages never perturbs another stage's stream.
"""

import hashlib

import numpy as np


def derive_rng(seed: int, label: str) -> np.random.Generator:
    """Return a generator seeded by ``(seed, sha256(label))``.

    Stable across processes and platforms (no reliance on Python's hash()).
    """
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    label_entropy = int.from_bytes(digest[:8], "little")
    return np.random.default_rng(np.random.SeedSequence([int(seed), label_entropy]))
