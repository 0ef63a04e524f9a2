"""Reproducible random-stream derivation.

Every random draw in the package comes from a stream derived from a single
master seed plus a purpose tag (and optional indices).  Derivation hashes
the tag with SHA-256, so streams are stable across platforms and Python
processes, and independent use sites never share a stream.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _tag_words(tag: str) -> tuple[int, ...]:
    digest = hashlib.sha256(tag.encode("utf-8")).digest()
    return tuple(int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4))


def derive_rng(master_seed: int, tag: str, *indices: int) -> np.random.Generator:
    """Return a Generator for (master_seed, tag, *indices).

    The same arguments always give the same stream, regardless of how many
    other streams were derived before it.
    """
    entropy = (int(master_seed) & 0xFFFFFFFFFFFFFFFF,) + _tag_words(tag) + tuple(
        int(i) & 0xFFFFFFFFFFFFFFFF for i in indices
    )
    return np.random.default_rng(np.random.SeedSequence(entropy))
