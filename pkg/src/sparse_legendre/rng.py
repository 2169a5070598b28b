"""Deterministic random streams.

Every random object in the package is generated from a 64-bit integer seed
through ``numpy.random.Generator(Philox(seed))``.  Philox4x64-10 is a
counter-based generator; numpy keys it from ``SeedSequence(seed)``, so a
stream depends only on its seed and never on scheduling.

Child seeds are derived by hashing a master seed together with a path of
labels (strings or integers) with BLAKE2b-64, e.g.
``derive_seed(master, "fig1", "case-i", s, trial)``.
"""
from __future__ import annotations

import hashlib
import struct

import numpy as np

SEED_MASK = (1 << 64) - 1


def _encode(part) -> bytes:
    if isinstance(part, (bool, np.bool_)):
        part = int(part)
    if isinstance(part, (int, np.integer)):
        return b"i" + struct.pack("<Q", int(part) & SEED_MASK)
    if isinstance(part, str):
        raw = part.encode("utf-8")
        return b"s" + struct.pack("<I", len(raw)) + raw
    raise TypeError(f"seed path elements must be int or str, got {type(part).__name__}")


def derive_seed(master: int, *path) -> int:
    """Hash ``(master, *path)`` to a 64-bit seed."""
    h = hashlib.blake2b(digest_size=8)
    h.update(_encode(int(master)))
    for part in path:
        h.update(_encode(part))
    return int.from_bytes(h.digest(), "little")


def generator(seed: int) -> np.random.Generator:
    """Philox-backed generator for a 64-bit seed."""
    return np.random.Generator(np.random.Philox(int(seed) & SEED_MASK))


def stream(master: int, *path) -> np.random.Generator:
    """Generator for the substream ``derive_seed(master, *path)``."""
    return generator(derive_seed(master, *path))
