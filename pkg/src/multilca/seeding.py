"""Deterministic RNG stream derivation.

A single master seed expands into independent per-purpose streams via a
stable 64-bit hash of a tag tuple, so every replication / purpose can be
regenerated in isolation and tasks can run in parallel without sharing
generator state.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _canon(part) -> str:
    # repr() keeps float tags stable across runs ("0.1", not locale-dependent)
    if isinstance(part, float):
        return repr(part)
    if isinstance(part, (int, np.integer)):
        return str(int(part))
    return str(part)


def derive_seed(*parts) -> int:
    """Stable 64-bit seed for a tag tuple (master seed, purpose, ...)."""
    text = "\x1f".join(_canon(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def stream(*parts) -> np.random.Generator:
    """Independent PCG64 generator keyed by the tag tuple."""
    return np.random.Generator(np.random.PCG64(derive_seed(*parts)))


def substreams(rng: np.random.Generator, count: int) -> list[np.random.Generator]:
    """Split `count` child generators off `rng`, deterministically."""
    seeds = rng.integers(0, 2**63, size=count, dtype=np.uint64)
    return [np.random.Generator(np.random.PCG64(int(s))) for s in seeds]
