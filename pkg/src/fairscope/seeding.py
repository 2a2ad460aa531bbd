"""Deterministic seed derivation for pipeline stages and k-means restarts.

All randomness in the package flows through ``numpy.random.default_rng``
(PCG64), seeded with 64-bit integers produced here. Derivation hashes the
master seed together with a stage label and an index through SHA-256, so
streams are independent, reproducible, and platform-stable.
"""

from __future__ import annotations

import hashlib

MAX_SEED = 2**64 - 1


def check_seed(seed: int, name: str = "seed") -> int:
    from .errors import ConfigError

    if not isinstance(seed, int) or not (0 <= seed <= MAX_SEED):
        raise ConfigError(f"{name} must be an unsigned 64-bit integer, got {seed!r}")
    return seed


def derive_seed(master: int, stage: str, index: int = 0) -> int:
    """First 8 bytes (big-endian) of SHA-256("fairscope:{master}:{stage}:{index}")."""
    digest = hashlib.sha256(f"fairscope:{master}:{stage}:{index}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")
