"""Deterministic per-task seed derivation.

Seeds are stable hashes of (master seed, task coordinates), so any
parallel schedule reproduces the same random streams and reruns are
bit-identical regardless of worker count or execution order.
"""

from __future__ import annotations

import hashlib

__all__ = ["derive_seed"]


def derive_seed(master_seed: int, *coords) -> int:
    """64-bit seed from SHA-256 of the master seed and task coordinates."""
    key = "|".join([str(int(master_seed))] + [repr(c) for c in coords])
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little")
