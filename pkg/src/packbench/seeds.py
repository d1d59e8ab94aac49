"""Stable seed derivation for nested randomized stages.

Every randomized component (host generation, oracle sweeps, partition
resampling, adversary set choice) gets its own 64-bit seed derived from a
base seed plus a label path.  Derivation goes through sha256 so that seeds
for different labels are unrelated and the mapping is identical across
platforms and runs.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction

MAX_SEED = 2**64


def _canon(part) -> str:
    if isinstance(part, bool):
        return "true" if part else "false"
    if isinstance(part, int):
        return str(part)
    if isinstance(part, float):
        # repr round-trips doubles exactly, so the derived seed does too
        return repr(part)
    if isinstance(part, Fraction):
        return f"{part.numerator}/{part.denominator}"
    if isinstance(part, str):
        return part
    raise TypeError(f"unsupported seed part {part!r}")


def stable_seed(*parts) -> int:
    """Derive a 64-bit seed from a sequence of labels and numbers.

    Parts are canonicalized to strings, joined with '|', hashed with
    sha256; the first 8 bytes (big-endian) become the seed.
    """
    if not parts:
        raise ValueError("stable_seed needs at least one part")
    payload = "|".join(_canon(p) for p in parts)
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def check_seed(seed: int) -> int:
    """Validate a user-supplied seed (non-negative, fits in 64 bits)."""
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if not 0 <= seed < MAX_SEED:
        raise ValueError(f"seed must be in [0, 2^64), got {seed}")
    return seed
