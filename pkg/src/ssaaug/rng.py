"""Deterministic random streams and seed derivation."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Union

import numpy as np

ALGORITHM_ID = "PCG64"


@dataclass(frozen=True)
class RngState:
    """A seed plus the bit generator it feeds.

    Two states with the same seed and algorithm produce bit-identical
    uniform and normal streams.
    """

    seed: int
    algorithm_id: str = ALGORITHM_ID

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        if self.algorithm_id != ALGORITHM_ID:
            raise ValueError(f"unsupported generator {self.algorithm_id!r}")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


RngLike = Union[np.random.Generator, RngState, int]


def as_generator(rng: RngLike) -> np.random.Generator:
    """Coerce a seed, an RngState or a live Generator into a Generator.

    A Generator passed in is used as-is (and advanced by the caller's draws).
    """
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngState):
        return rng.generator()
    if isinstance(rng, (int, np.integer)) and not isinstance(rng, bool):
        return RngState(int(rng)).generator()
    raise TypeError(f"expected a seed, RngState or numpy Generator, got {type(rng).__name__}")


def derive_seed(base_seed: int, *parts) -> int:
    """Stable 64-bit seed from a base seed and any number of str/int parts.

    Independent of call order and of Python's per-process hash salt, so work
    units can be generated in any order with identical results.
    """
    key = ":".join([str(int(base_seed))] + [str(p) for p in parts]).encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
