"""Deterministic random streams.

All randomness in the package flows through Philox4x64, a counter-based
generator, keyed directly with a 64-bit seed.  Child seeds are derived from
(parent seed, tag...) with splitmix64, so independent consumers (sketch
operators, generated problems, benchmark cells) get decorrelated streams
without sharing state.  Gaussian variates come from numpy's ziggurat
implementation of ``standard_normal``.  Bitwise reproducibility is
guaranteed for a fixed seed within one build of numpy.
"""

from __future__ import annotations

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(z: int) -> int:
    """One splitmix64 step: a bijective 64-bit mix with good avalanche."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def derive_seed(seed: int, *tags: int | str) -> int:
    """Fold ``tags`` into ``seed``, producing a decorrelated 64-bit child seed.

    String tags are absorbed bytewise so that e.g. ("saa",) and ("sap",)
    always yield different streams.
    """
    state = splitmix64(seed & _MASK64)
    for tag in tags:
        if isinstance(tag, str):
            for byte in tag.encode("utf-8"):
                state = splitmix64(state ^ byte)
        else:
            state = splitmix64(state ^ (int(tag) & _MASK64))
    return state


def stream(seed: int) -> np.random.Generator:
    """A Philox-backed Generator keyed with the raw 64-bit seed."""
    return np.random.Generator(np.random.Philox(key=seed & _MASK64))
