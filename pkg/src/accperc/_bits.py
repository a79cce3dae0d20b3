"""Counter-based 64-bit mixing primitives shared by the landscape generator
and the Monte Carlo kernels.

Every random quantity is a pure function of (root seed, trial index, counter),
so regeneration is bit-identical regardless of worker count or call order.
The mixer is the SplitMix64 finalizer, applied twice for the stream key.
"""

from __future__ import annotations

import numpy as np
from numba import njit, uint64

_GOLD = uint64(0x9E3779B97F4A7C15)
_MIX1 = uint64(0xBF58476D1CE4E5B9)
_MIX2 = uint64(0x94D049BB133111EB)
_INV53 = float(2.0**-53)


@njit(uint64(uint64), cache=True, nogil=True, inline="always")
def mix64(z):
    z = (z ^ (z >> uint64(30))) * _MIX1
    z = (z ^ (z >> uint64(27))) * _MIX2
    return z ^ (z >> uint64(31))


@njit(uint64(uint64, uint64), cache=True, nogil=True)
def stream_key(root, trial):
    """Disjoint reproducible stream per (root seed, trial index)."""
    h = mix64(root + _GOLD)
    return mix64(h ^ (trial * _GOLD + uint64(0x6A09E667F3BCC909)))


@njit(uint64(uint64, uint64), cache=True, nogil=True, inline="always")
def raw_bits(key, counter):
    return mix64(key + counter * _GOLD)


@njit(cache=True, nogil=True, inline="always")
def unit_open(key, counter):
    """Uniform double strictly inside (0, 1) with 53-bit resolution."""
    return (float(raw_bits(key, counter) >> uint64(11)) + 0.5) * _INV53


@njit(uint64(uint64), cache=True, nogil=True, inline="always")
def popcount64(x):
    x = x - ((x >> uint64(1)) & uint64(0x5555555555555555))
    x = (x & uint64(0x3333333333333333)) + ((x >> uint64(2)) & uint64(0x3333333333333333))
    x = (x + (x >> uint64(4))) & uint64(0x0F0F0F0F0F0F0F0F)
    return (x * uint64(0x0101010101010101)) >> uint64(56)
