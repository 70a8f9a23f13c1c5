"""Counter-based Gaussian generator.

A draw is a pure function of (seed, stream, index, draw number): the four
keys are folded through the SplitMix64 finalizer, the top 53 bits become a
uniform in (0, 1), and pairs of uniforms go through Box–Muller. No state is
carried between draws, so any sample can be regenerated in isolation and
work can be split across processes without changing results.

Two implementations share the integer pipeline: a pure-Python one (used by
the exact-solver models) and a numpy one (used by the tensor ensemble).
They agree exactly on the integer hashes and to within 1 ulp on the floats.
"""
from __future__ import annotations

import math

import numpy as np

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_TWO53 = 2.0 ** -53


def splitmix64(z: int) -> int:
    z = (z + GOLDEN) & MASK
    z = ((z ^ (z >> 30)) * _M1) & MASK
    z = ((z ^ (z >> 27)) * _M2) & MASK
    return z ^ (z >> 31)


def hash_key(seed: int, stream: int, index: int, draw: int) -> int:
    h = splitmix64(seed & MASK)
    h = splitmix64(h ^ (stream & MASK))
    h = splitmix64(h ^ (index & MASK))
    return splitmix64(h ^ (draw & MASK))


def uniform(seed: int, stream: int, index: int, draw: int) -> float:
    return ((hash_key(seed, stream, index, draw) >> 11) + 0.5) * _TWO53


def normal(seed: int, stream: int, index: int, j: int) -> float:
    """j-th standard normal of a sample."""
    p, which = divmod(j, 2)
    u1 = uniform(seed, stream, index, 2 * p)
    u2 = uniform(seed, stream, index, 2 * p + 1)
    r = math.sqrt(-2.0 * math.log(u1))
    t = 2.0 * math.pi * u2
    return r * (math.cos(t) if which == 0 else math.sin(t))


def normals(seed: int, stream: int, index: int, count: int):
    out = []
    for p in range((count + 1) // 2):
        u1 = uniform(seed, stream, index, 2 * p)
        u2 = uniform(seed, stream, index, 2 * p + 1)
        r = math.sqrt(-2.0 * math.log(u1))
        t = 2.0 * math.pi * u2
        out.append(r * math.cos(t))
        out.append(r * math.sin(t))
    return out[:count]


# ------------------------------------------------------------ numpy version

def _splitmix64_np(z: np.ndarray) -> np.ndarray:
    z = z + np.uint64(GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def hash_key_np(seed: int, stream: int, index: np.ndarray, draw: int) -> np.ndarray:
    with np.errstate(over="ignore"):
        h = np.uint64(splitmix64(splitmix64(seed & MASK) ^ (stream & MASK)))
        h = _splitmix64_np(np.asarray(index, dtype=np.uint64) ^ h)
        return _splitmix64_np(h ^ np.uint64(draw & MASK))


def uniform_np(seed: int, stream: int, index: np.ndarray, draw: int) -> np.ndarray:
    h = hash_key_np(seed, stream, index, draw)
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * _TWO53


def normals_np(seed: int, stream: int, index: np.ndarray, count: int) -> np.ndarray:
    """Array of shape (count, len(index))."""
    index = np.asarray(index, dtype=np.uint64)
    out = np.empty(((count + 1) // 2 * 2, index.shape[0]))
    for p in range((count + 1) // 2):
        u1 = uniform_np(seed, stream, index, 2 * p)
        u2 = uniform_np(seed, stream, index, 2 * p + 1)
        r = np.sqrt(-2.0 * np.log(u1))
        t = 2.0 * np.pi * u2
        out[2 * p] = r * np.cos(t)
        out[2 * p + 1] = r * np.sin(t)
    return out[:count]
