"""Counter-based random numbers keyed by (seed, node_id, step).

Every uniform draw is a pure function of its triple, so nodes can be
sampled in any order, in any batch shape, and the trajectory does not
depend on how the work was split up. The generator is Philox4x64-10,
the same block cipher numpy ships as ``np.random.Philox``; it is
re-implemented here in vectorized form because numpy only exposes it as
a sequential stream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["RngStream", "philox4x64", "uniform_pm1", "child_generator"]

_MASK32 = np.uint64(0xFFFFFFFF)
_SHIFT32 = np.uint64(32)
_M0 = np.uint64(0xD2E7470EE14C6C93)
_M1 = np.uint64(0xCA5A826395121157)
_W0 = np.uint64(0x9E3779B97F4A7C15)
_W1 = np.uint64(0xBB67AE8584CAA73B)

# Second key word separates this stream family from other users of the seed.
_KEY_TAG = 0x70626974  # "pbit"


def _mulhilo(a, b):
    a_lo, a_hi = a & _MASK32, a >> _SHIFT32
    b_lo, b_hi = b & _MASK32, b >> _SHIFT32
    t = a_lo * b_lo
    u = a_hi * b_lo + (t >> _SHIFT32)
    v = a_lo * b_hi + (u & _MASK32)
    hi = a_hi * b_hi + (u >> _SHIFT32) + (v >> _SHIFT32)
    return hi, a * b


def philox4x64(counter, key):
    """Philox4x64-10 block function.

    ``counter`` is a sequence of four uint64 arrays (broadcastable),
    ``key`` a pair of uint64 scalars or arrays. Returns four uint64 arrays.
    """
    with np.errstate(over="ignore"):
        c0, c1, c2, c3 = (np.asarray(c, dtype=np.uint64) for c in counter)
        k0, k1 = (np.asarray(k, dtype=np.uint64) for k in key)
        for rnd in range(10):
            if rnd:
                k0 = k0 + _W0
                k1 = k1 + _W1
            hi0, lo0 = _mulhilo(_M0, c0)
            hi1, lo1 = _mulhilo(_M1, c2)
            c0, c1, c2, c3 = hi1 ^ c1 ^ k0, lo1, hi0 ^ c3 ^ k1, lo0
    return c0, c1, c2, c3


def uniform_pm1(seed: int, node_id, step) -> np.ndarray:
    """Uniform samples on [-1, 1) for every (node_id, step) pair.

    ``node_id`` and ``step`` broadcast against each other. Resolution is
    53 bits.
    """
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    node_id = np.asarray(node_id, dtype=np.uint64)
    step = np.asarray(step, dtype=np.uint64)
    node_id, step = np.broadcast_arrays(node_id, step)
    zero = np.zeros_like(step)
    word, _, _, _ = philox4x64((step, node_id, zero, zero), (np.uint64(seed), np.uint64(_KEY_TAG)))
    return (word >> np.uint64(11)).astype(np.float64) * 2.0**-52 - 1.0


@dataclass(frozen=True)
class RngStream:
    """Address of one uniform draw: ``(seed, node_id, step)``."""

    seed: int
    node_id: int = 0
    step: int = 0

    def uniform(self) -> float:
        return float(uniform_pm1(self.seed, self.node_id, self.step))

    def at(self, step: int) -> "RngStream":
        return RngStream(self.seed, self.node_id, step)


def child_generator(seed: int, purpose: str) -> np.random.Generator:
    """Sequential numpy Generator for bulk draws (weights, symbols, channel noise).

    Each ``purpose`` gets an independent stream derived from ``seed``.
    """
    tag = int.from_bytes(purpose.encode()[:8].ljust(8, b"\0"), "little")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(tag,))))
