"""Counter-based splittable random number generator.

All randomness in the toolkit flows through explicit :class:`Key` values;
there is no hidden generator state. Keys can be split into independent
subkeys, folded with integers to derive per-iteration or per-worker keys,
and used to draw uniform / normal tensors. Every operation is a pure
function of its arguments, so keys are safe to copy into any number of
concurrent workers.

The block function is Threefry-2x64 with 20 rounds (128-bit key, 128-bit
counter). Derivation operations use disjoint counter domains, so subkeys
produced by ``split``, ``fold_in`` and the drawing functions can never
collide with one another under the same parent key.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Key", "new_key", "split", "fold_in", "uniform", "normal", "random_words"]

_MASK64 = 0xFFFFFFFFFFFFFFFF

# Threefry-2x64 constants (Skein key-schedule parity constant and the
# standard rotation schedule).
_C240 = np.uint64(0x1BD11BDAA9FC1A22)
_ROTATIONS = (16, 42, 12, 31, 16, 32, 24, 21)
_N_ROUNDS = 20

# Counter domains (high word of the 128-bit counter) for the derivation
# functions. Distinct domains keep split/fold_in/draw streams disjoint.
_DOMAIN_SPLIT = np.uint64(0)
_DOMAIN_FOLD = np.uint64(1)
_DOMAIN_DRAW = np.uint64(2)


@dataclass(frozen=True)
class Key:
    """128-bit random key. A value type: equal iff both words are equal."""

    hi: int
    lo: int

    def __post_init__(self):
        object.__setattr__(self, "hi", self.hi & _MASK64)
        object.__setattr__(self, "lo", self.lo & _MASK64)

    def __repr__(self) -> str:
        return f"Key({self.hi:016x}, {self.lo:016x})"


def _rotl(x: np.ndarray, r: int) -> np.ndarray:
    r = np.uint64(r)
    return (x << r) | (x >> (np.uint64(64) - r))


def _threefry(k0: np.uint64, k1: np.uint64, c0: np.ndarray, c1: np.ndarray):
    """Apply the Threefry-2x64-20 block function to counter arrays.

    ``c0``/``c1`` are uint64 arrays of equal shape; returns the two output
    word arrays. For a fixed key the map (c0, c1) -> output is a bijection,
    which is what guarantees distinctness of derived keys.
    """
    ks = (k0, k1, k0 ^ k1 ^ _C240)
    x0 = c0 + ks[0]
    x1 = c1 + ks[1]
    for r in range(_N_ROUNDS):
        x0 = x0 + x1
        x1 = _rotl(x1, _ROTATIONS[r % 8]) ^ x0
        if (r + 1) % 4 == 0:
            s = (r + 1) // 4
            x0 = x0 + ks[s % 3]
            x1 = x1 + ks[(s + 1) % 3] + np.uint64(s)
    return x0, x1


def _block(key: Key, domain: np.uint64, indices: np.ndarray):
    c0 = np.full(indices.shape, domain, dtype=np.uint64)
    return _threefry(np.uint64(key.hi), np.uint64(key.lo), c0, indices)


def new_key(seed: int) -> Key:
    """Create a Key from an unsigned 64-bit seed.

    The seed is diffused through the block function under a fixed zero key,
    so nearby seeds yield unrelated keys. Distinct seeds always give
    distinct keys.
    """
    counter = np.array([seed & _MASK64], dtype=np.uint64)
    zero = np.zeros(1, dtype=np.uint64)
    hi, lo = _threefry(np.uint64(0), np.uint64(0), zero, counter)
    return Key(int(hi[0]), int(lo[0]))


def split(key: Key, n: int) -> list[Key]:
    """Derive ``n`` pairwise-distinct subkeys from ``key``.

    ``split(k, n)`` is a prefix of ``split(k, n + 1)``: child ``i`` depends
    only on ``(key, i)``.
    """
    if n < 1:
        raise ValueError(f"split requires n >= 1, got {n}")
    idx = np.arange(n, dtype=np.uint64)
    hi, lo = _block(key, _DOMAIN_SPLIT, idx)
    return [Key(int(h), int(l)) for h, l in zip(hi, lo)]


def fold_in(key: Key, data: int) -> Key:
    """Derive a new key by folding an unsigned 64-bit integer into ``key``.

    Distinct ``data`` values always yield distinct keys.
    """
    idx = np.array([data & _MASK64], dtype=np.uint64)
    hi, lo = _block(key, _DOMAIN_FOLD, idx)
    return Key(int(hi[0]), int(lo[0]))


def random_words(key: Key, n: int) -> np.ndarray:
    """Return ``n`` raw 64-bit words drawn under ``key`` (uint64 array)."""
    n_blocks = (n + 1) // 2
    idx = np.arange(n_blocks, dtype=np.uint64)
    hi, lo = _block(key, _DOMAIN_DRAW, idx)
    words = np.empty(2 * n_blocks, dtype=np.uint64)
    words[0::2] = hi
    words[1::2] = lo
    return words[:n]


def _as_shape(shape) -> tuple[int, ...]:
    if isinstance(shape, (int, np.integer)):
        return (int(shape),)
    return tuple(int(s) for s in shape)


def _uniform_01(key: Key, n: int) -> np.ndarray:
    """n float32 uniforms in [0, 1), one per 32-bit half-word (24-bit mantissa)."""
    n_words = (n + 1) // 2
    words = random_words(key, n_words)
    halves = np.empty(2 * n_words, dtype=np.uint32)
    halves[0::2] = (words >> np.uint64(32)).astype(np.uint32)
    halves[1::2] = words.astype(np.uint32)
    bits24 = (halves[:n] >> np.uint32(8)).astype(np.float32)
    return bits24 * np.float32(2.0**-24)


def uniform(key: Key, shape, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    """Draw a float32 tensor of uniforms in ``[lo, hi)``."""
    if not lo < hi:
        raise ValueError(f"uniform requires lo < hi, got lo={lo}, hi={hi}")
    shape = _as_shape(shape)
    n = int(np.prod(shape))
    u = _uniform_01(key, max(1, n))
    lo32 = np.float32(lo)
    hi32 = np.float32(hi)
    vals = lo32 + u * (hi32 - lo32)
    # float32 rounding at the top of the range must not produce hi itself
    vals = np.minimum(vals, np.nextafter(hi32, lo32))
    return vals[:n].reshape(shape)


def normal(key: Key, shape) -> np.ndarray:
    """Draw a float32 tensor of standard normal variates.

    Uses the Box-Muller transform on consecutive uniform pairs; the first
    uniform of each pair is shifted into (0, 1] so the log is finite.
    """
    shape = _as_shape(shape)
    n = int(np.prod(shape))
    n_pairs = (max(1, n) + 1) // 2
    u = _uniform_01(key, 2 * n_pairs).astype(np.float64)
    u1 = u[0::2] + 2.0**-24  # (0, 1]
    u2 = u[1::2]
    r = np.sqrt(-2.0 * np.log(u1))
    theta = (2.0 * np.pi) * u2
    z = np.empty(2 * n_pairs, dtype=np.float64)
    z[0::2] = r * np.cos(theta)
    z[1::2] = r * np.sin(theta)
    return z[:n].astype(np.float32).reshape(shape)
