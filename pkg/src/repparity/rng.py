"""Seeded, hierarchically labeled randomness.

A :class:`RandomnessHandle` is a 256-bit master seed plus a path of labels.
Deriving a child never consumes anything from the parent, so two algorithm
runs that receive the same handle see identical coin tosses for every named
substream they derive. Each handle drives a Philox4x64 counter generator whose
128-bit key is a SHA-256 digest of (seed, path).

Every draw procedure consumes a fixed number of 64-bit words:

* ``uniform``      one word (53-bit mantissa)
* ``below(n)``     one word (multiply-high reduction, bias at most n / 2**64)
* ``bits(k)``      ceil(k / 64) words
"""

from __future__ import annotations

import hashlib
import os
from typing import Union

import numpy as np

Label = Union[str, int]

SEED_ENV_VAR = "REPPARITY_SEED"
_SEED_BITS = 256


def normalize_seed(seed: int | str | bytes) -> bytes:
    """Return the 32-byte master seed for an int, decimal/hex string, or bytes."""
    if isinstance(seed, bytes):
        if len(seed) != 32:
            raise ValueError("byte seeds must be exactly 32 bytes")
        return seed
    if isinstance(seed, str):
        text = seed.strip().lower()
        seed = int(text, 16) if text.startswith("0x") else int(text)
    if not 0 <= seed < 1 << _SEED_BITS:
        raise ValueError(f"seed must lie in [0, 2**{_SEED_BITS})")
    return seed.to_bytes(32, "big")


def default_seed() -> int:
    """Seed from the environment override, else 0."""
    raw = os.environ.get(SEED_ENV_VAR)
    return int(raw, 0) if raw else 0


def _encode_label(label: Label) -> bytes:
    # Type tag + length prefix keeps the path encoding injective.
    if isinstance(label, bool) or not isinstance(label, (str, int)):
        raise TypeError(f"labels must be str or int, got {type(label).__name__}")
    if isinstance(label, int):
        body = str(label).encode()
        tag = b"i"
    else:
        body = label.encode("utf-8")
        tag = b"s"
    return tag + len(body).to_bytes(4, "big") + body


class RandomnessHandle:
    """A named substream of a master seed."""

    __slots__ = ("_seed", "_path", "_bitgen", "_consumed")

    def __init__(self, seed: int | str | bytes = 0, path: tuple[Label, ...] = ()):
        self._seed = normalize_seed(seed)
        self._path = tuple(path)
        for label in self._path:
            _encode_label(label)
        self._bitgen: np.random.Philox | None = None
        self._consumed = 0

    @property
    def seed(self) -> int:
        return int.from_bytes(self._seed, "big")

    @property
    def path(self) -> tuple[Label, ...]:
        return self._path

    @property
    def path_str(self) -> str:
        return "/".join(str(p) for p in self._path)

    @property
    def words_consumed(self) -> int:
        return self._consumed

    def __repr__(self) -> str:
        return f"RandomnessHandle(seed=0x{self._seed.hex()[:8]}..., path={self.path_str!r})"

    def child(self, *labels: Label) -> "RandomnessHandle":
        """Fresh handle for the substream ``path + labels`` (parent untouched)."""
        return RandomnessHandle(self._seed, self._path + labels)

    def _key(self) -> int:
        h = hashlib.sha256(b"repparity/v1")
        h.update(self._seed)
        for label in self._path:
            h.update(_encode_label(label))
        return int.from_bytes(h.digest()[:16], "little")

    def words(self, n: int) -> np.ndarray:
        """Next ``n`` raw 64-bit words as a uint64 array."""
        if n < 0:
            raise ValueError("n must be non-negative")
        if self._bitgen is None:
            self._bitgen = np.random.Philox(key=self._key())
        self._consumed += n
        if n == 0:
            return np.zeros(0, dtype=np.uint64)
        return np.asarray(self._bitgen.random_raw(n), dtype=np.uint64)

    def word(self) -> int:
        return int(self.words(1)[0])

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        """Uniform real in [low, high) from exactly one word."""
        u = (self.word() >> 11) * (1.0 / (1 << 53))
        return low + (high - low) * u

    def below(self, n: int) -> int:
        """Integer in [0, n) from exactly one word."""
        if n <= 0:
            raise ValueError("n must be positive")
        return (self.word() * n) >> 64

    def bits(self, k: int) -> int:
        """``k`` independent fair bits packed into an int (bit i = i-th draw)."""
        if k < 0:
            raise ValueError("k must be non-negative")
        out = 0
        for i, w in enumerate(self.words((k + 63) // 64)):
            out |= int(w) << (64 * i)
        return out & ((1 << k) - 1)

    def uniforms(self, n: int) -> np.ndarray:
        """``n`` uniforms in [0, 1), one word each."""
        return (self.words(n) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
