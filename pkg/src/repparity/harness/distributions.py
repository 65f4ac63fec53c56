"""Synthetic sample generators over GF(2)^d (d <= 64)."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ..gf2 import BitVec, Subspace, contains_int, rref_ints
from ..parity import LabeledSample
from ..rng import RandomnessHandle
from ..wrapper import DataExhaustedError
from .datafile import read_dataset

KINDS = ("uniform-full", "planted-subspace", "point-mass-mixture", "from-file")
MAX_D = 64


@dataclass(frozen=True)
class DistributionSpec:
    """Description of a labeled distribution.

    ``hidden_parity`` is a bitstring, ``"random"`` (drawn when the spec is
    materialized) or None for all-zero labels. ``subspace`` pins the planted
    subspace; otherwise a random ``k``-dimensional one is drawn.
    """

    kind: str
    d: int
    k: int | None = None
    leak: float = 0.0
    points: tuple[str, ...] = ()
    weights: tuple[float, ...] = ()
    path: str | None = None
    hidden_parity: str | None = None
    label_noise: float = 0.0
    random_labels: bool = False
    subspace: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown distribution kind {self.kind!r}; expected one of {KINDS}")
        if not 1 <= self.d <= MAX_D:
            raise ValueError(f"d must lie in [1, {MAX_D}]")
        if not 0.0 <= self.leak <= 1.0:
            raise ValueError("leak must lie in [0, 1]")
        if not 0.0 <= self.label_noise <= 1.0:
            raise ValueError("label_noise must lie in [0, 1]")
        if self.kind == "planted-subspace":
            if self.subspace is None and (self.k is None or not 0 <= self.k <= self.d):
                raise ValueError("planted-subspace needs 0 <= k <= d")
        if self.kind == "point-mass-mixture":
            if not self.points or len(self.points) != len(self.weights):
                raise ValueError("point-mass-mixture needs matching points and weights")
            if any(w < 0 for w in self.weights) or abs(sum(self.weights) - 1) > 1e-9:
                raise ValueError("weights must be non-negative and sum to 1")
            for p in self.points:
                if len(p) != self.d:
                    raise ValueError(f"point {p!r} is not {self.d} bits")
        if self.kind == "from-file" and not self.path:
            raise ValueError("from-file needs a path")

    @classmethod
    def from_dict(cls, data: dict) -> "DistributionSpec":
        data = dict(data)
        for key in ("points", "weights", "subspace"):
            if data.get(key) is not None:
                data[key] = tuple(data[key])
        return cls(**data)

    def to_dict(self) -> dict:
        out = {}
        for f in self.__dataclass_fields__:
            v = getattr(self, f)
            out[f] = list(v) if isinstance(v, tuple) else v
        return out


def _parity(xs: np.ndarray, z: int) -> np.ndarray:
    return (np.bitwise_count(xs & np.uint64(z)) & np.uint8(1)).astype(np.uint8)


@dataclass
class Distribution:
    """A materialized :class:`DistributionSpec` with every random choice fixed."""

    spec: DistributionSpec
    z: int | None
    basis: tuple[int, ...] = ()
    file_xs: np.ndarray | None = field(default=None, repr=False)
    file_ys: np.ndarray | None = field(default=None, repr=False)

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def subspace(self) -> Subspace | None:
        if self.spec.kind != "planted-subspace":
            return None
        return Subspace(self.d, self.basis)

    @property
    def hidden(self) -> BitVec | None:
        return None if self.z is None else BitVec(self.d, self.z)

    def _uniform(self, n: int, rnd: RandomnessHandle) -> np.ndarray:
        mask = np.uint64((1 << self.d) - 1)
        return rnd.words(n) & mask

    def _in_subspace(self, coeffs: np.ndarray) -> np.ndarray:
        xs = np.zeros(len(coeffs), dtype=np.uint64)
        for i, row in enumerate(self.basis):
            sel = (coeffs >> np.uint64(i)) & np.uint64(1)
            xs ^= sel * np.uint64(row)
        return xs

    def _outside(self, n: int, rnd: RandomnessHandle) -> np.ndarray:
        out = np.zeros(0, dtype=np.uint64)
        while len(out) < n:
            cand = self._uniform(max(2 * (n - len(out)), 16), rnd)
            red = cand.copy()
            for row in self.basis:
                p = np.uint64(row.bit_length() - 1)
                hit = (red >> p) & np.uint64(1)
                red ^= hit * np.uint64(row)
            out = np.concatenate([out, cand[red != 0]])
        return out[:n]

    def sample_arrays(self, n: int, rnd: RandomnessHandle) -> tuple[np.ndarray, np.ndarray]:
        """``n`` i.i.d. draws as (packed vectors, labels)."""
        spec = self.spec
        ys = None
        if spec.kind == "uniform-full":
            xs = self._uniform(n, rnd.child("x"))
        elif spec.kind == "planted-subspace":
            k = len(self.basis)
            coeffs = rnd.child("coeff").words(n) & np.uint64((1 << k) - 1)
            xs = self._in_subspace(coeffs)
            if k < self.d and spec.leak > 0:
                leak = rnd.child("leak").uniforms(n) < spec.leak
                xs[leak] = self._outside(int(leak.sum()), rnd.child("outside"))
        elif spec.kind == "point-mass-mixture":
            pts = np.array([int(p, 2) for p in spec.points], dtype=np.uint64)
            cdf = np.cumsum(spec.weights)
            cdf[-1] = 1.0
            idx = np.searchsorted(cdf, rnd.child("x").uniforms(n), side="right")
            xs = pts[np.minimum(idx, len(pts) - 1)]
        else:
            assert self.file_xs is not None
            idx = (rnd.child("x").words(n) % np.uint64(len(self.file_xs))).astype(np.int64)
            xs = self.file_xs[idx]
            if self.file_ys is not None and self.z is None:
                ys = self.file_ys[idx]
        if ys is None:
            ys = _parity(xs, self.z or 0)
        if spec.random_labels:
            ys = (rnd.child("labels").words(n) & np.uint64(1)).astype(np.uint8)
        if spec.label_noise > 0:
            flips = rnd.child("noise").uniforms(n) < spec.label_noise
            ys = ys ^ flips.astype(np.uint8)
        return xs, ys

    def sample(self, n: int, rnd: RandomnessHandle) -> list[LabeledSample]:
        xs, ys = self.sample_arrays(n, rnd)
        d = self.d
        return [LabeledSample(BitVec(d, int(x)), int(y)) for x, y in zip(xs.tolist(), ys.tolist())]

    def mass_outside(self, V: Subspace) -> float | None:
        """Exact probability of ``x`` outside ``V`` where it is cheap to compute."""
        if self.spec.kind == "point-mass-mixture":
            return sum(
                w for p, w in zip(self.spec.points, self.spec.weights)
                if not contains_int(V.basis, int(p, 2))
            )
        return None


def materialize(spec: DistributionSpec, rnd: RandomnessHandle) -> Distribution:
    """Fix the random parts of ``spec`` (planted subspace, hidden parity)."""
    d = spec.d
    z: int | None
    if spec.hidden_parity == "random":
        z = rnd.child("parity").bits(d)
    elif spec.hidden_parity is None:
        z = None
    else:
        hp = BitVec.from_str(spec.hidden_parity)
        if hp.d != d:
            raise ValueError("hidden_parity length does not match d")
        z = hp.bits

    basis: tuple[int, ...] = ()
    file_xs = file_ys = None
    if spec.kind == "planted-subspace":
        if spec.subspace is not None:
            basis = rref_ints((int(s, 2) for s in spec.subspace), d)
        else:
            sub = rnd.child("subspace")
            while len(basis) < spec.k:
                basis = rref_ints(list(basis) + [sub.bits(d)], d)
    elif spec.kind == "from-file":
        path = Path(spec.path)
        if not path.exists():
            raise FileNotFoundError(f"dataset file not found: {path}")
        fd, xs, ys = read_dataset(path)
        if fd != d:
            raise ValueError(f"{path} has d={fd}, spec says d={d}")
        if not xs:
            raise ValueError(f"{path} holds no records")
        file_xs = np.array([x.bits for x in xs], dtype=np.uint64)
        file_ys = None if ys is None else np.array(ys, dtype=np.uint8)
    return Distribution(spec, z, basis, file_xs, file_ys)


def generate(
    spec: DistributionSpec | Distribution, n: int, rnd: RandomnessHandle
) -> list[LabeledSample]:
    """``n`` i.i.d. labeled samples.

    A bare spec is materialized from ``rnd/"distribution"`` first; pass a
    :class:`Distribution` to share one draw of the random parts.
    """
    dist = spec if isinstance(spec, Distribution) else materialize(spec, rnd.child("distribution"))
    return dist.sample(n, rnd.child("samples"))


class GeneratorSource:
    """Pull-based source: batch ``i`` comes from ``rnd/"batch"/i``."""

    def __init__(self, dist: Distribution, rnd: RandomnessHandle, limit: int | None = None):
        self.dist = dist
        self.rnd = rnd
        self.limit = limit
        self.consumed = 0
        self._batch = 0

    def draw(self, n: int) -> list[LabeledSample]:
        if self.limit is not None and self.consumed + n > self.limit:
            raise DataExhaustedError(f"source limit {self.limit} reached")
        out = self.dist.sample(n, self.rnd.child("batch", self._batch))
        self._batch += 1
        self.consumed += n
        return out


def with_labels(spec: DistributionSpec, **changes) -> DistributionSpec:
    return replace(spec, **changes)
