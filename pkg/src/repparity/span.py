"""Replicable recovery of a subspace covering most of a vector sample.

The sample is split by :func:`stable_partition`; a threshold ``t`` is drawn
uniformly from ``[t_min, t_max]`` on the ``"span-threshold"`` substream, and
the answer is the largest subspace spanned by at least ``t`` sets.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from .gf2 import BitVec, Subspace, common_dimension, rref_ints
from .partition import Partition, multiplicities, stable_partition
from .rng import RandomnessHandle

THRESHOLD_STREAM = "span-threshold"


class ConfigurationError(ValueError):
    """Parameters that cannot be run as given."""


class ThresholdError(ConfigurationError):
    """Threshold pair violates ``t_min < t_max < m / d**2``."""

    def __init__(self, t_min: float, t_max: float, failures: list[str]):
        super().__init__("; ".join(failures))
        self.t_min = t_min
        self.t_max = t_max
        self.failures = failures


def threshold_formulas(d: int, m: int, rho: float) -> tuple[float, float]:
    """Default ``(t_min, t_max)`` with natural logs, no validity check."""
    if d < 1 or m < 1:
        raise ConfigurationError("d and m must be at least 1")
    if not 0 < rho < 1:
        raise ConfigurationError("rho must lie in (0, 1)")
    t_min = math.sqrt(2 * m * (d * d + math.log(6 / rho)))
    t_max = (30 * d / rho) * math.sqrt(m * math.log(12 * d / rho))
    return t_min, t_max


def threshold_failures(t_min: float, t_max: float, d: int, m: int) -> list[str]:
    """Human-readable list of violated threshold conditions (empty if valid)."""
    failures = []
    if not t_min < t_max:
        failures.append(f"t_min={t_min:.6g} is not below t_max={t_max:.6g}")
    if not t_max < m / d**2:
        failures.append(
            f"t_max={t_max:.6g} is not below m/d^2={m / d**2:.6g}; m too small for (d, rho)"
        )
    return failures


def derive_thresholds(d: int, m: int, rho: float) -> tuple[float, float]:
    t_min, t_max = threshold_formulas(d, m, rho)
    failures = threshold_failures(t_min, t_max, d, m)
    if failures:
        raise ThresholdError(t_min, t_max, failures)
    return t_min, t_max


@dataclass(frozen=True)
class SpanParams:
    d: int
    m: int
    rho: float = 0.1
    eps: float = 0.1
    threshold_override: tuple[float, float] | None = None

    def __post_init__(self):
        if self.d < 1 or self.m < 1:
            raise ConfigurationError("d and m must be at least 1")
        if not 0 < self.rho < 1:
            raise ConfigurationError("rho must lie in (0, 1)")
        if not 0 < self.eps < 1:
            raise ConfigurationError("eps must lie in (0, 1)")

    @classmethod
    def scaled(cls, d: int, m: int, lo: float, hi: float, **kw) -> "SpanParams":
        """Override thresholds at ``(lo * m / d**2, hi * m / d**2)``."""
        return cls(d, m, threshold_override=(lo * m / d**2, hi * m / d**2), **kw)

    def thresholds(self) -> tuple[float, float]:
        """Validated ``(t_min, t_max)``; raises :class:`ThresholdError`."""
        if self.threshold_override is None:
            return derive_thresholds(self.d, self.m, self.rho)
        t_min, t_max = map(float, self.threshold_override)
        failures = threshold_failures(t_min, t_max, self.d, self.m)
        if failures:
            raise ThresholdError(t_min, t_max, failures)
        return t_min, t_max

    @property
    def coverage_bound(self) -> float:
        """Worst-case uncovered fraction ``d**2 * t_max / m``."""
        return self.d**2 * self.thresholds()[1] / self.m


@dataclass(frozen=True)
class HeavySet:
    subspaces: tuple[Subspace, ...]
    chosen_t: float


@dataclass(frozen=True)
class SpanRun:
    """Everything one call computed, for checks and transcripts."""

    subspace: Subspace
    heavy: HeavySet
    counts: Counter
    partition: Partition
    t_min: float
    t_max: float
    zeros: int


def select_heavy(counts: Counter, t: float, d: int) -> tuple[Subspace, HeavySet]:
    heavy = sorted((V for V, n in counts.items() if n >= t), key=lambda V: V.dim)
    if not heavy:
        return Subspace.zero(d), HeavySet((), t)
    top = heavy[-1]
    if len(heavy) > 1 and heavy[-2].dim == top.dim:
        raise AssertionError("heavy subspaces do not form a chain")
    for small, big in zip(heavy, heavy[1:]):
        if not small.issubspace(big):
            raise AssertionError("heavy subspaces do not form a chain")
    return top, HeavySet(tuple(heavy), t)


def run_linear_span(
    vectors: list[BitVec], params: SpanParams, rnd: RandomnessHandle
) -> SpanRun:
    """:func:`rep_linear_span` with the intermediate results attached."""
    if not vectors:
        raise ConfigurationError("need at least one vector")
    d = common_dimension(vectors, params.d)
    if len(vectors) != params.m:
        raise ConfigurationError(f"params.m={params.m} but got {len(vectors)} vectors")
    t_min, t_max = params.thresholds()

    nonzero = [v for v in vectors if v.bits]
    t = rnd.child(THRESHOLD_STREAM).uniform(t_min, t_max)
    part = stable_partition(nonzero, d)
    counts = multiplicities(part)
    V, heavy = select_heavy(counts, t, d)
    return SpanRun(V, heavy, counts, part, t_min, t_max, len(vectors) - len(nonzero))


def rep_linear_span(
    vectors: list[BitVec], params: SpanParams, rnd: RandomnessHandle
) -> Subspace:
    """Replicable subspace of ``span(vectors)`` covering all but ``d**2 * t_max`` inputs.

    Zero vectors are dropped before partitioning and always count as covered.
    If no subspace reaches the threshold (only possible when ``m`` is below
    what the thresholds were validated for) the zero subspace is returned.
    """
    return run_linear_span(vectors, params, rnd).subspace


def uncovered_count(vectors: list[BitVec], V: Subspace) -> int:
    return sum(1 for v in vectors if not V.contains(v))


def uncovered_fraction(vectors: list[BitVec], V: Subspace) -> float:
    if not vectors:
        raise ValueError("uncovered fraction of an empty sample is undefined")
    return uncovered_count(vectors, V) / len(vectors)


def span_of(vectors: list[BitVec], d: int) -> Subspace:
    return Subspace(d, rref_ints((v.bits for v in vectors), d))
