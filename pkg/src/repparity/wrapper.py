"""Lift realizable-only replicability to every distribution.

Each round runs the base learner on ``k`` fresh batches with one shared
substream, then keeps a hypothesis only if it is a heavy hitter among the
``k`` outputs. ``BOTTOM`` is returned after ``T`` rounds without one.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Hashable, Protocol, Sequence

from .heavy_hitters import HHParams, r_heavy_hitters
from .rng import RandomnessHandle
from .span import ConfigurationError


class Bottom(enum.Enum):
    BOTTOM = "BOTTOM"

    def __repr__(self) -> str:
        return "BOTTOM"

    def __str__(self) -> str:
        return "BOTTOM"


BOTTOM = Bottom.BOTTOM

HH_EPS = 1 / 12
HH_NU = 2 / 3


class DataExhaustedError(RuntimeError):
    """The sample source could not supply the requested batch."""


class SampleSource(Protocol):
    consumed: int

    def draw(self, n: int) -> list: ...


@dataclass(frozen=True)
class BaseLearner:
    """``fn(batch, rnd) -> hashable hypothesis`` run on batches of ``sample_size``."""

    fn: Callable[[list, RandomnessHandle], Hashable]
    sample_size: int


@dataclass(frozen=True)
class WrapperParams:
    rho: float = 0.1
    delta: float = 0.1
    c_rounds: float = 4.0
    c_batches: float = 1.0
    c_delta: float = 1.0

    def __post_init__(self):
        if not 0 < self.rho < 1 / 8:
            raise ConfigurationError("rho must lie in (0, 1/8)")
        if not 0 < self.delta < 1 / 4:
            raise ConfigurationError("delta must lie in (0, 1/4)")
        if min(self.c_rounds, self.c_batches, self.c_delta) <= 0:
            raise ConfigurationError("constants must be positive")

    @property
    def rounds(self) -> int:
        return max(1, math.ceil(self.c_rounds * math.log(1 / self.delta) / math.log(1 / self.rho)))

    @property
    def batches(self) -> int:
        T = self.rounds
        return max(1, math.ceil(self.c_batches * T**2 / self.rho**2 * math.log(T / self.rho)))

    @property
    def delta_prime(self) -> float:
        return (
            self.c_delta
            * self.delta
            * self.rho**2
            * math.log(1 / self.rho)
            / math.log(1 / self.delta)
        )

    @property
    def hh_params(self) -> HHParams:
        return HHParams(HH_EPS, HH_NU, self.rho / (2 * self.rounds))


@dataclass(frozen=True)
class WrapperRun:
    result: Hashable
    rounds_run: int
    samples_used: int
    heavy: tuple = ()


def run_make_replicable(
    base: BaseLearner,
    params: WrapperParams,
    data: SampleSource,
    rnd: RandomnessHandle,
) -> WrapperRun:
    T, k, m = params.rounds, params.batches, base.sample_size
    hh = params.hh_params
    used = 0
    for t in range(1, T + 1):
        batches = []
        for _ in range(k):
            batch = data.draw(m)
            if len(batch) != m:
                raise DataExhaustedError(f"round {t}: wanted {m} samples, got {len(batch)}")
            batches.append(batch)
        used += k * m
        # Fresh child per call: every batch sees the identical round coins.
        outputs = [base.fn(b, rnd.child("round", t, "base")) for b in batches]
        heavy = r_heavy_hitters(outputs, hh, rnd.child("round", t, "hh"))
        if heavy:
            pick = heavy[rnd.child("round", t, "pick").below(len(heavy))]
            return WrapperRun(pick, t, used, tuple(heavy))
    return WrapperRun(BOTTOM, T, used)


def make_replicable(
    base: BaseLearner,
    params: WrapperParams,
    data: SampleSource,
    rnd: RandomnessHandle,
) -> Hashable:
    """Run ``base`` under the heavy-hitter wrapper; returns a hypothesis or ``BOTTOM``.

    Raises :class:`DataExhaustedError` if ``data`` runs dry.
    """
    return run_make_replicable(base, params, data, rnd).result


class ListSource:
    """Sequential source over an in-memory list."""

    def __init__(self, samples: Sequence):
        self._samples = list(samples)
        self.consumed = 0

    def draw(self, n: int) -> list:
        if self.consumed + n > len(self._samples):
            raise DataExhaustedError(
                f"asked for {n} samples with {len(self._samples) - self.consumed} left"
            )
        out = self._samples[self.consumed : self.consumed + n]
        self.consumed += n
        return out
