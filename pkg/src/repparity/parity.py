"""Parity learning on realizable samples with shared randomness."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .gf2 import (
    INFEASIBLE,
    BitVec,
    Infeasible,
    Subspace,
    common_dimension,
    sample_uniform,
    solve_affine,
)
from .rng import RandomnessHandle
from .span import ConfigurationError, SpanParams, run_linear_span

COSET_STREAM = "coset"


class LabeledSample(NamedTuple):
    x: BitVec
    y: int


@dataclass(frozen=True, order=True)
class ParityHypothesis:
    w: BitVec

    def predict(self, x: BitVec) -> int:
        return self.w.dot(x)

    def __str__(self) -> str:
        return str(self.w)


def predict(h: ParityHypothesis, x: BitVec) -> int:
    return h.predict(x)


def empirical_error(h: ParityHypothesis, samples: Sequence[LabeledSample]) -> float:
    if not samples:
        raise ValueError("empirical error of an empty sample is undefined")
    return sum(h.predict(x) != y for x, y in samples) / len(samples)


def _check_unit(name: str, value: float) -> None:
    if not 0 < value < 1:
        raise ConfigurationError(f"{name} must lie in (0, 1)")


@dataclass(frozen=True)
class LearnerParams:
    """Learner settings. Half of ``eps`` goes to coverage, half to generalization."""

    d: int
    rho: float = 0.1
    eps: float = 0.1
    delta: float = 0.05
    threshold_override: tuple[float, float] | None = None
    # (lo, hi): thresholds at (lo * m / d^2, hi * m / d^2) for the actual m.
    threshold_scale: tuple[float, float] | None = None

    def __post_init__(self):
        if self.d < 1:
            raise ConfigurationError("d must be at least 1")
        for name in ("rho", "eps", "delta"):
            _check_unit(name, getattr(self, name))
        if self.threshold_override is not None and self.threshold_scale is not None:
            raise ConfigurationError("give threshold_override or threshold_scale, not both")

    def span_params(self, m: int) -> SpanParams:
        override = self.threshold_override
        if self.threshold_scale is not None:
            lo, hi = self.threshold_scale
            override = (lo * m / self.d**2, hi * m / self.d**2)
        return SpanParams(self.d, m, self.rho, self.eps / 2, override)

    def recommended_sample_size(self) -> int:
        return recommended_sample_size(self.d, self.rho, self.eps, self.delta)


def recommended_sample_size(d: int, rho: float, eps: float, delta: float) -> int:
    """Advisory sample size: coverage term at eps/2 plus the generalization term."""
    if d < 1:
        raise ConfigurationError("d must be at least 1")
    for name, value in (("rho", rho), ("eps", eps), ("delta", delta)):
        _check_unit(name, value)
    coverage = 900 * d**6 * math.log(12 * d / rho) / (rho**2 * (eps / 2) ** 2)
    generalization = math.ceil(2 * (d + math.log(2 / delta)) / eps**2)
    return math.ceil(coverage) + generalization


@dataclass(frozen=True)
class LearnRun:
    result: ParityHypothesis | Infeasible
    subspace: Subspace
    covered: int
    t: float
    t_max: float


def run_learn_parity(
    samples: Sequence[LabeledSample], params: LearnerParams, rnd: RandomnessHandle
) -> LearnRun:
    if not samples:
        raise ConfigurationError("need at least one sample")
    xs = [s.x for s in samples]
    d = common_dimension(xs, params.d)
    span = run_linear_span(xs, params.span_params(len(xs)), rnd)
    V = span.subspace
    eqs = [(x, y) for x, y in samples if V.contains(x)]
    sols = solve_affine(eqs, d)
    if sols is INFEASIBLE:
        result: ParityHypothesis | Infeasible = INFEASIBLE
    else:
        result = ParityHypothesis(sample_uniform(sols, rnd.child(COSET_STREAM)))
    return LearnRun(result, V, len(eqs), span.heavy.chosen_t, span.t_max)


def learn_parity(
    samples: Sequence[LabeledSample], params: LearnerParams, rnd: RandomnessHandle
) -> ParityHypothesis | Infeasible:
    """Parity consistent with every sample inside the replicable span.

    The span comes from the ``"span-threshold"`` substream and the choice
    within the consistent coset from ``"coset"``; identical handles therefore
    give identical outputs whenever the two runs recover the same subspace.
    Returns :data:`INFEASIBLE` when the covered samples contradict each other.
    """
    return run_learn_parity(samples, params, rnd).result
