"""Paired-run agreement estimators."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import asdict, dataclass, field
from statistics import NormalDist
from typing import Any, Callable, Hashable

from ..rng import RandomnessHandle
from .distributions import Distribution, DistributionSpec, materialize

Z95 = NormalDist().inv_cdf(0.975)


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("need at least one trial")
    if not 0 <= successes <= trials:
        raise ValueError("successes must lie in [0, trials]")
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)


def render(output: Any) -> str:
    """Stable string form of an algorithm output for reports."""
    if hasattr(output, "to_strings"):
        return "[" + ",".join(output.to_strings()) + "]"
    return str(output)


@dataclass(frozen=True)
class Algorithm:
    """What an estimator runs: ``run(data, rnd)`` on ``make_data(dist, rnd)``."""

    name: str
    run: Callable[[Any, RandomnessHandle], Hashable]
    make_data: Callable[[Distribution, RandomnessHandle], Any]


def sampled(name: str, m: int, run: Callable[[Any, RandomnessHandle], Hashable]) -> Algorithm:
    """Algorithm consuming an i.i.d. list of ``m`` labeled samples."""
    return Algorithm(name, run, lambda dist, rnd: dist.sample(m, rnd))


@dataclass
class AgreementReport:
    trials: int
    agreements: int
    rate: float
    wilson_interval: tuple[float, float]
    transcripts: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["wilson_interval"] = list(self.wilson_interval)
        return out


def _distribution_for(
    spec: DistributionSpec, root: RandomnessHandle, trial: int, per_trial: bool
) -> Distribution:
    if per_trial:
        return materialize(spec, root.child("trial", trial, "distribution"))
    return materialize(spec, root.child("distribution"))


def estimate_replicability(
    spec: DistributionSpec,
    algorithm: Algorithm,
    trials: int,
    rnd: RandomnessHandle,
    distribution_per_trial: bool = False,
    keep_transcripts: bool = True,
) -> AgreementReport:
    """Fraction of trials where two runs on independent data, same coins, agree."""
    if trials < 1:
        raise ValueError("trials must be positive")
    dist = None if distribution_per_trial else materialize(spec, rnd.child("distribution"))
    agreements = 0
    transcripts = []
    for i in range(trials):
        trial = rnd.child("trial", i)
        d_i = dist or _distribution_for(spec, rnd, i, True)
        shared = trial.child("algorithm")
        out1 = algorithm.run(algorithm.make_data(d_i, trial.child("data", 1)), shared)
        out2 = algorithm.run(algorithm.make_data(d_i, trial.child("data", 2)), shared)
        same = out1 == out2
        agreements += same
        if keep_transcripts:
            transcripts.append(
                {
                    "trial": i,
                    "substream": shared.path_str,
                    "output_1": render(out1),
                    "output_2": render(out2),
                    "agree": bool(same),
                }
            )
    return AgreementReport(
        trials, agreements, agreements / trials, wilson_interval(agreements, trials), transcripts
    )


@dataclass
class TwoParamReport:
    seeds: int
    trials_per_seed: int
    eta: float
    modal_mass: list[float]
    good_fraction: float
    modal_output: list[str]

    def to_dict(self) -> dict:
        return asdict(self)


def estimate_two_param_replicability(
    spec: DistributionSpec,
    algorithm: Algorithm,
    seeds: int,
    trials_per_seed: int,
    eta: float,
    rnd: RandomnessHandle,
) -> TwoParamReport:
    """Per-seed mass of the most frequent output over fresh samples."""
    dist = materialize(spec, rnd.child("distribution"))
    masses, modes = [], []
    for s in range(seeds):
        coins = rnd.child("seed", s, "algorithm")
        counts: Counter = Counter()
        for j in range(trials_per_seed):
            data = algorithm.make_data(dist, rnd.child("seed", s, "data", j))
            counts[algorithm.run(data, coins)] += 1
        top, n = max(counts.items(), key=lambda kv: (kv[1], render(kv[0])))
        masses.append(n / trials_per_seed)
        modes.append(render(top))
    good = sum(m >= 1 - eta for m in masses) / seeds
    return TwoParamReport(seeds, trials_per_seed, eta, masses, good, modes)
