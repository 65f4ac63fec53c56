"""Deterministic and statistical benches."""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import asdict, dataclass, field

import numpy as np

from ..gf2 import INFEASIBLE, BitVec, Eliminator
from ..heavy_hitters import HHParams, r_heavy_hitters
from ..parity import LearnerParams, ParityHypothesis, empirical_error, run_learn_parity
from ..partition import partition_ints
from ..rng import RandomnessHandle
from ..span import SpanParams, run_linear_span, uncovered_count
from .distributions import DistributionSpec, materialize
from .estimators import AgreementReport, wilson_interval


def _span_counts(values: list[int], d: int) -> Counter:
    return Counter(elim.rref() for _, elim in partition_ints(values, d))


def max_deviation(a: Counter, b: Counter) -> int:
    return max((abs(a[k] - b[k]) for k in a.keys() | b.keys()), default=0)


def replacement_deviations(values: list[int], pool: list[int], d: int):
    """Yield the l-infinity deviation for every (position, replacement) pair."""
    base = _span_counts(values, d)
    for i in range(len(values)):
        for v in pool:
            changed = list(values)
            changed[i] = v
            yield max_deviation(base, _span_counts(changed, d))


def deletion_deviations(values: list[int], d: int):
    """Yield the l-infinity deviation for deleting each position in turn."""
    base = _span_counts(values, d)
    for i in range(len(values)):
        yield max_deviation(base, _span_counts(values[:i] + values[i + 1 :], d))


NEIGHBORS = ("replace", "delete")


def _deviations(values: list[int], pool: list[int], d: int, neighbor: str):
    if neighbor == "replace":
        return replacement_deviations(values, pool, d)
    if neighbor == "delete":
        return deletion_deviations(values, d)
    raise ValueError(f"neighbor must be one of {NEIGHBORS}")


@dataclass
class SensitivityReport:
    cases: int
    max_deviation: int
    cases_at_max: int
    neighbor: str = "replace"
    # (sequence, position, replacement or None) reaching max_deviation first
    witness: list | None = None

    def to_dict(self) -> dict:
        return asdict(self)


class _Tally:
    def __init__(self, neighbor: str):
        self.report = SensitivityReport(0, 0, 0, neighbor)

    def add(self, dev: int, witness) -> None:
        r = self.report
        r.cases += 1
        if dev > r.max_deviation:
            r.max_deviation, r.cases_at_max, r.witness = dev, 0, witness
        r.cases_at_max += dev == r.max_deviation


def _scan(tally: _Tally, values: list[int], pool: list[int], d: int) -> None:
    neighbor = tally.report.neighbor
    devs = _deviations(values, pool, d, neighbor)
    if neighbor == "replace":
        keys = ((i, v) for i in range(len(values)) for v in pool)
    else:
        keys = ((i, None) for i in range(len(values)))
    for (i, v), dev in zip(keys, devs):
        tally.add(dev, [list(values), i, v])


def exhaustive_sensitivity(d: int, m: int, neighbor: str = "replace") -> SensitivityReport:
    """Every length-``m`` sequence of nonzero vectors and every neighbor of it."""
    pool = list(range(1, 1 << d))
    tally = _Tally(neighbor)
    for seq in itertools.product(pool, repeat=m):
        _scan(tally, list(seq), pool, d)
    return tally.report


def sensitivity_oracle(
    d: int,
    m: int,
    pool: list[BitVec],
    trials: int,
    rnd: RandomnessHandle,
    neighbor: str = "replace",
) -> SensitivityReport:
    """Random sequences from ``pool``; every position times every replacement."""
    ints = [v.bits for v in pool]
    if not ints or any(v == 0 for v in ints):
        raise ValueError("pool must hold nonzero vectors")
    tally = _Tally(neighbor)
    for t in range(trials):
        idx = rnd.child("trial", t).words(m) % np.uint64(len(ints))
        _scan(tally, [ints[int(i)] for i in idx], ints, d)
    return tally.report


def random_replacements(d: int, m: int, cases: int, rnd: RandomnessHandle) -> SensitivityReport:
    """``cases`` random (sequence, position, nonzero replacement) triples."""
    tally = _Tally("replace")
    span = (1 << d) - 1
    for c in range(cases):
        r = rnd.child("case", c)
        values = [1 + int(w % np.uint64(span)) for w in r.child("seq").words(m)]
        i = r.child("pos").below(m)
        v = 1 + r.child("new").below(span)
        changed = list(values)
        changed[i] = v
        tally.add(max_deviation(_span_counts(values, d), _span_counts(changed, d)), [values, i, v])
    return tally.report


def is_chain(spans: list[tuple[int, ...]], d: int) -> bool:
    """Distinct spans in first-occurrence order are nested and at most ``d``."""
    distinct = list(dict.fromkeys(spans))
    if len(distinct) > d:
        return False
    for big, small in zip(distinct, distinct[1:]):
        elim = Eliminator(d)
        for r in big:
            elim.add(r)
        if not all(elim.contains(r) for r in small):
            return False
    return True


@dataclass
class CoverageRow:
    m: int
    uncovered_count: int
    uncovered_fraction: float
    bound: float
    t_max: float
    ok: bool


def coverage_bench(
    spec: DistributionSpec,
    sizes: list[int],
    rnd: RandomnessHandle,
    rho: float = 0.1,
    eps: float = 0.1,
    threshold_scale: tuple[float, float] | None = (0.25, 0.5),
    threshold_override: tuple[float, float] | None = None,
) -> list[CoverageRow]:
    """One run per sample size; observed uncovered fraction against d^2 t_max / m."""
    dist = materialize(spec, rnd.child("distribution"))
    d = spec.d
    rows = []
    for m in sizes:
        override = threshold_override
        if threshold_scale is not None and override is None:
            override = (threshold_scale[0] * m / d**2, threshold_scale[1] * m / d**2)
        params = SpanParams(d, m, rho, eps, override)
        xs = [s.x for s in dist.sample(m, rnd.child("m", m, "data"))]
        run = run_linear_span(xs, params, rnd.child("m", m, "algorithm"))
        bad = uncovered_count(xs, run.subspace)
        bound = d**2 * run.t_max / m
        rows.append(CoverageRow(m, bad, bad / m, bound, run.t_max, bad <= d**2 * run.t_max))
    return rows


@dataclass
class HHReport:
    agreement: AgreementReport
    k: int
    soundness_violations: int
    runs: int

    def to_dict(self) -> dict:
        out = asdict(self)
        out["agreement"] = self.agreement.to_dict()
        return out


def planted_items(freqs: list[float], k: int, rnd: RandomnessHandle) -> list[int]:
    """``k`` draws: item ``i`` with probability ``freqs[i]``, else a fresh unique id."""
    u = rnd.child("u").uniforms(k)
    cdf = np.cumsum(freqs)
    idx = np.searchsorted(cdf, u, side="right")
    fresh = rnd.child("fresh").words(k) | np.uint64(1 << 63)  # disjoint from planted ids
    out = np.where(idx < len(freqs), idx.astype(np.uint64), fresh)
    return [int(v) for v in out]


def hh_bench(
    freqs: list[float], params: HHParams, trials: int, rnd: RandomnessHandle, k: int | None = None
) -> HHReport:
    k = k or params.advisory_k()
    lo, hi = params.cutoff_range
    agreements = violations = 0
    transcripts = []
    for t in range(trials):
        trial = rnd.child("trial", t)
        shared = trial.child("algorithm")
        outs = []
        for j in (1, 2):
            items = planted_items(freqs, k, trial.child("data", j))
            out = r_heavy_hitters(items, params, shared)
            counts = Counter(items)
            violations += sum(counts[x] / k < lo for x in out)
            violations += sum(c / k >= hi and x not in out for x, c in counts.items())
            outs.append(out)
        same = outs[0] == outs[1]
        agreements += same
        transcripts.append({"trial": t, "substream": shared.path_str,
                            "output_1": outs[0], "output_2": outs[1], "agree": same})
    report = AgreementReport(
        trials, agreements, agreements / trials, wilson_interval(agreements, trials), transcripts
    )
    return HHReport(report, k, violations, 2 * trials)


@dataclass
class AccuracyReport:
    trials: int
    exact: int
    holdout_errors: list[float] = field(default_factory=list)
    infeasible: int = 0

    def fraction_within(self, eps: float) -> float:
        return sum(e <= eps for e in self.holdout_errors) / self.trials

    def to_dict(self) -> dict:
        return asdict(self)


def accuracy_bench(
    spec: DistributionSpec,
    params: LearnerParams,
    m: int,
    trials: int,
    holdout: int,
    rnd: RandomnessHandle,
) -> AccuracyReport:
    """Fresh distribution per trial; learn on ``m`` samples, score on ``holdout``."""
    report = AccuracyReport(trials, 0)
    for t in range(trials):
        trial = rnd.child("trial", t)
        dist = materialize(spec, trial.child("distribution"))
        run = run_learn_parity(dist.sample(m, trial.child("train")), params, trial.child("algorithm"))
        if run.result is INFEASIBLE:
            report.infeasible += 1
            report.holdout_errors.append(1.0)
            continue
        h: ParityHypothesis = run.result
        if dist.z is not None and h.w.bits == dist.z:
            report.exact += 1
        report.holdout_errors.append(empirical_error(h, dist.sample(holdout, trial.child("test"))))
    return report
