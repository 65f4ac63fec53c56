import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_rank, naive_multiplicities, span_set
from repparity.gf2 import BitVec, Subspace, rref
from repparity.partition import multiplicities, stable_partition
from repparity.rng import RandomnessHandle
from repparity.span import (
    ConfigurationError,
    SpanParams,
    ThresholdError,
    derive_thresholds,
    rep_linear_span,
    run_linear_span,
    select_heavy,
    threshold_formulas,
    uncovered_count,
    uncovered_fraction,
)

B = BitVec.from_str


class TestThresholds:
    def test_closed_forms(self):
        # Hand arithmetic: sqrt(20000 * (25 + ln 60)) and 1500 * sqrt(10000 * ln 600).
        t_min, t_max = threshold_formulas(5, 10_000, 0.1)
        assert t_min == pytest.approx(math.sqrt(20000 * (25 + math.log(60))))
        assert t_min == pytest.approx(762.815, abs=1e-3)
        assert t_max == pytest.approx(1500 * math.sqrt(10000 * math.log(600)))
        assert t_max == pytest.approx(379_382.28, abs=0.01)

    def test_rejected_when_tmax_too_large(self):
        with pytest.raises(ThresholdError) as info:
            derive_thresholds(5, 10_000, 0.1)
        assert len(info.value.failures) == 1
        assert "m/d^2" in info.value.failures[0]

    def test_monotone_in_rho(self):
        lo = threshold_formulas(4, 5000, 0.2)
        hi = threshold_formulas(4, 5000, 0.1)
        assert hi[0] > lo[0] and hi[1] > lo[1]

    def test_accepts_when_m_is_huge(self):
        d, rho = 2, 0.5
        m = 10**12
        t_min, t_max = derive_thresholds(d, m, rho)
        assert t_min < t_max < m / d**2

    def test_override_accepted(self):
        assert SpanParams(3, 100, threshold_override=(2, 5)).thresholds() == (2.0, 5.0)

    def test_override_checks(self):
        with pytest.raises(ThresholdError):
            SpanParams(3, 100, threshold_override=(5, 2)).thresholds()
        with pytest.raises(ThresholdError):
            SpanParams(3, 100, threshold_override=(2, 12)).thresholds()

    @pytest.mark.parametrize(
        "kw", [dict(d=0, m=1), dict(d=1, m=0), dict(d=1, m=1, rho=1.0), dict(d=1, m=1, eps=0.0)]
    )
    def test_param_ranges(self, kw):
        with pytest.raises(ConfigurationError):
            SpanParams(**kw)


def plane_with_outliers(seed=0):
    rng = random.Random(seed)
    plane = [B("10000"), B("01000"), B("11000")]
    P = rref(plane)
    xs = [plane[i % 3] for i in range(90)]
    while len(xs) < 100:
        v = BitVec(5, rng.randrange(1, 32))
        if not P.contains(v):
            xs.insert(rng.randrange(len(xs) + 1), v)
    return P, xs


class TestRepLinearSpan:
    def test_single_line(self, rnd):
        v = B("0110")
        params = SpanParams(4, 64, threshold_override=(1, 3))
        assert rep_linear_span([v] * 64, params, rnd) == rref([v])

    def test_plane_with_outliers_selection(self):
        # The stated (15, 20) window fails the t_max < m/d^2 check at m=100, d=5,
        # so the heavy-set selection is exercised directly on the counts.
        P, xs = plane_with_outliers()
        counts = multiplicities(stable_partition(xs))
        oracle = naive_multiplicities([x.bits for x in xs], 5)
        assert oracle[span_set(P.basis, 5)] == counts[P] >= 45 - 5
        assert sum(n for V, n in counts.items() if V != P) <= 10
        for t in (15.0, 17.5, 20.0):
            V, heavy = select_heavy(counts, t, 5)
            assert V == P
            assert uncovered_count(xs, V) == 10 <= 25 * 20
        with pytest.raises(ThresholdError):
            SpanParams(5, 100, threshold_override=(15, 20)).thresholds()

    def test_deterministic(self):
        _, xs = plane_with_outliers(3)
        params = SpanParams(5, 100, threshold_override=(1, 3.5))
        a = rep_linear_span(xs, params, RandomnessHandle(11))
        b = rep_linear_span(xs, params, RandomnessHandle(11))
        assert a == b

    def test_all_zero_input(self, rnd):
        params = SpanParams(3, 5, threshold_override=(0.1, 0.5))
        assert rep_linear_span([BitVec.zero(3)] * 5, params, rnd) == Subspace.zero(3)

    def test_zeros_are_stripped_and_covered(self, rnd):
        xs = [B("100")] * 40 + [BitVec.zero(3)] * 20
        params = SpanParams(3, 60, threshold_override=(1, 6))
        run = run_linear_span(xs, params, rnd)
        assert run.zeros == 20
        assert run.subspace == rref([B("100")])
        assert uncovered_fraction(xs, run.subspace) == 0

    def test_wrong_m_rejected(self, rnd):
        with pytest.raises(ConfigurationError):
            rep_linear_span([B("10")] * 3, SpanParams(2, 4, threshold_override=(0.1, 0.5)), rnd)

    def test_empty_rejected(self, rnd):
        with pytest.raises(ConfigurationError):
            rep_linear_span([], SpanParams(2, 1, threshold_override=(0.1, 0.2)), rnd)

    def test_threshold_uses_named_substream(self):
        _, xs = plane_with_outliers(1)
        params = SpanParams(5, 100, threshold_override=(1, 3.5))
        root = RandomnessHandle(4)
        run = run_linear_span(xs, params, root)
        expected = root.child("span-threshold").uniform(1, 3.5)
        assert run.heavy.chosen_t == expected


class TestUncovered:
    def test_examples(self):
        V = rref([B("100"), B("010")])
        assert uncovered_fraction([B("100"), B("110")], V) == 0
        assert uncovered_fraction([B("001"), B("111")], Subspace.zero(3)) == 1
        xs = [B("100")] * 7 + [B("001")] * 3
        assert uncovered_fraction(xs, V) == pytest.approx(0.3)
        assert uncovered_fraction([BitVec.zero(3)], Subspace.zero(3)) == 0
        with pytest.raises(ValueError):
            uncovered_fraction([], V)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(1, 5),
    st.lists(st.integers(0, 31), min_size=1, max_size=40),
    st.floats(0.01, 0.99),
    st.floats(0.01, 0.99),
    st.integers(0, 2**32),
)
def test_span_properties(d, raw, a, b, seed):
    xs = [BitVec(d, r % (1 << d)) for r in raw]
    m = len(xs)
    cap = m / d**2
    lo, hi = sorted((a * cap, b * cap))
    if not lo < hi:
        return
    run = run_linear_span(xs, SpanParams(d, m, threshold_override=(lo, hi)), RandomnessHandle(seed))
    V = run.subspace
    ints = [x.bits for x in xs]
    # Output lies inside the span of the input.
    assert brute_rank(list(V.basis) + ints, d) == brute_rank(ints, d)
    # Deterministic coverage bound.
    assert uncovered_count(xs, V) <= d**2 * hi
    # Heavy members form a chain ending at the output.
    heavy = run.heavy.subspaces
    for small, big in zip(heavy, heavy[1:]):
        assert small.issubspace(big) and small.dim < big.dim
    if heavy:
        assert heavy[-1] == V
