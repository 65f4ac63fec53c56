import pytest

from repparity.gf2 import INFEASIBLE, BitVec
from repparity.harness.algorithms import learner_params, parity_base_learner
from repparity.harness.distributions import DistributionSpec, GeneratorSource, materialize
from repparity.rng import RandomnessHandle
from repparity.span import ConfigurationError
from repparity.wrapper import (
    BOTTOM,
    BaseLearner,
    DataExhaustedError,
    ListSource,
    WrapperParams,
    make_replicable,
    run_make_replicable,
)

SMALL = WrapperParams(rho=0.1, delta=0.1, c_batches=0.01)


class CountingSource:
    def __init__(self):
        self.consumed = 0

    def draw(self, n):
        out = list(range(self.consumed, self.consumed + n))
        self.consumed += n
        return out


def test_param_defaults():
    p = WrapperParams(0.1, 0.1)
    assert p.rounds == 4  # ceil(4 * ln 10 / ln 10)
    assert p.batches == 5903  # ceil(16 / 0.01 * ln 40)
    assert p.delta_prime == pytest.approx(0.1 * 0.01 * 1.0)
    assert p.hh_params.rho == pytest.approx(0.1 / 8)
    assert p.hh_params.cutoff_range == pytest.approx((7 / 12, 3 / 4))


@pytest.mark.parametrize("kw", [dict(rho=0.125), dict(rho=0.0), dict(delta=0.25), dict(c_rounds=0)])
def test_param_ranges(kw):
    with pytest.raises(ConfigurationError):
        WrapperParams(**kw)


def test_constant_base(rnd):
    base = BaseLearner(lambda batch, r: "h", 3)
    src = CountingSource()
    run = run_make_replicable(base, SMALL, src, rnd)
    assert run.result == "h" and run.rounds_run == 1
    assert src.consumed == run.samples_used == SMALL.batches * 3


def test_fresh_values_give_bottom(rnd):
    # Base outputs a hash of its batch: all k outputs differ.
    base = BaseLearner(lambda batch, r: batch[0], 2)
    src = CountingSource()
    run = run_make_replicable(base, SMALL, src, rnd)
    assert run.result is BOTTOM
    assert run.rounds_run == SMALL.rounds
    assert src.consumed == SMALL.rounds * SMALL.batches * 2


def test_base_sees_identical_round_coins():
    seen = []

    def base(batch, r):
        seen.append(r.child("probe").word())
        return 0

    run_make_replicable(BaseLearner(base, 1), SMALL, CountingSource(), RandomnessHandle(1))
    assert len(seen) == SMALL.batches and len(set(seen)) == 1


def test_shared_seed_determinism():
    dist = materialize(DistributionSpec("uniform-full", 4, hidden_parity="random"), RandomnessHandle(2))
    lp = learner_params(4, {"threshold_scale": (0.25, 0.5)})
    base = parity_base_learner(lp, 32)
    a = make_replicable(base, SMALL, GeneratorSource(dist, RandomnessHandle(5)), RandomnessHandle(9))
    b = make_replicable(base, SMALL, GeneratorSource(dist, RandomnessHandle(5)), RandomnessHandle(9))
    assert a == b
    assert a.w == dist.hidden


def test_exhaustion_is_an_error(rnd):
    base = BaseLearner(lambda batch, r: "h", 5)
    with pytest.raises(DataExhaustedError):
        make_replicable(base, SMALL, ListSource(list(range(10))), rnd)


def test_random_labels_wrap_infeasible():
    dist = materialize(DistributionSpec("uniform-full", 4, random_labels=True), RandomnessHandle(2))
    base = parity_base_learner(learner_params(4, {"threshold_scale": (0.25, 0.5)}), 64)
    out = make_replicable(base, SMALL, GeneratorSource(dist, RandomnessHandle(3)), RandomnessHandle(4))
    assert out is INFEASIBLE
