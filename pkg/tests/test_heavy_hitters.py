import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from repparity.heavy_hitters import HHParams, r_heavy_hitters
from repparity.rng import RandomnessHandle
from repparity.span import ConfigurationError


def test_identical_items(rnd):
    assert r_heavy_hitters(["a"] * 50, HHParams(), rnd) == ["a"]


def test_two_halves_is_empty():
    # Cutoff lies in [7/12, 3/4] and both items sit at 1/2.
    params = HHParams(1 / 12, 2 / 3, 0.1)
    assert params.cutoff_range == pytest.approx((7 / 12, 3 / 4))
    for s in range(50):
        assert r_heavy_hitters(["a", "b"] * 30, params, RandomnessHandle(s)) == []


def test_dominant_item():
    items = ["x"] * 80 + [f"u{i}" for i in range(20)]
    for s in range(50):
        assert r_heavy_hitters(items, HHParams(), RandomnessHandle(s)) == ["x"]


def test_empty_rejected(rnd):
    with pytest.raises(ValueError):
        r_heavy_hitters([], HHParams(), rnd)


@pytest.mark.parametrize(
    "kw", [dict(eps_hh=0.5), dict(eps_hh=0.0), dict(nu_hh=0.05), dict(nu_hh=0.95), dict(rho=1.0)]
)
def test_param_ranges(kw):
    with pytest.raises(ConfigurationError):
        HHParams(**kw)


def test_advisory_k():
    assert HHParams(1 / 12, 2 / 3, 0.1).advisory_k() == math.ceil(1 / (0.01 * (1 / 144) * (7 / 12) ** 2))


def test_cutoff_substream():
    root = RandomnessHandle(3)
    params = HHParams(0.1, 0.5, 0.1)
    cutoff = root.child("hh-threshold").uniform(0.4, 0.6)
    items = ["a"] * 500 + ["b"] * 500
    out = r_heavy_hitters(items, params, root)
    assert out == (["a", "b"] if cutoff <= 0.5 else [])


@given(st.lists(st.integers(0, 5), min_size=1, max_size=60), st.integers(0, 2**32))
def test_soundness_and_determinism(items, seed):
    params = HHParams(0.1, 0.3, 0.2)
    out = r_heavy_hitters(items, params, RandomnessHandle(seed))
    assert out == r_heavy_hitters(items, params, RandomnessHandle(seed))
    assert out == sorted(out, key=lambda x: ("int", str(x)))
    k = len(items)
    for x in set(items):
        freq = items.count(x) / k
        if x in out:
            assert freq >= 0.2
        if freq >= 0.4:
            assert x in out
