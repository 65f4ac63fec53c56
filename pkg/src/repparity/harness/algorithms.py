"""Named algorithms the estimators and CLI can run."""

from __future__ import annotations

from typing import Any

from ..parity import LabeledSample, LearnerParams, learn_parity
from ..rng import RandomnessHandle
from ..span import rep_linear_span
from ..wrapper import BaseLearner, WrapperParams, make_replicable
from .distributions import GeneratorSource
from .estimators import Algorithm, sampled

NAMES = ("span", "learn", "learn-wrapped", "constant", "first-sample")


def _threshold_kwargs(params: dict) -> dict:
    out = {}
    if params.get("threshold_override") is not None:
        out["threshold_override"] = tuple(params["threshold_override"])
    if params.get("threshold_scale") is not None:
        out["threshold_scale"] = tuple(params["threshold_scale"])
    return out


def learner_params(d: int, params: dict) -> LearnerParams:
    return LearnerParams(
        d=d,
        rho=params.get("rho", 0.1),
        eps=params.get("eps", 0.1),
        delta=params.get("delta", 0.05),
        **_threshold_kwargs(params),
    )


def wrapper_params(params: dict) -> WrapperParams:
    return WrapperParams(
        rho=params.get("rho", 0.1),
        delta=params.get("delta", 0.1),
        c_rounds=params.get("c_rounds", 4.0),
        c_batches=params.get("c_batches", 1.0),
        c_delta=params.get("c_delta", 1.0),
    )


def parity_base_learner(params: LearnerParams, batch_size: int) -> BaseLearner:
    def fn(batch: list[LabeledSample], rnd: RandomnessHandle):
        return learn_parity(batch, params, rnd)

    return BaseLearner(fn, batch_size)


def build_algorithm(name: str, d: int, m: int, params: dict | None = None) -> Algorithm:
    """Algorithm ``name`` for samples of dimension ``d``; ``m`` is the sample size."""
    params = dict(params or {})
    if name == "span":
        lp = learner_params(d, params)

        def run_span(data: list[LabeledSample], rnd: RandomnessHandle) -> Any:
            return rep_linear_span([s.x for s in data], lp.span_params(len(data)), rnd)

        return sampled(name, m, run_span)
    if name == "learn":
        lp = learner_params(d, params)
        return sampled(name, m, lambda data, rnd: learn_parity(data, lp, rnd))
    if name == "learn-wrapped":
        lp = learner_params(d, params)
        wp = wrapper_params(params)
        base = parity_base_learner(lp, params.get("batch_size", m))
        return Algorithm(
            name,
            lambda source, rnd: make_replicable(base, wp, source, rnd),
            lambda dist, rnd: GeneratorSource(dist, rnd),
        )
    if name == "constant":
        value = params.get("value", "constant")
        return sampled(name, m, lambda data, rnd: value)
    if name == "first-sample":
        return sampled(name, m, lambda data, rnd: data[0].x)
    raise ValueError(f"unknown algorithm {name!r}; expected one of {NAMES}")
