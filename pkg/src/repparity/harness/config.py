"""Experiment configuration files (JSON or YAML)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .distributions import DistributionSpec


@dataclass
class ExperimentConfig:
    algorithm: str = "span"
    params: dict = field(default_factory=dict)
    distribution: DistributionSpec = field(
        default_factory=lambda: DistributionSpec("uniform-full", 4)
    )
    m: int = 100
    trials: int = 100
    seed: int | str = 0
    out: str | None = None
    distribution_per_trial: bool = False
    # claimed agreement rate; the bench fails when the Wilson interval lies below it
    target_rate: float | None = None
    sizes: list[int] = field(default_factory=list)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        if "distribution" in data:
            data["distribution"] = DistributionSpec.from_dict(data["distribution"])
        return cls(**data)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "params": self.params,
            "distribution": self.distribution.to_dict(),
            "m": self.m,
            "trials": self.trials,
            "seed": self.seed,
            "out": self.out,
            "distribution_per_trial": self.distribution_per_trial,
            "target_rate": self.target_rate,
            "sizes": self.sizes,
        }


def load_config(path: str | Path) -> ExperimentConfig:
    text = Path(path).read_text()
    if str(path).endswith((".yaml", ".yml")):
        data = yaml.safe_load(text)
    else:
        data = json.loads(text)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping at the top level")
    return ExperimentConfig.from_dict(data)
