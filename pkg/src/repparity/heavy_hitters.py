"""Replicable heavy hitters via a randomized frequency cutoff."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Sequence

from .rng import RandomnessHandle
from .span import ConfigurationError

CUTOFF_STREAM = "hh-threshold"


@dataclass(frozen=True)
class HHParams:
    eps_hh: float = 1 / 12
    nu_hh: float = 2 / 3
    rho: float = 0.1

    def __post_init__(self):
        if not 0 < self.eps_hh < 0.5:
            raise ConfigurationError("eps_hh must lie in (0, 1/2)")
        if not self.eps_hh < self.nu_hh < 1 - self.eps_hh:
            raise ConfigurationError("nu_hh must lie in (eps_hh, 1 - eps_hh)")
        if not 0 < self.rho < 1:
            raise ConfigurationError("rho must lie in (0, 1)")

    @property
    def cutoff_range(self) -> tuple[float, float]:
        return self.nu_hh - self.eps_hh, self.nu_hh + self.eps_hh

    def advisory_k(self) -> int:
        """Sample count with the hidden constant set to 1."""
        return math.ceil(
            1 / (self.rho**2 * self.eps_hh**2 * (self.nu_hh - self.eps_hh) ** 2)
        )


def item_key(item: Hashable) -> tuple[str, str]:
    """Canonical sort key: type name, then string form."""
    return type(item).__name__, str(item)


def r_heavy_hitters(
    items: Sequence[Hashable], params: HHParams, rnd: RandomnessHandle
) -> list:
    """Items whose empirical frequency reaches a random cutoff.

    The cutoff is uniform on ``[nu_hh - eps_hh, nu_hh + eps_hh]`` and drawn
    from the ``"hh-threshold"`` substream. Output is sorted by :func:`item_key`.
    """
    if not items:
        raise ValueError("heavy hitters needs at least one item")
    lo, hi = params.cutoff_range
    cutoff = rnd.child(CUTOFF_STREAM).uniform(lo, hi)
    k = len(items)
    counts = Counter(items)
    return sorted((x for x, c in counts.items() if c / k >= cutoff), key=item_key)
