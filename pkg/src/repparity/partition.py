"""Greedy partition of a vector sequence into linearly independent sets.

Each pass walks the remaining sequence in original order and keeps every
vector that is independent of what the pass has collected so far. The kept
vectors form the next set and are removed; passes repeat until nothing is
left. The spans of the sets form a decreasing chain and the per-span counts
change by at most one when a single input position is replaced.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Sequence

from .gf2 import BitVec, Eliminator, Subspace, common_dimension


class ZeroVectorError(ValueError):
    """A zero vector was passed where only nonzero vectors are allowed."""

    def __init__(self, index: int):
        super().__init__(f"zero vector at input index {index}")
        self.index = index


@dataclass(frozen=True)
class Partition:
    """Ordered sets ``A_1..A_M`` given as tuples of input indices."""

    d: int
    vectors: tuple[BitVec, ...] = field(repr=False)
    index_sets: tuple[tuple[int, ...], ...]
    spans: tuple[Subspace, ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.index_sets)

    def set_vectors(self, j: int) -> list[BitVec]:
        return [self.vectors[i] for i in self.index_sets[j]]

    def distinct_spans(self) -> list[Subspace]:
        """Distinct spans in order of first occurrence."""
        seen: dict[Subspace, None] = {}
        for s in self.spans:
            seen.setdefault(s, None)
        return list(seen)


def partition_ints(values: Sequence[int], d: int) -> list[tuple[list[int], Eliminator]]:
    """Core sweep on int-packed nonzero vectors.

    Within a pass the collected span only grows, so once a value has been
    tested every later copy of it in the same pass is dependent. Only the
    first remaining occurrence of each distinct value can therefore join a
    set, and a pass reduces to a walk over distinct values ordered by their
    first remaining position. This is exactly the literal sweep, just without
    re-testing duplicates.
    """
    positions: dict[int, deque[int]] = {}
    for i, v in enumerate(values):
        positions.setdefault(v, deque()).append(i)

    out: list[tuple[list[int], Eliminator]] = []
    while positions:
        heads = sorted((q[0], v) for v, q in positions.items())
        elim = Eliminator(d)
        taken: list[int] = []
        for pos, v in heads:
            if elim.add(v):
                taken.append(pos)
                q = positions[v]
                q.popleft()
                if not q:
                    del positions[v]
                if elim.rank == d:
                    break
        out.append((taken, elim))
    return out


def stable_partition(vectors: Sequence[BitVec], d: int | None = None) -> Partition:
    """Partition nonzero ``vectors`` into independent sets by greedy sweeps.

    Raises :class:`ZeroVectorError` naming the first zero vector.
    """
    d = common_dimension(vectors, d)
    for i, v in enumerate(vectors):
        if v.bits == 0:
            raise ZeroVectorError(i)
    sets = partition_ints([v.bits for v in vectors], d)
    return Partition(
        d=d,
        vectors=tuple(vectors),
        index_sets=tuple(tuple(idx) for idx, _ in sets),
        spans=tuple(Subspace(d, elim.rref()) for _, elim in sets),
    )


def multiplicities(p: Partition) -> Counter[Subspace]:
    """Number of sets spanning each subspace, keyed in first-occurrence order."""
    return Counter(p.spans)
