"""Brute-force reference implementations, independent of the package internals.

Everything here works on small ``d`` by enumerating vectors and spans as
explicit sets of ints.
"""

from __future__ import annotations

from collections import Counter
from itertools import product


def span_set(vectors, d):
    """All GF(2) combinations of ``vectors`` (ints), as a frozenset."""
    out = {0}
    for v in vectors:
        out |= {u ^ v for u in out}
    return frozenset(out)


def brute_rank(vectors, d):
    return len(span_set(vectors, d)).bit_length() - 1


def brute_independent(vectors, d):
    return len(span_set(vectors, d)) == 1 << len(vectors)


def dot(a, b):
    return bin(a & b).count("1") & 1


def brute_solutions(equations, d):
    """Set of w in GF(2)^d satisfying every (x, y)."""
    return {w for w in range(1 << d) if all(dot(w, x) == y for x, y in equations)}


def naive_partition(vectors, d):
    """Literal greedy sweep; returns lists of input indices."""
    remaining = list(range(len(vectors)))
    sets = []
    while remaining:
        current = []
        for i in remaining:
            if brute_independent([vectors[j] for j in current] + [vectors[i]], d):
                current.append(i)
        sets.append(current)
        remaining = [i for i in remaining if i not in current]
    return sets


def naive_multiplicities(vectors, d):
    return Counter(span_set([vectors[i] for i in s], d) for s in naive_partition(vectors, d))


def all_vectors(d):
    return list(range(1 << d))


def all_sequences(pool, m):
    return product(pool, repeat=m)
