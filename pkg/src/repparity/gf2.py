"""Exact linear algebra over GF(2) on int-packed vectors.

Coordinate ``i`` of a length-``d`` vector is stored at bit ``d - 1 - i`` so the
bitstring ``"110"`` is the integer ``0b110``. With that layout the leading
(leftmost) nonzero coordinate of a row is its highest set bit, and a basis in
reduced row echelon form is a strictly decreasing tuple of ints.
"""

from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

from .rng import RandomnessHandle


class DimensionError(ValueError):
    """Operands live in spaces of different dimension."""


class Infeasible(enum.Enum):
    """Result of solving a contradictory system."""

    INFEASIBLE = "INFEASIBLE"

    def __repr__(self) -> str:
        return "INFEASIBLE"

    def __str__(self) -> str:
        return "INFEASIBLE"


INFEASIBLE = Infeasible.INFEASIBLE


@dataclass(frozen=True, order=True)
class BitVec:
    """A vector in GF(2)^d."""

    d: int
    bits: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("dimension must be positive")
        if self.bits < 0 or self.bits >> self.d:
            raise ValueError(f"bits {self.bits:#x} do not fit in dimension {self.d}")

    @classmethod
    def from_str(cls, s: str) -> "BitVec":
        s = s.strip()
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {s!r}")
        return cls(len(s), int(s, 2))

    @classmethod
    def zero(cls, d: int) -> "BitVec":
        return cls(d, 0)

    @classmethod
    def unit(cls, d: int, i: int) -> "BitVec":
        """The standard basis vector e_i (0-based coordinate)."""
        if not 0 <= i < d:
            raise IndexError(f"coordinate {i} out of range for dimension {d}")
        return cls(d, 1 << (d - 1 - i))

    @classmethod
    def from_bits(cls, coords: Iterable[int]) -> "BitVec":
        coords = list(coords)
        return cls.from_str("".join("1" if c else "0" for c in coords))

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.d:
            raise IndexError(f"coordinate {i} out of range for dimension {self.d}")
        return (self.bits >> (self.d - 1 - i)) & 1

    def __len__(self) -> int:
        return self.d

    def __iter__(self):
        return (self[i] for i in range(self.d))

    def __xor__(self, other: "BitVec") -> "BitVec":
        _check_dims(self.d, other.d)
        return BitVec(self.d, self.bits ^ other.bits)

    __add__ = __xor__

    def dot(self, other: "BitVec") -> int:
        """Inner product mod 2."""
        _check_dims(self.d, other.d)
        return (self.bits & other.bits).bit_count() & 1

    def is_zero(self) -> bool:
        return self.bits == 0

    def __str__(self) -> str:
        return format(self.bits, f"0{self.d}b")

    def __repr__(self) -> str:
        return f"BitVec({str(self)!r})"


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionError(f"dimension mismatch: {a} vs {b}")


def common_dimension(vectors: Sequence[BitVec], d: int | None = None) -> int:
    """Shared dimension of ``vectors`` (or ``d`` when the list is empty)."""
    if not vectors:
        if d is None:
            raise DimensionError("cannot infer dimension of an empty list")
        return d
    d0 = vectors[0].d if d is None else d
    for v in vectors:
        _check_dims(d0, v.d)
    return d0


class Eliminator:
    """Incremental echelon basis for independence and membership tests.

    Rows are kept sorted by pivot (highest set bit) in decreasing order, so
    reducing a vector is a single pass over at most ``d`` rows.
    """

    __slots__ = ("d", "_pivots", "_rows")

    def __init__(self, d: int):
        self.d = d
        self._pivots: list[int] = []  # negated pivots, ascending
        self._rows: list[int] = []

    def __len__(self) -> int:
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, v: int) -> int:
        for r in self._rows:
            if v ^ r < v:  # r's pivot bit is set in v
                v ^= r
        return v

    def contains(self, v: int) -> bool:
        return self.reduce(v) == 0

    def add(self, v: int) -> bool:
        """Insert ``v`` if it is independent of the current rows."""
        v = self.reduce(v)
        if not v:
            return False
        key = -(v.bit_length())
        pos = bisect.bisect_left(self._pivots, key)
        self._pivots.insert(pos, key)
        self._rows.insert(pos, v)
        return True

    def rref(self) -> tuple[int, ...]:
        """Reduced row echelon basis, pivots strictly increasing left to right."""
        rows = list(self._rows)
        # Clear each pivot bit from every other row, lowest pivot first.
        for i in range(len(rows) - 1, -1, -1):
            p = rows[i].bit_length() - 1
            for j in range(i):
                if rows[j] >> p & 1:
                    rows[j] ^= rows[i]
        return tuple(rows)


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(2)^d held as its unique RREF basis.

    Construct through :func:`rref`; equality and hashing are then exact
    set equality of the subspaces.
    """

    d: int
    basis: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def rows(self) -> list[BitVec]:
        return [BitVec(self.d, r) for r in self.basis]

    @classmethod
    def zero(cls, d: int) -> "Subspace":
        return cls(d, ())

    @classmethod
    def full(cls, d: int) -> "Subspace":
        return cls(d, tuple(1 << (d - 1 - i) for i in range(d)))

    def contains(self, v: BitVec) -> bool:
        _check_dims(self.d, v.d)
        return contains_int(self.basis, v.bits)

    __contains__ = contains

    def issubspace(self, other: "Subspace") -> bool:
        _check_dims(self.d, other.d)
        return all(contains_int(other.basis, r) for r in self.basis)

    def __str__(self) -> str:
        if not self.basis:
            return "{0}"
        return "span{" + ",".join(format(r, f"0{self.d}b") for r in self.basis) + "}"

    def to_strings(self) -> list[str]:
        return [format(r, f"0{self.d}b") for r in self.basis]


def contains_int(rref_basis: Sequence[int], v: int) -> bool:
    for r in rref_basis:
        if v ^ r < v:
            v ^= r
    return v == 0


def rref_ints(rows: Iterable[int], d: int) -> tuple[int, ...]:
    elim = Eliminator(d)
    for r in rows:
        if elim.rank == d:
            break
        elim.add(r)
    return elim.rref()


def rref(rows: Sequence[BitVec], d: int | None = None) -> Subspace:
    """Canonical RREF basis of ``span(rows)``.

    ``d`` is required only when ``rows`` is empty.
    """
    d = common_dimension(rows, d)
    return Subspace(d, rref_ints((v.bits for v in rows), d))


def rank(rows: Sequence[BitVec], d: int | None = None) -> int:
    return rref(rows, d).dim


def contains(space: Subspace, v: BitVec) -> bool:
    return space.contains(v)


def is_independent_with(current: Sequence[BitVec], candidate: BitVec) -> bool:
    """True iff ``candidate`` is outside ``span(current)``.

    One-shot helper; loops that grow a set should hold an :class:`Eliminator`.
    """
    d = common_dimension(list(current) + [candidate])
    elim = Eliminator(d)
    for v in current:
        elim.add(v.bits)
    return not elim.contains(candidate.bits)


@dataclass(frozen=True)
class AffineSolutionSet:
    """``particular + span(null_basis)``; has ``2 ** null_basis.dim`` elements."""

    particular: BitVec
    null_basis: Subspace

    @property
    def size(self) -> int:
        return 1 << self.null_basis.dim

    def __contains__(self, w: BitVec) -> bool:
        return (w ^ self.particular) in self.null_basis

    def elements(self) -> list[BitVec]:
        """All elements; only sensible for small kernels."""
        out = []
        basis = self.null_basis.basis
        for mask in range(self.size):
            w = self.particular.bits
            for i, r in enumerate(basis):
                if mask >> i & 1:
                    w ^= r
            out.append(BitVec(self.particular.d, w))
        return out


def solve_affine(
    equations: Sequence[tuple[BitVec, int]], d: int | None = None
) -> AffineSolutionSet | Infeasible:
    """All ``w`` with ``<w, x> = y`` for every ``(x, y)`` in ``equations``.

    Returns :data:`INFEASIBLE` when the system is contradictory.
    """
    d = common_dimension([x for x, _ in equations], d)
    # Augmented rows: coefficient bits shifted left, label in bit 0.
    elim = Eliminator(d + 1)
    for x, y in equations:
        if y not in (0, 1):
            raise ValueError(f"label must be 0 or 1, got {y!r}")
        row = elim.reduce((x.bits << 1) | y)
        if row == 1:
            return INFEASIBLE
        if row:
            elim.add(row)
    aug = elim.rref()
    coeff_rows = [r >> 1 for r in aug]
    pivots = [r.bit_length() - 1 for r in coeff_rows]
    pivot_set = set(pivots)

    particular = 0
    for r, p in zip(aug, pivots):
        if r & 1:
            particular |= 1 << p

    kernel = []
    for f in range(d):
        if f in pivot_set:
            continue
        w = 1 << f
        for r, p in zip(coeff_rows, pivots):
            if r >> f & 1:
                w |= 1 << p
        kernel.append(w)
    null_basis = rref_ints(kernel, d)
    # Canonical coset representative: zero on the kernel's pivot columns.
    for r in null_basis:
        if particular ^ r < particular:
            particular ^= r
    return AffineSolutionSet(BitVec(d, particular), Subspace(d, null_basis))


def sample_uniform(sols: AffineSolutionSet, rnd: RandomnessHandle) -> BitVec:
    """Uniform element of ``sols`` using ``null_basis.dim`` fair bits from ``rnd``."""
    basis = sols.null_basis.basis
    coins = rnd.bits(len(basis))
    w = sols.particular.bits
    for i, r in enumerate(basis):
        if coins >> i & 1:
            w ^= r
    return BitVec(sols.particular.d, w)
