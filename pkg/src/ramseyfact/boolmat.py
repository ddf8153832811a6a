"""Boolean partition matrices and the column-sorting permutation.

An n x k Boolean matrix whose columns are nonempty, pairwise disjoint and
cover n encodes an embedding of the Boolean algebra with k atoms into the one
with n atoms.  Columns are stored as bitsets for fast products and partition
checks.  The ordered form has strictly increasing column minima; every matrix
reaches it by a unique column permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

from .errors import DimensionError, DomainError
from .orders import RigidSurjection, LinearOrder, enumerate_epi

__all__ = [
    "BooleanMatrix",
    "PermutationMatrix",
    "canonical_subset_compare",
    "is_oba",
    "sorting_permutation",
    "epi_to_boolean",
    "boolean_to_epi",
    "boolean_product",
    "enumerate_ba",
    "enumerate_oba",
]


def _lowest_bit_index(x: int) -> int:
    return (x & -x).bit_length() - 1


def canonical_subset_compare(s, t) -> int:
    """Order on subsets of a finite set: s < t iff min(s ^ t) lies in s.

    This is the order a linear order on atoms induces on the whole algebra;
    column minima sorting is exactly this comparison on disjoint columns.
    """
    s, t = frozenset(s), frozenset(t)
    if s == t:
        return 0
    return -1 if min(s ^ t) in s else 1


@dataclass(frozen=True)
class PermutationMatrix:
    """A permutation of 0..k-1, identified with its k x k 0/1 matrix.

    The matrix convention is column j carries a single 1 in row perm[j]; the
    product rule is compose(p, q) = p following q, matching matrix product.
    """

    perm: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "perm", tuple(self.perm))
        if sorted(self.perm) != list(range(len(self.perm))):
            raise DomainError(f"not a permutation: {self.perm}")

    @property
    def size(self) -> int:
        return len(self.perm)

    def inverse(self) -> "PermutationMatrix":
        inv = [0] * self.size
        for j, i in enumerate(self.perm):
            inv[i] = j
        return PermutationMatrix(tuple(inv))

    def compose(self, other: "PermutationMatrix") -> "PermutationMatrix":
        if self.size != other.size:
            raise DimensionError("permutation sizes differ")
        return PermutationMatrix(tuple(self.perm[other.perm[j]] for j in range(self.size)))

    def to_rows(self) -> tuple[tuple[int, ...], ...]:
        k = self.size
        return tuple(
            tuple(1 if self.perm[j] == i else 0 for j in range(k)) for i in range(k)
        )


class BooleanMatrix:
    """An n x k 0/1 matrix whose columns form a k-partition of n."""

    __slots__ = ("n", "k", "columns")

    def __init__(self, n: int, columns: Sequence[int]):
        columns = tuple(int(c) for c in columns)
        if n < 1 or not columns:
            raise DimensionError("need n >= 1 and at least one column")
        full = (1 << n) - 1
        union = 0
        for c in columns:
            if c == 0:
                raise DomainError("columns must be nonempty")
            if c & ~full:
                raise DomainError("column exceeds the row range")
            if c & union:
                raise DomainError("columns must be pairwise disjoint")
            union |= c
        if union != full:
            raise DomainError("columns must cover all rows")
        self.n = n
        self.k = len(columns)
        self.columns = columns

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[int]]) -> "BooleanMatrix":
        n = len(entries)
        k = len(entries[0])
        cols = [0] * k
        for i, row in enumerate(entries):
            if len(row) != k:
                raise DimensionError("ragged rows")
            for j, x in enumerate(row):
                if x not in (0, 1):
                    raise DomainError("entries must be bits")
                if x:
                    cols[j] |= 1 << i
        return cls(n, cols)

    @classmethod
    def from_column_sets(cls, n: int, column_sets: Sequence[Sequence[int]]) -> "BooleanMatrix":
        cols = []
        for members in column_sets:
            c = 0
            for i in members:
                c |= 1 << int(i)
            cols.append(c)
        return cls(n, cols)

    def to_entries(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple((c >> i) & 1 for c in self.columns) for i in range(self.n)
        )

    def column_members(self, j: int) -> tuple[int, ...]:
        return tuple(i for i in range(self.n) if (self.columns[j] >> i) & 1)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "columns": [list(self.column_members(j)) for j in range(self.k)],
        }

    @classmethod
    def from_json(cls, data: dict) -> "BooleanMatrix":
        return cls.from_column_sets(data["n"], data["columns"])

    def permute_columns(self, sigma: PermutationMatrix) -> "BooleanMatrix":
        """Right multiplication by the permutation matrix: column j becomes column perm[j]."""
        if sigma.size != self.k:
            raise DimensionError("permutation size must match the column count")
        return BooleanMatrix(self.n, tuple(self.columns[sigma.perm[j]] for j in range(self.k)))

    def __eq__(self, other):
        return (
            isinstance(other, BooleanMatrix)
            and self.n == other.n
            and self.columns == other.columns
        )

    def __hash__(self):
        return hash((self.n, self.columns))

    def __repr__(self):
        return f"BooleanMatrix(n={self.n}, columns={[list(self.column_members(j)) for j in range(self.k)]})"


def is_oba(b: BooleanMatrix) -> bool:
    """True iff the column minima strictly increase."""
    mins = [_lowest_bit_index(c) for c in b.columns]
    return all(mins[i] < mins[i + 1] for i in range(len(mins) - 1))


def sorting_permutation(b: BooleanMatrix) -> PermutationMatrix:
    """The unique permutation sigma with b.permute_columns(sigma) ordered."""
    order = sorted(range(b.k), key=lambda j: _lowest_bit_index(b.columns[j]))
    return PermutationMatrix(tuple(order))


def epi_to_boolean(f: RigidSurjection) -> BooleanMatrix:
    """Column i is the preimage f^-1(i); the result is ordered."""
    cols = [0] * f.codomain.size
    for j, v in enumerate(f.map):
        cols[v] |= 1 << j
    return BooleanMatrix(f.domain_size, cols)


def boolean_to_epi(b: BooleanMatrix) -> RigidSurjection:
    """Inverse of epi_to_boolean; requires an ordered matrix."""
    if not is_oba(b):
        raise DomainError("matrix columns are not ordered by minima")
    values = [0] * b.n
    for j, c in enumerate(b.columns):
        for i in range(b.n):
            if (c >> i) & 1:
                values[i] = j
    return RigidSurjection(b.n, LinearOrder(b.k), tuple(values))


def boolean_product(r: BooleanMatrix, b: BooleanMatrix) -> BooleanMatrix:
    """Matrix product of partition matrices: column j is the union of the
    r-columns selected by column j of b."""
    if b.n != r.k:
        raise DimensionError(
            f"cannot multiply {r.n}x{r.k} by {b.n}x{b.k}"
        )
    cols = []
    for c in b.columns:
        acc = 0
        i = 0
        cc = c
        while cc:
            if cc & 1:
                acc |= r.columns[i]
            cc >>= 1
            i += 1
        cols.append(acc)
    return BooleanMatrix(r.n, cols)


def enumerate_oba(n: int, k: int) -> list[BooleanMatrix]:
    """All ordered Boolean partition matrices, via rigid surjections."""
    return [epi_to_boolean(f) for f in enumerate_epi(n, k)]


def enumerate_ba(n: int, k: int) -> list[BooleanMatrix]:
    """All Boolean partition matrices: ordered ones times column permutations."""
    out = []
    for base in enumerate_oba(n, k):
        for perm in permutations(range(k)):
            out.append(base.permute_columns(PermutationMatrix(perm)))
    return out
