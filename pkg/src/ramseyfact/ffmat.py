"""Exact linear algebra over prime fields F_p.

Echelon forms, the invertible column transform normalizing a full-column-rank
matrix to reduced column echelon form, the two-sided variant for square
matrices, the matrix of a rigid surjection onto an antilex-ordered F_p^k, and
Grassmannian enumeration by echelon representatives.

Raw helpers operate on row-major tuples of int tuples; PrimeFieldMatrix is a
thin immutable wrapper with cached rank.  The reduced-row-echelon routine is
the single source of truth for every echelon predicate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import NamedTuple, Sequence

from .errors import BudgetError, DimensionError, DomainError, RankError
from .orders import (
    RigidSurjection,
    antilex_order,
    antilex_rank,
    antilex_vectors,
    is_rigid_surjection,
)

Rows = tuple  # row-major tuple of row tuples


def _check_prime(p: int) -> None:
    if p < 2 or any(p % d == 0 for d in range(2, int(math.isqrt(p)) + 1)):
        raise DomainError(f"{p} is not prime")


@lru_cache(maxsize=None)
def _inverses(p: int) -> tuple[int, ...]:
    _check_prime(p)
    return tuple(0 if a == 0 else pow(a, p - 2, p) for a in range(p))


def identity_rows(k: int) -> Rows:
    return tuple(tuple(1 if i == j else 0 for j in range(k)) for i in range(k))


def mat_mul(a: Rows, b: Rows, p: int) -> Rows:
    if len(a[0]) != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{len(b[0])}")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) % p for col in bt) for row in a
    )


def mat_transpose(a: Rows) -> Rows:
    return tuple(zip(*a))


def _reduce_inplace(m: list[list[int]], p: int, acc: list[list[int]] | None) -> int:
    """Row reduce m to RREF in place, mirroring row ops on acc.  Returns rank."""
    inv = _inverses(p)
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = -1
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            if acc is not None:
                acc[r], acc[piv] = acc[piv], acc[r]
        a = m[r][c]
        if a != 1:
            ia = inv[a]
            m[r] = [(x * ia) % p for x in m[r]]
            if acc is not None:
                acc[r] = [(x * ia) % p for x in acc[r]]
        row = m[r]
        arow = acc[r] if acc is not None else None
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [(x - f * y) % p for x, y in zip(m[i], row)]
                    if acc is not None:
                        acc[i] = [(x - f * y) % p for x, y in zip(acc[i], arow)]
        r += 1
        if r == nrows:
            break
    return r


def mat_rref(a: Rows, p: int) -> Rows:
    m = [list(row) for row in a]
    _reduce_inplace(m, p, None)
    return tuple(tuple(row) for row in m)


def mat_rank(a: Rows, p: int) -> int:
    m = [list(row) for row in a]
    return _reduce_inplace(m, p, None)


def is_rref(a: Rows, p: int) -> bool:
    return mat_rref(a, p) == tuple(tuple(row) for row in a)


def is_rcef(a: Rows, p: int) -> bool:
    at = mat_transpose(a)
    return mat_rref(at, p) == at


@lru_cache(maxsize=None)
def _identity_template(k: int) -> Rows:
    return identity_rows(k)


def rcef_transform(a: Rows, p: int) -> tuple[Rows, Rows]:
    """(reduced, transform): reduced = a @ transform is in RCEF, transform in GL.

    Raises RankError when the columns of a are dependent.
    """
    k = len(a[0])
    at = [list(col) for col in zip(*a)]
    acc = [list(row) for row in _identity_template(k)]
    rank = _reduce_inplace(at, p, acc)
    if rank < k:
        raise RankError(f"matrix has column rank {rank} < {k}")
    return tuple(zip(*at)), tuple(zip(*acc))


def mat_inverse(a: Rows, p: int) -> Rows:
    n = len(a)
    if n != len(a[0]):
        raise DimensionError("only square matrices invert")
    m = [list(row) for row in a]
    acc = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    rank = _reduce_inplace(m, p, acc)
    if rank < n:
        raise RankError("matrix is singular")
    return tuple(tuple(row) for row in acc)


def rref_pivots(a: Rows, p: int) -> tuple[int, ...]:
    """Pivot column indices of the RREF of a."""
    r = mat_rref(a, p)
    pivots = []
    for row in r:
        for j, x in enumerate(row):
            if x:
                pivots.append(j)
                break
    return tuple(pivots)


class PrimeFieldMatrix:
    """Immutable matrix over F_p; value semantics, cached rank."""

    __slots__ = ("p", "rows", "cols", "entries", "_rank", "_hash")

    def __init__(self, p: int, entries: Sequence[Sequence[int]]):
        _check_prime(p)
        rows = tuple(tuple(int(x) % p for x in row) for row in entries)
        if not rows or not rows[0]:
            raise DimensionError("matrix needs at least one row and one column")
        if len({len(r) for r in rows}) != 1:
            raise DimensionError("ragged rows")
        self.p = p
        self.entries = rows
        self.rows = len(rows)
        self.cols = len(rows[0])
        self._rank = None
        self._hash = None

    @property
    def rank(self) -> int:
        if self._rank is None:
            self._rank = mat_rank(self.entries, self.p)
        return self._rank

    def __mul__(self, other: "PrimeFieldMatrix") -> "PrimeFieldMatrix":
        if self.p != other.p:
            raise DomainError("moduli differ")
        return PrimeFieldMatrix(self.p, mat_mul(self.entries, other.entries, self.p))

    def transpose(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.p, mat_transpose(self.entries))

    def rref(self) -> "PrimeFieldMatrix":
        return PrimeFieldMatrix(self.p, mat_rref(self.entries, self.p))

    @property
    def is_rref(self) -> bool:
        return is_rref(self.entries, self.p)

    @property
    def is_rcef(self) -> bool:
        return is_rcef(self.entries, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, PrimeFieldMatrix)
            and self.p == other.p
            and self.entries == other.entries
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.p, self.entries))
        return self._hash

    def __repr__(self):
        return f"PrimeFieldMatrix(p={self.p}, entries={[list(r) for r in self.entries]})"

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "rows": self.rows,
            "cols": self.cols,
            "entries": [list(r) for r in self.entries],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PrimeFieldMatrix":
        m = cls(data["p"], data["entries"])
        if "rows" in data and (m.rows, m.cols) != (data["rows"], data["cols"]):
            raise DimensionError("declared shape does not match entries")
        return m

    @classmethod
    def from_text(cls, p: int, text: str) -> "PrimeFieldMatrix":
        """Compact digit-row form: rows separated by commas or newlines."""
        rows = [r.strip() for r in text.replace("\n", ",").split(",") if r.strip()]
        return cls(p, [[int(ch) for ch in row] for row in rows])


@dataclass(frozen=True)
class GLElement:
    """An invertible square matrix together with its exact inverse."""

    matrix: PrimeFieldMatrix
    inverse: PrimeFieldMatrix

    @classmethod
    def from_matrix(cls, m: PrimeFieldMatrix) -> "GLElement":
        if m.rows != m.cols:
            raise DimensionError("GL elements are square")
        return cls(m, PrimeFieldMatrix(m.p, mat_inverse(m.entries, m.p)))

    def __post_init__(self):
        prod = mat_mul(self.matrix.entries, self.inverse.entries, self.matrix.p)
        if prod != identity_rows(self.matrix.rows):
            raise RankError("inverse check failed")


class RcefDecomposition(NamedTuple):
    reduced: PrimeFieldMatrix
    transform: GLElement


def rcef_decompose(a: PrimeFieldMatrix) -> RcefDecomposition:
    """Factor a full-column-rank matrix as reduced * transform^-1.

    reduced = a @ transform is the reduced column echelon representative of
    the column space of a; transform is the unique GL element achieving this.
    """
    red, tau = rcef_transform(a.entries, a.p)
    return RcefDecomposition(
        PrimeFieldMatrix(a.p, red),
        GLElement.from_matrix(PrimeFieldMatrix(a.p, tau)),
    )


class TwoSidedDecomposition(NamedTuple):
    middle: GLElement
    left: PrimeFieldMatrix
    right: PrimeFieldMatrix


def two_sided_decompose(a: PrimeFieldMatrix) -> TwoSidedDecomposition:
    """Write a square matrix of rank k as left @ middle @ right^T.

    left and right are the reduced column echelon representatives of the
    column space and row space; middle is the unique invertible k x k factor.
    """
    p = a.p
    k = a.rank
    if k == 0:
        raise RankError("zero matrix has no two-sided echelon factorization")
    col_rows = [row for row in mat_rref(mat_transpose(a.entries), p) if any(row)]
    left = mat_transpose(tuple(col_rows))  # n x k, RCEF
    row_rows = [row for row in mat_rref(a.entries, p) if any(row)]
    right = mat_transpose(tuple(row_rows))  # n x k, RCEF
    # selector left-inverse of `left` from the pivot rows of its transpose
    piv_l = rref_pivots(mat_transpose(left), p)
    n = len(a.entries)
    l0 = tuple(tuple(1 if j == piv_l[i] else 0 for j in range(n)) for i in range(k))
    piv_r = rref_pivots(tuple(row_rows), p)
    i1 = tuple(tuple(1 if piv_r[j] == i else 0 for j in range(k)) for i in range(n))
    gamma = mat_mul(mat_mul(l0, a.entries, p), i1, p)
    check = mat_mul(mat_mul(left, gamma, p), tuple(row_rows), p)
    if check != a.entries:
        raise RankError("two-sided factorization failed internal verification")
    return TwoSidedDecomposition(
        GLElement.from_matrix(PrimeFieldMatrix(p, gamma)),
        PrimeFieldMatrix(p, left),
        PrimeFieldMatrix(p, right),
    )


def surjection_matrix(f: RigidSurjection, p: int) -> PrimeFieldMatrix:
    """The matrix whose j-th row is the vector label f(j).

    The codomain must be all of F_p^k in antilex order.  The result has full
    column rank and its transpose is in reduced row echelon form.
    """
    labels = f.codomain.labels
    if labels is None:
        raise DomainError("codomain carries no vector labels")
    k = len(labels[0])
    if labels != tuple(antilex_vectors(p, k)):
        raise DomainError("codomain must enumerate all of F_p^k in antilex order")
    m = PrimeFieldMatrix(p, tuple(labels[v] for v in f.map))
    if m.rank != k or not m.is_rcef:
        raise DomainError("row matrix of the surjection is not an echelon matrix")
    return m


def matrix_to_surjection(a: PrimeFieldMatrix) -> RigidSurjection:
    """Inverse of surjection_matrix on its image.

    Requires the rows of a to cover all of F_p^k and to list first occurrences
    in increasing antilex order.
    """
    k = a.cols
    vectors = antilex_vectors(a.p, k)
    if set(a.entries) != set(vectors):
        raise DomainError("rows do not cover F_p^k")
    values = tuple(antilex_rank(row, a.p) for row in a.entries)
    if not is_rigid_surjection(values, a.rows, a.p**k):
        raise DomainError("row map is not rigid")
    return RigidSurjection(a.rows, antilex_order(a.p, k), values)


def linear_map_is_rigid(a: PrimeFieldMatrix, cap: int = 4096) -> bool:
    """Whether x -> a.x is a rigid surjection between antilex-ordered spaces.

    Enumerates all p^cols domain vectors (little-endian code order equals the
    antilex order), so p^cols is capped.
    """
    p = a.p
    n = a.cols
    k = a.rows
    if p**n > cap:
        raise BudgetError(f"{p}^{n} domain vectors exceed the cap {cap}")
    rows = a.entries
    first_seen: dict[int, int] = {}
    for code in range(p**n):
        c = code
        x = []
        for _ in range(n):
            x.append(c % p)
            c //= p
        image = tuple(sum(rows[i][j] * x[j] for j in range(n)) % p for i in range(k))
        icode = antilex_rank(image, p)
        if icode not in first_seen:
            first_seen[icode] = code
    if len(first_seen) != p**k:
        return False
    mins = [first_seen[i] for i in range(p**k)]
    return all(mins[i] < mins[i + 1] for i in range(len(mins) - 1))


def rref_characterization(a: PrimeFieldMatrix, cap: int = 4096) -> tuple[bool, bool]:
    """Evaluate both sides of the echelon/rigidity equivalence for a k x n matrix.

    Left: a is in RREF.  Right: the induced linear map is a rigid surjection
    (antilex orders on both sides) and every unit vector appears as a column.
    The matrix must have full row rank.
    """
    if a.rank != a.rows:
        raise RankError("characterization needs full row rank")
    lhs = a.is_rref
    cols = set(mat_transpose(a.entries))
    units = {tuple(1 if i == j else 0 for i in range(a.rows)) for j in range(a.rows)}
    rhs = units <= cols and linear_map_is_rigid(a, cap)
    return lhs, rhs


def gl_order(p: int, k: int) -> int:
    """Order of GL_k(F_p): product of (p^k - p^i) for i < k."""
    _check_prime(p)
    if k < 1:
        raise DomainError("k must be positive")
    out = 1
    for i in range(k):
        out *= p**k - p**i
    return out


def gaussian_binomial(n: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^n."""
    if not 0 <= k <= n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= p ** (n - i) - 1
        den *= p ** (k - i) - 1
    assert num % den == 0
    return num // den


@lru_cache(maxsize=None)
def enumerate_gl(p: int, k: int) -> tuple[PrimeFieldMatrix, ...]:
    """All invertible k x k matrices over F_p (brute force, cached)."""
    if p ** (k * k) > 600000:
        raise BudgetError(f"GL_{k}(F_{p}) enumeration too large")
    out = []
    for flat in product(range(p), repeat=k * k):
        rows = tuple(flat[i * k : (i + 1) * k] for i in range(k))
        if mat_rank(rows, p) == k:
            out.append(PrimeFieldMatrix(p, rows))
    return tuple(out)


def enumerate_grassmannian(p: int, k: int, n: int,
                           budget: int = 250000) -> list[PrimeFieldMatrix]:
    """One reduced-column-echelon representative per k-subspace of F_p^n.

    Representatives are n x k with full column rank and transpose in RREF,
    emitted by pivot-row tuple then free entries, lexicographically.
    """
    _check_prime(p)
    if not 1 <= k <= n:
        raise DomainError(f"need 1 <= k <= n, got k={k}, n={n}")
    count = gaussian_binomial(n, k, p)
    if count > budget:
        raise BudgetError(f"{count} subspaces exceed the budget {budget}")
    out = []
    for pivots in combinations(range(n), k):
        free_rows = []  # (row index, number of free leading coordinates)
        pil = set(pivots)
        for j in range(n):
            if j not in pil:
                width = sum(1 for q in pivots if q < j)
                if width:
                    free_rows.append((j, width))
        free_total = sum(w for _, w in free_rows)
        for assign in product(range(p), repeat=free_total):
            rows = [[0] * k for _ in range(n)]
            for i, q in enumerate(pivots):
                rows[q][i] = 1
            pos = 0
            for j, width in free_rows:
                for c in range(width):
                    rows[j][c] = assign[pos]
                    pos += 1
            out.append(PrimeFieldMatrix(p, rows))
    assert len(out) == count
    return out


def enumerate_full_column_rank(p: int, n: int, k: int,
                               budget: int = 500000) -> list[PrimeFieldMatrix]:
    """All n x k matrices of rank k, as echelon representative times GL element."""
    reps = enumerate_grassmannian(p, k, n, budget)
    gl = enumerate_gl(p, k)
    if len(reps) * len(gl) > budget:
        raise BudgetError(
            f"{len(reps) * len(gl)} full-rank matrices exceed the budget {budget}"
        )
    return [r * g for r in reps for g in gl]


def column_space_rep(a: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """Canonical echelon representative (n x rank) of the column space of a."""
    rows = [row for row in mat_rref(mat_transpose(a.entries), a.p) if any(row)]
    if not rows:
        raise RankError("zero matrix spans no subspace")
    return PrimeFieldMatrix(a.p, mat_transpose(tuple(rows)))
