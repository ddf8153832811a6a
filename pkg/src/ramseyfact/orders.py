"""Finite linear orders, rigid surjections, and bounded-height map combinatorics.

All enumerations are emitted in lexicographic order on the underlying value
arrays so that downstream searches and reports are deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from .errors import DimensionError, DomainError, InvalidHeightError

__all__ = [
    "LinearOrder",
    "RigidSurjection",
    "FinMap",
    "compare_antilex",
    "antilex_rank",
    "antilex_vectors",
    "antilex_order",
    "is_rigid_surjection",
    "enumerate_epi",
    "compose_epi",
    "tetris",
    "tetris_power",
    "enumerate_fin",
    "combinatorial_space",
]


def compare_antilex(x: Sequence[int], y: Sequence[int]) -> int:
    """Compare two field vectors from the highest coordinate downward.

    Residues are ordered naturally (0 < 1 < ... < p-1), which makes the zero
    vector the minimum of F_p^k.  Returns -1, 0 or 1.
    """
    if len(x) != len(y):
        raise DimensionError(
            f"antilex comparison needs equal lengths, got {len(x)} and {len(y)}"
        )
    for i in range(len(x) - 1, -1, -1):
        if x[i] != y[i]:
            return -1 if x[i] < y[i] else 1
    return 0


def antilex_rank(v: Sequence[int], p: int) -> int:
    """Position of v in the antilexicographic enumeration of F_p^k."""
    rank = 0
    for i in range(len(v) - 1, -1, -1):
        rank = rank * p + v[i]
    return rank


def antilex_vectors(p: int, k: int) -> list[tuple[int, ...]]:
    """All of F_p^k in increasing antilexicographic order.

    The order agrees with little-endian base-p counting: coordinate 0 is the
    least significant digit.
    """
    out = []
    for code in range(p**k):
        c = code
        vec = []
        for _ in range(k):
            vec.append(c % p)
            c //= p
        out.append(tuple(vec))
    return out


@dataclass(frozen=True)
class LinearOrder:
    """A finite linear order 0 < 1 < ... < size-1, optionally carrying labels.

    Labels, when present, must be pairwise distinct and listed in the
    increasing order of the structure they encode (e.g. vectors under the
    antilex order); factory helpers construct them sorted.
    """

    size: int
    labels: Optional[tuple] = None

    def __post_init__(self):
        if self.size < 1:
            raise DomainError("linear order needs at least one element")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != self.size:
                raise DimensionError("label count must match order size")
            if len(set(labels)) != self.size:
                raise DomainError("labels must be pairwise distinct")

    def label(self, i: int):
        return self.labels[i] if self.labels is not None else i


def antilex_order(p: int, k: int) -> LinearOrder:
    """The linear order of F_p^k under the antilexicographic comparison."""
    return LinearOrder(p**k, tuple(antilex_vectors(p, k)))


def is_rigid_surjection(values: Sequence[int], n: Optional[int] = None,
                        k: Optional[int] = None) -> bool:
    """True iff the map is surjective with strictly increasing preimage minima.

    Equivalently the value array is a restricted growth string attaining all
    of 0..k-1: each new value seen while scanning left-to-right must equal the
    number of values seen before it.
    """
    if n is not None and len(values) != n:
        return False
    seen = 0
    for v in values:
        if v < 0 or (k is not None and v >= k):
            return False
        if v > seen:
            return False
        if v == seen:
            seen += 1
    return seen == (k if k is not None else seen) and seen > 0


@dataclass(frozen=True)
class RigidSurjection:
    """A surjection onto a linear order whose preimage minima increase."""

    domain_size: int
    codomain: LinearOrder
    map: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "map", tuple(self.map))
        if len(self.map) != self.domain_size:
            raise DimensionError("map length must equal the domain size")
        if not is_rigid_surjection(self.map, self.domain_size, self.codomain.size):
            raise DomainError(f"not a rigid surjection: {self.map}")

    def __call__(self, j: int) -> int:
        return self.map[j]

    def label(self, j: int):
        return self.codomain.label(self.map[j])

    def to_json(self) -> list[int]:
        return list(self.map)


def _growth_strings(n: int, k: int):
    # restricted growth strings of length n attaining exactly k values, lex order
    if n < k or k < 1:
        return
    vals = [0] * n

    def rec(i, used):
        if i == n:
            if used == k:
                yield tuple(vals)
            return
        if used + (n - i) < k:
            return
        top = min(used, k - 1)
        for v in range(top + 1):
            vals[i] = v
            yield from rec(i + 1, used + (1 if v == used else 0))

    yield from rec(0, 0)


def enumerate_epi(n: int, codomain) -> list[RigidSurjection]:
    """All rigid surjections from n onto the codomain, lex ordered on maps.

    The codomain may be a LinearOrder or a plain size.  Returns [] when
    n < |codomain|.
    """
    if not isinstance(codomain, LinearOrder):
        codomain = LinearOrder(int(codomain))
    return [
        RigidSurjection(n, codomain, vals)
        for vals in _growth_strings(n, codomain.size)
    ]


def compose_epi(g: RigidSurjection, f: RigidSurjection) -> RigidSurjection:
    """Pointwise composition f(g(.)): Epi(n,m) then Epi(m,k) gives Epi(n,k)."""
    if g.codomain.size != f.domain_size:
        raise DimensionError(
            f"cannot compose: inner codomain {g.codomain.size} != outer domain {f.domain_size}"
        )
    values = tuple(f.map[v] for v in g.map)
    return RigidSurjection(g.domain_size, f.codomain, values)


class FinMap:
    """A map n -> {0..k} attaining k.  k == 0 is the degenerate zero map.

    Degenerate maps are representable but flagged; enumeration helpers never
    emit them unless asked for height 0 explicitly.
    """

    __slots__ = ("values", "k")

    def __init__(self, values: Sequence[int], k: Optional[int] = None):
        values = tuple(values)
        if not values:
            raise DomainError("FinMap needs a nonempty domain")
        if min(values) < 0:
            raise DomainError("FinMap values must be nonnegative")
        top = max(values)
        if k is None:
            k = top
        elif top != k:
            raise DomainError(f"height {k} not attained (max value {top})")
        self.values = values
        self.k = k

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def is_degenerate(self) -> bool:
        return self.k == 0

    @property
    def support(self) -> frozenset:
        return frozenset(i for i, v in enumerate(self.values) if v)

    def __eq__(self, other):
        return isinstance(other, FinMap) and self.values == other.values

    def __hash__(self):
        return hash(self.values)

    def __repr__(self):
        return f"FinMap({list(self.values)})"

    def to_json(self) -> dict:
        return {"k": self.k, "values": list(self.values)}

    @classmethod
    def from_json(cls, data: dict) -> "FinMap":
        return cls(data["values"], data.get("k"))


def tetris(f: FinMap) -> FinMap:
    """Lower every value by one, floored at zero.  Height drops by one."""
    if f.k < 1:
        raise InvalidHeightError("tetris needs height at least 1")
    return FinMap(tuple(max(v - 1, 0) for v in f.values))


def tetris_power(f: FinMap, t: int) -> FinMap:
    """Apply the tetris lowering t times in one pass."""
    if t < 0:
        raise DomainError("tetris power must be nonnegative")
    if t > f.k:
        raise InvalidHeightError(f"cannot lower height {f.k} by {t}")
    return FinMap(tuple(max(v - t, 0) for v in f.values))


def enumerate_fin(k: int, n: int) -> list[FinMap]:
    """All maps n -> {0..k} attaining k, in lex order on value tuples."""
    if k < 1:
        raise InvalidHeightError("enumerate_fin needs height at least 1")
    out = []
    for vals in product(range(k + 1), repeat=n):
        if max(vals) == k:
            out.append(FinMap(vals))
    return out


def combinatorial_space(blocks: Sequence[FinMap], k: int) -> list[FinMap]:
    """All height-k combinations of disjointly supported height-k blocks.

    One output per choice of residual heights (one per block, forming a map
    that attains k); each block is lowered to its chosen height and the
    results are summed over the disjoint supports.  Output is duplicate-free
    and lex sorted.
    """
    blocks = list(blocks)
    if not blocks:
        raise DomainError("need at least one block")
    n = blocks[0].n
    seen_support: set[int] = set()
    for b in blocks:
        if b.n != n:
            raise DimensionError("blocks must share a domain size")
        if b.k != k:
            raise DomainError(f"block height {b.k} != {k}")
        if seen_support & set(b.support):
            raise DomainError("blocks must be disjointly supported")
        seen_support |= set(b.support)
    out = set()
    for heights in enumerate_fin(k, len(blocks)):
        vals = [0] * n
        for b, j in zip(blocks, heights.values):
            drop = k - j
            for pos in b.support:
                vals[pos] = max(b.values[pos] - drop, 0)
        out.add(FinMap(vals, k))
    return sorted(out, key=lambda f: f.values)
