"""Desk-scale adversarial search for colorings defeating factorization targets.

An instance carries a ground set, a color count r, and a family of copies.
A plain copy is defeated by a coloring iff it is not monochromatic; a fibered
copy is defeated iff some fiber receives two colors (the coloring fails to
factor through the fiber labels on that copy).  A *bad coloring* defeats
every copy; its nonexistence at a given size certifies the instance.

The searcher is a complete backtracker over ground elements in their canonical
order, trying colors in increasing order and never introducing color c before
all of 0..c-1 (any bad coloring is color-permutable, so the least witness is
introduction-ordered).  The first witness found is therefore the
lexicographically least bad coloring.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import BudgetError, DomainError
from . import ffmat
from .boolmat import (
    PermutationMatrix,
    boolean_product,
    enumerate_ba,
    enumerate_oba,
)
from .ffmat import PrimeFieldMatrix, enumerate_gl, enumerate_grassmannian, mat_mul
from .orders import FinMap, compose_epi, enumerate_epi, enumerate_fin, combinatorial_space

__all__ = [
    "Copy",
    "ColoringProblem",
    "SearchOutcome",
    "drt_instance",
    "glr_instance",
    "ff_factor_instance",
    "bool_factor_instance",
    "gowers_instance",
    "exists_bad_coloring",
    "naive_bad_coloring",
    "naive_bad_exists",
    "verify_witness",
    "min_n",
    "build_instance",
    "FAMILIES",
]

BAD_FOUND = "bad-coloring-found"
NO_BAD = "no-bad-coloring"
BUDGET = "budget-exhausted"

DEFAULT_MAX_NODES = 10**7
DEFAULT_MAX_SECONDS = 60.0


@dataclass(frozen=True)
class Copy:
    """A monochromatic target (single fiber) or a factor target (several)."""

    fibers: tuple[tuple[int, ...], ...]

    @classmethod
    def plain(cls, elements: Sequence[int]) -> "Copy":
        return cls((tuple(sorted(set(elements))),))

    @classmethod
    def fibered(cls, fibers: Sequence[Sequence[int]]) -> "Copy":
        cleaned = tuple(tuple(sorted(set(f))) for f in fibers if f)
        return cls(cleaned)

    @property
    def is_plain(self) -> bool:
        return len(self.fibers) == 1

    @property
    def elements(self) -> tuple[int, ...]:
        out = []
        for f in self.fibers:
            out.extend(f)
        return tuple(sorted(out))


@dataclass
class ColoringProblem:
    ground: tuple
    copies: list[Copy]
    r: int
    family: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.r < 1:
            raise DomainError("need at least one color")
        n = len(self.ground)
        for c in self.copies:
            used = set()
            for f in c.fibers:
                for e in f:
                    if not 0 <= e < n:
                        raise DomainError("copy element out of range")
                    if e in used:
                        raise DomainError("fibers within a copy must be disjoint")
                    used.add(e)
            if not used:
                raise DomainError("copies must carry at least one element")

    def describe(self) -> dict:
        return {
            "family": self.family,
            "params": self.params,
            "ground_size": len(self.ground),
            "copies": len(self.copies),
            "r": self.r,
        }


@dataclass
class SearchOutcome:
    status: str
    witness: Optional[tuple[int, ...]]
    nodes: int
    seconds: float

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "witness": list(self.witness) if self.witness is not None else None,
            "stats": {"nodes": self.nodes, "seconds": self.seconds},
        }


def verify_witness(problem: ColoringProblem, witness: Sequence[int]) -> bool:
    """Independent replay: every copy must have a two-colored fiber."""
    if len(witness) != len(problem.ground):
        return False
    if any(not 0 <= c < problem.r for c in witness):
        return False
    for copy in problem.copies:
        if not any(
            len({witness[e] for e in fiber}) > 1 for fiber in copy.fibers
        ):
            return False
    return True


def exists_bad_coloring(problem: ColoringProblem,
                        max_nodes: int = DEFAULT_MAX_NODES,
                        max_seconds: float = DEFAULT_MAX_SECONDS) -> SearchOutcome:
    """Complete backtracking search for a bad coloring.

    Assigns ground elements in canonical order; a copy whose elements are all
    colored without any two-colored fiber prunes the branch.  Returns the
    lexicographically least witness, a completed no-bad-coloring verdict, or
    a budget outcome.
    """
    g = len(problem.ground)
    r = problem.r
    copies = problem.copies
    ncopies = len(copies)

    # flat fiber bookkeeping: for each element, the (copy, fiber) slots it fills
    fiber_ids: list[tuple[int, int]] = []  # fiber -> (copy index, size)
    membership: list[list[tuple[int, int]]] = [[] for _ in range(g)]
    copy_sizes = [0] * ncopies
    for ci, copy in enumerate(copies):
        for fiber in copy.fibers:
            fid = len(fiber_ids)
            fiber_ids.append((ci, len(fiber)))
            for e in fiber:
                membership[e].append((ci, fid))
            copy_sizes[ci] += len(fiber)

    nf = len(fiber_ids)
    fiber_first = [-1] * nf        # first color seen in the fiber
    fiber_count = [0] * nf
    copy_violated = [0] * ncopies  # number of two-colored fibers in the copy
    copy_colored = [0] * ncopies

    colors = [0] * g
    nodes = 0
    started = time.monotonic()
    deadline = started + max_seconds

    fiber_two = [False] * nf

    def assign(e: int, c: int):
        undo = []
        ok = True
        for ci, fid in membership[e]:
            newly = False
            if fiber_count[fid] == 0:
                fiber_first[fid] = c
            elif not fiber_two[fid] and fiber_first[fid] != c:
                fiber_two[fid] = True
                copy_violated[ci] += 1
                newly = True
            fiber_count[fid] += 1
            copy_colored[ci] += 1
            undo.append((ci, fid, newly))
            if copy_colored[ci] == copy_sizes[ci] and copy_violated[ci] == 0:
                ok = False
        return ok, undo

    def unassign(e: int, undo):
        for ci, fid, newly in undo:
            fiber_count[fid] -= 1
            copy_colored[ci] -= 1
            if newly:
                fiber_two[fid] = False
                copy_violated[ci] -= 1

    status = [NO_BAD]

    def search(idx: int, max_used: int) -> bool:
        nonlocal nodes
        if idx == g:
            return True
        top = min(max_used + 1, r - 1)
        for c in range(top + 1):
            nodes += 1
            if nodes > max_nodes or time.monotonic() > deadline:
                status[0] = BUDGET
                return False
            colors[idx] = c
            ok, undo = assign(idx, c)
            if ok and search(idx + 1, max(max_used, c)):
                return True
            unassign(idx, undo)
            if status[0] == BUDGET:
                return False
        return False

    if sys.getrecursionlimit() < g + 200:
        sys.setrecursionlimit(g + 200)
    found = search(0, -1)
    elapsed = time.monotonic() - started
    if found:
        witness = tuple(colors)
        if not verify_witness(problem, witness):
            raise AssertionError("search returned an invalid witness")
        return SearchOutcome(BAD_FOUND, witness, nodes, elapsed)
    if status[0] == BUDGET:
        return SearchOutcome(BUDGET, None, nodes, elapsed)
    return SearchOutcome(NO_BAD, None, nodes, elapsed)


def naive_bad_coloring(problem: ColoringProblem,
                       cap: int = 2**22) -> SearchOutcome:
    """Exhaustive scan of all r^|ground| colorings (oracle for small instances).

    For two colors the scan is vectorized over bitmask encodings with the
    first ground element in the most significant position, so the first bad
    encoding is the lexicographically least witness.
    """
    g = len(problem.ground)
    r = problem.r
    total = r**g
    if total > cap:
        raise BudgetError(f"{total} colorings exceed the cap {cap}")
    started = time.monotonic()
    if r == 2:
        import numpy as np

        xs = np.arange(total, dtype=np.uint64)
        bad = np.ones(total, dtype=bool)
        for copy in problem.copies:
            violated = np.zeros(total, dtype=bool)
            for fiber in copy.fibers:
                mask = 0
                for e in fiber:
                    mask |= 1 << (g - 1 - e)
                sel = xs & np.uint64(mask)
                violated |= (sel != 0) & (sel != np.uint64(mask))
            bad &= violated
        idx = int(np.argmax(bad))
        if bad[idx]:
            witness = tuple((idx >> (g - 1 - e)) & 1 for e in range(g))
            return SearchOutcome(BAD_FOUND, witness, total, time.monotonic() - started)
        return SearchOutcome(NO_BAD, None, total, time.monotonic() - started)

    colors = [0] * g
    while True:
        if verify_witness(problem, colors):
            return SearchOutcome(BAD_FOUND, tuple(colors), total, time.monotonic() - started)
        i = g - 1
        while i >= 0 and colors[i] == r - 1:
            colors[i] = 0
            i -= 1
        if i < 0:
            return SearchOutcome(NO_BAD, None, total, time.monotonic() - started)
        colors[i] += 1


def naive_bad_exists(problem: ColoringProblem, cap_bits: int = 36,
                     chunk_words: int = 1 << 19) -> bool:
    """Complete existence scan of all 2-colorings via 64-lane bit slicing.

    Covers ground sizes past the witness-producing oracle (up to cap_bits
    elements); element e occupies bit e of the coloring code, 64 consecutive
    codes per lane word.  Returns whether any bad coloring exists.
    """
    if problem.r != 2:
        raise DomainError("bit-sliced scan handles exactly two colors")
    g = len(problem.ground)
    if g > cap_bits:
        raise BudgetError(f"{g} elements exceed the bit-slice cap {cap_bits}")
    if g <= 20:
        return naive_bad_coloring(problem).status == BAD_FOUND
    import numpy as np

    patterns = [np.uint64(sum(((t >> j) & 1) << t for t in range(64)))
                for j in range(6)]
    total_words = 1 << (g - 6)
    ones = np.uint64(0xFFFFFFFFFFFFFFFF)
    copies = [c.fibers for c in problem.copies]
    for base in range(0, total_words, chunk_words):
        m = min(chunk_words, total_words - base)
        batch = np.arange(base, base + m, dtype=np.uint64)
        cache: dict[int, "np.ndarray"] = {}

        def lane(e):
            w = cache.get(e)
            if w is None:
                if e < 6:
                    w = np.full(m, patterns[e], dtype=np.uint64)
                else:
                    w = np.uint64(0) - ((batch >> np.uint64(e - 6)) & np.uint64(1))
                cache[e] = w
            return w

        bad = np.full(m, ones, dtype=np.uint64)
        for fibers in copies:
            violated = np.zeros(m, dtype=np.uint64)
            for fiber in fibers:
                first = lane(fiber[0])
                diff = np.zeros(m, dtype=np.uint64)
                for e in fiber[1:]:
                    diff |= first ^ lane(e)
                violated |= diff
            bad &= violated
            if not bad.any():
                break
        if bad.any():
            return True
    return False


# ---------------------------------------------------------------------------
# instance builders


def drt_instance(k_small: int, k_large: int, n: int, r: int,
                 max_ground: int = 50000) -> ColoringProblem:
    """Rigid-surjection instance: ground Epi(n, k_small); one monochromatic
    target per gamma in Epi(n, k_large), namely its composites with
    Epi(k_large, k_small)."""
    if not 1 <= k_small < k_large:
        raise DomainError("need 1 <= k_small < k_large")
    ground = enumerate_epi(n, k_small)
    if len(ground) > max_ground:
        raise BudgetError(f"ground size {len(ground)} exceeds {max_ground}")
    index = {f.map: i for i, f in enumerate(ground)}
    sigmas = enumerate_epi(k_large, k_small)
    copies = []
    seen = set()
    for gamma in enumerate_epi(n, k_large):
        elems = tuple(sorted(index[compose_epi(gamma, s).map] for s in sigmas))
        if elems and elems not in seen:
            seen.add(elems)
            copies.append(Copy.plain(elems))
    return ColoringProblem(
        tuple(f.map for f in ground), copies, r,
        family="drt", params={"k_small": k_small, "k_large": k_large, "n": n, "r": r},
    )


def glr_instance(p: int, k: int, m: int, n: int, r: int,
                 max_ground: int = 50000) -> ColoringProblem:
    """Grassmannian instance: ground Gr(k, F_p^n); one monochromatic target
    per m-subspace R, namely the k-subspaces inside R."""
    if not 1 <= k < m or m > n:
        raise DomainError("need 1 <= k < m <= n")
    ground = enumerate_grassmannian(p, k, n, budget=max_ground)
    ground_entries = sorted(g.entries for g in ground)
    index = {e: i for i, e in enumerate(ground_entries)}
    inner = enumerate_grassmannian(p, k, m)
    copies = []
    seen = set()
    for big in enumerate_grassmannian(p, m, n, budget=max_ground):
        elems = set()
        for s in inner:
            prod = PrimeFieldMatrix(p, mat_mul(big.entries, s.entries, p))
            rep = ffmat.column_space_rep(prod)
            elems.add(index[rep.entries])
        elems = tuple(sorted(elems))
        if elems not in seen:
            seen.add(elems)
            copies.append(Copy.plain(elems))
    return ColoringProblem(
        tuple(ground_entries), copies, r,
        family="glr", params={"p": p, "k": k, "m": m, "n": n, "r": r},
    )


def ff_factor_instance(p: int, k: int, m: int, n: int, r: int,
                       max_ground: int = 50000) -> ColoringProblem:
    """Full-rank matrix instance: ground = rank-k n x k matrices; one factor
    target per full-rank echelon R (n x m), whose fibers group the products
    R.A by the column transform invariant of A."""
    if not 1 <= k <= m <= n:
        raise DomainError("need 1 <= k <= m <= n")
    reps_k = enumerate_grassmannian(p, k, n)
    gl = enumerate_gl(p, k)
    if len(reps_k) * len(gl) > max_ground:
        raise BudgetError(
            f"ground size {len(reps_k) * len(gl)} exceeds {max_ground}"
        )
    ground_entries = sorted(
        mat_mul(rep.entries, g.entries, p) for rep in reps_k for g in gl
    )
    index = {e: i for i, e in enumerate(ground_entries)}
    inner = enumerate_grassmannian(p, k, m)
    copies = []
    seen = set()
    for big in enumerate_grassmannian(p, m, n):
        fibers = []
        for delta in gl:
            fiber = set()
            for s in inner:
                a = mat_mul(s.entries, delta.entries, p)
                fiber.add(index[mat_mul(big.entries, a, p)])
            fibers.append(tuple(sorted(fiber)))
        key = tuple(sorted(fibers))
        if key not in seen:
            seen.add(key)
            copies.append(Copy.fibered(fibers))
    return ColoringProblem(
        tuple(ground_entries), copies, r,
        family="ff-factor", params={"p": p, "k": k, "m": m, "n": n, "r": r},
    )


def bool_factor_instance(k: int, m: int, n: int, r: int,
                         max_ground: int = 50000) -> ColoringProblem:
    """Boolean matrix instance: ground = n x k partition matrices; one factor
    target per ordered R (n x m), with fibers grouped by the sorting
    permutation of the inner matrix."""
    if not 1 <= k <= m <= n:
        raise DomainError("need 1 <= k <= m <= n")
    ground = enumerate_ba(n, k)
    if len(ground) > max_ground:
        raise BudgetError(f"ground size {len(ground)} exceeds {max_ground}")
    ground_keys = sorted((b.n, b.columns) for b in ground)
    index = {key: i for i, key in enumerate(ground_keys)}
    obas_inner = enumerate_oba(m, k)
    from itertools import permutations as _perms

    copies = []
    seen = set()
    for big in enumerate_oba(n, m):
        fibers = []
        for perm in _perms(range(k)):
            sigma = PermutationMatrix(perm)
            fiber = set()
            for c in obas_inner:
                b = c.permute_columns(sigma.inverse())
                prod = boolean_product(big, b)
                fiber.add(index[(prod.n, prod.columns)])
            fibers.append(tuple(sorted(fiber)))
        key = tuple(sorted(fibers))
        if key not in seen:
            seen.add(key)
            copies.append(Copy.fibered(fibers))
    return ColoringProblem(
        tuple(ground_keys), copies, r,
        family="bool-factor", params={"k": k, "m": m, "n": n, "r": r},
    )


def gowers_instance(k: int, m: int, n: int, r: int,
                    max_ground: int = 50000) -> ColoringProblem:
    """Bounded-height map instance: ground = maps n -> {0..k} attaining k; one
    monochromatic target per family of m disjointly supported ground maps,
    namely their combination space."""
    if k < 1 or m < 1:
        raise DomainError("need k >= 1 and m >= 1")
    if (k + 1) ** n > max_ground:
        raise BudgetError(f"{(k + 1) ** n} candidate maps exceed {max_ground}")
    ground = enumerate_fin(k, n)
    index = {f.values: i for i, f in enumerate(ground)}
    copies = []
    seen = set()

    def blocks_rec(start_elems: list[FinMap], used: frozenset):
        if len(start_elems) == m:
            space = combinatorial_space(start_elems, k)
            elems = tuple(sorted(index[f.values] for f in space))
            if elems not in seen:
                seen.add(elems)
                copies.append(Copy.plain(elems))
            return
        last_min = min(start_elems[-1].support) if start_elems else -1
        for f in ground:
            sup = f.support
            if not sup or (used & sup):
                continue
            if min(sup) <= last_min:
                continue  # canonical: blocks ordered by least support point
            blocks_rec(start_elems + [f], used | sup)

    blocks_rec([], frozenset())
    return ColoringProblem(
        tuple(f.values for f in ground), copies, r,
        family="gowers", params={"k": k, "m": m, "n": n, "r": r},
    )


FAMILIES = {
    "drt": (drt_instance, ("k_small", "k_large"), "k_large"),
    "glr": (glr_instance, ("p", "k", "m"), "m"),
    "ff-factor": (ff_factor_instance, ("p", "k", "m"), "m"),
    "bool-factor": (bool_factor_instance, ("k", "m"), "m"),
    "gowers": (gowers_instance, ("k", "m"), None),
}


def build_instance(family: str, params: dict, n: int, r: int,
                   max_ground: int = 50000) -> ColoringProblem:
    if family not in FAMILIES:
        raise DomainError(f"unknown family {family!r}")
    builder, names, _ = FAMILIES[family]
    args = [params[name] for name in names]
    return builder(*args, n, r, max_ground=max_ground)


def _scan_start(family: str, params: dict) -> int:
    _, _, start_key = FAMILIES[family]
    if family == "gowers":
        return 1
    return params[start_key]


@dataclass
class MinNResult:
    found_n: Optional[int]
    scan: list[dict]
    status: str  # "found", "not-found", or budget


def min_n(family: str, params: dict, n_max: int, r: int,
          max_nodes: int = DEFAULT_MAX_NODES,
          max_seconds: float = DEFAULT_MAX_SECONDS,
          max_ground: int = 50000) -> MinNResult:
    """Least n <= n_max whose instance admits no bad coloring.

    Each n is checked independently; no monotonicity is assumed.  A budget
    outcome at any n aborts the scan with a budget status.
    """
    scan = []
    for n in range(_scan_start(family, params), n_max + 1):
        problem = build_instance(family, params, n, r, max_ground=max_ground)
        outcome = exists_bad_coloring(problem, max_nodes, max_seconds)
        scan.append({"n": n, "status": outcome.status,
                     "witness": list(outcome.witness) if outcome.witness else None,
                     "nodes": outcome.nodes})
        if outcome.status == BUDGET:
            return MinNResult(None, scan, BUDGET)
        if outcome.status == NO_BAD:
            return MinNResult(n, scan, "found")
    return MinNResult(None, scan, "not-found")
