"""Finite pointed metric spaces and their polyhedral transportation-norm spaces.

The norm on formal differences of point masses is computed two ways on every
call: as the optimal transport-style l1 cost over elementary difference
molecules, and as the dual optimum over 1-Lipschitz potentials vanishing at
the basepoint.  The two exact LP values must coincide; any gap is a bug, so
it raises.  No floats anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from ._util import format_rational, parse_rational
from .errors import BudgetError, DimensionError, DomainError, InfeasibleError, MetricError
from .exactlp import minimize_l1_combination, solve_lp
from .normgeo import NormedMap, PolyhedralSpace

__all__ = [
    "FiniteMetricSpace",
    "FreeVector",
    "one_point_extension",
    "lipschitz_norm",
    "free_norm",
    "free_space",
    "molecules",
    "extend_embedding",
    "enumerate_emb",
    "grid_ball_space",
]


class FiniteMetricSpace:
    """A finite metric space with exact rational distances and a basepoint."""

    def __init__(self, distances: Sequence[Sequence], basepoint: int = 0,
                 labels: Optional[Sequence[str]] = None):
        d = [[Fraction(x) for x in row] for row in distances]
        n = len(d)
        if n < 1 or any(len(row) != n for row in d):
            raise DimensionError("distance matrix must be square")
        for i in range(n):
            if d[i][i] != 0:
                raise MetricError("diagonal must vanish")
            for j in range(n):
                if d[i][j] != d[j][i]:
                    raise MetricError("distances must be symmetric")
                if i != j and d[i][j] <= 0:
                    raise MetricError("off-diagonal distances must be positive")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if d[i][j] > d[i][k] + d[k][j]:
                        raise MetricError(
                            f"triangle inequality fails on ({i},{j},{k})"
                        )
        if not 0 <= basepoint < n:
            raise DomainError("basepoint out of range")
        self.n = n
        self.d = tuple(tuple(row) for row in d)
        self.basepoint = basepoint
        self.labels = tuple(labels) if labels is not None else None

    def dist(self, i: int, j: int) -> Fraction:
        return self.d[i][j]

    def min_distance(self) -> Fraction:
        return min(self.d[i][j] for i in range(self.n) for j in range(i + 1, self.n))

    def diameter(self) -> Fraction:
        return max(self.d[i][j] for i in range(self.n) for j in range(self.n))

    def restrict(self, points: Sequence[int], basepoint: int = 0) -> "FiniteMetricSpace":
        pts = list(points)
        return FiniteMetricSpace(
            [[self.d[a][b] for b in pts] for a in pts], basepoint
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": [[format_rational(x) for x in row] for row in self.d],
            "basepoint": self.basepoint,
        }

    @classmethod
    def from_json(cls, data: dict) -> "FiniteMetricSpace":
        return cls(
            [[parse_rational(x) for x in row] for row in data["d"]],
            data.get("basepoint", 0),
        )

    def __repr__(self):
        return f"FiniteMetricSpace(n={self.n}, basepoint={self.basepoint})"


@dataclass(frozen=True)
class FreeVector:
    """Coordinates of a formal combination of point masses minus the basepoint.

    Entry i is the coefficient of point i of the space with the basepoint
    removed (length n-1, indices skip the basepoint).
    """

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(x) for x in self.coords))

    @classmethod
    def point_mass(cls, space: FiniteMetricSpace, i: int, j: int) -> "FreeVector":
        """The difference of the point masses at i and j."""
        coords = [Fraction(0)] * (space.n - 1)
        for pt, sign in ((i, 1), (j, -1)):
            if pt != space.basepoint:
                coords[_free_index(space, pt)] += sign
        return cls(tuple(coords))


def _free_index(space: FiniteMetricSpace, point: int) -> int:
    return point if point < space.basepoint else point - 1


def _free_points(space: FiniteMetricSpace) -> list[int]:
    return [p for p in range(space.n) if p != space.basepoint]


def one_point_extension(space: FiniteMetricSpace,
                        dist: Optional[Fraction] = None) -> FiniteMetricSpace:
    """Append a new point at a uniform distance from every old point.

    The distance defaults to the least positive distance of the space; the
    result is validated exactly, and spaces whose diameter exceeds twice the
    chosen distance are rejected because the triangle inequality fails.
    """
    if space.n < 2:
        raise DomainError("extension needs at least two points")
    c = Fraction(dist) if dist is not None else space.min_distance()
    n = space.n
    d = [list(row) + [c] for row in space.d]
    d.append([c] * n + [Fraction(0)])
    return FiniteMetricSpace(d, basepoint=space.basepoint)


def lipschitz_norm(space: FiniteMetricSpace, values: Sequence) -> Fraction:
    """Best Lipschitz constant of a potential vanishing at the basepoint."""
    vals = [Fraction(x) for x in values]
    if len(vals) != space.n:
        raise DimensionError("one value per point")
    if vals[space.basepoint] != 0:
        raise DomainError("potential must vanish at the basepoint")
    best = Fraction(0)
    for i in range(space.n):
        for j in range(i + 1, space.n):
            best = max(best, abs(vals[i] - vals[j]) / space.d[i][j])
    return best


def molecules(space: FiniteMetricSpace) -> list[tuple[FreeVector, tuple[int, int]]]:
    """Normalized elementary differences (one per unordered pair), with labels."""
    out = []
    for i, j in combinations(range(space.n), 2):
        fv = FreeVector.point_mass(space, i, j)
        scaled = FreeVector(tuple(x / space.d[i][j] for x in fv.coords))
        out.append((scaled, (i, j)))
    return out


def free_norm(vector, space: FiniteMetricSpace) -> Fraction:
    """Exact transportation norm of a free vector.

    Primal: least total weight of a signed molecule representation.  Dual:
    largest pairing with a 1-Lipschitz potential vanishing at the basepoint.
    Both are solved exactly and must agree.
    """
    coords = vector.coords if isinstance(vector, FreeVector) else tuple(
        Fraction(x) for x in vector
    )
    if len(coords) != space.n - 1:
        raise DimensionError("free vectors have one coordinate per non-basepoint point")
    mols = [m.coords for m, _ in molecules(space)]
    primal, _ = minimize_l1_combination(mols, coords)

    free_pts = _free_points(space)
    nv = len(free_pts)
    cost = [-c for c in coords]  # maximize <coords, f> = minimize -<coords, f>
    a_ub = []
    b_ub = []
    for ii in range(nv):
        for jj in range(ii + 1, nv):
            dij = space.d[free_pts[ii]][free_pts[jj]]
            row = [Fraction(0)] * nv
            row[ii], row[jj] = Fraction(1), Fraction(-1)
            a_ub.append(list(row))
            b_ub.append(dij)
            a_ub.append([-x for x in row])
            b_ub.append(dij)
    for ii in range(nv):
        dpi = space.d[free_pts[ii]][space.basepoint]
        row = [Fraction(0)] * nv
        row[ii] = Fraction(1)
        a_ub.append(list(row))
        b_ub.append(dpi)
        a_ub.append([-x for x in row])
        b_ub.append(dpi)
    dual_neg, _ = solve_lp(cost, a_ub, b_ub)
    dual = -dual_neg
    if primal != dual:
        raise AssertionError(
            f"transportation norm duality gap: primal {primal} != dual {dual}"
        )
    return primal


def free_space(space: FiniteMetricSpace) -> PolyhedralSpace:
    """The polyhedral normed space of formal differences over the space.

    Ball vertices are the extreme normalized molecules; the functional
    description is derived exactly and agrees with free_norm pointwise.
    """
    dim = space.n - 1
    if dim > 5:
        raise BudgetError("free-space conversion capped at 6 points")
    mols = [m.coords for m, _ in molecules(space)]
    extreme = []
    for idx, m in enumerate(mols):
        others = [q for j, q in enumerate(mols) if j != idx]
        signed = [s for q in others for s in (q, tuple(-x for x in q))]
        if not signed:
            extreme.append(m)
            continue
        try:
            value, _ = minimize_l1_combination(signed, m)
        except InfeasibleError:
            value = None
        if value is None or value > 1:
            extreme.append(m)
    out = PolyhedralSpace.from_ball_vertices(extreme or mols, tag="free-space")
    return out


def extend_embedding(sigma: Sequence[int], inner: FiniteMetricSpace,
                     outer: FiniteMetricSpace) -> NormedMap:
    """Extend a distance-preserving injection to the extended free spaces.

    Both spaces get a uniform new point at the least positive distance of the
    outer space; the induced map sends the inner point masses to their images
    and is exactly isometric.
    """
    sigma = tuple(int(s) for s in sigma)
    if len(sigma) != inner.n or len(set(sigma)) != inner.n:
        raise DomainError("sigma must be an injection defined on every point")
    for i in range(inner.n):
        for j in range(inner.n):
            if inner.d[i][j] != outer.d[sigma[i]][sigma[j]]:
                raise DomainError("sigma does not preserve distances")
    c = outer.min_distance()
    inner_ext = one_point_extension(
        FiniteMetricSpace(inner.d, basepoint=inner.basepoint), dist=c
    )
    outer_ext = one_point_extension(outer, dist=c)
    # new point is the last index and becomes the basepoint of both extensions
    inner_base = FiniteMetricSpace(inner_ext.d, basepoint=inner.n)
    outer_base = FiniteMetricSpace(outer_ext.d, basepoint=outer.n)
    dom = free_space(inner_base)
    cod = free_space(outer_base)
    rows = []
    for out_pt in _free_points(outer_base):
        row = [Fraction(0)] * (inner_base.n - 1)
        for in_idx, in_pt in enumerate(_free_points(inner_base)):
            if in_pt < inner.n and sigma[in_pt] == out_pt:
                row[in_idx] = Fraction(1)
        rows.append(tuple(row))
    t_map = NormedMap(rows, dom, cod)
    if not t_map.is_isometric_embedding():
        raise AssertionError("extension failed the exact isometry check")
    return t_map


def enumerate_emb(inner: FiniteMetricSpace, outer: FiniteMetricSpace,
                  cap: int = 10) -> list[tuple[int, ...]]:
    """All distance-preserving injections, in lex order on image tuples."""
    if outer.n > cap:
        raise BudgetError(f"target size {outer.n} exceeds the cap {cap}")
    out: list[tuple[int, ...]] = []
    image: list[int] = []

    def rec():
        i = len(image)
        if i == inner.n:
            out.append(tuple(image))
            return
        for cand in range(outer.n):
            if cand in image:
                continue
            if all(outer.d[cand][image[j]] == inner.d[i][j] for j in range(i)):
                image.append(cand)
                rec()
                image.pop()

    rec()
    return out


def grid_ball_space(radius, dim: int, step, cap: int = 400) -> FiniteMetricSpace:
    """The sup-metric space of grid points inside a scaled sup-norm ball.

    This is the discretized target used by the embedding probe; the grid step
    is explicit and reported by the caller.
    """
    radius = Fraction(radius)
    step = Fraction(step)
    if radius <= 0 or step <= 0:
        raise DomainError("radius and step must be positive")
    top = int(radius / step)
    axis = [step * i for i in range(-top, top + 1)]
    pts = []

    def build(prefix):
        if len(prefix) == dim:
            pts.append(tuple(prefix))
            return
        for a in axis:
            build(prefix + [a])

    build([])
    if len(pts) > cap:
        raise BudgetError(f"{len(pts)} grid points exceed the cap {cap}")
    d = [[max(abs(a - b) for a, b in zip(p, q)) for q in pts] for p in pts]
    return FiniteMetricSpace(d, basepoint=0, labels=[str(p) for p in pts])
