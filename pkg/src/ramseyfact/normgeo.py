"""Exact rational polyhedral normed-space geometry.

Spaces carry a finite symmetric H-description: ||x|| = max |f(x)| over a
finite functional list whose span is the whole dual.  All core quantities
(norms, operator norms, Hausdorff-style metrics, nets, amalgams, envelopes)
are exact rationals; logarithmic quantities carry their rational argument.
Irrational inputs (Euclidean norms) live behind a small oracle type and are
only ever compared with explicit float tolerances.
"""

from __future__ import annotations

import functools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence, Union

from ._util import format_rational, parse_rational
from .errors import (
    BudgetError,
    DegenerateNormError,
    DimensionError,
    DomainError,
    RankError,
)
from .exactlp import minimize_l1_combination, solve_lp

__all__ = [
    "PolyhedralSpace",
    "NormedMap",
    "LogValue",
    "GRBound",
    "TowerBound",
    "EpsNet",
    "AmalgamResult",
    "CorrectingPairResult",
    "L2Pushforward",
    "op_norm",
    "inv_norm",
    "omega",
    "alpha",
    "bm_upper",
    "gap_metric",
    "eps_net",
    "shell_witness",
    "amalgam",
    "correcting_pair",
    "injective_envelope",
    "factor_through_envelope",
    "polyhedral_approx",
    "bound_n_infty",
    "bound_dim_h",
    "pushforward_norm",
]

Vector = tuple[Fraction, ...]


def _vec(x) -> Vector:
    return tuple(Fraction(v) for v in x)


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _sub(a, b) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def _scale(a, s) -> Vector:
    s = Fraction(s)
    return tuple(x * s for x in a)


def _neg(a) -> Vector:
    return tuple(-x for x in a)


def _mat_vec(rows, x) -> Vector:
    return tuple(_dot(r, x) for r in rows)


def _mat_mul(a, b):
    bt = list(zip(*b))
    return tuple(tuple(_dot(ra, cb) for cb in bt) for ra in a)


def _rank(rows) -> int:
    m = [list(map(Fraction, r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    rank = 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][c]
        m[rank] = [x * inv for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def _solve_square(rows, rhs) -> Optional[Vector]:
    """Exact solution of a square system, or None when singular."""
    n = len(rows)
    m = [list(map(Fraction, rows[i])) + [Fraction(rhs[i])] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return None
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return tuple(m[i][n] for i in range(n))


def _mat_inverse(rows):
    n = len(rows)
    cols = []
    for j in range(n):
        rhs = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
        sol = _solve_square(rows, rhs)
        if sol is None:
            return None
        cols.append(sol)
    return tuple(zip(*cols))


def _canonical_sign(v: Vector) -> Vector:
    for x in v:
        if x != 0:
            return v if x > 0 else _neg(v)
    return v


def polytope_vertices(functionals: Sequence[Vector], dim: int,
                      system_budget: int = 400000) -> tuple[Vector, ...]:
    """Vertices of {x : |f.x| <= 1 for all f}, by basic-solution enumeration.

    Every vertex is the unique solution of dim independent tight constraints,
    so solving all dim-subsets (with sign patterns) and keeping the feasible
    solutions enumerates exactly the vertex set.  The functional family must
    span (bounded polytope); callers validate that.
    """
    funcs = [_vec(f) for f in functionals]
    m = len(funcs)
    n_systems = math.comb(m, dim) * (2 ** max(dim - 1, 0))
    if n_systems > system_budget:
        raise BudgetError(
            f"vertex enumeration needs {n_systems} systems (budget {system_budget})"
        )
    out = {}
    for subset in combinations(range(m), dim):
        mat = [funcs[i] for i in subset]
        inv = _mat_inverse(mat)
        if inv is None:
            continue
        cols = list(zip(*inv))
        for signs in product((Fraction(1), Fraction(-1)), repeat=dim - 1):
            signs = (Fraction(1),) + signs
            x = tuple(
                sum((s * c[i] for s, c in zip(signs, cols)), Fraction(0))
                for i in range(dim)
            )
            if all(abs(_dot(f, x)) <= 1 for f in funcs):
                out[x] = True
                out[_neg(x)] = True
    return tuple(sorted(out))


class PolyhedralSpace:
    """A finite-dimensional normed space with ||x|| = max |f(x)|, f rational.

    Functionals are stored one per +- pair with a canonical sign; they must
    span the dual, otherwise the formula is only a seminorm and construction
    fails.  Vertex enumeration of the unit ball is exact and cached.
    """

    VERTEX_DIM_CAP = 5

    def __init__(self, dim: int, functionals: Sequence[Sequence], tag: str = "custom"):
        if dim < 1:
            raise DimensionError("dimension must be positive")
        seen = {}
        for f in functionals:
            fv = _canonical_sign(_vec(f))
            if len(fv) != dim:
                raise DimensionError("functional length does not match dimension")
            if any(x != 0 for x in fv):
                seen[fv] = True
        funcs = tuple(sorted(seen))
        if _rank(funcs) < dim:
            raise DegenerateNormError(
                "functionals do not span the dual; the formula is a seminorm"
            )
        self.dim = dim
        self.functionals = funcs
        self.tag = tag
        self._vertices: Optional[tuple[Vector, ...]] = None
        self._dual_vertices: Optional[tuple[Vector, ...]] = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def linf(cls, k: int) -> "PolyhedralSpace":
        space = cls(k, [tuple(Fraction(1) if j == i else Fraction(0) for j in range(k))
                        for i in range(k)], tag="linf")
        space._vertices = tuple(sorted(
            tuple(Fraction(s) for s in signs) for signs in product((-1, 1), repeat=k)
        ))
        return space

    @classmethod
    def l1(cls, k: int) -> "PolyhedralSpace":
        space = cls(k, [tuple(Fraction(s) for s in signs)
                        for signs in product((-1, 1), repeat=k)], tag="l1")
        verts = []
        for i in range(k):
            e = [Fraction(0)] * k
            e[i] = Fraction(1)
            verts.append(tuple(e))
            e2 = list(e)
            e2[i] = Fraction(-1)
            verts.append(tuple(e2))
        space._vertices = tuple(sorted(verts))
        return space

    @classmethod
    def from_ball_vertices(cls, points: Sequence[Sequence],
                           tag: str = "custom") -> "PolyhedralSpace":
        """Space whose unit ball is the convex hull of the given +- point set."""
        pts = [_vec(p) for p in points]
        if not pts:
            raise DomainError("need at least one point")
        dim = len(pts[0])
        if _rank(pts) < dim:
            raise DegenerateNormError("points do not span; ball would be flat")
        funcs = polytope_vertices(pts, dim)
        space = cls(dim, funcs, tag=tag)
        # the polar vertices are exactly the extreme dual functionals
        space._dual_vertices = space.functionals
        return space

    # -- basic geometry ----------------------------------------------------

    def norm(self, x) -> Fraction:
        x = _vec(x)
        if len(x) != self.dim:
            raise DimensionError("point has the wrong dimension")
        return max(abs(_dot(f, x)) for f in self.functionals)

    def dual_norm(self, f) -> Fraction:
        """Norm of a functional: max over ball vertices."""
        f = _vec(f)
        return max(abs(_dot(f, v)) for v in self.vertices())

    def vertices(self) -> tuple[Vector, ...]:
        if self._vertices is None:
            if self.dim > self.VERTEX_DIM_CAP:
                raise BudgetError(
                    f"vertex enumeration capped at dimension {self.VERTEX_DIM_CAP}"
                )
            self._vertices = polytope_vertices(self.functionals, self.dim)
        return self._vertices

    def dual_unit_points(self) -> tuple[Vector, ...]:
        """A signed spanning set of the dual ball (one point per +- pair)."""
        return self.functionals

    def dual_vertices(self) -> tuple[Vector, ...]:
        """Extreme points of the dual ball (one per +- pair, canonical sign)."""
        if self._dual_vertices is None:
            verts = polytope_vertices(self.vertices(), self.dim)
            reps = sorted({_canonical_sign(v) for v in verts})
            self._dual_vertices = tuple(reps)
        return self._dual_vertices

    # -- serialization -----------------------------------------------------

    def to_json(self) -> dict:
        data = {
            "dim": self.dim,
            "functionals": [[format_rational(x) for x in f] for f in self.functionals],
            "tag": self.tag,
        }
        if self._vertices is not None:
            data["vertices"] = [[format_rational(x) for x in v] for v in self._vertices]
        return data

    @classmethod
    def from_json(cls, data: dict) -> "PolyhedralSpace":
        space = cls(
            data["dim"],
            [[parse_rational(x) for x in f] for f in data["functionals"]],
            tag=data.get("tag", "custom"),
        )
        if "vertices" in data:
            claimed = {tuple(parse_rational(x) for x in v) for v in data["vertices"]}
            actual = set(space.vertices())
            if claimed != actual:
                raise DomainError("declared vertices disagree with the functionals")
        return space

    def __repr__(self):
        return f"PolyhedralSpace(dim={self.dim}, tag={self.tag!r}, functionals={len(self.functionals)})"


class NormedMap:
    """A rational linear map between polyhedral spaces with cached norms."""

    def __init__(self, matrix: Sequence[Sequence], domain: PolyhedralSpace,
                 codomain: PolyhedralSpace):
        rows = tuple(_vec(r) for r in matrix)
        if len(rows) != codomain.dim or any(len(r) != domain.dim for r in rows):
            raise DimensionError("matrix shape does not match the spaces")
        self.matrix = rows
        self.domain = domain
        self.codomain = codomain
        self._op_norm: Optional[Fraction] = None
        self._inv_norm = None

    @classmethod
    def identity(cls, domain: PolyhedralSpace,
                 codomain: Optional[PolyhedralSpace] = None) -> "NormedMap":
        codomain = codomain or domain
        if domain.dim != codomain.dim:
            raise DimensionError("identity needs equal dimensions")
        rows = [[Fraction(1) if i == j else Fraction(0) for j in range(domain.dim)]
                for i in range(codomain.dim)]
        return cls(rows, domain, codomain)

    def apply(self, x) -> Vector:
        return _mat_vec(self.matrix, _vec(x))

    def compose(self, inner: "NormedMap") -> "NormedMap":
        if inner.codomain.dim != self.domain.dim:
            raise DimensionError("composition shapes do not match")
        return NormedMap(_mat_mul(self.matrix, inner.matrix), inner.domain, self.codomain)

    def sub(self, other: "NormedMap") -> "NormedMap":
        if (self.domain.dim, self.codomain.dim) != (other.domain.dim, other.codomain.dim):
            raise DimensionError("difference needs matching shapes")
        rows = tuple(_sub(a, b) for a, b in zip(self.matrix, other.matrix))
        return NormedMap(rows, self.domain, self.codomain)

    @property
    def rank(self) -> int:
        return _rank(self.matrix)

    def op_norm(self) -> Fraction:
        if self._op_norm is None:
            self._op_norm = max(
                self.codomain.norm(self.apply(v)) for v in self.domain.vertices()
            )
        return self._op_norm

    def inv_norm(self):
        """min {a : Ball(TX) inside a T(Ball(X))}; inf when not injective."""
        if self._inv_norm is None:
            if self.rank < self.domain.dim:
                self._inv_norm = math.inf
            else:
                pull = PolyhedralSpace(
                    self.domain.dim,
                    [_mat_vec(tuple(zip(*self.matrix)), f) for f in self.codomain.functionals],
                    tag="pullback",
                )
                self._inv_norm = max(self.domain.norm(v) for v in pull.vertices())
        return self._inv_norm

    def is_isometric_embedding(self) -> bool:
        """Exact isometry test.

        Norm preservation downward is checked on domain ball vertices; upward
        via the inverse norm in low dimension, else by lifting every extreme
        domain dual functional through the adjoint with an exact LP (a unit
        preimage exists iff the map does not shrink anywhere).
        """
        if self.op_norm() != 1:
            return False
        if self.domain.dim <= 3:
            return self.inv_norm() == 1
        for f in self.domain.dual_vertices():
            _, value = _min_norm_preimage(self, f)
            if value > 1:
                return False
        return True

    def to_json(self) -> dict:
        return {"matrix": [[format_rational(x) for x in row] for row in self.matrix]}


def op_norm(matrix, domain: PolyhedralSpace, codomain: PolyhedralSpace) -> Fraction:
    return NormedMap(matrix, domain, codomain).op_norm()


def inv_norm(matrix, domain: PolyhedralSpace, codomain: PolyhedralSpace):
    return NormedMap(matrix, domain, codomain).inv_norm()


@dataclass(frozen=True)
class LogValue:
    """log of an exact rational argument >= 1; comparisons use the argument."""

    argument: Fraction

    def __post_init__(self):
        if self.argument <= 0:
            raise DomainError("log argument must be positive")

    @property
    def value(self) -> float:
        return math.log(self.argument)

    @property
    def is_zero(self) -> bool:
        return self.argument == 1

    def __le__(self, other: "LogValue") -> bool:
        return self.argument <= other.argument

    def __lt__(self, other: "LogValue") -> bool:
        return self.argument < other.argument

    def to_json(self) -> dict:
        return {"log": self.value, "argument": format_rational(self.argument)}


def omega(n_space: PolyhedralSpace, p_space: PolyhedralSpace) -> LogValue:
    """Intrinsic distance between two norms on the same space.

    log max(||Id||_{N,P}, ||Id||_{P,N}), returned with its exact argument.
    """
    if n_space.dim != p_space.dim:
        raise DimensionError("omega needs norms on the same space")
    a = NormedMap.identity(n_space, p_space).op_norm()
    b = NormedMap.identity(p_space, n_space).op_norm()
    return LogValue(max(a, b))


def _dist_point_to_hull(point: Vector, hull_points: Sequence[Vector],
                        dist_functionals: Sequence[Vector]) -> Fraction:
    """min over q in conv(hull_points) of max_h |h.(point - q)| (exact LP)."""
    k = len(hull_points)
    nvars = k + 1  # hull coefficients, then t
    cost = [Fraction(0)] * k + [Fraction(1)]
    a_ub = []
    b_ub = []
    for h in dist_functionals:
        hp = _dot(h, point)
        row = [-_dot(h, q) for q in hull_points] + [Fraction(-1)]
        a_ub.append(row)
        b_ub.append(-hp)
        row2 = [_dot(h, q) for q in hull_points] + [Fraction(-1)]
        a_ub.append(row2)
        b_ub.append(hp)
    a_eq = [[Fraction(1)] * k + [Fraction(0)]]
    b_eq = [Fraction(1)]
    value, _ = solve_lp(cost, a_ub, b_ub, a_eq, b_eq, nonneg=True)
    return value


def _hausdorff(a_points: Sequence[Vector], b_points: Sequence[Vector],
               dist_functionals: Sequence[Vector],
               symmetric: bool = False) -> Fraction:
    """Hausdorff distance between conv(a_points) and conv(b_points).

    With symmetric=True both hulls and the distance norm are origin-symmetric,
    so only one point per +- pair needs a distance evaluation.
    """
    def reps(points):
        if not symmetric:
            return points
        seen = {}
        for p in points:
            seen[_canonical_sign(p)] = True
        return list(seen)

    d1 = max(_dist_point_to_hull(p, b_points, dist_functionals) for p in reps(a_points))
    d2 = max(_dist_point_to_hull(p, a_points, dist_functionals) for p in reps(b_points))
    return max(d1, d2)


def alpha(p_space: PolyhedralSpace, q_space: PolyhedralSpace,
          base: Optional[PolyhedralSpace] = None) -> Fraction:
    """Hausdorff distance between the dual balls, measured in the base dual norm.

    base defaults to the first argument.  Exact rational.
    """
    if p_space.dim != q_space.dim:
        raise DimensionError("alpha needs norms on the same space")
    base = base or p_space
    if base.dim != p_space.dim:
        raise DimensionError("base norm lives on a different space")
    dist_funcs = base.vertices()  # H-description of the base dual norm
    a_pts = [f for g in p_space.functionals for f in (g, _neg(g))]
    b_pts = [f for g in q_space.functionals for f in (g, _neg(g))]
    return _hausdorff(a_pts, b_pts, dist_funcs, symmetric=True)


def gap_metric(v_basis: Sequence[Sequence], w_basis: Sequence[Sequence],
               ambient: PolyhedralSpace) -> Fraction:
    """Hausdorff distance between the unit balls of two subspaces of the ambient.

    Subspaces are given by rational bases (independent columns); the distance
    is measured in the ambient norm.  Exact rational.
    """
    def ball_points(basis):
        basis = [_vec(b) for b in basis]
        if not basis or any(len(b) != ambient.dim for b in basis):
            raise DimensionError("basis vectors must live in the ambient space")
        if _rank(basis) < len(basis):
            raise DomainError("subspace basis is dependent")
        cols = tuple(zip(*basis))  # ambient_dim x sub_dim
        pull = PolyhedralSpace(
            len(basis), [_mat_vec(basis, f) for f in ambient.functionals],
            tag="subspace",
        )
        return [_mat_vec(cols, c) for c in pull.vertices()]

    va = ball_points(v_basis)
    wa = ball_points(w_basis)
    return _hausdorff(va, wa, ambient.functionals, symmetric=True)


def bm_upper(x_space: PolyhedralSpace, y_space: PolyhedralSpace,
             effort: int = 2, seed: int = 0) -> LogValue:
    """Upper bound for the multiplicative distance between two norms.

    Evaluates log ||D|| ||D^-1|| exactly on a canonical candidate list (the
    identity and all vertex-matching maps) and a seeded rational local search;
    the reported value is the best candidate, hence only an upper bound.
    """
    if x_space.dim != y_space.dim:
        raise DimensionError("candidate maps need equal dimensions")
    k = x_space.dim
    xv = x_space.vertices()
    base = []
    for v in xv:
        if _rank(base + [list(v)]) > len(base):
            base.append(list(v))
        if len(base) == k:
            break
    base_mat = tuple(zip(*base))  # columns are the chosen vertices
    v_inv = _mat_inverse(base_mat)
    candidates: list[tuple[tuple[Vector, ...], str]] = []
    candidates.append((NormedMap.identity(x_space, y_space).matrix, "identity"))
    yv = y_space.vertices()
    cap = 4000 * max(effort, 1)
    count = 0
    for targets in product(yv, repeat=k):
        if count >= cap:
            break
        count += 1
        # Delta = W . V^{-1} maps the chosen vertex basis onto the targets
        w_cols = tuple(zip(*targets))
        candidates.append((_mat_mul(w_cols, v_inv), "vertex-match"))

    best: Optional[Fraction] = None
    best_mat = None

    def consider(mat):
        nonlocal best, best_mat
        try:
            fwd = NormedMap(mat, x_space, y_space)
        except (DimensionError, DegenerateNormError):
            return
        if fwd.rank < k:
            return
        inv = _mat_inverse(mat)
        if inv is None:
            return
        bwd = NormedMap(inv, y_space, x_space)
        prod = fwd.op_norm() * bwd.op_norm()
        if best is None or prod < best:
            best = prod
            best_mat = mat

    for mat, _label in candidates:
        consider(mat)

    rng = random.Random(seed)
    steps = 120 * max(effort, 1)
    current = [list(r) for r in best_mat]
    for _ in range(steps):
        i = rng.randrange(k)
        j = rng.randrange(k)
        delta = Fraction(rng.choice((-1, 1)), rng.choice((2, 3, 4, 8)))
        trial = [row[:] for row in current]
        trial[i][j] += delta
        before = best
        consider(tuple(tuple(r) for r in trial))
        if best != before:
            current = trial
    return LogValue(best)


# ---------------------------------------------------------------------------
# epsilon nets


@dataclass
class EpsNet:
    points: list[Vector]
    mode: str
    eps: Fraction
    radius: Fraction
    cardinality_bound: Fraction
    mesh: Fraction

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "eps": format_rational(self.eps),
            "radius": format_rational(self.radius),
            "size": len(self.points),
            "cardinality_bound": format_rational(self.cardinality_bound),
            "points": [[format_rational(x) for x in p] for p in self.points],
        }


def _lattice_points(space: PolyhedralSpace, step: Fraction, radius: Fraction):
    k = space.dim
    top = int(radius / step)
    axis = [step * i for i in range(-top, top + 1)]
    for coords in product(axis, repeat=k):
        if space.norm(coords) <= radius:
            yield tuple(coords)


def _circular_sorted(points: Sequence[Vector]) -> list[Vector]:
    def half(p):
        return 0 if (p[1] > 0 or (p[1] == 0 and p[0] > 0)) else 1

    def cmp(a, b):
        ha, hb = half(a), half(b)
        if ha != hb:
            return -1 if ha < hb else 1
        cross = a[0] * b[1] - a[1] * b[0]
        if cross == 0:
            return 0
        return -1 if cross > 0 else 1

    return sorted(points, key=functools.cmp_to_key(cmp))


def _sphere_cover(space: PolyhedralSpace, step: Fraction) -> list[Vector]:
    """Points on the unit sphere of the space with covering mesh <= step/2.

    Dimension 1 and 2 walk the boundary exactly; higher dimensions cover each
    facet by a barycentric lattice.  All output points have norm exactly 1.
    """
    k = space.dim
    if k == 1:
        v = space.vertices()[0]
        return [v] if v[0] > 0 else [_neg(v)]
    verts = space.vertices()
    if k == 2:
        ring = _circular_sorted(verts)
        pts = []
        for a, b in zip(ring, ring[1:] + ring[:1]):
            edge = _sub(b, a)
            seg = space.norm(edge)
            npts = max(1, math.ceil(seg / step))
            for t in range(npts):
                pts.append(_add(a, _scale(edge, Fraction(t, npts))))
        return pts
    pts = {}
    for f in space.functionals:
        for sf in (f, _neg(f)):
            face = [v for v in verts if _dot(sf, v) == 1]
            if len(face) < k:
                continue
            m = len(face)
            q = max(1, math.ceil(Fraction(2 * (m - 1)) / step))
            for comp in _compositions(q, m):
                pt = tuple(
                    sum((Fraction(c, q) * face[i][d] for i, c in enumerate(comp)),
                        Fraction(0))
                    for d in range(k)
                )
                pts[pt] = True
    return list(pts)


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def eps_net(space: PolyhedralSpace, eps, mode: str = "ball-greedy",
            radius=1, seeds: Optional[Sequence[Sequence]] = None) -> EpsNet:
    """Construct an eps-net of the radius-scaled unit ball.

    ball-greedy: a maximal eps-separated subset (strict separation) of a
    rational lattice of mesh eps/2 intersected with the ball, extending the
    given seed; maximality makes it eps-dense on that certified lattice, and
    the packing bound (1 + 2 radius/eps)^dim caps its size.

    shell: a union of boundary covers on spheres of radii 1, 1-eps/2, ... plus
    the origin; every nonzero ball point has a net point strictly closer than
    eps with strictly smaller norm, and the size respects (1 + 4/eps)^dim.
    """
    eps = Fraction(eps)
    radius = Fraction(radius)
    if eps <= 0:
        raise DomainError("eps must be positive")
    k = space.dim
    if mode == "ball-greedy":
        bound = (1 + 2 * radius / eps) ** k
        chosen: list[Vector] = [_vec(s) for s in seeds] if seeds else [
            tuple(Fraction(0) for _ in range(k))
        ]
        for a, b in combinations(chosen, 2):
            if space.norm(_sub(a, b)) <= eps:
                raise DomainError("seed points are not eps-separated")
        for s in chosen:
            if space.norm(s) > radius:
                raise DomainError("seed point outside the ball")
        step = eps / 2
        for cand in sorted(_lattice_points(space, step, radius)):
            if all(space.norm(_sub(cand, d)) > eps for d in chosen):
                chosen.append(cand)
        if len(chosen) > bound:
            raise BudgetError("net exceeds its packing bound; seed too dense")
        return EpsNet(chosen, mode, eps, radius, bound, step)
    if mode == "shell":
        if eps > 1:
            raise DomainError("shell mode needs eps <= 1")
        if k > 4:
            raise BudgetError("shell mode capped at dimension 4")
        bound = (1 + 4 / eps) ** k
        pts: dict[Vector, bool] = {tuple(Fraction(0) for _ in range(k)): True}
        rho = Fraction(1)
        while rho > 0:
            # walk the unit sphere with step (eps/2)/rho so the scaled shell
            # has absolute mesh eps/2
            for p in _sphere_cover(space, eps / (2 * rho)):
                pts[_scale(p, rho)] = True
                if len(pts) > bound:
                    # the certified facet covers overshoot the packing-style
                    # bound (they always do past the plane); fail fast
                    raise BudgetError(
                        f"shell net exceeds its cardinality bound {bound}"
                    )
            rho -= eps / 2
        return EpsNet(sorted(pts), mode, eps, Fraction(1), bound, eps / 2)
    raise DomainError(f"unknown net mode {mode!r}")


def shell_witness(net: EpsNet, space: PolyhedralSpace, x) -> Optional[Vector]:
    """A net point strictly within eps of x and of strictly smaller norm."""
    x = _vec(x)
    nx = space.norm(x)
    if nx == 0:
        return None
    for y in net.points:
        if space.norm(y) < nx and space.norm(_sub(x, y)) < net.eps:
            return y
    return None


# ---------------------------------------------------------------------------
# amalgamation


@dataclass
class AmalgamResult:
    space: PolyhedralSpace
    embed_x: NormedMap
    embed_y: NormedMap
    defect: Fraction
    defect_bound: Fraction
    t_norm: Fraction
    t_inv_norm: Fraction
    dual_set: list[Vector]

    def to_json(self) -> dict:
        return {
            "space": self.space.to_json(),
            "embed_x": self.embed_x.to_json(),
            "embed_y": self.embed_y.to_json(),
            "defect": format_rational(self.defect),
            "defect_bound": format_rational(self.defect_bound),
            "t_norm": format_rational(self.t_norm),
            "t_inv_norm": format_rational(self.t_inv_norm),
        }


def _min_norm_preimage(t_map: NormedMap, f: Vector) -> tuple[Vector, Fraction]:
    """g on the codomain with T*(g) = f minimizing the dual norm; returns (g, value).

    The dual norm is the gauge of the signed functional hull, so the search is
    an exact l1-minimization over signed codomain functionals pulled back
    through the adjoint.
    """
    y = t_map.codomain
    signed = [f2 for g in y.functionals for f2 in (g, _neg(g))]
    cols = tuple(zip(*t_map.matrix))  # adjoint rows: T^t has rows = columns of T
    pulled = [_mat_vec(cols, g) for g in signed]
    value, lambdas = minimize_l1_combination(pulled, f)
    g = tuple(
        sum((lam * gv[d] for lam, gv in zip(lambdas, signed)), Fraction(0))
        for d in range(y.dim)
    )
    return g, value


def amalgam(x_space: PolyhedralSpace, y_space: PolyhedralSpace, t_map,
            dual_set: Optional[Sequence[Sequence]] = None) -> AmalgamResult:
    """Glue X and Y along an injective map T with controlled defect.

    Builds the polyhedral seminorm
        Q(x, y) = max( ||Tx/||T|| + y||_Y ,
                       max_g |g(y)/||T|| + (T* g)(x)/||T* g||| )
    over X + Y, quotients by its kernel, and returns the quotient with the two
    canonical embeddings.  The dual set g ranges over unit-dual-norm
    functionals on Y; by default one minimal-norm preimage of each extreme
    dual functional of X, which makes both embeddings exactly isometric and
    gives the exact defect bound ||I - J.T|| <= ||T|| ||T^-1|| - 1.
    """
    if isinstance(t_map, NormedMap):
        tm = t_map
        if tm.domain is not x_space or tm.codomain is not y_space:
            tm = NormedMap(t_map.matrix, x_space, y_space)
    else:
        tm = NormedMap(t_map, x_space, y_space)
    if tm.rank < x_space.dim:
        raise RankError("amalgam needs an injective map")
    nt = tm.op_norm()
    nt_inv = tm.inv_norm()
    if nt < 1 or nt_inv < 1:
        raise DomainError("normalize the map so that ||T|| >= 1 and ||T^-1|| >= 1")

    kx, ky = x_space.dim, y_space.dim
    adj = tuple(zip(*tm.matrix))  # rows of T^t

    if dual_set is None:
        d_funcs = []
        for f in x_space.dual_vertices():
            g, _ = _min_norm_preimage(tm, f)
            scale = y_space.dual_norm(g)
            d_funcs.append(_scale(g, 1 / scale))
    else:
        d_funcs = [_vec(g) for g in dual_set]
        if not d_funcs:
            raise DomainError("dual set must be nonempty")
        for g in d_funcs:
            if y_space.dual_norm(g) > 1:
                raise DomainError("dual set functionals must have dual norm <= 1")
            if all(x == 0 for x in _mat_vec(adj, g)):
                raise DomainError("dual set functional vanishes on the image of T")

    q_functionals: list[Vector] = []
    for h in y_space.functionals:
        left = _scale(_mat_vec(adj, h), 1 / nt)
        q_functionals.append(left + h)
    for g in d_funcs:
        tg = _mat_vec(adj, g)
        scale = x_space.dual_norm(tg)
        q_functionals.append(_scale(tg, 1 / scale) + _scale(g, 1 / nt))

    # quotient by the kernel: coordinates are the values of an independent
    # functional subset
    basis_rows: list[Vector] = []
    for f in q_functionals:
        if _rank(basis_rows + [f]) > len(basis_rows):
            basis_rows.append(f)
    dim_z = len(basis_rows)
    # express every Q functional in the chosen coordinates
    piv_cols: list[int] = []
    for j in range(kx + ky):
        col_sel = [[row[c] for c in piv_cols + [j]] for row in basis_rows]
        if _rank(col_sel) > len(piv_cols):
            piv_cols.append(j)
        if len(piv_cols) == dim_z:
            break
    sq = [[row[c] for c in piv_cols] for row in basis_rows]
    z_funcs = []
    for f in q_functionals:
        coeff = _solve_square(tuple(zip(*sq)), [f[c] for c in piv_cols])
        if coeff is None:
            raise RankError("internal quotient coordinatization failed")
        recon = tuple(
            sum((coeff[i] * basis_rows[i][d] for i in range(dim_z)), Fraction(0))
            for d in range(kx + ky)
        )
        if recon != f:
            raise RankError("functional escaped the quotient row space")
        z_funcs.append(coeff)
    z_space = PolyhedralSpace(dim_z, z_funcs, tag="amalgam")

    embed_x = NormedMap([row[:kx] for row in basis_rows], x_space, z_space)
    embed_y = NormedMap([row[kx:] for row in basis_rows], y_space, z_space)
    if not embed_x.is_isometric_embedding() or not embed_y.is_isometric_embedding():
        raise RankError("amalgam embeddings failed the exact isometry check")

    defect = embed_x.sub(embed_y.compose(tm)).op_norm()
    bound = nt * nt_inv - 1
    if defect > bound:
        raise RankError("amalgam defect exceeded its exact bound")
    return AmalgamResult(z_space, embed_x, embed_y, defect, bound, nt, nt_inv,
                         d_funcs)


# ---------------------------------------------------------------------------
# correcting pairs


@dataclass
class CorrectionRecord:
    space_index: int
    gamma: tuple[Vector, ...]
    deviation: Fraction
    bound: Fraction


@dataclass
class CorrectingPairResult:
    space: PolyhedralSpace
    embed: NormedMap
    corrections: list[CorrectionRecord]
    net_sizes: list[int]
    dim_bound: int

    def to_json(self) -> dict:
        return {
            "dim": self.space.dim,
            "dim_bound": self.dim_bound,
            "net_sizes": self.net_sizes,
            "corrections": [
                {
                    "space_index": c.space_index,
                    "deviation": format_rational(c.deviation),
                    "bound": format_rational(c.bound),
                }
                for c in self.corrections
            ],
        }


def _operator_net(x_space: PolyhedralSpace, y_space: PolyhedralSpace,
                  theta: Fraction, mesh: Fraction,
                  budget: int) -> list[tuple[Vector, ...]]:
    """A maximal mesh-separated subset of grid maps in the distortion ball.

    Grid candidates cover the entry box of maps with ||T|| <= theta; the
    greedy subset is mesh-separated in exact operator norm, so the packing
    bound (1 + 2 theta/mesh)^(dim X dim Y) caps its size.
    """
    kx, ky = x_space.dim, y_space.dim

    def unit(dim, i):
        e = [Fraction(0)] * dim
        e[i] = Fraction(1)
        return tuple(e)

    x_coord_dual = [x_space.dual_norm(unit(kx, b)) for b in range(kx)]  # ||e_b*||_X*
    x_unit_norm = [x_space.norm(unit(kx, b)) for b in range(kx)]        # ||u_b||_X
    y_coord_dual = [y_space.dual_norm(unit(ky, a)) for a in range(ky)]  # ||e_a*||_Y*
    y_unit_norm = [y_space.norm(unit(ky, a)) for a in range(ky)]        # ||u_a||_Y
    # elementary op norms ||E_ab|| = ||e_b*||_X* ||u_a||_Y bound the mesh transfer
    total_elem = sum(
        x_coord_dual[b] * y_unit_norm[a] for a in range(ky) for b in range(kx)
    )
    step = mesh / total_elem
    ranges = []
    for a in range(ky):
        for b in range(kx):
            # |T_ab| = |e_a*(T u_b)| <= theta ||e_a*||_Y* ||u_b||_X
            bound_ab = theta * y_coord_dual[a] * x_unit_norm[b]
            top = int(bound_ab / step)
            ranges.append(range(-top, top + 1))
    count = 1
    for r in ranges:
        count *= len(r)
        if count > budget:
            raise BudgetError(
                f"operator grid needs {count}+ candidates (budget {budget})"
            )
    members: list[tuple[Vector, ...]] = []
    maps: list[NormedMap] = []
    for combo in product(*ranges):
        rows = tuple(
            tuple(step * combo[a * kx + b] for b in range(kx)) for a in range(ky)
        )
        nm = NormedMap(rows, x_space, y_space)
        if nm.rank < kx:
            continue
        nrm = nm.op_norm()
        inv = nm.inv_norm()
        if nrm < 1 or inv < 1 or nrm * inv > theta:
            continue
        if all(
            NormedMap(tuple(_sub(a, b) for a, b in zip(rows, other.matrix)),
                      x_space, y_space).op_norm() > mesh
            for other in maps
        ):
            members.append(rows)
            maps.append(nm)
    return members


def correcting_pair(spaces: Sequence[PolyhedralSpace], theta, tau,
                    net_budget: int = 20000) -> CorrectingPairResult:
    """Iterated amalgam absorbing a net of low-distortion maps into the last space.

    For every space X_i (i < n) a (tau - theta)-net of the theta-distortion
    maps X_i -> X_n is absorbed; each net element gamma then has an exactly
    isometric correction I with ||J.gamma - I|| < tau - 1.  One-dimensional
    sources are corrected by radial renormalization (no dimension growth);
    higher-dimensional sources go through the amalgam.
    """
    theta = Fraction(theta)
    tau = Fraction(tau)
    if not 1 < theta < tau:
        raise DomainError("need 1 < theta < tau")
    spaces = list(spaces)
    if len(spaces) < 2:
        raise DomainError("need at least two spaces")
    if sum(s.dim for s in spaces) > 5:
        raise BudgetError("total dimension capped at 5; growth is explosive")
    target = spaces[-1]
    current = target
    embed = NormedMap.identity(target)
    # pending corrections: (space index, gamma, isometric embedding so far)
    pending: list[tuple[int, tuple[Vector, ...], NormedMap]] = []
    net_sizes = []
    mesh = tau - theta
    records: list[CorrectionRecord] = []
    missing_embed: list[int] = []

    for idx, x_i in enumerate(spaces[:-1]):
        if x_i.dim > target.dim:
            raise DomainError("each earlier space must fit inside the last one")
        net = _operator_net(x_i, target, theta, mesh, net_budget)
        net_sizes.append(len(net))
        if not net:
            missing_embed.append(idx)
            continue
        for gamma in net:
            gamma_map = NormedMap(gamma, x_i, target)
            if x_i.dim == 1:
                # renormalizing the single column is already isometric
                scale = 1 / gamma_map.op_norm()
                corr = embed.compose(
                    NormedMap(tuple(_scale(r, scale) for r in gamma), x_i, target)
                )
                pending.append((idx, gamma, corr))
                continue
            step_map = embed.compose(gamma_map)
            res = amalgam(x_i, current, step_map)
            for rec_i in range(len(pending)):
                i0, g0, corr0 = pending[rec_i]
                pending[rec_i] = (i0, g0, res.embed_y.compose(corr0))
            pending.append((idx, gamma, res.embed_x))
            embed = res.embed_y.compose(embed)
            current = res.space

    for idx in missing_embed:
        # no net element: still owe an isometric copy of the space
        x_i = spaces[idx]
        rows = [[Fraction(1) if j == i else Fraction(0) for j in range(x_i.dim)]
                for i in range(target.dim)]
        base = NormedMap(rows, x_i, target)
        scale = 1 / base.op_norm()
        res = amalgam(x_i, current,
                      embed.compose(NormedMap(tuple(_scale(r, scale) for r in rows),
                                              x_i, target)))
        for rec_i in range(len(pending)):
            i0, g0, corr0 = pending[rec_i]
            pending[rec_i] = (i0, g0, res.embed_y.compose(corr0))
        embed = res.embed_y.compose(embed)
        current = res.space

    for idx, gamma, corr in pending:
        x_i = spaces[idx]
        gm = embed.compose(NormedMap(gamma, x_i, target))
        deviation = gm.sub(corr).op_norm()
        if not corr.is_isometric_embedding():
            raise RankError("pushed-forward correction lost isometry")
        if deviation >= tau - 1:
            raise RankError("correction deviation reached its strict bound")
        records.append(CorrectionRecord(idx, gamma, deviation, tau - 1))

    l_bound = 1
    auditable = not missing_embed
    for idx, x_i in enumerate(spaces[:-1]):
        per = (1 + 2 * theta / mesh) ** (x_i.dim * target.dim)
        if net_sizes[idx] > per:
            raise RankError("net size exceeded its packing bound")
        l_bound *= x_i.dim ** net_sizes[idx]
    dim_bound = l_bound * target.dim
    if auditable and current.dim > dim_bound:
        raise RankError("dimension audit failed")
    return CorrectingPairResult(current, embed, records, net_sizes, dim_bound)


# ---------------------------------------------------------------------------
# injective envelopes, polyhedral approximation


def injective_envelope(space: PolyhedralSpace) -> tuple[int, NormedMap]:
    """Half the dual ball's extreme points, and the evaluation embedding.

    The embedding sends x to (f_1(x), ..., f_d(x)) over one representative
    per extreme pair; it is exactly isometric into the sup-norm space.
    """
    reps = space.dual_vertices()
    d = len(reps)
    target = PolyhedralSpace.linf(d)
    psi = NormedMap(reps, space, target)
    if not psi.is_isometric_embedding():
        raise DegenerateNormError("dual ball is degenerate")
    return d, psi


def factor_through_envelope(t_map: NormedMap) -> NormedMap:
    """Factor an isometric embedding into a sup-norm space through the envelope.

    Returns an isometric U with T = U . Psi.  Each coordinate functional of T
    sits in the dual ball; extreme envelope coordinates must appear among the
    rows of T up to sign, and the remaining rows are convex-decomposed.
    """
    f_space = t_map.domain
    if t_map.codomain.tag != "linf":
        raise DomainError("factorization targets a sup-norm space")
    if not t_map.is_isometric_embedding():
        raise DomainError("map must be exactly isometric")
    d, psi = injective_envelope(f_space)
    reps = psi.matrix
    n = t_map.codomain.dim
    rows_u = []
    matched = [False] * d
    for row in t_map.matrix:
        hit = None
        for j, f in enumerate(reps):
            if row == f:
                hit = (j, 1)
                break
            if row == _neg(f):
                hit = (j, -1)
                break
        if hit is not None:
            j, s = hit
            matched[j] = True
            rows_u.append(tuple(
                Fraction(s) if jj == j else Fraction(0) for jj in range(d)
            ))
        else:
            signed = [f2 for f in reps for f2 in (f, _neg(f))]
            value, lambdas = minimize_l1_combination(signed, row)
            if value > 1:
                raise DomainError("row is outside the dual ball")
            coeff = [lambdas[2 * j] - lambdas[2 * j + 1] for j in range(d)]
            rows_u.append(tuple(coeff))
    if not all(matched):
        raise DomainError(
            "an extreme dual functional never appears among the rows; "
            "the map cannot be isometric"
        )
    u = NormedMap(rows_u, PolyhedralSpace.linf(d), t_map.codomain)
    if u.compose(psi).matrix != t_map.matrix:
        raise RankError("factorization failed to reproduce the map")
    if not u.is_isometric_embedding():
        raise RankError("factor map lost isometry")
    return u


class L2Pushforward:
    """Euclidean pushforward norm x -> ||A x||_2, exposed as a float oracle.

    Exact squared values are available for rational inputs; the polyhedral
    approximation path consumes the matrix directly.
    """

    def __init__(self, matrix: Sequence[Sequence]):
        rows = tuple(_vec(r) for r in matrix)
        if _rank(tuple(zip(*rows))) < len(rows[0]):
            raise DegenerateNormError("pushforward matrix must have full column rank")
        self.matrix = rows
        self.dim = len(rows[0])

    def norm_squared(self, x) -> Fraction:
        y = _mat_vec(self.matrix, _vec(x))
        return sum((v * v for v in y), Fraction(0))

    def norm(self, x) -> float:
        return math.sqrt(float(self.norm_squared(x)))


def rational_sphere_net(k: int, delta: Fraction) -> list[Vector]:
    """Rational points exactly on the Euclidean unit sphere, delta-dense.

    Stereographic parametrization x = (2a, 1-|a|^2)/(1+|a|^2) over a rational
    grid of the unit box; signed copies cover both hemispheres.
    """
    if k == 1:
        return [(Fraction(1),)]
    step = delta / (2 * (k - 1)) if k > 2 else delta
    top = int(1 / step)
    axis = [step * i for i in range(-top, top + 1)]
    pts = {}
    for a in product(axis, repeat=k - 1):
        na = sum((x * x for x in a), Fraction(0))
        if na > 1:
            continue
        denom = 1 + na
        pt = tuple(2 * x / denom for x in a) + ((1 - na) / denom,)
        pts[_canonical_sign(pt)] = True
    return sorted(pts)


def polyhedral_approx(x_space, eps) -> PolyhedralSpace:
    """A polyhedral norm within multiplicative (1+eps) of the input norm.

    For a polyhedral input the functionals are a delta-dense subset of the
    dual sphere (delta = eps/(1+eps)) containing all extreme dual points; for
    a Euclidean oracle they are exact rational sphere points composed with
    the pushforward matrix.
    """
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise DomainError("eps must lie in (0, 1)")
    delta = eps / (1 + eps)
    if isinstance(x_space, L2Pushforward):
        net = rational_sphere_net(len(x_space.matrix), delta)
        funcs = [_mat_vec(tuple(zip(*x_space.matrix)), u) for u in net]
        out = PolyhedralSpace(x_space.dim, funcs, tag="approx")
    elif isinstance(x_space, PolyhedralSpace):
        cover = _sphere_cover_dual(x_space, 2 * delta)
        out = PolyhedralSpace(x_space.dim, cover, tag="approx")
    else:
        raise DomainError("input must be a PolyhedralSpace or an L2Pushforward")
    bound = ((2 + 3 * eps) / eps) ** x_space.dim
    if len(out.functionals) > bound:
        raise BudgetError(
            f"approximation uses {len(out.functionals)} functionals, above {bound}"
        )
    return out


def _sphere_cover_dual(space: PolyhedralSpace, step: Fraction) -> list[Vector]:
    """Cover of the dual unit sphere, mesh step/2 in the dual norm."""
    k = space.dim
    dual_pts = [f for g in space.functionals for f in (g, _neg(g))]
    dual_space = PolyhedralSpace.from_ball_vertices(dual_pts, tag="dualball")
    # dual_space has H-description of the dual ball; its sphere cover is exact
    cover = _sphere_cover(dual_space, step)
    cover.extend(space.dual_vertices())
    return [_canonical_sign(c) for c in cover]


# ---------------------------------------------------------------------------
# bound arithmetic


@dataclass(frozen=True)
class GRBound:
    """A symbolic dual-Ramsey number call; never evaluated numerically."""

    d: int
    m: int
    r: int
    context: str = ""

    def __str__(self):
        return f"GR({self.d}, {self.m}, {self.r})"

    def to_json(self) -> dict:
        return {"GR": [self.d, self.m, self.r], "context": self.context}


@dataclass(frozen=True)
class TowerBound:
    """An exact but astronomically large bound kept in factored form."""

    factors: tuple[tuple[int, Fraction], ...]  # (base, exponent)
    multiplier: int

    def __str__(self):
        parts = [f"{b}^({format_rational(e)})" for b, e in self.factors]
        parts.append(str(self.multiplier))
        return " * ".join(parts)

    def log10(self) -> float:
        total = math.log10(self.multiplier) if self.multiplier else 0.0
        for b, e in self.factors:
            total += float(e) * math.log10(b)
        return total

    def to_json(self) -> dict:
        return {
            "factors": [[b, format_rational(e)] for b, e in self.factors],
            "multiplier": self.multiplier,
            "log10": self.log10(),
        }


def bound_n_infty(d: int, m: int, r: int, eps) -> GRBound:
    """Symbolic upper bound for the sup-norm embedding Ramsey number.

    Exact integer arithmetic on the closed-form arguments; the outer value is
    a dual-Ramsey number and stays symbolic.
    """
    eps = Fraction(eps)
    if d < 1 or m < d:
        raise DomainError("need 1 <= d <= m")
    if r < 1 or eps <= 0:
        raise DomainError("need r >= 1 and eps > 0")
    first = math.floor((1 + 4 / eps) ** d)
    falling = 1
    for i in range(d):
        falling *= m - i
    second = first * (2**d) * falling
    return GRBound(first, second, r, context="n-infty")


def _ceil_root(n: int, b: int) -> int:
    """ceil(n^(1/b)) for positive integers, exactly."""
    if n < 0 or b < 1:
        raise DomainError("bad root arguments")
    if n in (0, 1) or b == 1:
        return n
    lo, hi = 1, 1 << ((n.bit_length() + b - 1) // b + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**b >= n:
            hi = mid
        else:
            lo = mid + 1
    return lo


def _pow_ceil(base: int, exponent: Fraction) -> int:
    """ceil(base^exponent) exactly for integer base >= 1 and rational exponent."""
    if base == 1:
        return 1
    a, b = exponent.numerator, exponent.denominator
    n = base**a
    if b == 1:
        return n
    return _ceil_root(n, b)


def bound_dim_h(dim_f: int, dim_g: int, eps, n,
                digit_cap: int = 50000) -> Union[int, TowerBound]:
    """Exact dimension bound for the joint correcting space.

    (dim F)^(c^(n dim F)) * (dim G)^(c^(n dim G)) * n with c = 1 + 8(5+eps)/eps.
    Returns an exact integer when it fits within digit_cap decimal digits,
    otherwise a certified factored tower.
    """
    eps = Fraction(eps)
    if dim_f < 1 or dim_g < 1 or n < 1 or eps <= 0:
        raise DomainError("dimensions, n and eps must be positive")
    c = 1 + 8 * (5 + eps) / eps
    e_f = c ** (n * dim_f)
    e_g = c ** (n * dim_g)

    def digits(base: int, e: Fraction) -> Fraction:
        if base == 1:
            return Fraction(0)
        # log10(base) < len(str(base)); a safe overestimate is fine here
        return e * len(str(base))

    if digits(dim_f, e_f) + digits(dim_g, e_g) > digit_cap:
        return TowerBound(((dim_f, e_f), (dim_g, e_g)), n)
    return _pow_ceil(dim_f, e_f) * _pow_ceil(dim_g, e_g) * n


def pushforward_norm(matrix: Sequence[Sequence], p) -> Union[PolyhedralSpace, L2Pushforward]:
    """The norm x -> ||A x||_p as a polyhedral space (p in {1, inf}) or oracle (p=2)."""
    rows = [_vec(r) for r in matrix]
    if not rows:
        raise DomainError("empty matrix")
    k = len(rows[0])
    if _rank(tuple(zip(*rows))) < k:
        raise DegenerateNormError("pushforward needs full column rank")
    if p in (math.inf, "inf", "oo"):
        return PolyhedralSpace(k, rows, tag="pushforward-linf")
    if p == 1:
        if len(rows) > 12:
            raise BudgetError("l1 pushforward capped at 12 rows")
        funcs = []
        for signs in product((1, -1), repeat=len(rows)):
            f = tuple(
                sum((Fraction(s) * r[d] for s, r in zip(signs, rows)), Fraction(0))
                for d in range(k)
            )
            funcs.append(f)
        return PolyhedralSpace(k, funcs, tag="pushforward-l1")
    if p == 2:
        return L2Pushforward(rows)
    raise DomainError("p must be 1, 2 or inf")
