import math
import random
from fractions import Fraction as F
from itertools import combinations, permutations, product

import pytest

from ramseyfact._util import ln_leq
from ramseyfact.errors import (
    BudgetError,
    DegenerateNormError,
    DomainError,
    RankError,
)
from ramseyfact.normgeo import (
    EpsNet,
    NormedMap,
    PolyhedralSpace,
    TowerBound,
    alpha,
    amalgam,
    bm_upper,
    bound_dim_h,
    bound_n_infty,
    correcting_pair,
    eps_net,
    factor_through_envelope,
    gap_metric,
    injective_envelope,
    omega,
    polyhedral_approx,
    pushforward_norm,
    rational_sphere_net,
    shell_witness,
)

from oracles import random_polyhedral_functionals


def random_space(rng, dim, extras=2):
    return PolyhedralSpace(dim, random_polyhedral_functionals(rng, dim, extras))


def perturbed_space(rng, base: PolyhedralSpace, low=F(2, 3), high=F(3, 2)):
    """A space whose unit ball sits between scaled copies of the base ball."""
    funcs = []
    for f in base.functionals:
        scale = F(rng.randint(int(low * 12), int(high * 12)), 12)
        funcs.append(tuple(x * scale for x in f))
    return PolyhedralSpace(base.dim, funcs)


class TestSpaces:
    def test_linf_ball(self):
        space = PolyhedralSpace.linf(2)
        assert set(space.vertices()) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}

    def test_l1_ball(self):
        space = PolyhedralSpace.l1(2)
        assert set(space.vertices()) == {(1, 0), (-1, 0), (0, 1), (0, -1)}

    def test_l1_norm_value(self):
        assert PolyhedralSpace.l1(2).norm((3, 4)) == 7

    def test_vertices_symmetric_and_exact(self):
        rng = random.Random(5)
        for _ in range(5):
            space = random_space(rng, 3)
            verts = space.vertices()
            assert all(tuple(-x for x in v) in verts for v in verts)
            assert all(space.norm(v) == 1 for v in verts)

    def test_seminorm_rejected(self):
        with pytest.raises(DegenerateNormError):
            PolyhedralSpace(2, [(1, 0)])

    def test_json_round_trip(self):
        space = PolyhedralSpace(2, [(1, 0), (F(1, 2), 1)])
        again = PolyhedralSpace.from_json(space.to_json())
        assert again.functionals == space.functionals

    def test_json_rejects_wrong_vertices(self):
        space = PolyhedralSpace.linf(2)
        data = space.to_json()
        data["vertices"] = [["2", "2"], ["-2", "-2"]]
        with pytest.raises(DomainError):
            PolyhedralSpace.from_json(data)

    def test_dual_vertices_of_l1(self):
        # dual of the diamond is the square
        space = PolyhedralSpace.l1(2)
        assert set(space.dual_vertices()) == {(1, 1), (1, -1)}


class TestOperatorNorms:
    def test_identity(self):
        space = PolyhedralSpace.linf(2)
        t = NormedMap.identity(space)
        assert t.op_norm() == 1 and t.inv_norm() == 1

    def test_hadamard_isometry(self):
        t = NormedMap([[1, 1], [1, -1]], PolyhedralSpace.l1(2), PolyhedralSpace.linf(2))
        assert t.op_norm() == 1 and t.inv_norm() == 1
        assert t.is_isometric_embedding()

    def test_diagonal(self):
        space = PolyhedralSpace.linf(2)
        t = NormedMap([[1, 0], [0, F(1, 2)]], space, space)
        assert t.op_norm() == 1
        assert t.inv_norm() == 2

    def test_rank_deficient_inverse_is_infinite(self):
        space = PolyhedralSpace.linf(2)
        t = NormedMap([[1, 0], [1, 0]], space, space)
        assert t.inv_norm() == math.inf


class TestOmegaAlpha:
    def test_zero_on_equal(self):
        space = PolyhedralSpace.linf(3)
        assert omega(space, space).is_zero
        assert alpha(space, space) == 0

    def test_omega_symmetric(self):
        rng = random.Random(11)
        for _ in range(5):
            a = random_space(rng, 2)
            b = random_space(rng, 2)
            assert omega(a, b).argument == omega(b, a).argument

    def test_omega_argument_exact(self):
        assert omega(PolyhedralSpace.linf(2), PolyhedralSpace.l1(2)).argument == 2

    def test_metric_axioms_random_triples(self):
        rng = random.Random(23)
        for trial in range(40):
            dim = 2 if trial % 2 == 0 else 3
            base = PolyhedralSpace.linf(dim)
            spaces = [perturbed_space(rng, base) for _ in range(3)]
            w01 = omega(spaces[0], spaces[1]).argument
            w12 = omega(spaces[1], spaces[2]).argument
            w02 = omega(spaces[0], spaces[2]).argument
            assert w02 <= w01 * w12  # log triangle inequality, multiplicatively
            a01 = alpha(spaces[0], spaces[1], base)
            a10 = alpha(spaces[1], spaces[0], base)
            assert a01 == a10
            a12 = alpha(spaces[1], spaces[2], base)
            a02 = alpha(spaces[0], spaces[2], base)
            assert a02 <= a01 + a12
            assert alpha(spaces[0], spaces[0], base) == 0

    def test_sandwich_against_omega(self):
        # with P, Q within log-lambda of the base, alpha lies between
        # omega/lambda and omega*lambda; resolved with exact log bounds
        rng = random.Random(41)
        for trial in range(25):
            dim = 2 if trial % 3 else 3
            base = PolyhedralSpace.linf(dim)
            p_space = perturbed_space(rng, base)
            q_space = perturbed_space(rng, base)
            lam = max(
                omega(base, p_space).argument, omega(base, q_space).argument
            )
            a = alpha(p_space, q_space, base)
            w = omega(p_space, q_space).argument
            if w == 1:
                assert a == 0
                continue
            # (1/lam) ln w <= a  and  a <= lam ln w
            assert ln_leq(1 / lam, w, a)
            assert not ln_leq(lam, w, a - F(1, 10**9)) or a <= lam * (w - 1)


class TestExactnessTypes:
    def test_all_metric_values_are_fractions(self):
        rng = random.Random(55)
        base = PolyhedralSpace.linf(2)
        p_s = perturbed_space(rng, base)
        q_s = perturbed_space(rng, base)
        assert isinstance(p_s.norm((F(1, 3), F(2, 7))), F)
        t = NormedMap.identity(p_s, q_s)
        assert isinstance(t.op_norm(), F) and isinstance(t.inv_norm(), F)
        assert isinstance(omega(p_s, q_s).argument, F)
        assert isinstance(alpha(p_s, q_s, base), F)
        assert isinstance(gap_metric([(1, 0)], [(0, 1)], base), F)
        res = amalgam(p_s, q_s, t) if t.op_norm() >= 1 and t.inv_norm() >= 1 \
            else None
        if res is not None:
            assert isinstance(res.defect, F)
        net = eps_net(base, F(1, 2), "shell")
        assert all(isinstance(x, F) for pt in net.points for x in pt)


class TestHausdorffFloatOracle:
    @staticmethod
    def _directed_float(a_pts, b_pts, norm_fn, segments=240):
        import numpy as np

        # dense samples of both hulls: pairwise convex combinations suffice in
        # the plane for an oracle at coarse tolerance
        def fill(points):
            pts = [tuple(map(float, p)) for p in points]
            out = list(pts)
            ts = [i / 24 for i in range(25)]
            for p in pts:
                for q in pts:
                    for t in ts:
                        out.append((p[0] * (1 - t) + q[0] * t,
                                    p[1] * (1 - t) + q[1] * t))
            return np.array(out)

        a_arr = fill(a_pts)
        b_arr = fill(b_pts)
        best = 0.0
        for a in a_arr:
            diffs = b_arr - a
            vals = norm_fn(diffs)
            best = max(best, vals.min())
        return best

    def test_alpha_matches_sampling_oracle(self):
        import numpy as np

        rng = random.Random(6)
        base = PolyhedralSpace.linf(2)
        for _ in range(4):
            p_s = perturbed_space(rng, base)
            q_s = perturbed_space(rng, base)
            exact = float(alpha(p_s, q_s, base))
            a_pts = [f for g in p_s.functionals for f in (g, tuple(-x for x in g))]
            b_pts = [f for g in q_s.functionals for f in (g, tuple(-x for x in g))]
            # distance norm: dual of the sup norm, i.e. the taxicab norm
            est = self._directed_float(
                a_pts, b_pts, lambda d: np.abs(d).sum(axis=1)
            )
            est = max(est, self._directed_float(
                b_pts, a_pts, lambda d: np.abs(d).sum(axis=1)
            ))
            assert abs(exact - est) < 0.08

    def test_gap_matches_sampling_oracle(self):
        import numpy as np

        space = PolyhedralSpace.linf(2)
        exact = float(gap_metric([(1, 0)], [(1, 1)], space))
        a_pts = [(1.0, 0.0), (-1.0, 0.0)]
        b_pts = [(1.0, 1.0), (-1.0, -1.0)]
        est = max(
            self._directed_float(a_pts, b_pts,
                                 lambda d: np.abs(d).max(axis=1)),
            self._directed_float(b_pts, a_pts,
                                 lambda d: np.abs(d).max(axis=1)),
        )
        assert abs(exact - est) < 0.08


class TestBanachMazur:
    def test_self_distance_zero(self):
        space = PolyhedralSpace.l1(2)
        assert bm_upper(space, space, effort=1).is_zero

    def test_l1_linf_plane_isometric(self):
        assert bm_upper(PolyhedralSpace.l1(2), PolyhedralSpace.linf(2), effort=1).is_zero

    def test_upper_bound_at_least_zero(self):
        rng = random.Random(3)
        for _ in range(4):
            a = random_space(rng, 2)
            b = random_space(rng, 2)
            assert bm_upper(a, b, effort=1).argument >= 1

    def test_dominates_omega_quotient(self):
        # any candidate value dominates the true distance, which is at most
        # the intrinsic distance: sanity against omega on one example
        a = PolyhedralSpace.linf(2)
        b = PolyhedralSpace(2, [(1, 0), (0, F(4, 5))])
        assert bm_upper(a, b, effort=1).argument <= omega(a, b).argument


class TestGap:
    def test_identical_subspace(self):
        space = PolyhedralSpace.linf(2)
        assert gap_metric([(1, 0)], [(1, 0)], space) == 0

    def test_axes_in_linf(self):
        space = PolyhedralSpace.linf(2)
        assert gap_metric([(1, 0)], [(0, 1)], space) == 1

    def test_symmetry_random(self):
        rng = random.Random(17)
        space = random_space(rng, 3)
        for _ in range(5):
            v = [(F(rng.randint(-3, 3)), F(rng.randint(-3, 3)), F(rng.randint(1, 3)))]
            w = [(F(rng.randint(1, 3)), F(rng.randint(-3, 3)), F(rng.randint(-3, 3)))]
            assert gap_metric(v, w, space) == gap_metric(w, v, space)

    def test_dependent_basis_rejected(self):
        space = PolyhedralSpace.linf(2)
        with pytest.raises(DomainError):
            gap_metric([(1, 0), (2, 0)], [(0, 1)], space)

    def test_different_dimensions_allowed(self):
        space = PolyhedralSpace.linf(2)
        val = gap_metric([(1, 0)], [(1, 0), (0, 1)], space)
        assert val == 1  # every ball vertex of the plane is 1 away from the line


class TestEpsNets:
    def test_wide_eps_keeps_seed_only(self):
        space = PolyhedralSpace.linf(2)
        net = eps_net(space, 2, "ball-greedy")
        assert net.points == [(0, 0)]
        assert net.cardinality_bound == 4

    def test_greedy_bound_linf(self):
        space = PolyhedralSpace.linf(2)
        net = eps_net(space, 1, "ball-greedy")
        assert len(net) <= 9
        # exact strict separation
        for a, b in combinations(net.points, 2):
            assert space.norm(tuple(x - y for x, y in zip(a, b))) > 1

    def test_greedy_dense_on_lattice(self):
        space = PolyhedralSpace.l1(2)
        eps = F(1, 2)
        net = eps_net(space, eps, "ball-greedy")
        from ramseyfact.normgeo import _lattice_points

        for cand in _lattice_points(space, eps / 2, F(1)):
            assert any(
                space.norm(tuple(a - b for a, b in zip(cand, pt))) <= eps
                for pt in net.points
            )

    @pytest.mark.parametrize("maker", [PolyhedralSpace.linf, PolyhedralSpace.l1])
    @pytest.mark.parametrize("eps", [F(1), F(1, 2)])
    def test_shell_bounds(self, maker, eps):
        space = maker(2)
        net = eps_net(space, eps, "shell")
        assert len(net) <= net.cardinality_bound == (1 + 4 / eps) ** 2

    def test_shell_witness_samples(self):
        space = PolyhedralSpace.l1(2)
        net = eps_net(space, F(1, 2), "shell")
        rng = random.Random(9)
        for _ in range(400):
            x = (F(rng.randint(-60, 60), 120), F(rng.randint(-60, 60), 120))
            nx = space.norm(x)
            if nx == 0 or nx > 1:
                continue
            y = shell_witness(net, space, x)
            assert y is not None
            assert space.norm(tuple(a - b for a, b in zip(x, y))) < F(1, 2)
            assert space.norm(y) < nx

    def test_bad_eps_rejected(self):
        with pytest.raises(DomainError):
            eps_net(PolyhedralSpace.linf(2), 0, "ball-greedy")


class TestAmalgam:
    def test_same_space_identity(self):
        space = PolyhedralSpace.linf(2)
        res = amalgam(space, space, NormedMap.identity(space))
        assert res.defect == 0
        assert res.defect_bound == 0
        assert res.space.dim == 2

    def test_line_into_plane(self):
        res = amalgam(
            PolyhedralSpace.linf(1), PolyhedralSpace.linf(2), [[1], [F(1, 2)]]
        )
        # the map is isometric (sup norm of (t, t/2) is |t|): exact bound 0
        assert res.t_norm == 1 and res.t_inv_norm == 1
        assert res.defect == 0 and res.defect_bound == 0

    def test_embeddings_isometric_on_random_instances(self):
        rng = random.Random(77)
        for _ in range(12):
            dx = rng.choice((2, 3))
            dy = rng.choice((2, 3))
            x_space = random_space(rng, dx, extras=1)
            y_space = random_space(rng, dy, extras=1)
            rows = [
                [F(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(dx)]
                for _ in range(dy)
            ]
            t = NormedMap(rows, x_space, y_space)
            if t.rank < dx:
                continue
            # normalize so ||T|| = 1 <= ||T^-1||
            scale = 1 / t.op_norm()
            t = NormedMap([[x * scale for x in row] for row in rows], x_space, y_space)
            res = amalgam(x_space, y_space, t)
            assert res.embed_x.is_isometric_embedding()
            assert res.embed_y.is_isometric_embedding()
            assert res.defect <= res.defect_bound
            assert res.space.dim <= dx * dy

    def test_non_injective_rejected(self):
        space = PolyhedralSpace.linf(2)
        with pytest.raises(RankError):
            amalgam(space, space, [[1, 0], [1, 0]])

    def test_caller_dual_set_validated(self):
        space = PolyhedralSpace.linf(2)
        with pytest.raises(DomainError):
            amalgam(space, space, NormedMap.identity(space), dual_set=[])
        with pytest.raises(DomainError):
            amalgam(space, space, NormedMap.identity(space), dual_set=[(9, 0)])


class TestCorrectingPair:
    def test_same_space_trivial(self):
        space = PolyhedralSpace.linf(1)
        res = correcting_pair([space, space], F(3, 2), F(2))
        assert res.space.dim == 1
        assert all(c.deviation < F(1) for c in res.corrections)

    def test_line_into_plane_example(self):
        res = correcting_pair(
            [PolyhedralSpace.linf(1), PolyhedralSpace.linf(2)], F(11, 10), F(6, 5)
        )
        assert res.space.dim == 2  # one-dimensional sources never grow the space
        assert res.net_sizes[0] >= 1
        assert res.net_sizes[0] <= (1 + 2 * F(11, 10) / F(1, 10)) ** 2
        for c in res.corrections:
            assert c.deviation < F(1, 5)
        assert res.space.dim <= res.dim_bound

    def test_bad_parameters(self):
        space = PolyhedralSpace.linf(1)
        with pytest.raises(DomainError):
            correcting_pair([space, space], F(3, 2), F(3, 2))

    def test_budget_guard(self):
        spaces = [PolyhedralSpace.linf(2), PolyhedralSpace.linf(2)]
        with pytest.raises(BudgetError):
            correcting_pair(spaces, F(11, 10), F(6, 5), net_budget=10)


class TestEnvelope:
    def test_sup_space_is_its_own_envelope(self):
        for k in (1, 2, 3):
            d, psi = injective_envelope(PolyhedralSpace.linf(k))
            assert d == k
            assert sorted(psi.matrix) == sorted(
                NormedMap.identity(PolyhedralSpace.linf(k)).matrix
            )

    def test_l1_plane(self):
        d, psi = injective_envelope(PolyhedralSpace.l1(2))
        assert d == 2
        assert set(psi.matrix) == {(1, 1), (1, -1)}
        assert psi.is_isometric_embedding()

    def test_free_space_style_hexagon(self):
        space = PolyhedralSpace.from_ball_vertices(
            [(1, 0), (0, 1), (1, -1)], tag="hex"
        )
        d, psi = injective_envelope(space)
        assert d == 3
        assert psi.is_isometric_embedding()

    def test_factorization_through_envelope(self):
        space = PolyhedralSpace.l1(2)
        d, psi = injective_envelope(space)
        # an isometric copy inside a larger sup space: envelope rows plus a
        # dominated mixture
        rows = list(psi.matrix) + [tuple(F(1, 2) * (a + b) for a, b in
                                         zip(psi.matrix[0], psi.matrix[1]))]
        t = NormedMap(rows, space, PolyhedralSpace.linf(3))
        u = factor_through_envelope(t)
        assert u.compose(psi).matrix == t.matrix
        assert u.is_isometric_embedding()

    def test_factorization_requires_isometry(self):
        space = PolyhedralSpace.l1(2)
        bad = NormedMap([[F(1, 2), 0], [0, F(1, 2)], [0, 0]], space,
                        PolyhedralSpace.linf(3))
        with pytest.raises(DomainError):
            factor_through_envelope(bad)


class TestApprox:
    def test_polyhedral_fixed_point(self):
        space = PolyhedralSpace.l1(2)
        out = polyhedral_approx(space, F(1, 2))
        # contains every extreme dual functional, so the norm is unchanged
        rng = random.Random(2)
        for _ in range(50):
            x = (F(rng.randint(-9, 9), 4), F(rng.randint(-9, 9), 4))
            assert out.norm(x) == space.norm(x)

    def test_euclidean_plane_bound_and_certificate(self):
        oracle = pushforward_norm([[1, 0], [0, 1]], 2)
        eps = F(1, 2)
        out = polyhedral_approx(oracle, eps)
        assert len(out.functionals) <= ((2 + 3 * eps) / eps) ** 2 == 49
        rng = random.Random(31)
        worst = 1.0
        for _ in range(1000):
            x = (F(rng.randint(-999, 999), 1000), F(rng.randint(-999, 999), 1000))
            if x == (0, 0):
                continue
            exact = oracle.norm(x)
            approxed = float(out.norm(x))
            assert approxed <= exact + 1e-9
            worst = min(worst, approxed / exact)
        assert worst >= 1 / (1 + float(eps)) - 1e-9

    def test_sphere_net_points_exactly_unit(self):
        for pt in rational_sphere_net(2, F(1, 3)):
            assert sum(x * x for x in pt) == 1

    def test_eps_domain(self):
        with pytest.raises(DomainError):
            polyhedral_approx(PolyhedralSpace.l1(2), F(3, 2))


class TestBounds:
    def test_n_infty_example(self):
        b = bound_n_infty(1, 2, 2, 1)
        assert (b.d, b.m, b.r) == (5, 20, 2)
        assert str(b) == "GR(5, 20, 2)"

    def test_falling_factorial_at_diagonal(self):
        b = bound_n_infty(3, 3, 2, F(1, 2))
        base = math.floor((1 + 8) ** 3)
        assert b.d == base
        assert b.m == base * 8 * 6  # 2^d * d!

    def test_dim_h_trivial_factors(self):
        for n in (1, 5, 9):
            assert bound_dim_h(1, 1, 1, n) == n

    def test_dim_h_matches_direct_evaluation(self):
        # independent evaluation of the closed formula for small exact case
        val = bound_dim_h(2, 1, 1, 1)
        c = 1 + 8 * (5 + 1) // 1
        assert val == 2 ** (c ** 2) * 1 * 1

    def test_dim_h_tower_for_huge_values(self):
        t = bound_dim_h(3, 3, F(1, 10), 4)
        assert isinstance(t, TowerBound)
        assert t.log10() > 50
        assert "3^(" in str(t)

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            bound_n_infty(3, 2, 2, 1)
        with pytest.raises(DomainError):
            bound_dim_h(0, 1, 1, 1)


class TestPushforward:
    def test_identity_sup(self):
        space = pushforward_norm([[1, 0], [0, 1]], math.inf)
        assert space.norm((3, -4)) == 4

    def test_doubled_line(self):
        space = pushforward_norm([[1], [1]], 1)
        assert space.norm((F(1, 2),)) == 1

    def test_rank_deficient_rejected(self):
        with pytest.raises(DegenerateNormError):
            pushforward_norm([[1, 1], [1, 1]], 1)

    def test_signed_permutation_invariance_sup(self):
        rows = [[F(1), F(1, 2)], [F(0), F(2)], [F(1), F(-1)]]
        base = pushforward_norm(rows, math.inf)
        for perm in permutations(range(2)):
            for signs in product((1, -1), repeat=2):
                u = [[signs[j] if perm[j] == i else 0 for j in range(2)]
                     for i in range(2)]
                composed = pushforward_norm(
                    [[sum(row[t] * u[t][j] for t in range(2)) for j in range(2)]
                     for row in rows], math.inf)
                rng = random.Random(4)
                for _ in range(10):
                    x = (F(rng.randint(-5, 5)), F(rng.randint(-5, 5)))
                    ux = tuple(sum(u[i][j] * x[j] for j in range(2)) for i in range(2))
                    assert composed.norm(x) == base.norm(ux)

    def test_l2_oracle_exact_squares(self):
        oracle = pushforward_norm([[1, 1], [0, 1]], 2)
        assert oracle.norm_squared((1, 1)) == 5
