from itertools import product

import pytest

from ramseyfact.errors import DimensionError, DomainError, InvalidHeightError
from ramseyfact.orders import (
    FinMap,
    LinearOrder,
    RigidSurjection,
    antilex_rank,
    antilex_vectors,
    combinatorial_space,
    compare_antilex,
    compose_epi,
    enumerate_epi,
    enumerate_fin,
    is_rigid_surjection,
    tetris,
    tetris_power,
)

from oracles import brute_force_rigid_maps, stirling2


class TestAntilex:
    def test_zero_vector_is_minimum(self):
        assert compare_antilex((0, 0), (1, 0)) == -1
        for v in antilex_vectors(2, 3):
            if any(v):
                assert compare_antilex((0, 0, 0), v) == -1

    def test_last_coordinate_decides(self):
        assert compare_antilex((1, 0), (0, 1)) == -1
        assert compare_antilex((0, 1), (1, 0)) == 1

    def test_first_unit_vector_is_second_element(self):
        # immediately after zero comes (1, 0, ..., 0)
        for k in (1, 2, 3, 4):
            vecs = antilex_vectors(2, k)
            assert vecs[0] == tuple([0] * k)
            assert vecs[1] == tuple([1] + [0] * (k - 1))

    def test_length_mismatch(self):
        with pytest.raises(DimensionError):
            compare_antilex((0, 1), (0, 1, 0))

    @pytest.mark.parametrize("p,k", [(2, 3), (3, 2)])
    def test_total_order(self, p, k):
        vecs = antilex_vectors(p, k)
        # enumeration order agrees with the comparator, pairwise
        for i, x in enumerate(vecs):
            assert antilex_rank(x, p) == i
            for j, y in enumerate(vecs):
                c = compare_antilex(x, y)
                assert c == (-1 if i < j else (0 if i == j else 1))
        # transitivity on all triples
        for x, y, z in product(vecs, repeat=3):
            if compare_antilex(x, y) <= 0 and compare_antilex(y, z) <= 0:
                assert compare_antilex(x, z) <= 0


class TestRigidSurjections:
    def test_identity_is_rigid(self):
        for n in range(1, 6):
            assert is_rigid_surjection(tuple(range(n)), n, n)

    def test_examples(self):
        assert is_rigid_surjection((0, 1, 0), 3, 2)
        assert not is_rigid_surjection((1, 0), 2, 2)

    def test_not_surjective(self):
        assert not is_rigid_surjection((0, 0, 0), 3, 2)

    def test_epi_self_is_identity_only(self):
        for n in range(1, 6):
            epis = enumerate_epi(n, n)
            assert len(epis) == 1
            assert epis[0].map == tuple(range(n))

    def test_small_counts(self):
        assert len(enumerate_epi(3, 2)) == 3
        assert len(enumerate_epi(4, 2)) == 7
        assert enumerate_epi(2, 3) == []

    @pytest.mark.parametrize("n", range(1, 8))
    def test_counts_match_partition_oracle(self, n):
        for k in range(1, n + 1):
            assert len(enumerate_epi(n, k)) == stirling2(n, k)

    @pytest.mark.parametrize("n,k", [(3, 2), (4, 2), (4, 3), (5, 3)])
    def test_agreement_with_brute_force(self, n, k):
        ours = [f.map for f in enumerate_epi(n, k)]
        assert ours == brute_force_rigid_maps(n, k)
        assert ours == sorted(ours)

    def test_validation(self):
        with pytest.raises(DomainError):
            RigidSurjection(2, LinearOrder(2), (1, 0))


class TestCompose:
    def test_identity_neutral(self):
        for f in enumerate_epi(4, 2):
            ident = enumerate_epi(4, 4)[0]
            assert compose_epi(ident, f).map == f.map
            ident2 = enumerate_epi(2, 2)[0]
            assert compose_epi(f, ident2).map == f.map

    def test_pointwise_example(self):
        g = RigidSurjection(4, LinearOrder(3), (0, 1, 2, 1))
        f = RigidSurjection(3, LinearOrder(2), (0, 1, 1))
        assert compose_epi(g, f).map == (0, 1, 1, 1)

    def test_size_mismatch(self):
        g = RigidSurjection(3, LinearOrder(2), (0, 1, 1))
        with pytest.raises(DimensionError):
            compose_epi(g, g)

    def test_associative_exhaustive(self):
        # every composable triple through all size chains n >= m >= k >= j <= 5
        for n in range(1, 6):
            for m in range(1, n + 1):
                for k in range(1, m + 1):
                    for j in range(1, k + 1):
                        for g in enumerate_epi(n, m):
                            for f in enumerate_epi(m, k):
                                for e in enumerate_epi(k, j):
                                    lhs = compose_epi(compose_epi(g, f), e)
                                    rhs = compose_epi(g, compose_epi(f, e))
                                    assert lhs.map == rhs.map

    def test_composition_stays_rigid(self):
        for g in enumerate_epi(5, 3):
            for f in enumerate_epi(3, 2):
                h = compose_epi(g, f)
                assert is_rigid_surjection(h.map, 5, 2)


class TestFinMaps:
    def test_tetris_example(self):
        assert tetris(FinMap((2, 0, 1))).values == (1, 0, 0)

    def test_tetris_constant(self):
        for n in (1, 3, 5):
            for k in (1, 2, 3):
                f = FinMap((k,) * n)
                assert tetris(f).values == (k - 1,) * n

    def test_tetris_to_degenerate(self):
        out = tetris(FinMap((1, 1, 0)))
        assert out.values == (0, 0, 0)
        assert out.is_degenerate

    def test_tetris_height_zero_rejected(self):
        with pytest.raises(InvalidHeightError):
            tetris(FinMap((0, 0)))

    def test_double_tetris_is_power(self):
        for n in range(1, 6):
            for k in (2, 3):
                for vals in product(range(k + 1), repeat=n):
                    if max(vals) != k:
                        continue
                    f = FinMap(vals)
                    assert tetris(tetris(f)).values == tetris_power(f, 2).values

    def test_height_invariant(self):
        with pytest.raises(DomainError):
            FinMap((1, 0), k=2)

    def test_json_round_trip(self):
        f = FinMap((2, 0, 1))
        assert FinMap.from_json(f.to_json()) == f


class TestCombinatorialSpace:
    def test_single_block_height_one(self):
        f = FinMap((1, 0, 1))
        assert combinatorial_space([f], 1) == [f]

    def test_single_block_height_two(self):
        f = FinMap((2, 2))
        assert combinatorial_space([f], 2) == [f]

    def test_two_blocks_height_one(self):
        f0 = FinMap((1, 0, 0))
        f1 = FinMap((0, 0, 1))
        space = combinatorial_space([f0, f1], 1)
        assert sorted(x.values for x in space) == [(0, 0, 1), (1, 0, 0), (1, 0, 1)]

    def test_overlapping_supports_rejected(self):
        with pytest.raises(DomainError):
            combinatorial_space([FinMap((1, 0)), FinMap((1, 1))], 1)

    def test_counts_match_fin(self):
        f0 = FinMap((2, 0, 0, 0))
        f1 = FinMap((0, 0, 2, 0))
        space = combinatorial_space([f0, f1], 2)
        assert len(space) == len(enumerate_fin(2, 2))
        assert all(x.k == 2 for x in space)

    def test_enumerate_fin_small(self):
        assert [f.values for f in enumerate_fin(1, 2)] == [(0, 1), (1, 0), (1, 1)]
        assert len(enumerate_fin(2, 2)) == 5
