from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattice_bench.core import (
    Basis,
    UnimodularTransform,
    apply_transform,
    gram_schmidt,
    identity_transform,
    is_in_lattice,
    lattice_determinant,
    norm_sq,
)
from lattice_bench.errors import (
    DimensionMismatch,
    NotUnimodular,
    PrecisionLoss,
    RankDeficient,
)

from conftest import random_full_rank_basis


class TestGramSchmidt:
    def test_identity_is_orthonormal(self):
        gso = gram_schmidt(Basis([[1, 0], [0, 1]]), "exact")
        assert gso.mu == ((1, 0), (0, 1))
        assert gso.norms_sq == (1, 1)

    def test_hand_computed_example(self):
        # rows [[1,1],[0,2]]: mu21 = <b2,b1>/||b1||^2 = 2/2 = 1, b*2 = (-1,1)
        gso = gram_schmidt(Basis([[1, 1], [0, 2]]), "exact")
        assert gso.mu[1][0] == 1
        assert gso.norms_sq == (2, 2)

    def test_orthogonal_input(self):
        gso = gram_schmidt(Basis([[2, 0], [0, 3]]), "exact")
        assert gso.mu[1][0] == 0
        assert gso.norms_sq == (4, 9)

    def test_rank_deficient_exact(self):
        with pytest.raises(RankDeficient):
            gram_schmidt(Basis([[1, 2], [2, 4]]), "exact")

    def test_rank_deficient_float_reports_precision(self):
        with pytest.raises(PrecisionLoss):
            gram_schmidt(Basis([[1, 2], [2, 4]]), "float")

    def test_float_matches_exact(self, rng):
        for _ in range(10):
            basis = random_full_rank_basis(rng, 5, 50)
            exact = gram_schmidt(basis, "exact")
            flo = gram_schmidt(basis, "float")
            for i in range(5):
                assert float(exact.norms_sq[i]) == pytest.approx(
                    float(flo.norms_sq[i]), rel=1e-12
                )
                for j in range(i):
                    assert float(exact.mu[i][j]) == pytest.approx(
                        float(flo.mu[i][j]), rel=1e-10, abs=1e-12
                    )

    def test_exact_recombination_identity(self, rng):
        # b_i == b*_i + sum_{j<i} mu_ij b*_j, exactly
        for _ in range(5):
            basis = random_full_rank_basis(rng, 4, 30)
            gso = gram_schmidt(basis, "exact")
            d = basis.dim
            bstar = []
            for i in range(d):
                row = [Fraction(x) for x in basis.rows[i]]
                for j in range(i):
                    row = [r - gso.mu[i][j] * s for r, s in zip(row, bstar[j])]
                bstar.append(row)
                assert sum(x * x for x in row) == gso.norms_sq[i]
                recombined = list(row)
                for j in range(i):
                    recombined = [
                        r + gso.mu[i][j] * s for r, s in zip(recombined, bstar[j])
                    ]
                assert recombined == [Fraction(x) for x in basis.rows[i]]


class TestDeterminant:
    def test_identity(self):
        assert lattice_determinant(Basis([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 1

    def test_two_by_two(self):
        assert lattice_determinant(Basis([[5, 0], [4, 1]])) == 5

    def test_sign_is_dropped(self):
        assert lattice_determinant(Basis([[0, 1], [1, 0]])) == 1

    def test_rank_deficient(self):
        with pytest.raises(RankDeficient):
            lattice_determinant(Basis([[1, 2], [2, 4]]))

    def test_matches_numpy_on_random(self, rng):
        for _ in range(20):
            basis = random_full_rank_basis(rng, 4, 20)
            expected = abs(round(np.linalg.det(np.array(basis.rows, dtype=float))))
            assert lattice_determinant(basis) == expected


class TestMembership:
    def test_zero_vector_always_member(self):
        assert is_in_lattice([0, 0], Basis([[5, 0], [4, 1]]))

    def test_member(self):
        assert is_in_lattice([-1, 1], Basis([[5, 0], [4, 1]]))

    def test_non_member(self):
        assert not is_in_lattice([1, 0], Basis([[5, 0], [4, 1]]))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            is_in_lattice([1, 0, 0], Basis([[5, 0], [4, 1]]))

    def test_rows_are_members(self, rng):
        for _ in range(5):
            basis = random_full_rank_basis(rng, 4, 30)
            for row in basis.rows:
                assert is_in_lattice(row, basis)


class TestApplyTransform:
    def test_identity(self):
        basis = Basis([[5, 0], [4, 1]])
        assert apply_transform(basis, identity_transform(2)).rows == basis.rows

    def test_row_swap(self):
        basis = Basis([[1, 0], [0, 1]])
        u = UnimodularTransform([[0, 1], [1, 0]])
        assert apply_transform(basis, u).rows == ((0, 1), (1, 0))

    def test_shear(self):
        basis = Basis([[5, 0], [4, 1]])
        u = UnimodularTransform([[1, 1], [0, 1]])
        out = apply_transform(basis, u)
        assert out.rows == ((9, 1), (4, 1))
        assert lattice_determinant(out) == 5

    def test_rejects_non_unimodular(self):
        with pytest.raises(NotUnimodular):
            apply_transform(Basis([[1, 0], [0, 1]]), UnimodularTransform([[2, 0], [0, 1]]))

    @settings(max_examples=25, deadline=None)
    @given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-1000, 1000))
    def test_lattice_preserved_round_trip(self, a, b, seed):
        # shear-and-swap transform, always |det| = 1
        import random as _random

        basis = random_full_rank_basis(_random.Random(seed), 3, 10)
        u = UnimodularTransform([[1, a, b], [0, 1, a], [0, 0, 1]])
        out = apply_transform(basis, u)
        assert lattice_determinant(out) == lattice_determinant(basis)
        for row in out.rows:
            assert is_in_lattice(row, basis)
        for row in basis.rows:
            assert is_in_lattice(row, out)


class TestSerialization:
    def test_round_trip(self, rng):
        basis = random_full_rank_basis(rng, 3, 10 ** 12)
        again = Basis.from_json(basis.to_json())
        assert again.rows == basis.rows

    def test_decimal_strings(self):
        text = Basis([[10 ** 30, 0], [0, 1]]).to_json()
        assert '"' + str(10 ** 30) + '"' in text
