from fractions import Fraction

import pytest

from lattice_bench.core import Basis, gram_schmidt, norm_sq
from lattice_bench.enumeration import (
    enumerate_block_exact,
    enumerate_block_float,
    pruning_profile,
    svp_enumerate,
)
from lattice_bench.errors import DimensionMismatch

from conftest import box_shortest, random_full_rank_basis


class TestSvpEnumerate:
    def test_singleton_block(self):
        gso = gram_schmidt(Basis([[3, 0], [0, 2]]), "exact")
        assert svp_enumerate(gso, 0, 1, 10) == (1,)
        assert svp_enumerate(gso, 0, 1, 9) is None  # strict radius
        assert svp_enumerate(gso, 1, 2, 5) == (1,)

    def test_worked_example(self):
        # unreduced [[5,0],[4,1]]: minimum is -b1 + b2 = (-1, 1), norm^2 = 2
        gso = gram_schmidt(Basis([[5, 0], [4, 1]]), "exact")
        assert svp_enumerate(gso, 0, 2, 25) == (-1, 1)

    def test_radius_below_lambda1(self):
        gso = gram_schmidt(Basis([[5, 0], [4, 1]]), "exact")
        assert svp_enumerate(gso, 0, 2, 1) is None

    def test_block_out_of_range(self):
        gso = gram_schmidt(Basis([[1, 0], [0, 1]]), "exact")
        with pytest.raises(DimensionMismatch):
            svp_enumerate(gso, 0, 3, 10)

    def test_float_mode_agrees(self, rng):
        for _ in range(10):
            basis = random_full_rank_basis(rng, 4, 15)
            exact = gram_schmidt(basis, "exact")
            flo = gram_schmidt(basis, "float")
            radius = norm_sq(basis.rows[0]) + 1
            ce = svp_enumerate(exact, 0, 4, radius)
            cf = svp_enumerate(flo, 0, 4, radius)
            if ce is None:
                assert cf is None
            else:
                vec_e = [sum(ce[i] * basis.rows[i][j] for i in range(4)) for j in range(4)]
                vec_f = [sum(cf[i] * basis.rows[i][j] for i in range(4)) for j in range(4)]
                assert norm_sq(vec_e) == norm_sq(vec_f)

    def test_matches_box_oracle(self, rng):
        for _ in range(8):
            basis = random_full_rank_basis(rng, 3, 8)
            _, best_ns = box_shortest(basis, 6)
            gso = gram_schmidt(basis, "exact")
            coeffs = svp_enumerate(gso, 0, 3, best_ns + 1)
            vec = [sum(coeffs[i] * basis.rows[i][j] for i in range(3)) for j in range(3)]
            assert norm_sq(vec) == best_ns

    def test_canonical_sign(self):
        # last nonzero coefficient positive
        gso = gram_schmidt(Basis([[5, 0], [4, 1]]), "exact")
        coeffs = svp_enumerate(gso, 0, 2, 25)
        last_nonzero = [c for c in coeffs if c != 0][-1]
        assert last_nonzero > 0


class TestKernels:
    def test_exact_reports_norm_and_nodes(self):
        gso = gram_schmidt(Basis([[5, 0], [4, 1]]), "exact")
        mu = [list(r) for r in gso.mu]
        coeffs, best, nodes = enumerate_block_exact(mu, list(gso.norms_sq), Fraction(25))
        assert coeffs == (-1, 1)
        assert best == 2
        assert nodes > 0

    def test_float_kernel_matches_exact(self, rng):
        import numpy as np

        for _ in range(10):
            basis = random_full_rank_basis(rng, 5, 12)
            gso = gram_schmidt(basis, "exact")
            mu = [list(r) for r in gso.mu]
            radius = Fraction(norm_sq(basis.rows[0]))
            ce, be, _ = enumerate_block_exact(mu, list(gso.norms_sq), radius)
            muf = np.array([[float(v) for v in row] for row in gso.mu])
            rsq = np.array([float(v) for v in gso.norms_sq])
            cf, bf, _ = enumerate_block_float(
                muf, rsq, float(radius), np.ones(5)
            )
            if ce is None:
                assert cf is None
            else:
                assert float(be) == pytest.approx(bf, rel=1e-9)

    def test_pruning_profiles(self):
        assert pruning_profile(4, "none") == [1, 1, 1, 1]
        lin = pruning_profile(4, "linear")
        assert lin == [Fraction(4, 4), Fraction(3, 4), Fraction(2, 4), Fraction(1, 4)]
        with pytest.raises(ValueError):
            pruning_profile(4, "extreme")

    def test_linear_pruning_never_beats_exact(self, rng):
        # pruned search returns a (possibly missed) result, never a wrong norm
        for _ in range(5):
            basis = random_full_rank_basis(rng, 4, 10)
            gso = gram_schmidt(basis, "exact")
            radius = norm_sq(basis.rows[0]) + 1
            exact = svp_enumerate(gso, 0, 4, radius, pruning="none")
            pruned = svp_enumerate(gso, 0, 4, radius, pruning="linear")
            if pruned is not None:
                vec = [
                    sum(pruned[i] * basis.rows[i][j] for i in range(4))
                    for j in range(4)
                ]
                vec_e = [
                    sum(exact[i] * basis.rows[i][j] for i in range(4))
                    for j in range(4)
                ]
                assert norm_sq(vec) >= norm_sq(vec_e)
