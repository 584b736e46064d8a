import math
import random
from fractions import Fraction

import pytest

from lattice_bench.core import (
    Basis,
    apply_transform,
    gram_schmidt,
    is_in_lattice,
    lattice_determinant,
    norm_sq,
)
from lattice_bench.errors import RankDeficient
from lattice_bench.oracle import brute_force_shortest
from lattice_bench.reduction import (
    HERMITE_CONSTANT_POW,
    BkzParams,
    LllParams,
    bkz_reduce,
    complete_to_unimodular,
    lll_reduce,
    quality_report,
    size_reduce,
)

from conftest import random_full_rank_basis


def assert_lll_reduced_exact(basis: Basis, delta: Fraction):
    gso = gram_schmidt(basis, "exact")
    d = basis.dim
    for i in range(d):
        for j in range(i):
            assert abs(gso.mu[i][j]) <= Fraction(1, 2), (i, j, gso.mu[i][j])
    for i in range(d - 1):
        mu = gso.mu[i + 1][i]
        lhs = delta * gso.norms_sq[i]
        rhs = gso.norms_sq[i + 1] + mu * mu * gso.norms_sq[i]
        assert lhs <= rhs, f"Lovasz fails at {i}"


class TestSizeReduce:
    def test_mu_one_case(self):
        basis = Basis([[1, 1], [0, 2]])
        gso = gram_schmidt(basis, "exact")
        out, out_gso = size_reduce(basis, gso, 1)
        assert out.rows[1] == (-1, 1)
        assert out_gso.mu[1][0] == 0

    def test_fixpoint(self):
        basis = Basis([[2, 0], [0, 3]])
        gso = gram_schmidt(basis, "exact")
        out, _ = size_reduce(basis, gso, 1)
        assert out.rows == basis.rows

    def test_tie_rounds_away_from_zero(self):
        # mu21 = -2.5; half-away gives r = -3 and b2 <- b2 + 3 b1 = (2, 3)
        basis = Basis([[-1, 1], [5, 0]])
        gso = gram_schmidt(basis, "exact")
        assert gso.mu[1][0] == Fraction(-5, 2)
        out, out_gso = size_reduce(basis, gso, 1)
        assert out.rows[1] == (2, 3)
        assert abs(out_gso.mu[1][0]) <= Fraction(1, 2)

    def test_float_mode_matches(self):
        basis = Basis([[1, 1], [0, 2]])
        gso = gram_schmidt(basis, "float")
        out, _ = size_reduce(basis, gso, 1)
        assert out.rows[1] == (-1, 1)


class TestLll:
    def test_identity_unchanged(self):
        report = lll_reduce(Basis([[1, 0], [0, 1]]), LllParams())
        assert report.reduced.rows == ((1, 0), (0, 1))
        assert report.swaps == 0
        assert report.status == "converged"

    def test_worked_example(self):
        # brute-force box search confirms lambda1^2 = 2, second norm 13
        report = lll_reduce(Basis([[5, 0], [4, 1]]), LllParams())
        norms = sorted(norm_sq(r) for r in report.reduced.rows)
        assert norms == [2, 13]
        assert report.reduced.rows[0] in ((-1, 1), (1, -1))

    def test_transform_reproduces_output(self, rng):
        for _ in range(5):
            basis = random_full_rank_basis(rng, 5, 100)
            report = lll_reduce(basis, LllParams())
            assert apply_transform(basis, report.transform).rows == report.reduced.rows

    def test_exact_conditions_hold(self, rng):
        delta = Fraction(99, 100)
        for _ in range(10):
            basis = random_full_rank_basis(rng, 6, 200)
            report = lll_reduce(basis, LllParams(delta=delta, gso_mode="exact"))
            assert_lll_reduced_exact(report.reduced, delta)

    def test_lattice_preserved(self, rng):
        for _ in range(5):
            basis = random_full_rank_basis(rng, 5, 100)
            report = lll_reduce(basis, LllParams())
            assert lattice_determinant(report.reduced) == lattice_determinant(basis)
            for row in report.reduced.rows:
                assert is_in_lattice(row, basis)

    def test_first_vector_bound_small_dims(self, rng):
        # ||b1||^2 <= (delta - 1/4)^(1-n) lambda1^2, exact rational comparison
        factor = Fraction(99, 100) - Fraction(1, 4)
        for dim in (2, 3, 4, 5, 6):
            basis = random_full_rank_basis(rng, dim, 60)
            report = lll_reduce(basis, LllParams(gso_mode="exact"))
            lam1_sq = brute_force_shortest(basis).norm_sq
            b1_sq = Fraction(norm_sq(report.reduced.rows[0]))
            assert b1_sq <= lam1_sq / factor ** (dim - 1)

    def test_determinism_exact_mode(self, rng):
        basis = random_full_rank_basis(rng, 8, 500)
        r1 = lll_reduce(basis, LllParams(gso_mode="exact"))
        r2 = lll_reduce(basis, LllParams(gso_mode="exact"))
        assert r1.reduced.rows == r2.reduced.rows
        assert r1.transform.matrix == r2.transform.matrix
        assert r1.swaps == r2.swaps

    def test_float_mode_output_exactly_reduced_often(self, rng):
        # float path outputs satisfy the exact conditions on benign inputs
        basis = random_full_rank_basis(rng, 10, 100)
        report = lll_reduce(basis, LllParams(gso_mode="float"))
        assert_lll_reduced_exact(report.reduced, Fraction(99, 100))

    def test_rank_deficient_raises(self):
        with pytest.raises(RankDeficient):
            lll_reduce(Basis([[1, 2], [2, 4]]), LllParams(gso_mode="exact"))

    def test_dim_one(self):
        report = lll_reduce(Basis([[7]]), LllParams())
        assert report.reduced.rows == ((7,),)


class TestBkz:
    def test_beta_two_matches_lll_conditions(self, rng):
        delta = Fraction(99, 100)
        basis = random_full_rank_basis(rng, 6, 100)
        report = bkz_reduce(basis, BkzParams(beta=2, gso_mode="exact"))
        assert_lll_reduced_exact(report.reduced, delta)

    def test_full_block_finds_shortest(self):
        report = bkz_reduce(Basis([[5, 0], [4, 1]]), BkzParams(beta=2, gso_mode="exact"))
        assert report.reduced.rows[0] in ((-1, 1), (1, -1))

    def test_dim8_qary_equals_oracle(self, rng):
        # q-ary style basis: [[q I, 0], [A, I]] at dim 8
        q = 97
        for _ in range(3):
            half = 4
            rows = [[0] * 8 for _ in range(8)]
            for i in range(half):
                rows[i][i] = q
            for i in range(half, 8):
                rows[i][i] = 1
                for j in range(half):
                    rows[i][j] = rng.randrange(q)
            basis = Basis(rows)
            report = bkz_reduce(basis, BkzParams(beta=8, gso_mode="exact"))
            oracle = brute_force_shortest(basis)
            assert norm_sq(report.reduced.rows[0]) == oracle.norm_sq

    def test_bkz_bound_against_hermite_table(self, rng):
        # ||b1|| <= gamma_beta^((n-1)/(beta-1)) lambda1 for beta <= 8
        for dim, beta in ((5, 3), (6, 4), (8, 8), (7, 5)):
            basis = random_full_rank_basis(rng, dim, 40)
            report = bkz_reduce(basis, BkzParams(beta=beta, gso_mode="exact"))
            lam1_sq = brute_force_shortest(basis).norm_sq
            b1_sq = norm_sq(report.reduced.rows[0])
            gamma_pow = HERMITE_CONSTANT_POW[beta]  # gamma_beta^beta, exact
            log_bound = (
                (2.0 * (dim - 1) / (beta * (beta - 1)))
                * math.log(float(gamma_pow))
                + math.log(lam1_sq)
            )
            assert math.log(b1_sq) <= log_bound + 1e-9

    def test_lattice_preserved_and_transform(self, rng):
        basis = random_full_rank_basis(rng, 7, 80)
        report = bkz_reduce(basis, BkzParams(beta=4, gso_mode="exact"))
        assert lattice_determinant(report.reduced) == lattice_determinant(basis)
        assert apply_transform(basis, report.transform).rows == report.reduced.rows

    def test_converged_block_condition(self, rng):
        # after a clean tour, each block's first vector is within 1/delta of
        # the block minimum (re-enumerated on the final basis)
        from lattice_bench.enumeration import enumerate_block_exact

        basis = random_full_rank_basis(rng, 6, 60)
        params = BkzParams(beta=3, gso_mode="exact")
        report = bkz_reduce(basis, params)
        assert report.status == "converged"
        gso = gram_schmidt(report.reduced, "exact")
        d = report.reduced.dim
        for i in range(d - 1):
            j = min(i + params.beta - 1, d - 1)
            k = j - i + 1
            mu_block = [
                [gso.mu[i + l][i + c] for c in range(k)] for l in range(k)
            ]
            rsq = [gso.norms_sq[i + c] for c in range(k)]
            coeffs, found, _ = enumerate_block_exact(mu_block, rsq, rsq[0])
            if coeffs is not None:
                assert params.delta * rsq[0] <= found

    def test_beta_exceeds_dim_rejected(self):
        with pytest.raises(ValueError):
            bkz_reduce(Basis([[1, 0], [0, 1]]), BkzParams(beta=3))

    def test_tour_limit_status(self, rng):
        basis = random_full_rank_basis(rng, 8, 200)
        report = bkz_reduce(basis, BkzParams(beta=4, max_tours=1, gso_mode="exact"))
        assert report.status in ("converged", "tour_limit")
        assert report.tours == 1 or report.status == "converged"
        # output is LLL-reduced either way
        assert_lll_reduced_exact(report.reduced, Fraction(99, 100))

    @pytest.mark.slow
    def test_monotone_quality_in_beta(self):
        # statistical: mean ||b1|| non-increasing in beta over 50 dim-16 bases
        rng = random.Random(1234)
        betas = (2, 4, 8, 16)
        norms = {b: [] for b in betas}
        for _ in range(50):
            basis = random_full_rank_basis(rng, 16, 100)
            for beta in betas:
                rep = bkz_reduce(basis, BkzParams(beta=beta, gso_mode="float"))
                norms[beta].append(math.sqrt(norm_sq(rep.reduced.rows[0])))
        violations = 0
        comparisons = 0
        for lo, hi in zip(betas, betas[1:]):
            for a, b in zip(norms[lo], norms[hi]):
                comparisons += 1
                if b > a:
                    violations += 1
            assert sum(norms[hi]) <= sum(norms[lo]) * 1.001
        assert violations / comparisons <= 0.05


class TestQualityReport:
    def test_identity(self):
        qr = quality_report(Basis([[1, 0], [0, 1]]))
        assert qr.first_norm_sq == 1
        assert qr.hermite_factor == pytest.approx(1.0)
        assert qr.orthogonality_defect == pytest.approx(1.0)

    def test_worked_example(self):
        qr = quality_report(Basis([[5, 0], [4, 1]]))
        assert qr.first_norm_sq == 25
        assert qr.orthogonality_defect == pytest.approx(math.sqrt(17))
        assert qr.hermite_factor == pytest.approx(5 / math.sqrt(5))

    def test_reduced_example(self):
        qr = quality_report(Basis([[-1, 1], [2, 3]]))
        assert qr.orthogonality_defect == pytest.approx(
            math.sqrt(2) * math.sqrt(13) / 5
        )

    def test_defect_at_least_one(self, rng):
        for _ in range(5):
            basis = random_full_rank_basis(rng, 4, 50)
            assert quality_report(basis).orthogonality_defect >= 1.0 - 1e-12


class TestCompleteToUnimodular:
    def test_first_row_and_det(self, rng):
        from lattice_bench.core import _bareiss_det

        for _ in range(50):
            k = rng.randint(1, 8)
            while True:
                x = [rng.randint(-30, 30) for _ in range(k)]
                g = 0
                for v in x:
                    g = math.gcd(g, v)
                if g == 1:
                    break
            t = complete_to_unimodular(x)
            assert t[0] == x
            assert abs(_bareiss_det(t)) == 1

    def test_rejects_non_primitive(self):
        with pytest.raises(ValueError):
            complete_to_unimodular([2, 4])
        with pytest.raises(ValueError):
            complete_to_unimodular([0, 0])

    def test_negative_unit(self):
        t = complete_to_unimodular([-1, 0, 0])
        assert t[0] == [-1, 0, 0]
