import itertools
import random

import pytest

from lattice_bench.core import Basis, lattice_determinant, norm_sq
from lattice_bench.errors import RankDeficient


def random_full_rank_basis(rng: random.Random, dim: int, bound: int) -> Basis:
    """Uniform entries in [-bound, bound], resampled until full rank."""
    while True:
        rows = [[rng.randint(-bound, bound) for _ in range(dim)] for _ in range(dim)]
        basis = Basis(rows)
        try:
            lattice_determinant(basis)
            return basis
        except RankDeficient:
            continue


def box_shortest(basis: Basis, box: int) -> tuple[tuple[int, ...], int]:
    """Test-local oracle: exhaustive coefficient search over [-box, box]^d.

    Independent of the library's enumeration code on purpose.
    """
    d = basis.dim
    best_vec = None
    best_ns = None
    for coeffs in itertools.product(range(-box, box + 1), repeat=d):
        if not any(coeffs):
            continue
        vec = tuple(
            sum(coeffs[i] * basis.rows[i][j] for i in range(d)) for j in range(d)
        )
        ns = norm_sq(vec)
        if best_ns is None or ns < best_ns:
            best_ns = ns
            best_vec = vec
    return best_vec, best_ns


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
