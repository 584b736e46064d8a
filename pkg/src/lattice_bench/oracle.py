"""Exact brute-force shortest-vector oracle for small dimensions.

Ground truth for bound checks and success verification: LLL-preprocess in
exact mode, then exhaustively enumerate in exact rational arithmetic inside
the radius given by the first reduced vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import Basis, gram_schmidt, norm_sq
from .enumeration import enumerate_block_exact
from .errors import DimensionTooLarge, ZeroVector
from .reduction import LllParams, lll_reduce

DEFAULT_DIM_LIMIT = 10


@dataclass(frozen=True)
class OracleResult:
    vector: tuple[int, ...]
    norm_sq: int
    count_checked: int


def _canonical_sign(vec: Sequence[int]) -> tuple[int, ...]:
    for v in vec:
        if v > 0:
            return tuple(vec)
        if v < 0:
            return tuple(-x for x in vec)
    raise ZeroVector("zero vector has no canonical sign")


def brute_force_shortest(basis: Basis,
                         dim_limit: int = DEFAULT_DIM_LIMIT) -> OracleResult:
    """Global minimizer of the SVP objective, exact at small dimension."""
    if basis.dim > dim_limit:
        raise DimensionTooLarge(
            f"dim {basis.dim} exceeds the oracle limit {dim_limit}"
        )
    reduced = lll_reduce(basis, LllParams(gso_mode="exact")).reduced
    gso = gram_schmidt(reduced, "exact")
    radius = Fraction(norm_sq(reduced.rows[0]))
    mu = [list(row) for row in gso.mu]
    coeffs, best, nodes = enumerate_block_exact(mu, list(gso.norms_sq), radius)
    if coeffs is None:
        vec = reduced.rows[0]
        ns = int(radius)
    else:
        d = reduced.dim
        vec = tuple(
            sum(coeffs[l] * reduced.rows[l][c] for l in range(d)) for c in range(d)
        )
        assert best.denominator == 1
        ns = int(best)
    return OracleResult(
        vector=_canonical_sign(vec), norm_sq=ns, count_checked=nodes
    )


def approximation_factor(found: Sequence[int], oracle: OracleResult) -> Fraction:
    """gamma^2 = ||found||^2 / lambda_1^2 as an exact rational (>= 1)."""
    ns = norm_sq([int(v) for v in found])
    if ns == 0:
        raise ZeroVector("found vector must be nonzero")
    return Fraction(ns, oracle.norm_sq)
