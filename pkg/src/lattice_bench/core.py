"""Exact integer/rational lattice linear algebra.

Basis vectors are *rows* of a full-rank square integer matrix and are held as
arbitrary-precision Python ints; nothing here rounds at rest.  Gram-Schmidt
data comes in two flavours: exact rationals (bit-reproducible reference) and
extended-precision binary floats (fast path, 64-bit mantissa on x86).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotUnimodular,
    PrecisionLoss,
    RankDeficient,
)

# Squared-norm ratio below which a float-mode Gram-Schmidt vector is treated
# as numerically lost rather than merely short.
FLOAT_RANK_TOL = 2.0 ** -40

# Float mode promises a >= 64-bit mantissa; np.longdouble delivers that on
# x86 (80-bit extended, nmant = 63 stored bits + implicit integer bit).
_LONGDOUBLE_MANTISSA_BITS = np.finfo(np.longdouble).nmant + 1


def _as_int_rows(rows: Iterable[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    out = tuple(tuple(int(x) for x in row) for row in rows)
    if not out:
        raise DimensionMismatch("basis needs at least one row")
    d = len(out)
    for row in out:
        if len(row) != d:
            raise DimensionMismatch("basis must be square (full-dimensional lattice)")
    return out


@dataclass(frozen=True)
class Basis:
    """Square integer matrix whose rows generate a full-rank lattice.

    Linear independence is assumed, not checked at construction; operations
    that require it (`gram_schmidt`, `lattice_determinant`, the reductions)
    raise :class:`RankDeficient` when it fails.
    """

    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "rows", _as_int_rows(self.rows))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def to_json(self) -> str:
        """Serialize as {"dim": d, "rows": [[...]]} with decimal-string entries."""
        obj = {"dim": self.dim, "rows": [[str(x) for x in row] for row in self.rows]}
        return json.dumps(obj, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Basis":
        obj = json.loads(text)
        rows = [[int(x) for x in row] for row in obj["rows"]]
        basis = cls(rows)
        if basis.dim != int(obj["dim"]):
            raise DimensionMismatch("dim field disagrees with row count")
        return basis


@dataclass(frozen=True)
class GsoData:
    """Gram-Schmidt coefficients mu (unit lower triangular) and squared norms.

    mode "exact": entries are `fractions.Fraction`, recombination identity is
    exact.  mode "float": entries are np.longdouble (>= 64-bit mantissa).
    """

    mu: tuple  # d x d, row-major; Fractions or longdoubles
    norms_sq: tuple
    mode: str

    @property
    def dim(self) -> int:
        return len(self.norms_sq)


@dataclass(frozen=True)
class UnimodularTransform:
    """Integer matrix with determinant +-1, accumulated over row operations."""

    matrix: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_int_rows(self.matrix))

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def is_unimodular(self) -> bool:
        try:
            return abs(_bareiss_det(self.matrix)) == 1
        except RankDeficient:
            return False


def identity_transform(dim: int) -> UnimodularTransform:
    return UnimodularTransform(
        tuple(tuple(1 if i == j else 0 for j in range(dim)) for i in range(dim))
    )


def dot(u: Sequence[int], v: Sequence[int]):
    return sum(a * b for a, b in zip(u, v))


def norm_sq(v: Sequence[int]):
    return sum(a * a for a in v)


def gram_schmidt(basis: Basis, mode: str = "exact") -> GsoData:
    """Orthogonalize basis rows; returns mu and ||b*_i||^2 without normalizing.

    Exact mode is bit-reproducible.  Float mode uses extended precision and
    raises :class:`PrecisionLoss` when a squared norm comes out non-positive
    or falls below ``2^-40 * ||b_i||^2`` (cannot be told apart from rank
    deficiency at that scale; retry in exact mode for the definitive answer).
    """
    if mode == "exact":
        return _gram_schmidt_exact(basis)
    if mode == "float":
        return _gram_schmidt_float(basis)
    raise ValueError(f"unknown GSO mode: {mode!r}")


def _gram_schmidt_exact(basis: Basis) -> GsoData:
    d = basis.dim
    rows = basis.rows
    # r[i][j] = <b_i, b*_j>; norms[j] = <b*_j, b*_j>, all exact.
    mu = [[Fraction(0)] * d for _ in range(d)]
    r = [[Fraction(0)] * d for _ in range(d)]
    norms = [Fraction(0)] * d
    for i in range(d):
        mu[i][i] = Fraction(1)
        for j in range(i + 1):
            acc = Fraction(dot(rows[i], rows[j]))
            for l in range(j):
                acc -= mu[j][l] * r[i][l]
            if j < i:
                r[i][j] = acc
                if norms[j] == 0:
                    raise RankDeficient(f"zero Gram-Schmidt norm at row {j}")
                mu[i][j] = acc / norms[j]
            else:
                norms[i] = acc
                if acc == 0:
                    raise RankDeficient(f"zero Gram-Schmidt norm at row {i}")
                r[i][i] = acc
    return GsoData(
        mu=tuple(tuple(row) for row in mu),
        norms_sq=tuple(norms),
        mode="exact",
    )


def _gram_schmidt_float(basis: Basis) -> GsoData:
    d = basis.dim
    if d > 64 and _LONGDOUBLE_MANTISSA_BITS < 64:
        raise PrecisionLoss(
            "float GSO needs a >= 64-bit mantissa above dimension 64 "
            f"(platform longdouble has {_LONGDOUBLE_MANTISSA_BITS})"
        )
    b = np.array(basis.rows, dtype=np.longdouble)
    mu, norms = _ldl_gso(b @ b.T)
    row_norms = np.einsum("ij,ij->i", b, b)
    bad = (norms <= 0) | (norms <= FLOAT_RANK_TOL * row_norms)
    if bad.any():
        i = int(np.argmax(bad))
        raise PrecisionLoss(
            f"Gram-Schmidt norm at row {i} is numerically lost "
            f"({float(norms[i]):.3e} vs row norm {float(row_norms[i]):.3e})"
        )
    mu.flags.writeable = False
    norms.flags.writeable = False
    return GsoData(mu=mu, norms_sq=norms, mode="float")


def _ldl_gso(gram: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Unit-lower L and diagonal D with gram = L D L^T (L = mu, D = ||b*||^2)."""
    d = gram.shape[0]
    mu = np.eye(d, dtype=np.longdouble)
    norms = np.zeros(d, dtype=np.longdouble)
    for j in range(d):
        scaled = mu[j, :j] * norms[:j]
        norms[j] = gram[j, j] - mu[j, :j] @ scaled
        if norms[j] <= 0:
            # caller decides how to report; keep going so it can locate row j
            norms[j + 1 :] = 0
            break
        mu[j + 1 :, j] = (gram[j + 1 :, j] - mu[j + 1 :, :j] @ scaled) / norms[j]
    return mu, norms


def _bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact determinant via Bareiss fraction-free elimination."""
    d = len(rows)
    m = [list(map(int, row)) for row in rows]
    sign = 1
    prev = 1
    for k in range(d - 1):
        if m[k][k] == 0:
            for i in range(k + 1, d):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, d):
            row_i = m[i]
            row_k = m[k]
            mik = row_i[k]
            for j in range(k + 1, d):
                row_i[j] = (pivot * row_i[j] - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[d - 1][d - 1]


def lattice_determinant(basis: Basis) -> int:
    """|det| of the row matrix, computed exactly; raises RankDeficient if 0."""
    det = _bareiss_det(basis.rows)
    if det == 0:
        raise RankDeficient("basis rows are linearly dependent")
    return abs(det)


def solve_integer_left(basis: Basis, v: Sequence[int]) -> tuple[Fraction, ...]:
    """Exact rational z with z^T B = v^T (B = basis rows)."""
    d = basis.dim
    if len(v) != d:
        raise DimensionMismatch(f"vector length {len(v)} != basis dim {d}")
    # Solve B^T z = v by exact Gaussian elimination over Fractions.
    aug = [[Fraction(basis.rows[j][i]) for j in range(d)] + [Fraction(int(v[i]))]
           for i in range(d)]
    for k in range(d):
        piv = None
        for i in range(k, d):
            if aug[i][k] != 0:
                piv = i
                break
        if piv is None:
            raise RankDeficient("basis rows are linearly dependent")
        aug[k], aug[piv] = aug[piv], aug[k]
        pk = aug[k][k]
        for i in range(k + 1, d):
            f = aug[i][k] / pk
            if f:
                row_i = aug[i]
                row_k = aug[k]
                for j in range(k, d + 1):
                    row_i[j] -= f * row_k[j]
    z = [Fraction(0)] * d
    for k in range(d - 1, -1, -1):
        acc = aug[k][d]
        for j in range(k + 1, d):
            acc -= aug[k][j] * z[j]
        z[k] = acc / aug[k][k]
    return tuple(z)


def is_in_lattice(v: Sequence[int], basis: Basis) -> bool:
    """True iff v is an integer combination of the basis rows (exact)."""
    z = solve_integer_left(basis, v)
    return all(c.denominator == 1 for c in z)


def apply_transform(basis: Basis, u: UnimodularTransform) -> Basis:
    """Return U * rows; the generated lattice is unchanged for |det U| = 1."""
    if u.dim != basis.dim:
        raise DimensionMismatch(f"transform dim {u.dim} != basis dim {basis.dim}")
    if not u.is_unimodular():
        raise NotUnimodular("transform determinant is not +-1")
    d = basis.dim
    new_rows = [
        [sum(u.matrix[i][k] * basis.rows[k][j] for k in range(d)) for j in range(d)]
        for i in range(d)
    ]
    return Basis(new_rows)
