"""All-integer exact LLL engine (de Weger / Cohen Alg. 2.6.7 representation).

Keeps d_i = det Gram(b_0..b_i) and lambda_{ij} = d_j * mu_{ij}, which are
always integers, so the whole reduction runs in arbitrary-precision integer
arithmetic: no rationals, no rounding, bit-reproducible.

In the default augmented mode the engine reduces ``[basis | I]`` and the
right half accumulates the unimodular U with ``reduced = U @ input``.  The
non-augmented mode reduces caller-supplied rows as-is, with inner products
restricted to the first `basis_width` columns; BKZ uses it to clean up
insertion transforms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import RankDeficient


def round_half_away(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), ties away from zero."""
    if num >= 0:
        return (2 * num + den) // (2 * den)
    return -((-2 * num + den) // (2 * den))


class ExactLllEngine:
    def __init__(self, rows: Sequence[Sequence[int]], delta: Fraction,
                 augment: bool = True, basis_width: int | None = None):
        self.d = len(rows)
        if augment:
            self.basis_width = len(rows[0])
            self.total_width = self.basis_width + self.d
            self.rows = [
                list(map(int, r)) + [1 if i == j else 0 for j in range(self.d)]
                for i, r in enumerate(rows)
            ]
        else:
            if basis_width is None:
                raise ValueError("basis_width required when not augmenting")
            self.basis_width = basis_width
            self.total_width = len(rows[0])
            self.rows = [list(map(int, r)) for r in rows]
        self.delta_p = delta.numerator
        self.delta_q = delta.denominator
        self.lam = [[0] * self.d for _ in range(self.d)]
        self.dd = [0] * self.d  # dd[i] = det Gram(b_0..b_i) > 0
        self.swaps = 0
        self._compute_gso(0)

    # -- state ---------------------------------------------------------------

    def _dot(self, i: int, j: int) -> int:
        w = self.basis_width
        ri, rj = self.rows[i], self.rows[j]
        return sum(ri[c] * rj[c] for c in range(w))

    def _compute_gso(self, start: int) -> None:
        """(Re)compute lambda rows and dd from `start` on; rows below stay valid."""
        for i in range(start, self.d):
            for j in range(i + 1):
                u = self._dot(i, j)
                for k in range(j):
                    dk_prev = self.dd[k - 1] if k > 0 else 1
                    u = (self.dd[k] * u - self.lam[i][k] * self.lam[j][k]) // dk_prev
                if j < i:
                    self.lam[i][j] = u
                else:
                    if u <= 0:
                        raise RankDeficient(f"rows dependent at index {i}")
                    self.dd[i] = u

    def mu(self, i: int, j: int) -> Fraction:
        return Fraction(self.lam[i][j], self.dd[j])

    def bstar_sq(self, i: int) -> Fraction:
        return Fraction(self.dd[i], self.dd[i - 1] if i > 0 else 1)

    def basis_rows(self) -> list[list[int]]:
        return [r[: self.basis_width] for r in self.rows]

    def transform_rows(self) -> list[list[int]]:
        return [r[self.basis_width:] for r in self.rows]

    # -- elementary steps ----------------------------------------------------

    def _reduce_pair(self, k: int, l: int) -> None:
        dl = self.dd[l]
        lam_kl = self.lam[k][l]
        if 2 * abs(lam_kl) <= dl:
            return
        r = round_half_away(lam_kl, dl)
        rk, rl = self.rows[k], self.rows[l]
        for c in range(self.total_width):
            rk[c] -= r * rl[c]
        lam_k, lam_l = self.lam[k], self.lam[l]
        for j in range(l):
            lam_k[j] -= r * lam_l[j]
        lam_k[l] -= r * dl

    def _swap(self, k: int) -> None:
        """Swap rows k-1 and k, updating lambda/dd in place (k >= 1)."""
        self.rows[k - 1], self.rows[k] = self.rows[k], self.rows[k - 1]
        lam = self.lam
        for j in range(k - 1):
            lam[k - 1][j], lam[k][j] = lam[k][j], lam[k - 1][j]
        lbar = lam[k][k - 1]
        d_km2 = self.dd[k - 2] if k >= 2 else 1
        b = (d_km2 * self.dd[k] + lbar * lbar) // self.dd[k - 1]
        for i in range(k + 1, self.d):
            t = lam[i][k]
            lam[i][k] = (self.dd[k] * lam[i][k - 1] - lbar * t) // self.dd[k - 1]
            lam[i][k - 1] = (b * t + lbar * lam[i][k]) // self.dd[k]
        self.dd[k - 1] = b
        self.swaps += 1

    def _lovasz_fails(self, k: int) -> bool:
        d_km2 = self.dd[k - 2] if k >= 2 else 1
        lbar = self.lam[k][k - 1]
        lhs = self.delta_p * self.dd[k - 1] * self.dd[k - 1]
        rhs = self.delta_q * (d_km2 * self.dd[k] + lbar * lbar)
        return lhs > rhs

    # -- public driver ops ----------------------------------------------------

    def size_reduce_row(self, k: int) -> None:
        for l in range(k - 1, -1, -1):
            self._reduce_pair(k, l)

    def size_reduce_all(self) -> None:
        for k in range(1, self.d):
            self.size_reduce_row(k)

    def lll(self, start: int = 1, end: int | None = None,
            fixed_prefix: int = 0) -> None:
        """LLL-reduce rows [0, end); assumes rows [0, start) already reduced.

        Rows [0, fixed_prefix) are used for size reduction but never moved;
        BKZ pins an inserted vector that way.
        """
        if end is None:
            end = self.d
        k_min = fixed_prefix + 1
        if fixed_prefix > 0 and fixed_prefix < end:
            self.size_reduce_row(fixed_prefix)
        k = max(k_min, start)
        while k < end:
            self._reduce_pair(k, k - 1)
            if self._lovasz_fails(k):
                self._swap(k)
                k = max(k - 1, k_min)
            else:
                for l in range(k - 2, -1, -1):
                    self._reduce_pair(k, l)
                k += 1

    def transform_block(self, i: int, j: int, t_mat: Sequence[Sequence[int]]) -> None:
        """rows[i..j] := T @ rows[i..j] (T unimodular); refreshes GSO from i."""
        block = [self.rows[i + r] for r in range(j - i + 1)]
        total = self.total_width
        new_block = [
            [sum(t_row[r] * block[r][c] for r in range(len(block))) for c in range(total)]
            for t_row in t_mat
        ]
        for r, row in enumerate(new_block):
            self.rows[i + r] = row
        self._compute_gso(i)


def reduce_unimodular_rows(matrix: Sequence[Sequence[int]],
                           delta: Fraction = Fraction(99, 100)
                           ) -> list[list[int]]:
    """LLL-reduce the rows of a unimodular matrix, keeping row 0 fixed.

    The rows span Z^k either way; this just replaces an ill-conditioned
    completion with a small-entry one so that applying it to basis vectors
    cannot blow up their magnitudes.
    """
    k = len(matrix)
    if k == 1:
        return [list(matrix[0])]
    eng = ExactLllEngine(matrix, delta, augment=False, basis_width=k)
    eng.lll(fixed_prefix=1)
    return [list(r) for r in eng.rows]
