"""Extended-precision floating-point LLL engine.

Basis rows stay exact int64 throughout (every step is an integer row
operation); only the Gram-Schmidt data is floating point.  The authoritative
arithmetic is np.longdouble (64-bit mantissa on x86).  A numba-compiled
float64 pass can pre-reduce the basis first: it performs the same integer row
operations at machine speed, and since float64 rounding can only pick
suboptimal steps, never corrupt the lattice, the longdouble engine then
certifies and finishes the reduction.

Guards: int64 entries are kept below 2**55 and reduction coefficients below
2**20; anything larger raises PrecisionLoss and the caller should retry in
exact mode.
"""

from __future__ import annotations

import numpy as np

from .errors import PrecisionLoss
from .core import _LONGDOUBLE_MANTISSA_BITS

_ENTRY_LIMIT = 1 << 55
_COEFF_LIMIT = 1 << 20

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f

        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _red_f8(rows, mu, k, l):
    m = mu[k, l]
    if -0.5 <= m <= 0.5:
        return 0
    if m >= 0.0:
        rr = np.int64(np.floor(m + 0.5))
    else:
        rr = -np.int64(np.floor(-m + 0.5))
    rabs = rr if rr >= 0 else -rr
    if rabs > _COEFF_LIMIT:
        return 1
    total = rows.shape[1]
    maxk = np.int64(0)
    maxl = np.int64(0)
    for c in range(total):
        ak = rows[k, c] if rows[k, c] >= 0 else -rows[k, c]
        al = rows[l, c] if rows[l, c] >= 0 else -rows[l, c]
        if ak > maxk:
            maxk = ak
        if al > maxl:
            maxl = al
    if maxk + rabs * maxl >= _ENTRY_LIMIT:
        return 1
    for c in range(total):
        rows[k, c] -= rr * rows[l, c]
    for j in range(l):
        mu[k, j] -= rr * mu[l, j]
    mu[k, l] -= rr
    return 0


@njit(cache=True)
def _lll_f8_kernel(rows, d, width, delta):
    """Classic LLL on int64 rows with float64 GSO; returns (status, swaps).

    status 0: reduced to float64 tolerance; 1: bailed out (guard tripped or a
    Gram-Schmidt norm was numerically lost).  The rows form a valid basis of
    the same lattice in either case.
    """
    mu = np.zeros((d, d))
    bstar = np.zeros(d)
    r = np.zeros((d, d))  # r[i, j] = <b_i, b*_j>
    swaps = 0
    tol = 9.094947017729282e-13  # 2^-40

    for i in range(d):
        for j in range(i + 1):
            acc = 0.0
            for c in range(width):
                acc += rows[i, c] * rows[j, c]
            for l in range(j):
                acc -= mu[j, l] * r[i, l]
            if j < i:
                r[i, j] = acc
                mu[i, j] = acc / bstar[j]
            else:
                row_norm = 0.0
                for c in range(width):
                    row_norm += rows[i, c] * rows[i, c]
                if acc <= 0.0 or acc <= row_norm * tol:
                    return 1, swaps
                bstar[i] = acc
                r[i, i] = acc
        mu[i, i] = 1.0

    k = 1
    while k < d:
        if _red_f8(rows, mu, k, k - 1) != 0:
            return 1, swaps
        m = mu[k, k - 1]
        if bstar[k] < (delta - m * m) * bstar[k - 1]:
            total = rows.shape[1]
            for c in range(total):
                tmp = rows[k - 1, c]
                rows[k - 1, c] = rows[k, c]
                rows[k, c] = tmp
            for j in range(k - 1):
                tmpf = mu[k - 1, j]
                mu[k - 1, j] = mu[k, j]
                mu[k, j] = tmpf
            mubar = mu[k, k - 1]
            bbar = bstar[k] + mubar * mubar * bstar[k - 1]
            if bbar <= 0.0:
                return 1, swaps
            mu[k, k - 1] = mubar * bstar[k - 1] / bbar
            bstar[k] = bstar[k] * bstar[k - 1] / bbar
            bstar[k - 1] = bbar
            for i in range(k + 1, d):
                t = mu[i, k]
                mu[i, k] = mu[i, k - 1] - mubar * t
                mu[i, k - 1] = t + mu[k, k - 1] * mu[i, k]
            swaps += 1
            if bstar[k - 1] <= 0.0 or bstar[k] <= 0.0:
                return 1, swaps
            k = k - 1 if k > 1 else 1
        else:
            ok = True
            for l in range(k - 2, -1, -1):
                if _red_f8(rows, mu, k, l) != 0:
                    ok = False
                    break
            if not ok:
                return 1, swaps
            k += 1
    return 0, swaps


def lll_prereduce(rows: np.ndarray, d: int, width: int, delta: float) -> int:
    """Run the float64 kernel in place; returns its swap count.

    A bail-out leaves the rows partially reduced but valid; the caller's
    longdouble pass finishes the job either way.
    """
    if not _HAVE_NUMBA:
        return 0
    _status, swaps = _lll_f8_kernel(rows, d, width, float(delta))
    return int(swaps)


class FloatLllEngine:
    """Longdouble-GSO LLL engine over exact int64 rows.

    Rows are [basis | transform] augmented; the GSO covers the first
    `width` columns only.  mu/bstar/gram are kept globally consistent after
    every operation, so BKZ can enumerate any block at any time.
    """

    def __init__(self, rows: np.ndarray, width: int, delta) -> None:
        self.d = rows.shape[0]
        self.width = width
        if self.d > 64 and _LONGDOUBLE_MANTISSA_BITS < 64:
            raise PrecisionLoss(
                "float mode needs a >= 64-bit mantissa above dimension 64"
            )
        if np.abs(rows[:, :width]).max(initial=0) >= _ENTRY_LIMIT:
            raise PrecisionLoss("basis entries too large for the float path")
        self.rows = rows  # int64, mutated in place
        self.delta = np.longdouble(float(delta))
        self.mu = np.eye(self.d, dtype=np.longdouble)
        self.bstar = np.zeros(self.d, dtype=np.longdouble)
        self.gram = np.zeros((self.d, self.d), dtype=np.longdouble)
        # a computed ||b*||^2 below d^2 * 2^-mantissa of the Gram diagonal is
        # indistinguishable from accumulated rounding noise
        self._tol = np.longdouble(self.d * self.d) * np.longdouble(2.0) ** (
            -_LONGDOUBLE_MANTISSA_BITS
        )
        self.swaps = 0
        self._refresh_gso(0)

    # -- GSO maintenance -------------------------------------------------------
    #
    # The Gram matrix is integer-valued, and at the entry sizes the guards
    # allow it is held *exactly* in longdouble, so rebuilding mu/bstar from it
    # via a full LDL pass is a clean re-anchor with no error feedback.  The
    # incremental mu updates between rebuilds only ever span one LLL call.

    def _rebuild_gram(self) -> None:
        bl = self.rows[:, : self.width].astype(np.longdouble)
        self.gram = bl @ bl.T

    def _ldl_from_gram(self) -> None:
        d = self.d
        mu, bstar, gram = self.mu, self.bstar, self.gram
        mu[:, :] = 0.0
        for j in range(d):
            mu[j, j] = 1.0
            scaled = mu[j, :j] * bstar[:j]
            bstar[j] = gram[j, j] - mu[j, :j] @ scaled
            self._check_bstar(j)
            if j + 1 < d:
                mu[j + 1 :, j] = (gram[j + 1 :, j] - mu[j + 1 :, :j] @ scaled) / bstar[j]

    def _refresh_gso(self, start: int = 0) -> None:
        if start == 0:
            self._rebuild_gram()
        self._ldl_from_gram()

    def _check_bstar(self, i: int) -> None:
        if self.bstar[i] <= 0 or self.bstar[i] <= self._tol * self.gram[i, i]:
            raise PrecisionLoss(
                f"Gram-Schmidt norm at row {i} numerically lost in float mode"
            )

    # -- elementary steps ------------------------------------------------------

    def _reduce_pair(self, k: int, l: int) -> None:
        m = self.mu[k, l]
        if abs(m) <= 0.5:
            return
        r = int(np.floor(abs(m) + np.longdouble(0.5)))
        if m < 0:
            r = -r
        if abs(r) > _COEFF_LIMIT:
            raise PrecisionLoss(f"reduction coefficient {r} exceeds the float guard")
        rk = self.rows[k, :]
        rl = self.rows[l, :]
        bound = int(np.abs(rk).max(initial=0)) + abs(r) * int(np.abs(rl).max(initial=0))
        if bound >= _ENTRY_LIMIT:
            raise PrecisionLoss("basis entries would exceed the int64 guard")
        rk -= r * rl
        self.mu[k, :l] -= r * self.mu[l, :l]
        self.mu[k, l] -= r
        g = self.gram
        g[k, :] -= r * g[l, :]
        g[:, k] -= r * g[:, l]

    def size_reduce_row(self, k: int) -> None:
        for l in range(k - 1, -1, -1):
            self._reduce_pair(k, l)

    def size_reduce_all(self) -> None:
        for k in range(1, self.d):
            self.size_reduce_row(k)

    def _swap(self, k: int) -> None:
        self.rows[[k - 1, k], :] = self.rows[[k, k - 1], :]
        g = self.gram
        g[[k - 1, k], :] = g[[k, k - 1], :]
        g[:, [k - 1, k]] = g[:, [k, k - 1]]
        mu, bstar = self.mu, self.bstar
        mu[[k - 1, k], : k - 1] = mu[[k, k - 1], : k - 1]
        mubar = mu[k, k - 1]
        bbar = bstar[k] + mubar * mubar * bstar[k - 1]
        if bbar <= 0:
            raise PrecisionLoss("degenerate projected block in float swap")
        mu[k, k - 1] = mubar * bstar[k - 1] / bbar
        bstar[k] = bstar[k] * bstar[k - 1] / bbar
        bstar[k - 1] = bbar
        if k + 1 < self.d:
            t = mu[k + 1 :, k].copy()
            mu[k + 1 :, k] = mu[k + 1 :, k - 1] - mubar * t
            mu[k + 1 :, k - 1] = t + mu[k, k - 1] * mu[k + 1 :, k]
        self.swaps += 1

    def _lovasz_fails(self, k: int) -> bool:
        m = self.mu[k, k - 1]
        return bool(self.bstar[k] < (self.delta - m * m) * self.bstar[k - 1])

    # -- drivers ---------------------------------------------------------------

    def lll(self, start: int = 1, end: int | None = None) -> None:
        """LLL-reduce rows [0, end); assumes rows [0, start) already reduced."""
        if end is None:
            end = self.d
        k = max(1, start)
        while k < end:
            self._reduce_pair(k, k - 1)
            if self._lovasz_fails(k):
                self._swap(k)
                self._check_bstar(k - 1)
                self._check_bstar(k)
                k = max(k - 1, 1)
            else:
                for l in range(k - 2, -1, -1):
                    self._reduce_pair(k, l)
                k += 1

    def transform_block(self, i: int, j: int, t_mat) -> None:
        """rows[i..j] := T @ rows[i..j] (T unimodular); re-anchors the GSO."""
        t_arr = np.array(t_mat, dtype=np.int64)
        block = self.rows[i : j + 1, :]
        bound = int(np.abs(t_arr).sum(axis=1).max()) * int(np.abs(block).max(initial=0))
        if bound >= _ENTRY_LIMIT:
            raise PrecisionLoss("block transform would exceed the int64 guard")
        self.rows[i : j + 1, :] = t_arr @ block
        # exact two-sided Gram update, then a full LDL rebuild
        t_ld = t_arr.astype(np.longdouble)
        self.gram[i : j + 1, :] = t_ld @ self.gram[i : j + 1, :]
        self.gram[:, i : j + 1] = self.gram[:, i : j + 1] @ t_ld.T
        self._ldl_from_gram()

    def basis_rows(self) -> list[list[int]]:
        return [[int(x) for x in row[: self.width]] for row in self.rows]

    def transform_rows(self) -> list[list[int]]:
        return [[int(x) for x in row[self.width :]] for row in self.rows]
