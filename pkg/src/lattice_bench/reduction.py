"""LLL reduction, classic BKZ tours, and reduction-quality reporting.

Two GSO backends sit behind one interface: an all-integer exact engine
(bit-reproducible, the reference) and an extended-precision float engine
(fast path).  gso_mode="auto" picks exact up to dimension 64 and float
above, mirroring where exact arithmetic stops being cheap.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

import numpy as np

from ._exact_engine import ExactLllEngine, reduce_unimodular_rows, round_half_away
from ._float_engine import FloatLllEngine, lll_prereduce
from .core import (
    Basis,
    GsoData,
    UnimodularTransform,
    gram_schmidt,
    lattice_determinant,
    norm_sq,
)
from .enumeration import (
    enumerate_block_exact,
    enumerate_block_float,
    pruning_profile,
)
from .errors import PrecisionLoss, RankDeficient

# Exact values of (Hermite constant)^beta for beta = 2..8; above 8 no exact
# value is known, so quality-bound checks are skipped there.
HERMITE_CONSTANT_POW: dict[int, Fraction] = {
    2: Fraction(4, 3),
    3: Fraction(2),
    4: Fraction(4),
    5: Fraction(8),
    6: Fraction(64, 3),
    7: Fraction(64),
    8: Fraction(256),
}


def delta_as_fraction(delta) -> Fraction:
    """Normalize delta to an exact Fraction; floats go through their repr."""
    if isinstance(delta, Fraction):
        d = delta
    elif isinstance(delta, int):
        d = Fraction(delta)
    else:
        d = Fraction(str(delta))
    if not Fraction(1, 4) < d <= 1:
        raise ValueError(f"delta must lie in (1/4, 1], got {d}")
    return d


@dataclass(frozen=True)
class LllParams:
    delta: Fraction = Fraction(99, 100)
    gso_mode: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "delta", delta_as_fraction(self.delta))
        if self.gso_mode not in ("auto", "exact", "float"):
            raise ValueError(f"unknown gso_mode: {self.gso_mode!r}")


@dataclass(frozen=True)
class BkzParams:
    beta: int
    delta: Fraction = Fraction(99, 100)
    max_tours: int = 32
    pruning: str = "none"
    gso_mode: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "delta", delta_as_fraction(self.delta))
        if self.beta < 2:
            raise ValueError("block size beta must be >= 2")
        if self.max_tours < 1:
            raise ValueError("max_tours must be >= 1")
        if self.pruning not in ("none", "linear"):
            raise ValueError(f"unknown pruning profile: {self.pruning!r}")
        if self.gso_mode not in ("auto", "exact", "float"):
            raise ValueError(f"unknown gso_mode: {self.gso_mode!r}")


@dataclass(frozen=True)
class ReductionReport:
    reduced: Basis
    transform: UnimodularTransform
    swaps: int
    tours: int
    wall_time: float
    status: str  # converged | tour_limit | precision_error

    def to_json(self) -> str:
        obj = {
            "reduced": {
                "dim": self.reduced.dim,
                "rows": [[str(x) for x in row] for row in self.reduced.rows],
            },
            "transform": [[str(x) for x in row] for row in self.transform.matrix],
            "swaps": self.swaps,
            "tours": self.tours,
            "wall_time_s": self.wall_time,
            "status": self.status,
        }
        return json.dumps(obj, separators=(",", ":")) + "\n"


@dataclass(frozen=True)
class QualityReport:
    first_norm_sq: int
    hermite_factor: float
    orthogonality_defect: float


def _resolve_mode(mode: str, dim: int) -> str:
    if mode == "auto":
        return "exact" if dim <= 64 else "float"
    return mode


def _rows_to_int64(basis: Basis) -> np.ndarray:
    d = basis.dim
    arr = np.zeros((d, 2 * d), dtype=np.int64)
    try:
        for i, row in enumerate(basis.rows):
            for j, x in enumerate(row):
                arr[i, j] = x
    except OverflowError as exc:
        raise PrecisionLoss("basis entries exceed the int64 float path") from exc
    for i in range(d):
        arr[i, d + i] = 1
    return arr


def size_reduce(basis: Basis, gso: GsoData, i: int) -> tuple[Basis, GsoData]:
    """Make |mu_{i,j}| <= 1/2 for all j < i by integer row translations.

    Returns the updated basis and GSO; the lattice and all b* are unchanged.
    """
    d = basis.dim
    if not 0 <= i < d:
        raise IndexError(f"row {i} out of range")
    rows = [list(r) for r in basis.rows]
    if gso.mode == "exact":
        mu = [list(r) for r in gso.mu]
        for j in range(i - 1, -1, -1):
            m = mu[i][j]
            if abs(m) <= Fraction(1, 2):
                continue
            r = round_half_away(m.numerator, m.denominator)
            rows[i] = [a - r * b for a, b in zip(rows[i], rows[j])]
            for l in range(j):
                mu[i][l] -= r * mu[j][l]
            mu[i][j] -= r
        new_gso = GsoData(
            mu=tuple(tuple(row) for row in mu), norms_sq=gso.norms_sq, mode="exact"
        )
    else:
        mu = np.array(gso.mu, dtype=np.longdouble)
        for j in range(i - 1, -1, -1):
            m = mu[i, j]
            if abs(m) <= 0.5:
                continue
            r = int(np.floor(abs(m) + np.longdouble(0.5)))
            if m < 0:
                r = -r
            rows[i] = [a - r * b for a, b in zip(rows[i], rows[j])]
            mu[i, :j] -= r * mu[j, :j]
            mu[i, j] -= r
        mu.flags.writeable = False
        new_gso = GsoData(mu=mu, norms_sq=gso.norms_sq, mode="float")
    return Basis(rows), new_gso


def lll_reduce(basis: Basis, params: LllParams | None = None) -> ReductionReport:
    """Produce a delta-LLL-reduced basis of the same lattice.

    Exact mode is bit-reproducible and satisfies the size-reduction and
    Lovasz conditions exactly; float mode satisfies them to extended-float
    tolerance and raises PrecisionLoss instead of silently degrading.
    """
    if params is None:
        params = LllParams()
    t0 = time.perf_counter()
    mode = _resolve_mode(params.gso_mode, basis.dim)
    if mode == "exact":
        engine = ExactLllEngine(basis.rows, params.delta)
        engine.lll()
        swaps = engine.swaps
        reduced_rows = engine.basis_rows()
        transform_rows = engine.transform_rows()
    else:
        arr = _rows_to_int64(basis)
        swaps = lll_prereduce(arr, basis.dim, basis.dim, float(params.delta))
        engine = FloatLllEngine(arr, basis.dim, params.delta)
        engine.lll()
        swaps += engine.swaps
        reduced_rows = engine.basis_rows()
        transform_rows = engine.transform_rows()
    return ReductionReport(
        reduced=Basis(reduced_rows),
        transform=UnimodularTransform(transform_rows),
        swaps=swaps,
        tours=0,
        wall_time=time.perf_counter() - t0,
        status="converged",
    )


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def complete_to_unimodular(x: Sequence[int]) -> list[list[int]]:
    """Unimodular integer matrix whose first row is the primitive vector x."""
    n = len(x)
    g = list(map(int, x))
    if not any(g):
        raise ValueError("cannot complete the zero vector")
    w = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for k in range(1, n):
        a, b = g[0], g[k]
        if b == 0:
            continue
        d, u, v = _xgcd(a, b)
        p, q = a // d, b // d
        g[0], g[k] = d, 0
        # inverse elementary op applied to the left of w
        row0 = w[0]
        rowk = w[k]
        w[0] = [p * r0 + q * rk for r0, rk in zip(row0, rowk)]
        w[k] = [-v * r0 + u * rk for r0, rk in zip(row0, rowk)]
    if g[0] != 1:
        if g[0] == -1:
            w[0] = [-val for val in w[0]]
        else:
            raise ValueError(f"vector is not primitive (gcd {g[0]})")
    return w


def _projected_norm_sq_float(engine: FloatLllEngine, i: int, j: int,
                             x: Sequence[int]):
    """Longdouble norm of proj of sum(x_l b_{i+l}) orthogonal to b_0..b_{i-1}."""
    k = j - i + 1
    total = np.longdouble(0.0)
    for c in range(k):
        coeff = np.longdouble(0.0)
        for l in range(c, k):
            if x[l]:
                coeff += x[l] * engine.mu[i + l, i + c]
        total += coeff * coeff * engine.bstar[i + c]
    return total


def bkz_reduce(basis: Basis, params: BkzParams) -> ReductionReport:
    """Classic BKZ: sweep SVP enumeration over projected blocks until a tour
    makes no insertion or max_tours is reached.

    Every output is delta-LLL-reduced.  After a converged run, each block's
    first vector is within factor 1/delta of the block's enumerated minimum.
    """
    d = basis.dim
    if params.beta > d:
        raise ValueError(f"block size {params.beta} exceeds dimension {d}")
    t0 = time.perf_counter()
    mode = _resolve_mode(params.gso_mode, d)
    delta_f = params.delta

    if mode == "exact":
        engine = ExactLllEngine(basis.rows, delta_f)
    else:
        arr = _rows_to_int64(basis)
        lll_prereduce(arr, d, d, float(delta_f))
        engine = FloatLllEngine(arr, d, delta_f)
    engine.lll()

    tours = 0
    status = "tour_limit"
    while tours < params.max_tours:
        tours += 1
        changed = False
        if mode == "float":
            # re-anchor the GSO to the exact integer rows once per tour so
            # incremental longdouble drift cannot feed phantom insertions
            engine._refresh_gso(0)
        for i in range(d - 1):
            j = min(i + params.beta - 1, d - 1)
            k = j - i + 1
            prune = pruning_profile(k, params.pruning)
            if mode == "exact":
                mu_block = [
                    [engine.mu(i + l, i + c) if c < l else
                     (Fraction(1) if c == l else Fraction(0)) for c in range(k)]
                    for l in range(k)
                ]
                rsq = [engine.bstar_sq(i + c) for c in range(k)]
                radius = rsq[0]
                coeffs, found_norm, _ = enumerate_block_exact(
                    mu_block, rsq, radius, prune
                )
                do_insert = coeffs is not None and found_norm < delta_f * radius
            else:
                mu_block = np.asarray(engine.mu[i : j + 1, i : j + 1],
                                      dtype=np.float64)
                rsq = np.asarray(engine.bstar[i : j + 1], dtype=np.float64)
                coeffs, _, _ = enumerate_block_float(
                    mu_block, rsq, float(rsq[0]),
                    np.array([float(p) for p in prune]),
                )
                if coeffs is None:
                    do_insert = False
                else:
                    # re-measure in extended precision before deciding
                    true_norm = _projected_norm_sq_float(engine, i, j, coeffs)
                    do_insert = bool(
                        true_norm < np.longdouble(float(delta_f)) * engine.bstar[i]
                    )
            if not do_insert:
                continue
            x = list(coeffs)
            g = 0
            for v in x:
                g = gcd(g, abs(v))
            if g > 1:
                x = [v // g for v in x]
            # complete x to a unimodular transform, then shrink the completion
            # rows (row 0 = x stays pinned) so applying T cannot blow up the
            # basis entries or wreck the float GSO
            t_mat = reduce_unimodular_rows(complete_to_unimodular(x), delta_f)
            engine.transform_block(i, j, t_mat)
            engine.lll(start=max(1, i), end=j + 1)
            changed = True
        if not changed:
            status = "converged"
            break

    if status == "converged":
        engine.size_reduce_all()
    else:
        engine.lll()
    return ReductionReport(
        reduced=Basis(engine.basis_rows()),
        transform=UnimodularTransform(engine.transform_rows()),
        swaps=engine.swaps,
        tours=tours,
        wall_time=time.perf_counter() - t0,
        status=status,
    )


def quality_report(basis: Basis) -> QualityReport:
    """Hermite factor ||b_1|| / det^(1/d) and orthogonality defect."""
    det = lattice_determinant(basis)
    d = basis.dim
    first = norm_sq(basis.rows[0])
    log_det = math.log(det)
    hermite = math.exp(0.5 * math.log(first) - log_det / d)
    defect = math.exp(
        sum(0.5 * math.log(norm_sq(row)) for row in basis.rows) - log_det
    )
    return QualityReport(
        first_norm_sq=first, hermite_factor=hermite, orthogonality_defect=defect
    )


def gso_of(basis: Basis, mode: str = "exact") -> GsoData:
    """Convenience alias used by callers that pair reduction with GSO checks."""
    return gram_schmidt(basis, mode)
