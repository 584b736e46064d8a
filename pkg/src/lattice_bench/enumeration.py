"""Schnorr-Euchner shortest-vector enumeration on projected blocks.

Depth-first search over integer coefficient vectors with zig-zag child
ordering around each level's center and radius shrinking on every
improvement.  The sign symmetry x ~ -x is broken by forcing the last nonzero
coefficient positive, so returned solutions are canonical.

Two arithmetic backends: float64 (numba-compiled when available) for the
fast path, and exact Fractions for exact-mode GSO data and the brute-force
oracle.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._exact_engine import round_half_away
from .core import GsoData
from .errors import DimensionMismatch

try:  # pragma: no cover
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
def _enum_f8_kernel(mu, rsq, radius_sq, prune, x_out):
    """Returns (found, best_norm_sq, nodes); solution coefficients in x_out."""
    k = rsq.shape[0]
    x = np.zeros(k, dtype=np.int64)
    base = np.zeros(k, dtype=np.int64)
    trial = np.zeros(k, dtype=np.int64)
    sigma = np.ones(k, dtype=np.int64)
    topzero = np.zeros(k, dtype=np.bool_)
    c = np.zeros(k)
    acc = np.zeros(k + 1)

    i = k - 1
    topzero[i] = True
    best = radius_sq
    found = 0
    nodes = 0

    while True:
        nodes += 1
        dd = x[i] - c[i]
        nd = acc[i + 1] + dd * dd * rsq[i]
        if nd < best * prune[i]:
            if i > 0:
                acc[i] = nd
                i -= 1
                s = 0.0
                for l in range(i + 1, k):
                    if x[l] != 0:
                        s += x[l] * mu[l, i]
                c[i] = -s
                topzero[i] = topzero[i + 1] and x[i + 1] == 0
                trial[i] = 0
                if topzero[i]:
                    base[i] = 0
                    x[i] = 0
                    sigma[i] = 1
                else:
                    b = np.floor(c[i] + 0.5)
                    base[i] = np.int64(b)
                    x[i] = base[i]
                    sigma[i] = 1 if c[i] >= b else -1
                continue
            nonzero = False
            for l in range(k):
                if x[l] != 0:
                    nonzero = True
                    break
            if nonzero and nd < best:
                best = nd
                for l in range(k):
                    x_out[l] = x[l]
                found = 1
        else:
            i += 1
            if i == k:
                break
        trial[i] += 1
        if topzero[i]:
            x[i] = trial[i]
        else:
            mag = (trial[i] + 1) // 2
            if trial[i] & 1:
                x[i] = base[i] + sigma[i] * mag
            else:
                x[i] = base[i] - sigma[i] * mag
    return found, best, nodes


def _enum_f8_python(mu, rsq, radius_sq, prune, x_out):
    """Pure-python mirror of the kernel (used when numba is unavailable)."""
    k = len(rsq)
    x = [0] * k
    base = [0] * k
    trial = [0] * k
    sigma = [1] * k
    topzero = [False] * k
    c = [0.0] * k
    acc = [0.0] * (k + 1)
    i = k - 1
    topzero[i] = True
    best = radius_sq
    found = 0
    nodes = 0
    while True:
        nodes += 1
        dd = x[i] - c[i]
        nd = acc[i + 1] + dd * dd * rsq[i]
        if nd < best * prune[i]:
            if i > 0:
                acc[i] = nd
                i -= 1
                c[i] = -sum(x[l] * mu[l][i] for l in range(i + 1, k) if x[l])
                topzero[i] = topzero[i + 1] and x[i + 1] == 0
                trial[i] = 0
                if topzero[i]:
                    base[i] = 0
                    x[i] = 0
                    sigma[i] = 1
                else:
                    b = int(np.floor(c[i] + 0.5))
                    base[i] = b
                    x[i] = b
                    sigma[i] = 1 if c[i] >= b else -1
                continue
            if any(x) and nd < best:
                best = nd
                x_out[:] = x
                found = 1
        else:
            i += 1
            if i == k:
                break
        trial[i] += 1
        if topzero[i]:
            x[i] = trial[i]
        else:
            mag = (trial[i] + 1) // 2
            if trial[i] & 1:
                x[i] = base[i] + sigma[i] * mag
            else:
                x[i] = base[i] - sigma[i] * mag
    return found, best, nodes


def enumerate_block_float(mu_block: np.ndarray, rsq_block: np.ndarray,
                          radius_sq: float, prune: np.ndarray):
    """Float enumeration; returns (coeffs | None, norm_sq, nodes)."""
    k = len(rsq_block)
    x_out = np.zeros(k, dtype=np.int64)
    if _HAVE_NUMBA:
        found, best, nodes = _enum_f8_kernel(
            np.ascontiguousarray(mu_block, dtype=np.float64),
            np.ascontiguousarray(rsq_block, dtype=np.float64),
            float(radius_sq),
            np.ascontiguousarray(prune, dtype=np.float64),
            x_out,
        )
    else:
        found, best, nodes = _enum_f8_python(
            [list(map(float, row)) for row in mu_block],
            [float(v) for v in rsq_block],
            float(radius_sq),
            [float(p) for p in prune],
            x_out,
        )
    if not found:
        return None, None, int(nodes)
    return tuple(int(v) for v in x_out), float(best), int(nodes)


def _frac_nearest(c: Fraction) -> int:
    return round_half_away(c.numerator, c.denominator)


def enumerate_block_exact(mu_block: Sequence[Sequence[Fraction]],
                          rsq_block: Sequence[Fraction],
                          radius_sq: Fraction,
                          prune: Sequence[Fraction] | None = None):
    """Exact-arithmetic enumeration; returns (coeffs | None, norm_sq, nodes)."""
    k = len(rsq_block)
    if prune is None:
        prune = [Fraction(1)] * k
    x = [0] * k
    base = [0] * k
    trial = [0] * k
    sigma = [1] * k
    topzero = [False] * k
    c: list[Fraction] = [Fraction(0)] * k
    acc: list[Fraction] = [Fraction(0)] * (k + 1)
    i = k - 1
    topzero[i] = True
    best = Fraction(radius_sq)
    best_x = None
    nodes = 0
    while True:
        nodes += 1
        dd = x[i] - c[i]
        nd = acc[i + 1] + dd * dd * rsq_block[i]
        if nd < best * prune[i]:
            if i > 0:
                acc[i] = nd
                i -= 1
                c[i] = -sum(
                    (x[l] * mu_block[l][i] for l in range(i + 1, k) if x[l]),
                    start=Fraction(0),
                )
                topzero[i] = topzero[i + 1] and x[i + 1] == 0
                trial[i] = 0
                if topzero[i]:
                    base[i] = 0
                    x[i] = 0
                    sigma[i] = 1
                else:
                    b = _frac_nearest(c[i])
                    base[i] = b
                    x[i] = b
                    sigma[i] = 1 if c[i] >= b else -1
                continue
            if any(x) and nd < best:
                best = nd
                best_x = tuple(x)
        else:
            i += 1
            if i == k:
                break
        trial[i] += 1
        if topzero[i]:
            x[i] = trial[i]
        else:
            mag = (trial[i] + 1) // 2
            if trial[i] & 1:
                x[i] = base[i] + sigma[i] * mag
            else:
                x[i] = base[i] - sigma[i] * mag
    if best_x is None:
        return None, None, nodes
    return best_x, best, nodes


def pruning_profile(k: int, pruning: str):
    """Per-level radius fractions; level i has k-i coordinates fixed."""
    if pruning == "none":
        return [Fraction(1)] * k
    if pruning == "linear":
        return [Fraction(k - i, k) for i in range(k)]
    raise ValueError(f"unknown pruning profile: {pruning!r}")


def svp_enumerate(gso: GsoData, start: int, stop: int, radius_sq,
                  pruning: str = "none") -> Optional[tuple[int, ...]]:
    """Shortest nonzero coefficient vector on the projected block [start, stop).

    Minimizes the norm of the projection of sum(x_l * b_l, l in block)
    orthogonally to b_0..b_{start-1}; returns the coefficients if the minimum
    is strictly below radius_sq, else None.  Indices are 0-based half-open.
    """
    d = gso.dim
    if not (0 <= start < stop <= d):
        raise DimensionMismatch(f"block [{start}, {stop}) out of range for dim {d}")
    if radius_sq <= 0:
        raise ValueError("radius_sq must be positive")
    k = stop - start
    prune = pruning_profile(k, pruning)
    if gso.mode == "exact":
        mu_block = [[gso.mu[start + l][start + i] for i in range(k)] for l in range(k)]
        rsq = [gso.norms_sq[start + i] for i in range(k)]
        coeffs, _, _ = enumerate_block_exact(mu_block, rsq, Fraction(radius_sq), prune)
        return coeffs
    mu_block = np.asarray(gso.mu, dtype=np.float64)[start:stop, start:stop]
    rsq = np.asarray(gso.norms_sq, dtype=np.float64)[start:stop]
    coeffs, _, _ = enumerate_block_float(
        mu_block, rsq, float(radius_sq), np.array([float(p) for p in prune])
    )
    return coeffs
