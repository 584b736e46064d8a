"""LWE instance generation and the LWE-to-SVP lattice embedding.

Instances follow the ML-KEM key-generation shape: the public matrix is a
k x k grid of negacyclic Toeplitz n x n blocks with uniform generator
vectors, the secret and error vectors are centered-binomial with parameter
eta, and t = A s + e (mod q).  The embedding produces the standard
(2m+1)-dimensional basis whose lattice contains the short vector
y = (s | e | 1).

Sampling order is fixed so instances are a pure function of (params, seed):
block generator vectors in row-major block order, then all of s, then all
of e, each from one xoshiro256** stream seeded with the instance seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Basis
from .errors import DimensionMismatch, EmptyVector
from .rng import Xoshiro256StarStar

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class LweParams:
    n: int
    q: int
    k: int = 1
    eta: int = 2

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("n and k must be >= 1")
        if self.q < 2:
            raise ValueError("q must be >= 2")
        if self.eta < 1:
            raise ValueError("eta must be >= 1")

    @property
    def m(self) -> int:
        return self.n * self.k


@dataclass(frozen=True)
class LweInstance:
    params: LweParams
    A: tuple[tuple[int, ...], ...]  # m x m, entries in [0, q)
    t: tuple[int, ...]  # length m, entries in [0, q)
    s: Optional[tuple[int, ...]]  # withheld secret; None when public-only
    e: Optional[tuple[int, ...]]
    seed: int

    @property
    def public_only(self) -> bool:
        return self.s is None


@dataclass(frozen=True)
class EmbeddedLattice:
    basis: Basis  # the (2m+1) x (2m+1) embedding
    target: Optional[tuple[int, ...]]  # y = (s | e | 1); None if public-only
    instance: LweInstance


def sample_cbd(eta: int, rng: Xoshiro256StarStar) -> int:
    """Centered binomial: popcount difference of two eta-bit halves of one word."""
    if eta < 1:
        raise ValueError("eta must be >= 1")
    word = rng.next_u64()
    mask = (1 << eta) - 1
    a = (word & mask).bit_count()
    b = ((word >> eta) & mask).bit_count()
    return a - b


def build_negacyclic_block(a: Sequence[int]) -> list[list[int]]:
    """n x n matrix whose column c is the c-step downward rotation of a with
    wrapped entries negated (constant diagonals)."""
    n = len(a)
    if n == 0:
        raise EmptyVector("generator vector must be non-empty")
    return [
        [a[r - c] if r >= c else -a[n + r - c] for c in range(n)]
        for r in range(n)
    ]


def _compute_t(a_rows, s, e, q) -> tuple[int, ...]:
    return tuple(
        (sum(arow[j] * s[j] for j in range(len(s))) + e[i]) % q
        for i, arow in enumerate(a_rows)
    )


def generate_instance(params: LweParams, seed: int) -> LweInstance:
    """Deterministic LWE instance from (params, seed)."""
    rng = Xoshiro256StarStar(seed)
    n, k, q, m = params.n, params.k, params.q, params.m
    a_rows = [[0] * m for _ in range(m)]
    for bi in range(k):
        for bj in range(k):
            gen = [rng.below(q) for _ in range(n)]
            block = build_negacyclic_block(gen)
            for r in range(n):
                for c in range(n):
                    a_rows[bi * n + r][bj * n + c] = block[r][c] % q
    s = tuple(sample_cbd(params.eta, rng) for _ in range(m))
    e = tuple(sample_cbd(params.eta, rng) for _ in range(m))
    t = _compute_t(a_rows, s, e, q)
    return LweInstance(
        params=params,
        A=tuple(tuple(row) for row in a_rows),
        t=t,
        s=s,
        e=e,
        seed=seed & _MASK64,
    )


def assemble_instance(params: LweParams, A: Sequence[Sequence[int]],
                      s: Sequence[int], e: Sequence[int],
                      seed: int = 0) -> LweInstance:
    """Build an instance from explicit A, s, e (test hook and file loading).

    A is reduced into [0, q); t is recomputed as (A s + e) mod q.
    """
    m, q = params.m, params.q
    if len(A) != m or any(len(row) != m for row in A):
        raise DimensionMismatch(f"A must be {m}x{m}")
    if len(s) != m or len(e) != m:
        raise DimensionMismatch(f"s and e must have length {m}")
    if any(abs(v) > params.eta for v in s) or any(abs(v) > params.eta for v in e):
        raise ValueError(f"s and e entries must lie in [-{params.eta}, {params.eta}]")
    a_rows = [[int(x) % q for x in row] for row in A]
    t = _compute_t(a_rows, list(s), list(e), q)
    return LweInstance(
        params=params,
        A=tuple(tuple(row) for row in a_rows),
        t=t,
        s=tuple(int(v) for v in s),
        e=tuple(int(v) for v in e),
        seed=seed & _MASK64,
    )


def bai_galbraith_embed(instance: LweInstance) -> EmbeddedLattice:
    """The (2m+1)-dimensional embedding basis

        [ I_m  -A^T  0 ]
        [ 0    q I_m 0 ]
        [ 0    t^T   1 ]

    with -A^T entries stored as the direct lift in (-q, 0].
    """
    m = instance.params.m
    q = instance.params.q
    a = instance.A
    t = instance.t
    d = 2 * m + 1
    rows = []
    for i in range(m):
        row = [0] * d
        row[i] = 1
        for j in range(m):
            row[m + j] = -a[j][i]
        rows.append(row)
    for i in range(m):
        row = [0] * d
        row[m + i] = q
        rows.append(row)
    last = [0] * d
    for j in range(m):
        last[m + j] = t[j]
    last[d - 1] = 1
    rows.append(last)
    target = None if instance.public_only else secret_vector(instance)
    return EmbeddedLattice(basis=Basis(rows), target=target, instance=instance)


def secret_vector(instance: LweInstance) -> tuple[int, ...]:
    """The planted short vector y = (s | e | 1)."""
    if instance.public_only:
        raise ValueError("instance has no secret (public-only)")
    return instance.s + instance.e + (1,)


def check_congruence(instance: LweInstance, vector: Sequence[int]) -> bool:
    """(A | I_m | -t) . x == 0 (mod q), the defining property of the lattice."""
    m, q = instance.params.m, instance.params.q
    if len(vector) != 2 * m + 1:
        raise DimensionMismatch(f"vector must have length {2 * m + 1}")
    for i in range(m):
        acc = sum(instance.A[i][j] * vector[j] for j in range(m))
        acc += vector[m + i]
        acc -= instance.t[i] * vector[2 * m]
        if acc % q != 0:
            return False
    return True


def instance_to_json(instance: LweInstance, public_only: bool = False) -> str:
    """Serialize an instance; secrets are dropped entirely when public_only.

    Matrix/vector entries are small and stored as JSON numbers; the 64-bit
    seed is stored as a decimal string to stay lossless in any consumer.
    """
    obj: dict = {
        "n": instance.params.n,
        "k": instance.params.k,
        "q": instance.params.q,
        "eta": instance.params.eta,
        "seed": str(instance.seed),
        "A": [list(row) for row in instance.A],
        "t": list(instance.t),
    }
    if not (public_only or instance.public_only):
        obj["s"] = list(instance.s)
        obj["e"] = list(instance.e)
    return json.dumps(obj, separators=(",", ":")) + "\n"


def instance_from_json(text: str) -> LweInstance:
    obj = json.loads(text)
    params = LweParams(n=int(obj["n"]), q=int(obj["q"]), k=int(obj["k"]),
                       eta=int(obj["eta"]))
    m = params.m
    a_rows = [[int(x) for x in row] for row in obj["A"]]
    if len(a_rows) != m or any(len(r) != m for r in a_rows):
        raise DimensionMismatch(f"A must be {m}x{m}")
    t = tuple(int(x) for x in obj["t"])
    if len(t) != m:
        raise DimensionMismatch(f"t must have length {m}")
    s = obj.get("s")
    e = obj.get("e")
    inst = LweInstance(
        params=params,
        A=tuple(tuple(row) for row in a_rows),
        t=t,
        s=tuple(int(x) for x in s) if s is not None else None,
        e=tuple(int(x) for x in e) if e is not None else None,
        seed=int(obj["seed"]) & _MASK64,
    )
    if inst.s is not None:
        expected = _compute_t(a_rows, list(inst.s), list(inst.e), params.q)
        if expected != t:
            raise ValueError("t does not match A s + e (mod q)")
    return inst
