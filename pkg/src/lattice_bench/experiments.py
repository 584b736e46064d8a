"""Monte Carlo attack sweeps over (algorithm, n, q, beta) cells.

Each trial is a pure function of its derived seed, so sweeps are
reproducible and identical for any worker count:

    trial_seed = base_seed XOR fnv1a64("alg={alg};n={n};q={q};beta={beta};i={i}")

with beta = 0 for LLL.  The harness runs the reduction on each embedded
instance, decides success (the reduced basis contains +-y as a row, the
criterion the reference experiments use), aggregates rates and runtimes per
cell, and fits the success-vs-n sigmoid model.

Precision failures are recorded with status "precision_error" and excluded
from the success-rate denominator (the discard convention), but stay visible
in the per-cell `discarded` count.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .core import norm_sq
from .errors import DegenerateData, PrecisionLoss
from .lwe import LweInstance, LweParams, bai_galbraith_embed, generate_instance, secret_vector
from .reduction import BkzParams, LllParams, bkz_reduce, lll_reduce

logger = logging.getLogger("lattice_bench")

_MASK64 = (1 << 64) - 1

RESULT_COLUMNS = [
    "algorithm", "n", "q", "delta", "beta", "trial", "seed", "success",
    "found_norm_sq", "target_norm_sq", "wall_time_s", "status",
]
SUMMARY_COLUMNS = [
    "algorithm", "n", "q", "beta", "trials", "discarded", "successes",
    "success_rate", "mean_time_s", "stddev_time_s",
]


def fnv1a64(data: bytes) -> int:
    """Standard FNV-1a 64-bit hash."""
    h = 0xCBF29CE484222325
    for byte in data:
        h ^= byte
        h = (h * 0x100000001B3) & _MASK64
    return h


def derive_trial_seed(base_seed: int, algorithm: str, n: int, q: int,
                      beta: int, trial_index: int) -> int:
    tag = f"alg={algorithm};n={n};q={q};beta={beta};i={trial_index}"
    return (base_seed ^ fnv1a64(tag.encode("ascii"))) & _MASK64


def paper_trial_schedule(algorithm: str, n: int) -> int:
    """Per-cell sample sizes used by the reference experiments."""
    if algorithm == "lll":
        return 128
    return 512 if n <= 88 else 256


@dataclass(frozen=True)
class SweepConfig:
    algorithm: str  # "lll" | "bkz"
    n_list: tuple[int, ...]
    q_list: tuple[int, ...]
    beta_list: tuple[int, ...] = ()
    delta: Fraction = Fraction(99, 100)
    eta: int = 2
    trials: Optional[int] = None  # None -> paper schedule per cell
    base_seed: int = 0
    max_tours: int = 32
    worker_count: int = 1
    pruning: str = "none"
    # The harness defaults to the float path like the reference experiments;
    # precision failures become discarded trials rather than aborts.
    gso_mode: str = "float"

    def __post_init__(self):
        if self.algorithm not in ("lll", "bkz"):
            raise ValueError(f"unknown algorithm: {self.algorithm!r}")
        if self.algorithm == "bkz" and not self.beta_list:
            raise ValueError("bkz sweep needs a beta_list")
        object.__setattr__(self, "n_list", tuple(int(v) for v in self.n_list))
        object.__setattr__(self, "q_list", tuple(int(v) for v in self.q_list))
        object.__setattr__(self, "beta_list", tuple(int(v) for v in self.beta_list))
        if self.trials is not None and self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")

    def trials_for(self, n: int) -> int:
        if self.trials is not None:
            return self.trials
        return paper_trial_schedule(self.algorithm, n)

    def cells(self) -> list[tuple[int, int, int]]:
        betas = self.beta_list if self.algorithm == "bkz" else (0,)
        return [(n, q, b) for n in self.n_list for q in self.q_list for b in betas]


@dataclass(frozen=True)
class AttackOutcome:
    success: Optional[bool]  # None when the instance has no secret to verify
    found_norm_sq: int
    target_norm_sq: int  # 0 when unknown
    wall_time_s: float
    status: str  # converged | tour_limit | precision_error
    tours: int
    first_row_match: bool
    shorter_than_target: bool
    found_row: Optional[tuple[int, ...]]  # matching row on success, else b_1


@dataclass(frozen=True)
class TrialResult:
    algorithm: str
    n: int
    q: int
    delta: Fraction
    beta: int  # 0 for LLL
    trial: int
    seed: int
    success: bool
    found_norm_sq: int
    target_norm_sq: int
    wall_time_s: float
    status: str
    first_row_match: bool
    shorter_than_target: bool
    found_row: Optional[tuple[int, ...]]

    def csv_row(self) -> list[str]:
        return [
            self.algorithm, str(self.n), str(self.q), str(float(self.delta)),
            str(self.beta), str(self.trial), str(self.seed),
            "true" if self.success else "false",
            str(self.found_norm_sq), str(self.target_norm_sq),
            repr(self.wall_time_s), self.status,
        ]


@dataclass(frozen=True)
class CellSummary:
    algorithm: str
    n: int
    q: int
    beta: int
    trials: int
    discarded: int
    successes: int
    success_rate: float
    mean_time_s: float
    stddev_time_s: float

    def csv_row(self) -> list[str]:
        return [
            self.algorithm, str(self.n), str(self.q), str(self.beta),
            str(self.trials), str(self.discarded), str(self.successes),
            repr(self.success_rate), repr(self.mean_time_s),
            repr(self.stddev_time_s),
        ]


@dataclass(frozen=True)
class SweepSummary:
    cells: tuple[CellSummary, ...]


@dataclass(frozen=True)
class SigmoidFit:
    rho: float
    sigma: float
    residual_sse: float

    @property
    def n_half(self) -> float:
        return self.rho / self.sigma if self.sigma != 0 else math.inf


def attack_instance(instance: LweInstance, algorithm: str,
                    delta=Fraction(99, 100), beta: Optional[int] = None,
                    max_tours: int = 32, pruning: str = "none",
                    gso_mode: str = "float") -> AttackOutcome:
    """Embed the instance, reduce, and decide secret recovery.

    Success means the reduced basis contains y or -y as a row, where
    y = (s | e | 1).  The wall time covers the reduction call only.
    """
    embedded = bai_galbraith_embed(instance)
    target = embedded.target
    target_ns = norm_sq(target) if target is not None else 0
    try:
        if algorithm == "lll":
            report = lll_reduce(embedded.basis, LllParams(delta=delta, gso_mode=gso_mode))
        elif algorithm == "bkz":
            if beta is None:
                raise ValueError("bkz attack needs a block size")
            report = bkz_reduce(
                embedded.basis,
                BkzParams(beta=beta, delta=delta, max_tours=max_tours,
                          pruning=pruning, gso_mode=gso_mode),
            )
        else:
            raise ValueError(f"unknown algorithm: {algorithm!r}")
    except PrecisionLoss as exc:
        logger.debug("precision loss during reduction: %s", exc)
        return AttackOutcome(
            success=False if target is not None else None,
            found_norm_sq=0, target_norm_sq=target_ns, wall_time_s=0.0,
            status="precision_error", tours=0, first_row_match=False,
            shorter_than_target=False, found_row=None,
        )
    rows = report.reduced.rows
    first = rows[0]
    found_ns = norm_sq(first)
    if target is None:
        return AttackOutcome(
            success=None, found_norm_sq=found_ns, target_norm_sq=0,
            wall_time_s=report.wall_time, status=report.status,
            tours=report.tours, first_row_match=False,
            shorter_than_target=False, found_row=first,
        )
    neg_target = tuple(-v for v in target)
    match = None
    for row in rows:
        if row == target or row == neg_target:
            match = row
            break
    success = match is not None
    first_row_match = first == target or first == neg_target
    shorter = found_ns <= target_ns
    logger.debug(
        "attack %s: success=%s first_row_match=%s shorter_than_target=%s",
        algorithm, success, first_row_match, shorter,
    )
    return AttackOutcome(
        success=success, found_norm_sq=found_ns, target_norm_sq=target_ns,
        wall_time_s=report.wall_time, status=report.status, tours=report.tours,
        first_row_match=first_row_match, shorter_than_target=shorter,
        found_row=match if success else first,
    )


def run_trial(config: SweepConfig, n: int, q: int, beta: int,
              trial_index: int) -> TrialResult:
    seed = derive_trial_seed(config.base_seed, config.algorithm, n, q, beta,
                             trial_index)
    params = LweParams(n=n, q=q, k=1, eta=config.eta)
    instance = generate_instance(params, seed)
    outcome = attack_instance(
        instance, config.algorithm, delta=config.delta,
        beta=beta if config.algorithm == "bkz" else None,
        max_tours=config.max_tours, pruning=config.pruning,
        gso_mode=config.gso_mode,
    )
    return TrialResult(
        algorithm=config.algorithm, n=n, q=q, delta=config.delta, beta=beta,
        trial=trial_index, seed=seed, success=bool(outcome.success),
        found_norm_sq=outcome.found_norm_sq,
        target_norm_sq=outcome.target_norm_sq,
        wall_time_s=outcome.wall_time_s, status=outcome.status,
        first_row_match=outcome.first_row_match,
        shorter_than_target=outcome.shorter_than_target,
        found_row=outcome.found_row,
    )


def _trial_task(args) -> TrialResult:
    config, n, q, beta, trial_index = args
    return run_trial(config, n, q, beta, trial_index)


def _population_stddev(values: Sequence[float], mean: float) -> float:
    if not values:
        return 0.0
    return math.sqrt(sum((v - mean) ** 2 for v in values) / len(values))


def summarize_cells(results: Iterable[TrialResult]) -> SweepSummary:
    groups: dict[tuple, list[TrialResult]] = {}
    for r in results:
        groups.setdefault((r.algorithm, r.n, r.q, r.beta), []).append(r)
    cells = []
    for key in sorted(groups):
        algorithm, n, q, beta = key
        rs = groups[key]
        kept = [r for r in rs if r.status != "precision_error"]
        discarded = len(rs) - len(kept)
        successes = sum(1 for r in kept if r.success)
        rate = successes / len(kept) if kept else 0.0
        times = [r.wall_time_s for r in kept]
        mean = sum(times) / len(times) if times else 0.0
        cells.append(CellSummary(
            algorithm=algorithm, n=n, q=q, beta=beta, trials=len(rs),
            discarded=discarded, successes=successes, success_rate=rate,
            mean_time_s=mean, stddev_time_s=_population_stddev(times, mean),
        ))
    return SweepSummary(cells=tuple(cells))


def run_sweep(config: SweepConfig,
              results_sink: Optional[io.TextIOBase] = None,
              progress: Optional[Callable[[int, int], None]] = None,
              ) -> tuple[SweepSummary, list[TrialResult]]:
    """Execute all cells x trials; deterministic for any worker_count.

    Tasks are generated in a fixed order and results collected in that same
    order, so the trial log (and any sink output) is identical no matter how
    many workers run.  `results_sink` receives CSV rows as trials complete.
    """
    tasks = []
    for n, q, beta in config.cells():
        for t in range(config.trials_for(n)):
            tasks.append((config, n, q, beta, t))
    total = len(tasks)
    results: list[TrialResult] = []
    writer = csv.writer(results_sink) if results_sink is not None else None
    if writer is not None:
        writer.writerow(RESULT_COLUMNS)

    def _consume(res: TrialResult) -> None:
        results.append(res)
        if writer is not None:
            writer.writerow(res.csv_row())
            results_sink.flush()
        if progress is not None:
            progress(len(results), total)

    if config.worker_count == 1:
        for task in tasks:
            _consume(_trial_task(task))
    else:
        _warm_kernels()
        chunk = max(1, total // (config.worker_count * 8))
        with ProcessPoolExecutor(max_workers=config.worker_count) as pool:
            for res in pool.map(_trial_task, tasks, chunksize=chunk):
                _consume(res)
    return summarize_cells(results), results


def _warm_kernels() -> None:
    """Trigger numba JIT in the parent so forked workers inherit it."""
    tiny = generate_instance(LweParams(n=2, q=17), seed=1)
    attack_instance(tiny, "lll", gso_mode="float")
    attack_instance(tiny, "bkz", beta=2, gso_mode="float")


def fit_sigmoid(points: Sequence[tuple[float, float]]) -> SigmoidFit:
    """Least-squares fit of p(n) = 1 - (1 + exp(rho - sigma n))^-1.

    Plain Gauss-Newton; initialization sigma0 = 0.35 and rho0 = sigma0 * n*,
    where n* linearly interpolates the first crossing of rate 0.5.  Stops
    when the step norm falls below 1e-10 or after 500 iterations.
    """
    pts = sorted((float(n), float(r)) for n, r in points)
    if len({n for n, _ in pts}) < 2:
        raise DegenerateData("need at least 2 points with distinct n")
    for _, r in pts:
        if not 0.0 <= r <= 1.0:
            raise ValueError(f"rate {r} outside [0, 1]")
    rates = [r for _, r in pts]
    if all(r == rates[0] for r in rates):
        raise DegenerateData("all rates equal; sigma is unidentifiable")

    n_star = pts[-1][0]
    if pts[0][1] < 0.5:
        n_star = pts[0][0]
    else:
        for (na, ra), (nb, rb) in zip(pts, pts[1:]):
            if ra >= 0.5 > rb:
                n_star = na + (ra - 0.5) * (nb - na) / (ra - rb)
                break

    ns = np.array([n for n, _ in pts])
    ys = np.array(rates)
    sigma = 0.35
    rho = sigma * n_star
    for _ in range(500):
        z = rho - sigma * ns
        p = np.where(z >= 0, 1.0 / (1.0 + np.exp(-z)),
                     np.exp(np.minimum(z, 0)) / (1.0 + np.exp(np.minimum(z, 0))))
        w = p * (1.0 - p)
        resid = p - ys
        jac = np.column_stack([w, -ns * w])
        jtj = jac.T @ jac
        rhs = -jac.T @ resid
        try:
            step = np.linalg.solve(jtj, rhs)
        except np.linalg.LinAlgError as exc:
            raise DegenerateData("normal equations are singular") from exc
        rho += step[0]
        sigma += step[1]
        if math.sqrt(float(step @ step)) < 1e-10:
            break
    z = rho - sigma * ns
    p = np.where(z >= 0, 1.0 / (1.0 + np.exp(-z)),
                 np.exp(np.minimum(z, 0)) / (1.0 + np.exp(np.minimum(z, 0))))
    sse = float(np.sum((p - ys) ** 2))
    return SigmoidFit(rho=float(rho), sigma=float(sigma), residual_sse=sse)


@dataclass(frozen=True)
class RuntimeCell:
    n: int
    beta: int
    mean_time_s: float
    stddev_time_s: float


def summarize_runtime(results: Iterable[TrialResult]) -> list[RuntimeCell]:
    """Per-(n, beta) arithmetic mean and population stddev of wall times."""
    groups: dict[tuple[int, int], list[float]] = {}
    for r in results:
        if r.status == "precision_error":
            continue
        groups.setdefault((r.n, r.beta), []).append(r.wall_time_s)
    out = []
    for (n, beta) in sorted(groups):
        times = groups[(n, beta)]
        if not times:
            continue
        mean = sum(times) / len(times)
        out.append(RuntimeCell(n=n, beta=beta, mean_time_s=mean,
                               stddev_time_s=_population_stddev(times, mean)))
    return out


# -- CSV helpers ---------------------------------------------------------------


def write_results_csv(path: str, results: Sequence[TrialResult]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(RESULT_COLUMNS)
        for r in results:
            w.writerow(r.csv_row())


def write_summary_csv(path: str, summary: SweepSummary) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_COLUMNS)
        for cell in summary.cells:
            w.writerow(cell.csv_row())


def read_summary_csv(path: str) -> list[CellSummary]:
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append(CellSummary(
                algorithm=row["algorithm"], n=int(row["n"]), q=int(row["q"]),
                beta=int(row["beta"]), trials=int(row["trials"]),
                discarded=int(row["discarded"]), successes=int(row["successes"]),
                success_rate=float(row["success_rate"]),
                mean_time_s=float(row["mean_time_s"]),
                stddev_time_s=float(row["stddev_time_s"]),
            ))
    return out
