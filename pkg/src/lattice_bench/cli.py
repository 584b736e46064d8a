"""Command-line front end.

Subcommands: gen, embed, reduce, attack, sweep, fit, report.  Exit codes:
0 success, 1 operation failure, 2 usage error.  Data goes to stdout or the
requested files; progress goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from .core import Basis
from .errors import DegenerateData, LatticeError, PrecisionLoss
from .experiments import (
    SweepConfig,
    attack_instance,
    fit_sigmoid,
    read_summary_csv,
    run_sweep,
    write_summary_csv,
)
from .lwe import (
    LweParams,
    bai_galbraith_embed,
    generate_instance,
    instance_from_json,
    instance_to_json,
)
from .reduction import BkzParams, LllParams, bkz_reduce, lll_reduce


def _parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lattice-bench",
        description="Lattice reduction toolkit and LWE-to-SVP attack benchmark",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate an LWE instance file")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--k", type=int, default=1)
    p_gen.add_argument("--q", type=int, required=True)
    p_gen.add_argument("--eta", type=int, default=2)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--out", required=True)
    p_gen.add_argument("--public-only", action="store_true",
                       help="omit s and e from the output")

    p_embed = sub.add_parser("embed", help="write the embedding basis of an instance")
    p_embed.add_argument("--in", dest="infile", required=True)
    p_embed.add_argument("--out", required=True)

    p_reduce = sub.add_parser("reduce", help="reduce a basis file with LLL or BKZ")
    p_reduce.add_argument("--in", dest="infile", required=True)
    p_reduce.add_argument("--algorithm", choices=("lll", "bkz"), default="lll")
    p_reduce.add_argument("--delta", default="0.99")
    p_reduce.add_argument("--beta", type=int)
    p_reduce.add_argument("--max-tours", type=int, default=32)
    p_reduce.add_argument("--pruning", choices=("none", "linear"), default="none")
    p_reduce.add_argument("--gso-mode", choices=("auto", "exact", "float"),
                          default="auto")
    p_reduce.add_argument("--out", required=True)
    p_reduce.add_argument("--report", help="also write the reduction report JSON")

    p_attack = sub.add_parser("attack", help="run the LWE-to-SVP attack on an instance")
    p_attack.add_argument("--in", dest="infile", required=True)
    p_attack.add_argument("--algorithm", choices=("lll", "bkz"), default="lll")
    p_attack.add_argument("--delta", default="0.99")
    p_attack.add_argument("--beta", type=int)
    p_attack.add_argument("--max-tours", type=int, default=32)
    p_attack.add_argument("--pruning", choices=("none", "linear"), default="none")
    p_attack.add_argument("--gso-mode", choices=("auto", "exact", "float"),
                          default="float")
    p_attack.add_argument("--json", action="store_true", help="JSON output")
    p_attack.add_argument("--no-verify", action="store_true",
                          help="allow instances without secrets")

    p_sweep = sub.add_parser("sweep", help="Monte Carlo sweep over (n, q, beta)")
    p_sweep.add_argument("--algorithm", choices=("lll", "bkz"), required=True)
    p_sweep.add_argument("--n-list", type=_parse_int_list, required=True)
    p_sweep.add_argument("--q-list", type=_parse_int_list, required=True)
    p_sweep.add_argument("--beta-list", type=_parse_int_list, default=())
    p_sweep.add_argument("--trials", type=int,
                         help="per-cell trial count (default: paper schedule)")
    p_sweep.add_argument("--delta", default="0.99")
    p_sweep.add_argument("--eta", type=int, default=2)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--max-tours", type=int, default=32)
    p_sweep.add_argument("--pruning", choices=("none", "linear"), default="none")
    p_sweep.add_argument("--jobs", type=int,
                         default=int(os.environ.get("LATTICE_BENCH_JOBS", "1")))
    p_sweep.add_argument("--out-dir", required=True)

    p_fit = sub.add_parser("fit", help="fit the success-vs-n sigmoid from a summary CSV")
    p_fit.add_argument("--in", dest="infile", required=True)
    p_fit.add_argument("--q", type=int, required=True)
    p_fit.add_argument("--beta", type=int, help="restrict to one block size")
    p_fit.add_argument("--algorithm", choices=("lll", "bkz"))
    p_fit.add_argument("--out", required=True)

    p_report = sub.add_parser("report", help="reshape a summary CSV into plot series")
    p_report.add_argument("--in", dest="infile", required=True)
    p_report.add_argument("--series", choices=("n", "beta"), required=True)
    p_report.add_argument("--out-dir", required=True)
    return parser


def _delta_arg(parser: argparse.ArgumentParser, text: str) -> Fraction:
    try:
        d = Fraction(text)
    except (ValueError, ZeroDivisionError):
        parser.error(f"invalid --delta value: {text!r}")
    if not Fraction(1, 4) < d <= 1:
        parser.error(f"--delta must lie in (1/4, 1], got {text}")
    return d


def _cmd_gen(parser, args) -> int:
    if args.n < 1 or args.k < 1 or args.q < 2 or args.eta < 1:
        parser.error("need n >= 1, k >= 1, q >= 2, eta >= 1")
    params = LweParams(n=args.n, q=args.q, k=args.k, eta=args.eta)
    instance = generate_instance(params, args.seed)
    Path(args.out).write_text(instance_to_json(instance, public_only=args.public_only))
    return 0


def _cmd_embed(parser, args) -> int:
    instance = instance_from_json(Path(args.infile).read_text())
    embedded = bai_galbraith_embed(instance)
    Path(args.out).write_text(embedded.basis.to_json())
    return 0


def _cmd_reduce(parser, args) -> int:
    delta = _delta_arg(parser, args.delta)
    basis = Basis.from_json(Path(args.infile).read_text())
    if args.algorithm == "bkz":
        if args.beta is None:
            parser.error("--beta is required for bkz")
        if not 2 <= args.beta <= basis.dim:
            parser.error(f"--beta must lie in [2, {basis.dim}]")
        report = bkz_reduce(basis, BkzParams(
            beta=args.beta, delta=delta, max_tours=args.max_tours,
            pruning=args.pruning, gso_mode=args.gso_mode))
    else:
        report = lll_reduce(basis, LllParams(delta=delta, gso_mode=args.gso_mode))
    Path(args.out).write_text(report.reduced.to_json())
    if args.report:
        Path(args.report).write_text(report.to_json())
    return 0


def _cmd_attack(parser, args) -> int:
    delta = _delta_arg(parser, args.delta)
    instance = instance_from_json(Path(args.infile).read_text())
    if instance.public_only and not args.no_verify:
        parser.error("instance has no secret; pass --no-verify to attack anyway")
    dim = 2 * instance.params.m + 1
    if args.algorithm == "bkz":
        if args.beta is None:
            parser.error("--beta is required for bkz")
        if not 2 <= args.beta <= dim:
            parser.error(f"--beta must lie in [2, {dim}] for this instance")
    outcome = attack_instance(
        instance, args.algorithm, delta=delta, beta=args.beta,
        max_tours=args.max_tours, pruning=args.pruning, gso_mode=args.gso_mode,
    )
    payload = {
        "success": outcome.success,
        "found_row": list(outcome.found_row) if outcome.found_row else None,
        "found_norm_sq": outcome.found_norm_sq,
        "target_norm_sq": outcome.target_norm_sq or None,
        "first_row_match": outcome.first_row_match,
        "wall_time_s": outcome.wall_time_s,
        "status": outcome.status,
    }
    if args.json:
        print(json.dumps(payload, separators=(",", ":")))
    else:
        print(f"status: {outcome.status}")
        print(f"success: {outcome.success}")
        print(f"found row: {payload['found_row']}")
        print(f"found norm^2: {outcome.found_norm_sq}"
              f"  target norm^2: {payload['target_norm_sq']}")
        print(f"wall time: {outcome.wall_time_s:.6f} s")
    return 1 if outcome.status == "precision_error" else 0


def _cmd_sweep(parser, args) -> int:
    if args.algorithm == "bkz" and not args.beta_list:
        parser.error("--beta-list is required for bkz sweeps")
    if args.jobs < 1:
        parser.error("--jobs must be >= 1")
    delta = _delta_arg(parser, args.delta)
    config = SweepConfig(
        algorithm=args.algorithm, n_list=args.n_list, q_list=args.q_list,
        beta_list=args.beta_list, delta=delta, eta=args.eta,
        trials=args.trials, base_seed=args.seed, max_tours=args.max_tours,
        worker_count=args.jobs, pruning=args.pruning,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def progress(done: int, total: int) -> None:
        if done % 16 == 0 or done == total:
            print(f"[sweep] {done}/{total} trials", file=sys.stderr, flush=True)

    with open(out_dir / "results.csv", "w", newline="") as sink:
        summary, _results = run_sweep(config, results_sink=sink, progress=progress)
    write_summary_csv(str(out_dir / "summary.csv"), summary)
    print(f"[sweep] wrote {out_dir / 'results.csv'} and {out_dir / 'summary.csv'}",
          file=sys.stderr)
    return 0


def _cmd_fit(parser, args) -> int:
    cells = read_summary_csv(args.infile)
    rows = [c for c in cells if c.q == args.q]
    if args.algorithm:
        rows = [c for c in rows if c.algorithm == args.algorithm]
    if args.beta is not None:
        rows = [c for c in rows if c.beta == args.beta]
    if not rows:
        print(f"no summary rows match q={args.q}", file=sys.stderr)
        return 1
    betas = {c.beta for c in rows}
    if len(betas) > 1:
        print(f"summary mixes block sizes {sorted(betas)}; pass --beta",
              file=sys.stderr)
        return 1
    points = [(c.n, c.success_rate) for c in rows]
    fit = fit_sigmoid(points)
    payload = {"q": args.q, "rho": fit.rho, "sigma": fit.sigma,
               "sse": fit.residual_sse, "n_half": fit.n_half}
    Path(args.out).write_text(json.dumps(payload, separators=(",", ":")) + "\n")
    return 0


def _cmd_report(parser, args) -> int:
    cells = read_summary_csv(args.infile)
    if not cells:
        print("summary CSV is empty", file=sys.stderr)
        return 1
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.series == "beta":
        keys = sorted({(c.n, c.q) for c in cells})
        for n, q in keys:
            rows = sorted((c for c in cells if c.n == n and c.q == q),
                          key=lambda c: c.beta)
            path = out_dir / f"series_beta_n{n}_q{q}.csv"
            with open(path, "w", newline="") as fh:
                fh.write("beta,success_rate,mean_time_s\n")
                for c in rows:
                    fh.write(f"{c.beta},{c.success_rate!r},{c.mean_time_s!r}\n")
    else:
        keys = sorted({(c.algorithm, c.q, c.beta) for c in cells})
        for algorithm, q, beta in keys:
            rows = sorted(
                (c for c in cells
                 if c.algorithm == algorithm and c.q == q and c.beta == beta),
                key=lambda c: c.n)
            path = out_dir / f"series_n_{algorithm}_q{q}_beta{beta}.csv"
            with open(path, "w", newline="") as fh:
                fh.write("n,success_rate,mean_time_s\n")
                for c in rows:
                    fh.write(f"{c.n},{c.success_rate!r},{c.mean_time_s!r}\n")
    return 0


_COMMANDS = {
    "gen": _cmd_gen,
    "embed": _cmd_embed,
    "reduce": _cmd_reduce,
    "attack": _cmd_attack,
    "sweep": _cmd_sweep,
    "fit": _cmd_fit,
    "report": _cmd_report,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](parser, args)
    except (DegenerateData, PrecisionLoss) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (LatticeError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
