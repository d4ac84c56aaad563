"""Command-line harness.

Exit codes:
    0  success
    2  usage error (unknown flags or subcommand)
    3  invalid parameter values
    4  missing input path
    5  verification failure (oracle mismatch or violated bound)
    6  input file schema / calibration-curve mismatch

Every file-writing command also writes ``<out>.manifest.json`` recording the
full parameter set, master seed, version, timestamps, and output digests.
Identical invocations reproduce byte-identical data files.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__, experiments, stats
from .manifest import RunManifest, manifest_path_for
from .model import DeltaSchedule, GrowthConfig, grow, schedule_from_gamma

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_PARAMS = 3
EXIT_PATH = 4
EXIT_VERIFY = 5
EXIT_SCHEMA = 6

_EPILOG = """exit codes:
  0 success; 2 usage error; 3 invalid parameter values; 4 missing input path;
  5 verification failure; 6 file schema or calibration-curve mismatch.

config file: --config FILE reads long-flag defaults as key=value lines
(e.g. "delta-prime=2.0"); explicit flags override the file.
"""


class SchemaError(Exception):
    pass


class VerificationFailure(Exception):
    pass


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x]


def _float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pachange",
        description="Preferential-attachment changepoint laboratory",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=str, default=None,
                       help="key=value file of flag defaults")
        return p

    p = add("generate", "sample one graph and write it to a file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, default=None)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--tau", type=int, default=None)
    group.add_argument("--gamma", type=float, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, required=True)
    p.add_argument("--format", choices=("binary", "jsonl"), default="binary")

    p = add("verify-lr", "closed-form likelihood ratio vs enumeration oracle")
    p.add_argument("--max-n", type=int, default=6)
    p.add_argument("--max-m", type=int, default=2)

    p = add("verify-encoding", "decoded attachment law vs sequential law")
    p.add_argument("--max-t", type=int, default=6)
    p.add_argument("--max-m", type=int, default=2)

    p = add("sweep-power", "power of the calibrated minimum-degree test over (n, gamma)")
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated sizes")
    p.add_argument("--gamma", type=_float_list, required=True, help="comma-separated exponents")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--reps", type=int, default=400)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", type=str, required=True)

    p = add("calibrate", "minimum-degree statistic curve along a tau/n grid")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, required=True)
    p.add_argument("--grid", type=_float_list, default=[0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0])
    p.add_argument("--reps", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", type=str, required=True)

    p = add("estimate", "changepoint estimates for fresh graphs via a calibration curve")
    p.add_argument("--curve", type=str, required=True, help="calibration.csv from `calibrate`")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, required=True)
    p.add_argument("--tau", type=int, required=True)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, required=True)

    p = add("var-s", "variance of the likelihood-ratio core S over continuations")
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--N", dest="late_n", type=_int_list,
                       help="comma-separated suffix lengths")
    group.add_argument("--M", dest="reveal_m", type=_int_list,
                       help="comma-separated reveal times (N = n - M)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, required=True)
    p.add_argument("--prefixes", type=int, default=20)
    p.add_argument("--continuations", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=str, required=True)

    p = add("dominance", "late-component size CCDF vs dominating branching tree")
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--N", dest="late_n", type=int)
    group.add_argument("--M", dest="reveal_m", type=int, help="reveal time (N = n - M)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--cap", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", type=str, required=True)

    p = add("bounded-diff", "single-entry resampling: normalized change in S vs bound")
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--N", dest="late_n", type=int)
    group.add_argument("--M", dest="reveal_m", type=int, help="reveal time (N = n - M)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--delta-prime", type=float, required=True)
    p.add_argument("--reps", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)

    return parser


def _apply_config(argv: list[str]) -> list[str]:
    """Prepend key=value pairs from --config as flags (explicit flags win)."""
    if "--config" not in argv:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        return argv
    path = Path(argv[idx + 1])
    if not path.exists():
        raise FileNotFoundError(f"config file {path} does not exist")
    extra: list[str] = []
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        extra.extend([f"--{key.strip()}", value.strip()])
    # subcommand stays first; config-derived flags go before user flags
    return argv[:1] + extra + argv[1:]


def _summary(command: str, t0: float, **fields) -> None:
    payload = {"command": command, "elapsed_s": round(time.perf_counter() - t0, 3)}
    payload.update(fields)
    print(json.dumps(payload, sort_keys=True))


def _write_with_manifest(command, params, seed, out, header, rows, t0, **extra):
    experiments.write_csv(out, header, rows)
    manifest = RunManifest(command, params, seed, __version__)
    manifest.add_output(out)
    manifest.finish()
    manifest.write(manifest_path_for(out))
    _summary(command, t0, out=str(out), rows=len(rows), **extra)


def _cmd_generate(args, t0):
    from . import graphio

    if args.gamma is not None:
        schedule = schedule_from_gamma(args.n, args.gamma, args.delta,
                                       args.delta_prime if args.delta_prime is not None else args.delta)
    else:
        tau = args.tau if args.tau is not None else args.n
        dp = args.delta_prime if args.delta_prime is not None else args.delta
        schedule = DeltaSchedule(args.delta, dp, tau)
    graph = grow(GrowthConfig(args.n, args.m, schedule, args.seed))
    if args.format == "binary":
        graphio.save_binary(graph, args.out)
    else:
        graphio.save_jsonl(graph, args.out)
    manifest = RunManifest("generate", _params(args), args.seed, __version__)
    manifest.add_output(args.out)
    manifest.finish()
    manifest.write(manifest_path_for(args.out))
    _summary("generate", t0, out=args.out, n=args.n, m=args.m,
             records=int(len(graph.targets)))
    return EXIT_OK


def _cmd_verify_lr(args, t0):
    from .verification import verify_lr_grid

    report = verify_lr_grid(ns=tuple(range(4, args.max_n + 1)), ms=tuple(range(1, args.max_m + 1)))
    _summary("verify-lr", t0, checked=report.checked, mismatches=len(report.mismatches))
    if not report.ok():
        for bad in report.mismatches[:10]:
            print(json.dumps(bad), file=sys.stderr)
        raise VerificationFailure("likelihood-ratio oracle mismatch")
    return EXIT_OK


def _cmd_verify_encoding(args, t0):
    from .verification import verify_encoding_grid

    report = verify_encoding_grid(max_t=args.max_t, max_m=args.max_m)
    _summary("verify-encoding", t0, checked=report.checked, mismatches=len(report.mismatches))
    if not report.ok():
        for bad in report.mismatches[:10]:
            print(json.dumps(bad), file=sys.stderr)
        raise VerificationFailure("encoding law mismatch")
    return EXIT_OK


def _params(args) -> dict:
    skip = {"command", "config", "func"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _resolve_late_n(args):
    """--N directly, or --M as the reveal time with N = n - M."""
    if getattr(args, "late_n", None) is not None:
        return args.late_n
    reveal = args.reveal_m
    if isinstance(reveal, list):
        return [args.n - big_m for big_m in reveal]
    return args.n - reveal


def _cmd_sweep_power(args, t0):
    rows = experiments.sweep_power(
        args.n, args.gamma, args.m, args.delta, args.delta_prime,
        args.alpha, args.reps, args.seed, threads=args.threads,
    )
    _write_with_manifest("sweep-power", _params(args), args.seed, args.out,
                         experiments.POWER_HEADER, rows, t0)
    return EXIT_OK


def _cmd_calibrate(args, t0):
    curve = stats.build_calibration_curve(
        args.n, args.m, args.delta, args.delta_prime, args.grid,
        args.reps, args.seed, threads=args.threads,
    )
    rows = experiments.calibration_rows(curve)
    _write_with_manifest("calibrate", _params(args), args.seed, args.out,
                         experiments.CALIBRATION_HEADER, rows, t0)
    return EXIT_OK


def _cmd_estimate(args, t0):
    curve_path = Path(args.curve)
    if not curve_path.exists():
        raise FileNotFoundError(f"calibration curve {curve_path} does not exist")
    # parameter problems exit 3; only curve problems below map to exit 6
    GrowthConfig(args.n, args.m, DeltaSchedule(args.delta, args.delta_prime, args.tau), args.seed)
    header, raw = experiments.read_csv(curve_path)
    try:
        curve = experiments.curve_from_rows(args.n, args.m, args.delta, args.delta_prime,
                                            header, raw)
        rows = experiments.estimator_rows(
            args.n, args.m, args.delta, args.delta_prime, args.tau, curve,
            args.reps, args.seed,
        )
    except ValueError as exc:
        raise SchemaError(str(exc)) from exc
    _write_with_manifest("estimate", _params(args), args.seed, args.out,
                         experiments.ESTIMATOR_HEADER, rows, t0)
    return EXIT_OK


def _cmd_var_s(args, t0):
    rows = experiments.var_s_rows(
        args.n, _resolve_late_n(args), args.m, args.delta, args.delta_prime,
        args.prefixes, args.continuations, args.seed,
    )
    _write_with_manifest("var-s", _params(args), args.seed, args.out,
                         experiments.VARS_HEADER, rows, t0)
    return EXIT_OK


def _cmd_dominance(args, t0):
    rows = experiments.dominance_rows(
        args.n, _resolve_late_n(args), args.m, args.delta, args.reps, args.seed,
        cap=args.cap, threads=args.threads,
    )
    _write_with_manifest("dominance", _params(args), args.seed, args.out,
                         experiments.DOMINANCE_HEADER, rows, t0)
    return EXIT_OK


def _cmd_bounded_diff(args, t0):
    result = stats.bounded_difference_check(
        args.n, _resolve_late_n(args), args.m, args.delta, args.delta_prime,
        args.reps, args.seed,
    )
    _summary("bounded-diff", t0, trials=result.trials,
             max_normalized_diff=result.max_normalized_diff, bound=result.bound,
             ok=result.ok())
    if not result.ok():
        raise VerificationFailure(
            f"normalized difference {result.max_normalized_diff} exceeds bound {result.bound}"
        )
    return EXIT_OK


_COMMANDS = {
    "generate": _cmd_generate,
    "verify-lr": _cmd_verify_lr,
    "verify-encoding": _cmd_verify_encoding,
    "sweep-power": _cmd_sweep_power,
    "calibrate": _cmd_calibrate,
    "estimate": _cmd_estimate,
    "var-s": _cmd_var_s,
    "dominance": _cmd_dominance,
    "bounded-diff": _cmd_bounded_diff,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        argv = _apply_config(argv)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PATH
    parser = build_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        return _COMMANDS[args.command](args, t0)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except VerificationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PATH
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS


if __name__ == "__main__":
    sys.exit(main())
