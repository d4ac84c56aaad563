"""Experiment drivers and their CSV serializations.

One function per experiment; each returns rows matching the fixed CSV
schemas below and is deterministic given (parameters, master seed).
"""

from __future__ import annotations

import csv
import math

import numpy as np

from . import _kernels, branching, stats
from .model import DeltaSchedule, GrowthConfig, grow
from .rng import derive_seed

POWER_HEADER = ["n", "m", "delta", "delta_prime", "gamma", "Delta", "alpha",
                "reps", "power", "ci_lo", "ci_hi"]
CALIBRATION_HEADER = ["tau_over_n", "mean", "sd", "reps"]
VARS_HEADER = ["n", "N", "prefix_id", "var_S", "cont_reps"]
DOMINANCE_HEADER = ["k", "ccdf_component", "ccdf_tree", "bound", "se_component", "se_tree"]
ESTIMATOR_HEADER = ["n", "tau", "tau_hat", "abs_err"]


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [row for row in reader]


def sweep_power(n_values, gammas, m, delta, delta_prime, alpha, reps, seed, threads=1):
    """power.csv rows: one per (n, gamma), thresholds calibrated per n."""
    rows = []
    arm = 0
    for n in n_values:
        thresholds = stats.calibrate_threshold(
            n, m, delta, alpha, reps, seed, base_index=arm * reps, threads=threads
        )
        arm += 1
        for gamma in gammas:
            tau = n - math.ceil(n**gamma)
            report = stats.estimate_power(
                n, m, delta, delta_prime, tau, thresholds, reps, seed, alpha,
                base_index=arm * reps, threads=threads,
            )
            arm += 1
            rows.append([
                n, m, delta, delta_prime, float(gamma), report.Delta, alpha,
                reps, report.power, report.ci[0], report.ci[1],
            ])
    return rows


def calibration_rows(curve: stats.CalibrationCurve):
    return [
        [tau / curve.n, mean, sd, curve.reps]
        for tau, mean, sd in zip(curve.taus, curve.means, curve.sds)
    ]


def curve_from_rows(n, m, delta, delta_prime, header, rows) -> stats.CalibrationCurve:
    if header != CALIBRATION_HEADER:
        raise ValueError(f"expected calibration columns {CALIBRATION_HEADER}, got {header}")
    if not rows:
        raise ValueError("calibration curve has no rows")
    return stats.CalibrationCurve(
        n=n, m=m, delta=delta, delta_prime=delta_prime,
        reps=int(rows[0][3]),
        taus=tuple(round(float(r[0]) * n) for r in rows),
        means=tuple(float(r[1]) for r in rows),
        sds=tuple(float(r[2]) for r in rows),
    )


def estimator_rows(n, m, delta, delta_prime, tau, curve, reps, seed):
    """estimator.csv rows: fresh graphs with a change at tau, inverted on the curve."""
    rows = []
    schedule = DeltaSchedule(delta, delta_prime, tau)
    for r in range(reps):
        graph = grow(GrowthConfig(n, m, schedule, derive_seed(seed, r)))
        tau_hat = stats.estimate_changepoint(graph, curve)
        rows.append([n, tau, tau_hat, abs(tau_hat - tau)])
    return rows


def var_s_rows(n, late_ns, m, delta, delta_prime, prefix_reps, cont_reps, seed):
    """varS.csv rows: one per (N, prefix)."""
    rows = []
    for j, late_n in enumerate(late_ns):
        variances = stats.variance_of_S(
            n, late_n, m, delta, delta_prime, prefix_reps, cont_reps,
            derive_seed(seed, j),
        )
        rows.extend(
            [n, late_n, pid, float(v), cont_reps] for pid, v in enumerate(variances)
        )
    return rows


def _ccdf_and_se(sizes: np.ndarray, ks) -> tuple[list[float], list[float]]:
    # censored observations (coded -1) exceeded the cap, hence any k here
    reps = sizes.shape[0]
    ccdf, se = [], []
    for k in ks:
        p = float(np.count_nonzero((sizes >= k) | (sizes < 0)) / reps)
        ccdf.append(p)
        se.append(math.sqrt(p * (1 - p) / reps))
    return ccdf, se


def dominance_rows(n, late_n, m, delta, reps, seed, cap=10_000, k_max=12, threads=1):
    """dominance.csv rows: empirical CCDFs of component size vs dominating tree size."""
    big_m = n - late_n
    prefix = grow(
        GrowthConfig(big_m, m, DeltaSchedule(delta, delta, big_m), derive_seed(seed, 0))
    )

    def comp_worker(base, count):
        return _kernels.sampled_component_sizes(
            prefix.targets, n, m, big_m, delta, delta, n, seed, count, 1 + base
        )

    def tree_worker(base, count):
        return _kernels.branching_tree_sizes(
            m, late_n, n, cap, seed, count, 1 + reps + base
        )

    comp_sizes = _run_batched(comp_worker, reps, threads)
    tree_sizes = _run_batched(tree_worker, reps, threads)
    ks = list(range(1, k_max + 1))
    comp_ccdf, comp_se = _ccdf_and_se(comp_sizes, ks)
    tree_ccdf, tree_se = _ccdf_and_se(tree_sizes, ks)
    return [
        [k, comp_ccdf[j], tree_ccdf[j], branching.tail_bound(k), comp_se[j], tree_se[j]]
        for j, k in enumerate(ks)
    ]


def _run_batched(worker, reps, threads):
    if threads <= 1 or reps < 2 * threads:
        return np.asarray(worker(0, reps))
    from concurrent.futures import ThreadPoolExecutor

    bounds = np.linspace(0, reps, threads + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(
            lambda j: worker(int(bounds[j]), int(bounds[j + 1] - bounds[j])),
            range(threads),
        )
        return np.concatenate(list(parts))


def fit_log_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=np.float64))
    ly = np.log(np.asarray(ys, dtype=np.float64))
    return float(np.polyfit(lx, ly, 1)[0])
