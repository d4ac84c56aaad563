"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Monte-Carlo experiments write their CSV outputs under results/acceptance/ so
the figure tooling can consume real data.  Run with ``pytest -s`` (or read
test_output.txt) to see the per-criterion lines.
"""

import math
from fractions import Fraction as F
from pathlib import Path

import numpy as np
import pytest

from pachange import _kernels, experiments, stats
from pachange.components import c1, likelihood_ratio, s_from_continuation, s_statistic
from pachange.model import DeltaSchedule, EvolvingGraph, GrowthConfig, grow
from pachange.oracle import conditional_snapshot_law
from pachange.rng import SplitMix64, derive_seed
from pachange.verification import verify_encoding_grid, verify_lr_grid

RESULTS = Path(__file__).resolve().parent.parent / "results" / "acceptance"
THREADS = 4


def _report(criterion: int, ok: bool, detail: str):
    print(f"\nACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {criterion}: {detail}"


@pytest.fixture(scope="module")
def results_dir():
    RESULTS.mkdir(parents=True, exist_ok=True)
    return RESULTS


def test_criterion_01_encoding_exactness():
    report = verify_encoding_grid(max_t=6, max_m=2)
    _report(1, report.ok() and report.checked > 10_000,
            f"decode law == sequential law on {report.checked} prefix/step cases, "
            f"{len(report.mismatches)} mismatches")


def test_criterion_02_lr_oracle_equivalence():
    report = verify_lr_grid(ns=(4, 5, 6), ms=(1, 2))
    _report(2, report.ok() and report.checked > 10_000,
            f"closed-form ratio == enumeration on {report.checked} snapshot classes, "
            f"{len(report.mismatches)} mismatches")


def test_criterion_03_martingale_property():
    # exact: null-conditional expectation of the closed-form ratio is exactly 1
    exact_ok = True
    for n, m in ((5, 1), (5, 2), (6, 1)):
        prefix = grow(GrowthConfig(n - 2, m, DeltaSchedule(0.0, 0.0, n - 2), 17))
        exact_prefix = EvolvingGraph(n - 2, m, prefix.targets, DeltaSchedule(F(0), F(0), n - 2))
        null = conditional_snapshot_law(exact_prefix, n, DeltaSchedule(F(0), F(0), n))
        mean_l = sum(
            p * likelihood_ratio(null.representatives[k], n - 2, F(0), F(1), exact=True).L
            for k, p in null.probs.items()
        )
        exact_ok &= mean_l == 1

    # Monte-Carlo: mean of L over continuations at n=2000, N=50
    n, m, late_n, d, dp = 2000, 2, 50, 0.0, 2.0
    big_m = n - late_n
    prefix = grow(GrowthConfig(big_m, m, DeltaSchedule(d, d, big_m), 42))
    pd = prefix.degrees
    c = c1(n, m, d, dp)
    vals = np.array([
        c * s_from_continuation(
            pd,
            _kernels.continue_growth(prefix.targets, n, m, big_m, d, d, n, derive_seed(7, r)),
            n, m, big_m, d, dp,
        )
        for r in range(2000)
    ])
    se = vals.std(ddof=1) / math.sqrt(len(vals))
    dev = abs(vals.mean() - 1)
    _report(3, exact_ok and dev <= 3 * se,
            f"exact expectation 1 on oracle instances; MC mean {vals.mean():.5f} "
            f"within {dev / se:.2f} SE of 1 (3 SE allowed)")


def test_criterion_04_null_identity():
    rng = SplitMix64(2024)
    ok = True
    for _ in range(1000):
        n = 5 + rng.bounded(156)
        m = 1 + rng.bounded(3)
        delta = F(-m) + F(1 + rng.bounded(4 * (m + 3) - 1), 4)
        late_n = 1 + rng.bounded(min(20, n - 2))
        big_m = n - late_n
        g = grow(GrowthConfig(n, m, DeltaSchedule(float(delta), float(delta), n), rng.next_u64()))
        s = s_statistic(g, big_m, delta, delta, exact=True)
        rep = likelihood_ratio(g, big_m, delta, delta, exact=True)
        ok &= s == 1 and rep.L == 1 and rep.C1 == 1
        if not ok:
            break
    _report(4, ok, "S == 1 and L == 1 exactly on 1000 random no-change configs")


def test_criterion_05_mean_gap_scaling(results_dir):
    ns = [10_000, 40_000, 160_000]
    reps, gamma = 800, 0.6
    gaps, sds = [], []
    for j, n in enumerate(ns):
        tau = n - math.ceil(n**gamma)
        h0 = stats.null_statistic_samples(n, 2, 0.0, reps, seed=100 + j, threads=THREADS)
        h1 = stats.alt_statistic_samples(n, 2, 0.0, 2.0, tau, reps, seed=200 + j, threads=THREADS)
        gaps.append(abs(float(h1.mean()) - float(h0.mean())))
        sds.append(float(h0.std(ddof=1)))
    gap_exp = experiments.fit_log_slope(ns, gaps)
    sd_exp = experiments.fit_log_slope(ns, sds)
    _report(5, 0.45 <= gap_exp <= 0.75 and 0.35 <= sd_exp <= 0.65,
            f"mean-gap exponent {gap_exp:.3f} in [0.45, 0.75]; "
            f"sd exponent {sd_exp:.3f} in [0.35, 0.65] (gamma = {gamma}, reps = {reps})")


def test_criterion_06_phase_transition(results_dir):
    n, m, alpha, reps = 100_000, 2, 0.05, 400
    thr = stats.calibrate_threshold(n, m, 0.0, alpha, reps, seed=300, threads=THREADS)
    null_large = stats.null_statistic_samples(n, m, 0.0, reps, seed=300, threads=THREADS)

    rows, power, samples = [], {}, {}
    for arm, gamma in enumerate((0.25, 0.5, 0.75)):
        tau = n - math.ceil(n**gamma)
        rep = stats.estimate_power(n, m, 0.0, 2.0, tau, thr, reps, seed=301 + arm,
                                   alpha=alpha, threads=THREADS)
        samples[gamma] = stats.alt_statistic_samples(n, m, 0.0, 2.0, tau, reps,
                                                     seed=301 + arm, threads=THREADS)
        power[gamma] = rep.power
        rows.append([n, m, 0.0, 2.0, gamma, rep.Delta, alpha, reps, rep.power,
                     rep.ci[0], rep.ci[1]])

    # smaller instance for the TV monotonicity check at gamma = 0.25
    nn = 10_000
    thr_s = stats.calibrate_threshold(nn, m, 0.0, alpha, reps, seed=400, threads=THREADS)
    null_small = stats.null_statistic_samples(nn, m, 0.0, reps, seed=400, threads=THREADS)
    tau_s = nn - math.ceil(nn**0.25)
    small = stats.alt_statistic_samples(nn, m, 0.0, 2.0, tau_s, reps, seed=401, threads=THREADS)
    rejected = int(np.count_nonzero((small < thr_s[0]) | (small > thr_s[1])))
    ci = stats.wilson_interval(rejected, reps)
    rows.append([nn, m, 0.0, 2.0, 0.25, nn - tau_s, alpha, reps, rejected / reps,
                 ci[0], ci[1]])
    experiments.write_csv(results_dir / "power.csv", experiments.POWER_HEADER, rows)

    tv75 = stats.tv_lower_bound(null_large, samples[0.75])
    tv25_large = stats.tv_lower_bound(null_large, samples[0.25])
    tv25_small = stats.tv_lower_bound(null_small, small)
    # two-sample DKW slack at 95% for the within-CI monotonicity comparison
    slack = 2 * math.sqrt(math.log(2 / 0.05) / (2 * reps))
    ok = (power[0.75] >= 0.9 and power[0.25] <= 0.15
          and tv25_large <= tv25_small + slack and tv75 >= 0.8)
    _report(6, ok,
            f"power(0.75) = {power[0.75]:.3f} >= 0.9; power(0.25) = {power[0.25]:.3f} <= 0.15; "
            f"tv(0.25): {tv25_small:.3f} (n=1e4) -> {tv25_large:.3f} (n=1e5) monotone within "
            f"{slack:.3f}; tv(0.75) = {tv75:.3f}")


def test_criterion_07_variance_scaling(results_dir):
    n, m = 100_000, 1
    late_ns = [250, 500, 1000, 2000]
    rows = experiments.var_s_rows(n, late_ns, m, 0.0, 2.0, prefix_reps=20,
                                  cont_reps=500, seed=1000)
    experiments.write_csv(results_dir / "varS.csv", experiments.VARS_HEADER, rows)
    means = [np.mean([r[3] for r in rows if r[1] == late_n]) for late_n in late_ns]
    slope = experiments.fit_log_slope(late_ns, means)
    _report(7, -1.3 <= slope <= -0.7,
            f"log Var[S] vs log N slope {slope:.3f} in [-1.3, -0.7] "
            f"(20 prefixes x 500 continuations)")


def test_criterion_08_dominance_and_tails(results_dir):
    n, late_n, reps = 100_000, 1000, 100_000
    ok_all, details = True, []
    for m in (1, 2):
        rows = experiments.dominance_rows(n, late_n, m, 0.0, reps=reps, seed=800 + m,
                                          threads=THREADS)
        if m == 2:
            experiments.write_csv(results_dir / "dominance.csv",
                                  experiments.DOMINANCE_HEADER, rows)
        dom = all(r[1] <= r[2] + 2 * math.sqrt(r[4] ** 2 + r[5] ** 2)
                  for r in rows if r[0] <= 10)
        tail = all(r[2] <= r[3] + 3 * r[5] for r in rows if 2 <= r[0] <= 10)
        ok_all &= dom and tail
        details.append(f"m={m}: dominance {dom}, tail {tail}")
    _report(8, ok_all, f"{'; '.join(details)} ({reps} samples each)")


def test_criterion_09_bounded_differences():
    res = stats.bounded_difference_check(20_000, 1000, 2, 0.0, 1.0, reps=10_000, seed=5)
    headroom = res.max_normalized_diff / res.bound
    _report(9, res.ok(),
            f"untouched components identical in all {res.trials} trials; "
            f"max |S - S~| N / (|C| + |C~|) = {res.max_normalized_diff:.4f} "
            f"<= 2 X_max = {res.bound:.2f} (ratio {headroom:.3f})")


def test_criterion_10_estimator_rate(results_dir):
    grid = [0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
    medians, all_rows = {}, []
    for j, n in enumerate((10_000, 40_000, 160_000)):
        curve = stats.build_calibration_curve(n, 2, 0.0, 2.0, grid, reps=200,
                                              seed=500 + j, threads=THREADS)
        experiments.write_csv(results_dir / f"calibration_n{n}.csv",
                              experiments.CALIBRATION_HEADER,
                              experiments.calibration_rows(curve))
        rows = experiments.estimator_rows(n, 2, 0.0, 2.0, n // 2, curve, reps=100,
                                          seed=600 + j)
        all_rows.extend(rows)
        medians[n] = float(np.median([r[3] for r in rows])) / math.sqrt(n)
    experiments.write_csv(results_dir / "estimator.csv", experiments.ESTIMATOR_HEADER,
                          all_rows)
    ratio = max(medians.values()) / min(medians.values())
    detail = ", ".join(f"n={n}: {v:.2f}" for n, v in medians.items())
    _report(10, ratio <= 3.0,
            f"median |tau_hat - tau|/sqrt(n) stable: {detail}; max/min = {ratio:.2f} <= 3")


def test_criterion_11_second_moment_stability():
    m = 2
    means = {}
    for j, n in enumerate((10_000, 100_000)):
        late_n = round(10 * math.sqrt(n))
        big_m = n - late_n
        prefix = grow(GrowthConfig(big_m, m, DeltaSchedule(0.0, 0.0, big_m),
                                   derive_seed(700 + j, 0)))
        sizes = _kernels.sampled_component_sizes(
            prefix.targets, n, m, big_m, 0.0, 0.0, n, 700 + j, 50_000, 1
        )
        means[n] = float(np.mean(sizes.astype(np.float64) ** 2))
    ratio = max(means.values()) / min(means.values())
    detail = ", ".join(f"n={n}: {v:.3f}" for n, v in means.items())
    _report(11, ratio <= 2.0,
            f"mean |C(v)|^2 at N = 10 sqrt(n): {detail}; ratio {ratio:.3f} <= 2")
