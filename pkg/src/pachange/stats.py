"""Statistical layer: minimum-degree test, power/TV estimation, calibration
estimator, variance scaling of the likelihood-ratio core, and the
single-entry resampling check.

Every Monte-Carlo routine takes a 64-bit master seed; replicate r of arm a
runs on the stream seeded with mix64(seed ^ (a * stride + r)), so results
are independent of threading and bit-reproducible.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .components import s_from_continuation, x_max
from .encoding import draw_randomness, resample_one
from .model import DeltaSchedule, EvolvingGraph, GrowthConfig, grow
from .rng import SplitMix64, derive_seed


def min_degree_statistic(graph: EvolvingGraph, m: int | None = None) -> int:
    """Number of vertices whose final degree equals m."""
    if m is None:
        m = graph.m
    return int(np.count_nonzero(graph.degrees[1:] == m))


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class PowerReport:
    n: int
    m: int
    delta: float
    delta_prime: float
    Delta: int
    gamma: float
    alpha: float
    thresholds: tuple[int, int]
    power: float
    ci: tuple[float, float]
    reps: int


@dataclass(frozen=True)
class CalibrationCurve:
    """Monte-Carlo mean/sd of the minimum-degree statistic along a tau/n grid."""

    n: int
    m: int
    delta: float
    delta_prime: float
    reps: int
    taus: tuple[int, ...]
    means: tuple[float, ...]
    sds: tuple[float, ...]

    def grid(self) -> tuple[float, ...]:
        return tuple(t / self.n for t in self.taus)


def _batched_counts(n, m, delta, delta_prime, tau, seed, reps, base_index, threads):
    """min-degree counts for replicate indices [base_index, base_index + reps)."""
    if threads <= 1 or reps < 2 * threads:
        return _kernels.min_degree_counts(n, m, delta, delta_prime, tau, seed, reps, base_index)
    bounds = np.linspace(0, reps, threads + 1, dtype=np.int64)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(
            lambda j: _kernels.min_degree_counts(
                n, m, delta, delta_prime, tau,
                seed, int(bounds[j + 1] - bounds[j]), base_index + int(bounds[j]),
            ),
            range(threads),
        )
        return np.concatenate(list(parts))


def null_statistic_samples(n, m, delta, reps, seed, base_index=0, threads=1) -> np.ndarray:
    return _batched_counts(n, m, delta, delta, n, seed, reps, base_index, threads)


def alt_statistic_samples(n, m, delta, delta_prime, tau, reps, seed, base_index=0, threads=1) -> np.ndarray:
    return _batched_counts(n, m, delta, delta_prime, tau, seed, reps, base_index, threads)


def calibrate_threshold(
    n: int, m: int, delta: float, alpha: float, reps: int, seed: int,
    base_index: int = 0, threads: int = 1,
) -> tuple[int, int]:
    """Two-sided empirical thresholds (lo, hi): reject outside [lo, hi].

    lo and hi are the alpha/2 and 1-alpha/2 order statistics of the
    statistic under the no-change model, taken conservatively (acceptance
    region rounds outward).
    """
    if reps < 100:
        raise ValueError("need at least 100 calibration replicates")
    if not (0 < alpha < 1):
        raise ValueError("alpha must lie in (0, 1)")
    samples = null_statistic_samples(n, m, delta, reps, seed, base_index, threads)
    lo = int(np.quantile(samples, alpha / 2, method="lower"))
    hi = int(np.quantile(samples, 1 - alpha / 2, method="higher"))
    return lo, hi


def estimate_power(
    n: int, m: int, delta: float, delta_prime: float, tau: int,
    thresholds: tuple[int, int], reps: int, seed: int, alpha: float,
    base_index: int = 0, threads: int = 1,
) -> PowerReport:
    """Rejection rate of the calibrated two-sided test under the given change."""
    lo, hi = thresholds
    samples = alt_statistic_samples(n, m, delta, delta_prime, tau, reps, seed, base_index, threads)
    rejected = int(np.count_nonzero((samples < lo) | (samples > hi)))
    delta_horizon = n - tau
    gamma = math.log(delta_horizon) / math.log(n) if delta_horizon > 0 else 0.0
    return PowerReport(
        n=n, m=m, delta=delta, delta_prime=delta_prime, Delta=delta_horizon,
        gamma=gamma, alpha=alpha, thresholds=(lo, hi),
        power=rejected / reps, ci=wilson_interval(rejected, reps), reps=reps,
    )


def tv_lower_bound(samples_h0, samples_h1) -> float:
    """Kolmogorov distance of the empirical CDFs: a conservative TV lower bound."""
    a = np.sort(np.asarray(samples_h0, dtype=np.float64))
    b = np.sort(np.asarray(samples_h1, dtype=np.float64))
    if a.size == 0 or b.size == 0:
        raise ValueError("both sample sets must be nonempty")
    values = np.union1d(a, b)
    cdf_a = np.searchsorted(a, values, side="right") / a.size
    cdf_b = np.searchsorted(b, values, side="right") / b.size
    return float(np.max(np.abs(cdf_a - cdf_b)))


def build_calibration_curve(
    n: int, m: int, delta: float, delta_prime: float,
    grid, reps: int, seed: int, threads: int = 1,
) -> CalibrationCurve:
    """Mean/sd of the statistic under a change at each tau/n grid point.

    The grid must be strictly increasing inside (0, 1]; the resulting means
    must be monotone up to 3-standard-error noise, otherwise the shift pair
    is too weak to invert and this raises.
    """
    grid = tuple(float(g) for g in grid)
    if reps < 100:
        raise ValueError("need at least 100 replicates per grid point")
    if not grid or any(not (0 < g <= 1) for g in grid) or list(grid) != sorted(set(grid)):
        raise ValueError("grid must be strictly increasing within (0, 1]")
    taus, means, sds = [], [], []
    for j, g in enumerate(grid):
        tau = max(2, min(n, round(g * n)))
        samples = _batched_counts(n, m, delta, delta_prime, tau, seed, reps, j * reps, threads)
        taus.append(tau)
        means.append(float(np.mean(samples)))
        sds.append(float(np.std(samples, ddof=1)))
    direction = 1.0 if means[-1] >= means[0] else -1.0
    for j in range(len(grid) - 1):
        se_pair = math.sqrt((sds[j] ** 2 + sds[j + 1] ** 2) / reps)
        if direction * (means[j + 1] - means[j]) < -3 * se_pair:
            raise ValueError(
                f"calibration means not monotone at grid point {grid[j + 1]}: "
                f"{means[j]} -> {means[j + 1]} against trend (3*SE = {3 * se_pair:.3f})"
            )
    return CalibrationCurve(
        n=n, m=m, delta=delta, delta_prime=delta_prime, reps=reps,
        taus=tuple(taus), means=tuple(means), sds=tuple(sds),
    )


def invert_calibration(curve: CalibrationCurve, observed: float) -> int:
    """Piecewise-linear inverse of the curve's mean, clamped to the grid range.

    Ties break toward larger tau: the rightmost segment containing the
    observed value wins, and a flat segment maps to its right endpoint.
    """
    observed = float(observed)
    taus = np.array(curve.taus, dtype=np.float64)
    means = np.array(curve.means, dtype=np.float64)
    if means[-1] < means[0]:  # make means increasing in tau
        means = -means
        observed = -observed
    if observed <= means[0]:
        return int(taus[0])
    if observed >= means[-1]:
        return int(taus[-1])
    for j in range(len(taus) - 2, -1, -1):
        lo, hi = means[j], means[j + 1]
        if lo <= observed <= hi:
            frac = 1.0 if hi == lo else (observed - lo) / (hi - lo)
            return int(round(taus[j] + frac * (taus[j + 1] - taus[j])))
    # non-monotone wiggle within noise: nearest grid point, larger tau on ties
    gaps = np.abs(means - observed)
    return int(taus[np.max(np.nonzero(gaps == gaps.min())[0])])


def estimate_changepoint(graph: EvolvingGraph, curve: CalibrationCurve) -> int:
    """Invert the calibration curve at the observed statistic, ties toward larger tau."""
    if graph.n != curve.n or graph.m != curve.m:
        raise ValueError("calibration curve built for different (n, m)")
    sched = graph.schedule
    if sched.delta != curve.delta or (
        sched.tau < graph.n and sched.delta_prime != curve.delta_prime
    ):
        raise ValueError("calibration curve built for different shift pair")
    return invert_calibration(curve, min_degree_statistic(graph))


def variance_of_S(
    n: int, late_n: int, m: int, delta: float, delta_prime: float,
    prefix_reps: int, cont_reps: int, seed: int,
) -> np.ndarray:
    """Per-prefix empirical variance of S over conditional continuations.

    Each prefix is grown once without a change and frozen; continuations
    resample the suffix under the no-change law, and S is evaluated for the
    one-step change pair (delta, delta_prime).
    """
    if not (1 <= late_n < n / (2 * m)):
        raise ValueError("need 1 <= N < n/(2m) for the dominance regime")
    big_m = n - late_n
    variances = np.empty(prefix_reps, dtype=np.float64)
    for p in range(prefix_reps):
        prefix = grow(
            GrowthConfig(big_m, m, DeltaSchedule(delta, delta, big_m), derive_seed(seed, p))
        )
        prefix_deg = prefix.degrees
        values = np.empty(cont_reps, dtype=np.float64)
        for c in range(cont_reps):
            cont = _kernels.continue_growth(
                prefix.targets, n, m, big_m, delta, delta, n,
                derive_seed(seed, prefix_reps + p * cont_reps + c),
            )
            values[c] = s_from_continuation(prefix_deg, cont, n, m, big_m, delta, delta_prime)
        variances[p] = float(np.var(values, ddof=1))
    return variances


@dataclass(frozen=True)
class BoundedDifferenceResult:
    trials: int
    max_normalized_diff: float
    bound: float

    def ok(self) -> bool:
        return self.max_normalized_diff <= self.bound


def bounded_difference_check(
    n: int, late_n: int, m: int, delta: float, delta_prime: float,
    reps: int, seed: int,
) -> BoundedDifferenceResult:
    """Resample one encoded entry at a time and track the change in S.

    Returns the max over trials of |S - S~| * N / (|C(v_t)| + |C~(v_t)|),
    which stays below 2 * max(1, ((m+delta')/(m+delta))^m).  Also verifies,
    exactly and in every trial, that components disjoint from the touched
    ones are identical in both decodes: same vertex sets, same internal
    precedence edges, same per-vertex anchor counts.  (Anchor *identities*
    of untouched vertices can legitimately move between early vertices: a
    later step that indexes the edge slot of the resampled record follows
    its target.)
    """
    if not (1 <= late_n < n / (2 * m)):
        raise ValueError("need 1 <= N < n/(2m) for the dominance regime")
    big_m = n - late_n
    schedule = DeltaSchedule(delta, delta, n)
    prefix = grow(
        GrowthConfig(big_m, m, DeltaSchedule(delta, delta, big_m), derive_seed(seed, 0))
    )
    prefix_deg = prefix.degrees

    max_norm = 0.0
    for r in range(reps):
        u = draw_randomness(big_m, GrowthConfig(n, m, schedule, derive_seed(seed, 1 + 3 * r)))
        picker = SplitMix64(derive_seed(seed, 2 + 3 * r))
        t = big_m + 1 + picker.bounded(late_n)
        i = 1 + picker.bounded(m)
        u2 = resample_one(u, (t, i), derive_seed(seed, 3 + 3 * r))
        cont = _kernels.decode_continuation(
            prefix.targets, n, m, big_m, delta, delta, n, u.bern, u.wvert, u.yedge
        )
        cont2 = _kernels.decode_continuation(
            prefix.targets, n, m, big_m, delta, delta, n, u2.bern, u2.wvert, u2.yedge
        )
        labels = np.asarray(_kernels.late_component_labels(cont, n, m, big_m))
        labels2 = np.asarray(_kernels.late_component_labels(cont2, n, m, big_m))
        _assert_untouched_components_equal(cont, cont2, labels, labels2, t, n, m, big_m)
        s1 = s_from_continuation(prefix_deg, cont, n, m, big_m, delta, delta_prime)
        s2 = s_from_continuation(prefix_deg, cont2, n, m, big_m, delta, delta_prime)
        size1 = int(np.count_nonzero(labels == labels[t - big_m - 1]))
        size2 = int(np.count_nonzero(labels2 == labels2[t - big_m - 1]))
        norm = abs(s1 - s2) * late_n / (size1 + size2)
        if norm > max_norm:
            max_norm = norm
    return BoundedDifferenceResult(
        trials=reps, max_normalized_diff=max_norm, bound=2.0 * x_max(m, delta, delta_prime)
    )


def _assert_untouched_components_equal(cont, cont2, labels, labels2, t, n, m, big_m):
    # Untouched vertices never attach to touched ones (that would merge the
    # components), so equality of their internal targets and anchor counts
    # pins down the whole untouched part of both forests.
    idx = t - big_m - 1
    touched = (labels == labels[idx]) | (labels2 == labels2[idx])
    a = np.asarray(cont).reshape(-1, m)[~touched]
    b = np.asarray(cont2).reshape(-1, m)[~touched]
    late_a = a > big_m
    late_b = b > big_m
    if not np.array_equal(late_a, late_b):
        raise RuntimeError(
            "resampling one entry altered a disjoint component's anchor counts"
        )
    if not np.array_equal(a[late_a], b[late_b]):
        raise RuntimeError(
            "resampling one entry altered a disjoint component's internal edges"
        )
