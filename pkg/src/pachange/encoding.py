"""Independent-triple encoding of a growth suffix.

Conditional on the history up to time M, the remaining records (t, i) for
t in [M+1, n] are generated from independent triples U = (I, W, Y):

  * I ~ Bernoulli(p) with p = (t-1)(d + kappa) / ((t-1) d + 2m(t-2) + i - 1);
  * W uniform on [1, t-1];
  * Y uniform on [1, K] with K = (t-1)(m - kappa) + m(t-3) + i - 1.

If I = 1 the record target is vertex W.  Otherwise Y indexes a fixed
enumeration of a directed-edge multiset of size K: the first (t-1)(m-kappa)
slots list each arrived vertex (m-kappa) times in arrival order (slot r maps
to vertex 1 + (r-1) // (m-kappa)); the remaining slots map to the targets of
earlier records in lexicographic order.  This mixture reproduces the
sequential attachment law exactly (the oracle module verifies the identity
by exhaustive enumeration); when K = 0 the edge branch has probability 0 and
Y is stored as 0.

Resampling a single entry and re-decoding changes the graph only inside the
late component of the entry's arrival vertex, which is what makes the
single-coordinate variance experiments in ``stats`` tick.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _kernels
from .model import DeltaSchedule, EvolvingGraph, GrowthConfig, kappa
from .rng import SplitMix64


def k_size(t: int, i: int, m: int, delta) -> int:
    """Edge-multiset size K for step (t, i) under shift ``delta``."""
    return (t - 1) * (m - kappa(delta)) + m * (t - 3) + i - 1


def bernoulli_parameter(t: int, i: int, m: int, delta):
    """Uniform-vertex branch weight; exact Fraction when ``delta`` is one.

    Equals (t-1)(delta+kappa) / ((t-1)delta + 2m(t-2) + i - 1); the
    denominator is the attachment normalizer, so the complementary weight is
    exactly K / normalizer.
    """
    kap = kappa(delta)
    num = (t - 1) * (delta + kap)
    den = (t - 1) * delta + (2 * m * (t - 2) + i - 1)
    p = num / den
    if isinstance(p, Fraction):
        if not (0 <= p <= 1):
            raise AssertionError(f"mixture weight {p} outside [0,1] at ({t},{i})")
    elif not (-1e-12 <= p <= 1 + 1e-12):
        raise AssertionError(f"mixture weight {p} outside [0,1] at ({t},{i})")
    return p


@dataclass(frozen=True)
class EncodedRandomness:
    """Triples (I, W, Y) for all steps (t, i) with t in [M+1, n], lex order."""

    n: int
    m: int
    M: int
    schedule: DeltaSchedule
    bern: np.ndarray  # uint8
    wvert: np.ndarray  # int64
    yedge: np.ndarray  # int64

    def index(self, t: int, i: int) -> int:
        if not (self.M + 1 <= t <= self.n and 1 <= i <= self.m):
            raise IndexError(f"entry ({t},{i}) outside the encoded index set")
        return (t - self.M - 1) * self.m + (i - 1)

    def entry(self, t: int, i: int) -> tuple[int, int, int]:
        j = self.index(t, i)
        return int(self.bern[j]), int(self.wvert[j]), int(self.yedge[j])

    def __len__(self):
        return self.bern.shape[0]


def draw_randomness(M: int, config: GrowthConfig) -> EncodedRandomness:
    """Independent triples for all steps past time M under ``config``'s schedule."""
    if not (2 <= M < config.n):
        raise ValueError(f"M={M} must satisfy 2 <= M < n={config.n}")
    s = config.schedule
    _assert_weights_in_unit_interval(config.n, config.m, M, s)
    bern, wvert, yedge = _kernels.draw_u_arrays(
        config.n, config.m, M, s.delta, s.delta_prime, s.tau, config.seed
    )
    return EncodedRandomness(config.n, config.m, M, s, bern, wvert, yedge)


def _assert_weights_in_unit_interval(n: int, m: int, M: int, s: DeltaSchedule) -> None:
    # cannot trip for t >= 3 under validated shifts; guards the mixture anyway
    ts = np.arange(M + 1, n + 1, dtype=np.float64)
    dt = np.where(ts <= s.tau, s.delta, s.delta_prime)
    kap = np.ceil(np.maximum(-dt, 0.0))
    for i in range(1, m + 1):
        p = (ts - 1) * (dt + kap) / ((ts - 1) * dt + (2 * m * (ts - 2) + i - 1))
        if np.any((p < -1e-12) | (p > 1 + 1e-12)):
            bad = int(ts[np.argmax((p < -1e-12) | (p > 1 + 1e-12))])
            raise AssertionError(f"mixture weight outside [0,1] at t={bad}, i={i}")


def resample_one(randomness: EncodedRandomness, index: tuple[int, int], seed: int) -> EncodedRandomness:
    """Copy with only entry (t, i) redrawn from its marginal."""
    t, i = index
    j = randomness.index(t, i)
    m, sched = randomness.m, randomness.schedule
    delta_t = float(sched.delta_at(t))
    stream = SplitMix64(seed)
    # same float expressions as the kernels, so the marginal matches exactly
    p = bernoulli_parameter(t, i, m, delta_t)
    new_i = 1 if stream.next_float() < p else 0
    new_w = 1 + stream.bounded(t - 1)
    k_total = k_size(t, i, m, delta_t)
    new_y = 1 + stream.bounded(k_total) if k_total > 0 else 0
    bern = randomness.bern.copy()
    wvert = randomness.wvert.copy()
    yedge = randomness.yedge.copy()
    bern[j], wvert[j], yedge[j] = new_i, new_w, new_y
    return EncodedRandomness(
        randomness.n, randomness.m, randomness.M, sched, bern, wvert, yedge
    )


def decode(
    prefix: EvolvingGraph, randomness: EncodedRandomness, schedule: DeltaSchedule
) -> EvolvingGraph:
    """Deterministically extend ``prefix`` to time n using the triples.

    With randomness drawn by :func:`draw_randomness`, the decoded graph has
    exactly the law of sequential growth continuing the prefix.
    """
    n, m, M = randomness.n, randomness.m, randomness.M
    if prefix.n != M or prefix.m != m:
        raise ValueError(
            f"prefix (n={prefix.n}, m={prefix.m}) inconsistent with randomness (M={M}, m={m})"
        )
    _validate_ranges(randomness, schedule)
    cont = _kernels.decode_continuation(
        prefix.targets,
        n,
        m,
        M,
        schedule.delta,
        schedule.delta_prime,
        schedule.tau,
        randomness.bern,
        randomness.wvert,
        randomness.yedge,
    )
    targets = np.concatenate([prefix.targets, cont])
    return EvolvingGraph(n, m, targets, schedule, prefix.seed)


def _validate_ranges(randomness: EncodedRandomness, schedule: DeltaSchedule) -> None:
    n, m, M = randomness.n, randomness.m, randomness.M
    ts = np.repeat(np.arange(M + 1, n + 1, dtype=np.int64), m)
    iis = np.tile(np.arange(1, m + 1, dtype=np.int64), n - M)
    kap = np.array([kappa(schedule.delta_at(int(t))) for t in range(M + 1, n + 1)])
    k_tot = (ts - 1) * (m - np.repeat(kap, m)) + m * (ts - 3) + iis - 1
    used = randomness.bern == 0
    if np.any(used & (randomness.yedge > k_tot)):
        bad = int(np.argmax(used & (randomness.yedge > k_tot)))
        raise ValueError(
            f"edge index Y={int(randomness.yedge[bad])} exceeds multiset size "
            f"{int(k_tot[bad])} at step (t={int(ts[bad])}, i={int(iis[bad])})"
        )
    if np.any(randomness.bern.astype(bool) & ((randomness.wvert < 1) | (randomness.wvert > ts - 1))):
        raise ValueError("vertex index W outside [1, t-1]")


def exact_bernoulli_parameter(t: int, i: int, m: int, delta) -> Fraction:
    """Rational mixture weight used by the enumeration oracle."""
    return bernoulli_parameter(t, i, m, Fraction(delta))
