from fractions import Fraction as F

import numpy as np
import pytest

from pachange.encoding import (
    bernoulli_parameter,
    decode,
    draw_randomness,
    exact_bernoulli_parameter,
    k_size,
    resample_one,
)
from pachange.model import DeltaSchedule, GrowthConfig, grow

from conftest import empty_prefix


def test_k_size_examples():
    assert k_size(5, 2, 2, 0.0) == 13  # (t-1)(m-k) + m(t-3) + i-1 = 8 + 4 + 1
    assert k_size(3, 1, 1, 0.0) == 2
    assert k_size(3, 1, 1, -0.5) == 0  # kappa = m = 1


def test_bernoulli_parameter_examples():
    # m=1, delta=-0.5, t=3: kappa=1, p = 2*0.5 / (2*(-0.5) + 2 + 0) = 1
    assert exact_bernoulli_parameter(3, 1, 1, F(-1, 2)) == 1
    assert exact_bernoulli_parameter(3, 1, 2, F(1)) == F(1, 3)
    # delta = 0 gives p = 0: the uniform branch is never taken
    assert bernoulli_parameter(10, 1, 2, 0.0) == 0.0


def test_draw_randomness_ranges_and_zero_delta():
    cfg = GrowthConfig(30, 2, DeltaSchedule(0.0, 0.0, 30), 5)
    u = draw_randomness(10, cfg)
    assert len(u) == 2 * 20
    assert not u.bern.any()  # p = 0 throughout when delta = 0
    for t in (11, 20, 30):
        for i in (1, 2):
            _, w, y = u.entry(t, i)
            assert 1 <= w <= t - 1
            assert 1 <= y <= k_size(t, i, 2, 0.0)


def test_draw_randomness_forced_uniform_branch():
    # m=1, delta=-0.5: kappa=1 kills the edge multiset at (3,1); p=1 there
    cfg = GrowthConfig(3, 1, DeltaSchedule(-0.5, -0.5, 3), 123)
    u = draw_randomness(2, cfg)
    b, w, y = u.entry(3, 1)
    assert b == 1 and y == 0 and w in (1, 2)


def test_decode_determinism_and_forced_vertex():
    cfg = GrowthConfig(20, 2, DeltaSchedule(1.0, -0.5, 15), 9)
    prefix = grow(GrowthConfig(8, 2, DeltaSchedule(1.0, 1.0, 8), 4))
    u = draw_randomness(8, cfg)
    g1 = decode(prefix, u, cfg.schedule)
    g2 = decode(prefix, u, cfg.schedule)
    assert g1 == g2
    # force I=1, W=3 at some entry: the decoded target is vertex 3 regardless
    bern = u.bern.copy()
    wv = u.wvert.copy()
    j = u.index(12, 1)
    bern[j], wv[j] = 1, 3
    forced = decode(prefix, type(u)(u.n, u.m, u.M, u.schedule, bern, wv, u.yedge), cfg.schedule)
    assert forced.record(12, 1).target == 3


def test_decode_rejects_bad_y():
    cfg = GrowthConfig(10, 1, DeltaSchedule(0.0, 0.0, 10), 9)
    prefix = grow(GrowthConfig(5, 1, DeltaSchedule(0.0, 0.0, 5), 4))
    u = draw_randomness(5, cfg)
    y = u.yedge.copy()
    j = u.index(7, 1)
    y[j] = k_size(7, 1, 1, 0.0) + 1
    u2 = type(u)(u.n, u.m, u.M, u.schedule, u.bern, u.wvert, y)
    with pytest.raises(ValueError, match="exceeds"):
        decode(prefix, u2, cfg.schedule)


def test_decode_exhaustive_tiny_law():
    # m=1, delta=0, M=2, n=3: K=2, I=0 a.s.; Y=1 -> v1, Y=2 -> v2
    prefix = empty_prefix(1)
    sched = DeltaSchedule(0.0, 0.0, 3)
    seen = []
    for y in (1, 2):
        u = draw_randomness(2, GrowthConfig(3, 1, sched, 0))
        u = type(u)(u.n, u.m, u.M, u.schedule, u.bern, u.wvert, np.array([y], dtype=np.int64))
        seen.append(decode(prefix, u, sched).record(3, 1).target)
    assert sorted(seen) == [1, 2]


def test_schedule_neutrality_under_shared_randomness():
    # tau = n: decoding with different delta_prime values gives identical graphs
    prefix = grow(GrowthConfig(6, 2, DeltaSchedule(0.5, 0.5, 6), 3))
    cfg = GrowthConfig(14, 2, DeltaSchedule(0.5, 9.0, 14), 77)
    u = draw_randomness(6, cfg)
    a = decode(prefix, u, DeltaSchedule(0.5, 9.0, 14))
    b = decode(prefix, u, DeltaSchedule(0.5, -1.5, 14))
    assert a == b


def test_resample_one_touches_single_entry():
    cfg = GrowthConfig(25, 2, DeltaSchedule(0.0, 2.0, 24), 31)
    u = draw_randomness(15, cfg)
    u2 = resample_one(u, (20, 2), seed=5)
    j = u.index(20, 2)
    assert np.array_equal(np.delete(u.bern, j), np.delete(u2.bern, j))
    assert np.array_equal(np.delete(u.wvert, j), np.delete(u2.wvert, j))
    assert np.array_equal(np.delete(u.yedge, j), np.delete(u2.yedge, j))
    # same seed -> identical redraw
    u3 = resample_one(u, (20, 2), seed=5)
    assert u3.entry(20, 2) == u2.entry(20, 2)
    with pytest.raises(IndexError):
        resample_one(u, (14, 1), seed=0)


def test_resample_one_bernoulli_mean():
    # entry (3,1) with m=2, delta=1 has p = 1/3
    cfg = GrowthConfig(3, 2, DeltaSchedule(1.0, 1.0, 3), 0)
    u = draw_randomness(2, cfg)
    reps = 10_000
    hits = sum(resample_one(u, (3, 1), seed=s).entry(3, 1)[0] for s in range(reps))
    se = (F(1, 3) * F(2, 3) / reps) ** 0.5
    assert abs(hits / reps - 1 / 3) < 3 * se


def test_decode_prefix_consistency_checked():
    cfg = GrowthConfig(10, 2, DeltaSchedule(0.0, 0.0, 10), 1)
    u = draw_randomness(5, cfg)
    wrong_prefix = grow(GrowthConfig(6, 2, DeltaSchedule(0.0, 0.0, 6), 1))
    with pytest.raises(ValueError, match="inconsistent"):
        decode(wrong_prefix, u, cfg.schedule)
