import math

import numpy as np
import pytest

from pachange.branching import (
    OVERFLOW,
    ExplorationTrace,
    OffspringLaw,
    explore_component,
    sample_tree_size,
    sample_tree_sizes,
    tail_bound,
)
from pachange.model import DeltaSchedule, EvolvingGraph


def test_offspring_law_validation_and_mean():
    with pytest.raises(ValueError, match="sub-criticality"):
        OffspringLaw(m=2, late_n=3000, n=10_000)
    law = OffspringLaw(m=1, late_n=100, n=10_000)
    assert law.mean() == pytest.approx(0.02 + 0.02 / 0.98)


def test_zero_late_vertices_gives_root_only():
    law = OffspringLaw(m=2, late_n=0, n=100)
    for seed in range(20):
        assert sample_tree_size(law, seed) == 1


def test_tail_bound_values():
    assert tail_bound(1) == pytest.approx(2.0)
    assert tail_bound(5) == pytest.approx(2 * math.exp(-4))
    assert tail_bound(10) == pytest.approx(2 * math.exp(-9))
    with pytest.raises(ValueError):
        tail_bound(0)


def test_tree_sizes_tail_against_bound():
    law = OffspringLaw(m=1, late_n=100, n=10_000)
    sizes = sample_tree_sizes(law, master_seed=5, reps=100_000)
    assert not np.any(sizes < 0)  # overflow astronomically unlikely here
    p5 = float(np.mean(sizes >= 5))
    se = math.sqrt(p5 * (1 - p5) / sizes.shape[0])
    assert p5 <= tail_bound(5) + 3 * se
    # sanity on the mean too
    assert float(np.mean(sizes)) == pytest.approx(1 / (1 - law.mean()), rel=0.05)


def test_overflow_is_censored():
    # geometric part near criticality: offspring mean ~ 25, trees explode
    law = OffspringLaw(m=2, late_n=2400, n=10_000)
    sizes = sample_tree_sizes(law, master_seed=1, reps=500, cap=8)
    assert np.any(sizes < 0) and np.all(sizes[sizes > 0] <= 8)
    singles = [sample_tree_size(law, seed=s, cap=1) for s in range(50)]
    assert OVERFLOW in singles
    assert all(s == OVERFLOW or s == 1 for s in singles)


def _graph(n, m, targets):
    return EvolvingGraph(n, m, np.array(targets, dtype=np.int64), DeltaSchedule(0, 0, n))


def test_explore_singleton_trace():
    g = _graph(5, 1, [1, 2, 3])
    trace = explore_component(g, 5, 4)
    assert trace == ExplorationTrace(root=5, frontier_sizes=(1,))
    assert trace.total() == 1


def test_explore_fork_trace_and_totals():
    # v4 anchors, v5 and v6 hang off v4
    g = _graph(6, 1, [1, 2, 4, 4])
    trace = explore_component(g, 4, 3)
    assert trace.frontier_sizes == (1, 2)
    assert trace.total() == 3
    # exploring from a leaf reaches the same component
    assert explore_component(g, 5, 3).total() == 3
    with pytest.raises(ValueError, match="late"):
        explore_component(g, 3, 3)


def test_explore_totals_match_component_sizes():
    from pachange.components import late_components
    from conftest import random_small_graph

    for seed in range(8):
        g = random_small_graph(seed, max_n=50)
        M = max(2, g.n - 10)
        forest = late_components(g, M)
        for comp in forest.components:
            for v in comp.vertices:
                assert explore_component(g, v, M).total() == comp.size()
