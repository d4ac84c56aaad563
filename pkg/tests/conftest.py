import numpy as np
import pytest

from pachange.model import DeltaSchedule, EvolvingGraph, GrowthConfig, grow
from pachange.rng import SplitMix64


def random_small_graph(seed: int, max_n: int = 60, m_choices=(1, 2, 3)) -> EvolvingGraph:
    """A random small instance with a dyadic shift; deterministic in the seed."""
    rng = SplitMix64(seed)
    n = 5 + rng.bounded(max_n - 4)
    m = m_choices[rng.bounded(len(m_choices))]
    # dyadic shifts in (-m, 3], quarters
    steps = int((3 + m) * 4) - 1
    delta = -m + (1 + rng.bounded(steps)) / 4
    delta_prime = -m + (1 + rng.bounded(steps)) / 4
    tau = 2 + rng.bounded(n - 1)
    return grow(GrowthConfig(n, m, DeltaSchedule(delta, delta_prime, tau), rng.next_u64()))


@pytest.fixture
def tiny_schedule():
    return DeltaSchedule(0.0, 0.0, 10)


def empty_prefix(m: int) -> EvolvingGraph:
    return EvolvingGraph(2, m, np.array([], dtype=np.int64), DeltaSchedule(0.0, 0.0, 2))
