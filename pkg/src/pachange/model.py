"""Preferential-attachment growth model with an attachment-shift changepoint.

The graph starts at time 2 with two vertices joined by m parallel edges.
At each time t in [3, n] a new vertex attaches m edges sequentially; edge i
of arrival t picks target v in V_{t-1} with probability

    (deg(v) + d(t)) / ((t-1) d(t) + 2m(t-2) + i - 1),

where deg is the degree after the previous edge and d(t) is the shift in
force at time t: ``delta`` up to the changepoint ``tau`` and ``delta_prime``
after it.  Vertices are labelled by arrival index (all statistics in scope
are invariant under relabelling, so no label shuffle is performed).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from . import _kernels

_U64_MAX = 0xFFFFFFFFFFFFFFFF


def kappa(delta) -> int:
    """Rejection offset ceil(max(-delta, 0)); in [0, m] whenever delta > -m."""
    return math.ceil(max(-delta, 0))


@dataclass(frozen=True)
class DeltaSchedule:
    """Attachment-shift trajectory: ``delta`` for t <= tau, ``delta_prime`` after.

    ``tau = n`` encodes "no change" (``delta_prime`` is never used then).
    """

    delta: float
    delta_prime: float
    tau: int

    def delta_at(self, t: int):
        return self.delta if t <= self.tau else self.delta_prime

    def validate(self, m: int, n: int) -> None:
        if not (self.delta > -m and self.delta_prime > -m):
            raise ValueError(f"shifts must exceed -m = {-m}: {self}")
        if not (2 <= self.tau <= n):
            raise ValueError(f"changepoint {self.tau} outside [2, {n}]")


def schedule_from_gamma(n: int, gamma: float, delta, delta_prime) -> DeltaSchedule:
    """Late-change schedule with tau = n - ceil(n**gamma)."""
    return DeltaSchedule(delta, delta_prime, n - math.ceil(n**gamma))


@dataclass(frozen=True)
class GrowthConfig:
    n: int
    m: int
    schedule: DeltaSchedule
    seed: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")
        if self.m < 1:
            raise ValueError("m must be >= 1")
        if not (0 <= self.seed <= _U64_MAX):
            raise ValueError("seed must fit in 64 bits")
        self.schedule.validate(self.m, self.n)


@dataclass(frozen=True)
class AttachmentRecord:
    t: int
    i: int
    target: int


class EvolvingGraph:
    """Arrival-ordered multigraph: targets of records (t, i) in lexicographic order.

    ``targets[r]`` is the target of record r, with t = 3 + r // m and
    i = 1 + r % m.  The initial m parallel edges between vertices 1 and 2
    are implicit.  Instances are immutable after construction.
    """

    __slots__ = ("n", "m", "targets", "schedule", "seed", "_degrees")

    def __init__(self, n: int, m: int, targets, schedule: DeltaSchedule, seed: int | None = None):
        targets = np.ascontiguousarray(targets, dtype=np.int64)
        if targets.shape != (m * (n - 2),):
            raise ValueError(f"expected {m * (n - 2)} records, got {targets.shape}")
        self.n = n
        self.m = m
        self.targets = targets
        self.targets.setflags(write=False)
        self.schedule = schedule
        self.seed = seed
        self._degrees = None

    @property
    def degrees(self) -> np.ndarray:
        """Degree of each vertex at time n; index 0 is unused."""
        if self._degrees is None:
            deg = np.bincount(self.targets, minlength=self.n + 1)
            deg[1:] += self.m
            deg[0] = 0
            deg.setflags(write=False)
            self._degrees = deg
        return self._degrees

    def record(self, t: int, i: int) -> AttachmentRecord:
        if not (3 <= t <= self.n and 1 <= i <= self.m):
            raise IndexError(f"record ({t},{i}) out of range")
        return AttachmentRecord(t, i, int(self.targets[(t - 3) * self.m + i - 1]))

    def records(self) -> Iterator[AttachmentRecord]:
        for r, target in enumerate(self.targets):
            yield AttachmentRecord(3 + r // self.m, 1 + r % self.m, int(target))

    def num_records_before(self, t: int, i: int) -> int:
        return self.m * (t - 3) + i - 1

    def degrees_before(self, t: int, i: int) -> np.ndarray:
        """Degrees of vertices 1..t-1 in the graph just before record (t, i).

        Replays the record prefix; index 0 of the result is unused.
        """
        k = self.num_records_before(t, i)
        deg = np.bincount(self.targets[:k], minlength=t)[:t]
        deg[1 : t] += self.m
        deg[0] = 0
        # arrival t-1 may still be mid-attachment only if t-1 == t, impossible;
        # all of 1..t-1 have completed their m edges by time t.
        return deg

    def prefix(self, upto: int) -> "EvolvingGraph":
        """The graph grown up to time ``upto`` (records of arrivals 3..upto)."""
        if not (2 <= upto <= self.n):
            raise ValueError("prefix time out of range")
        return EvolvingGraph(
            upto, self.m, self.targets[: self.m * (upto - 2)], self.schedule, self.seed
        )

    def edge_count(self) -> int:
        return self.m * (self.n - 1)

    def __eq__(self, other):
        return (
            isinstance(other, EvolvingGraph)
            and self.n == other.n
            and self.m == other.m
            and np.array_equal(self.targets, other.targets)
        )

    def __hash__(self):
        return hash((self.n, self.m, self.targets.tobytes()))

    def __repr__(self):
        return f"EvolvingGraph(n={self.n}, m={self.m}, records={len(self.targets)})"


def attachment_distribution(graph: EvolvingGraph, t: int, i: int, delta) -> Sequence:
    """Law of the target of record (t, i) given the prefix, per the growth rule.

    Entry j (0-based) is the probability of vertex j+1.  Passing a Fraction
    for ``delta`` gives exact rational output; a float gives a numpy vector.
    """
    if not (3 <= t <= graph.n and 1 <= i <= graph.m):
        raise ValueError(f"step ({t},{i}) beyond the available prefix")
    deg = graph.degrees_before(t, i)
    m = graph.m
    if isinstance(delta, (Fraction, int)):
        delta = Fraction(delta)
        den = (t - 1) * delta + 2 * m * (t - 2) + i - 1
        return [(int(deg[v]) + delta) / den for v in range(1, t)]
    den = (t - 1) * delta + 2 * m * (t - 2) + i - 1
    return (deg[1:t] + delta) / den


def grow(config: GrowthConfig) -> EvolvingGraph:
    """Sample a full growth history; deterministic given the seed."""
    s = config.schedule
    targets = _kernels.grow_targets(
        config.n, config.m, s.delta, s.delta_prime, s.tau, config.seed
    )
    return EvolvingGraph(config.n, config.m, targets, s, config.seed)


def degree_histogram(graph: EvolvingGraph) -> dict[int, int]:
    """Map degree -> number of vertices with that degree at time n."""
    return dict(Counter(int(d) for d in graph.degrees[1:]))
