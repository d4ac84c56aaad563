"""Dominating branching tree for late-component growth.

A late component explored by BFS is stochastically dominated by the total
progeny of a branching process whose offspring count is the independent sum
of Binomial(m, 2N/n) (edges the explored vertex sent to other late vertices)
and Geometric failures with success probability 1 - 2mN/n (later vertices
attaching to it).  The tree tail is at most 2 e^{-k+1}, which keeps
component sizes, order-counting DP masks, and the variance experiments all
small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import EvolvingGraph

OVERFLOW = "overflow"


@dataclass(frozen=True)
class OffspringLaw:
    """Binomial(m, 2N/n) + independent Geometric failures at rate 2mN/n."""

    m: int
    late_n: int
    n: int

    def __post_init__(self):
        if self.late_n < 0 or self.n < 2 or self.m < 1:
            raise ValueError("need m >= 1, n >= 2, N >= 0")
        if 2 * self.m * self.late_n >= self.n:
            raise ValueError(
                f"sub-criticality needs 2mN < n, got 2*{self.m}*{self.late_n} >= {self.n}"
            )

    def binom_p(self) -> float:
        return 2.0 * self.late_n / self.n

    def geo_fail_p(self) -> float:
        return 2.0 * self.m * self.late_n / self.n

    def mean(self) -> float:
        q = self.geo_fail_p()
        return self.m * self.binom_p() + q / (1.0 - q)


def sample_tree_size(law: OffspringLaw, seed: int, cap: int = 10_000):
    """Total progeny of one branching tree; ``OVERFLOW`` when it exceeds ``cap``."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    size = int(
        _kernels.branching_tree_sizes(law.m, law.late_n, law.n, cap, seed, 1, 0)[0]
    )
    return OVERFLOW if size < 0 else size


def sample_tree_sizes(
    law: OffspringLaw, master_seed: int, reps: int, cap: int = 10_000, base_index: int = 0
) -> np.ndarray:
    """Batched total progenies; -1 encodes a censored (> cap) observation."""
    if cap < 1:
        raise ValueError("cap must be >= 1")
    return _kernels.branching_tree_sizes(
        law.m, law.late_n, law.n, cap, master_seed, reps, base_index
    )


def tail_bound(k: int) -> float:
    """Tail envelope 2 e^{-k+1} for the tree size (vacuous at k = 1)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return 2.0 * math.exp(1 - k)


@dataclass(frozen=True)
class ExplorationTrace:
    """Per-generation frontier sizes of the BFS spanning tree of a late component."""

    root: int
    frontier_sizes: tuple[int, ...]

    def total(self) -> int:
        return sum(self.frontier_sizes)


def explore_component(graph: EvolvingGraph, v: int, M: int) -> ExplorationTrace:
    """BFS over late neighbours starting at v, claiming vertices generation by generation."""
    if v <= M:
        raise ValueError(f"vertex {v} is not late (arrival must exceed M={M})")
    m = graph.m
    adj: dict[int, set] = {}
    cont = graph.targets[m * (M - 2) :]
    for r, target in enumerate(cont):
        u = int(target)
        if u > M:
            w = M + 1 + r // m
            adj.setdefault(u, set()).add(w)
            adj.setdefault(w, set()).add(u)
    visited = {v}
    sizes = [1]
    frontier = [v]
    while frontier:
        nxt = []
        for leaf in frontier:
            claimed = sorted(u for u in adj.get(leaf, ()) if u not in visited)
            visited.update(claimed)
            nxt.extend(claimed)
        if nxt:
            sizes.append(len(nxt))
        frontier = nxt
    return ExplorationTrace(root=v, frontier_sizes=tuple(sizes))
