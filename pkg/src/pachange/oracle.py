"""Exact-rational brute-force enumeration of growth histories on tiny instances.

This is the independent oracle: it never uses the closed-form likelihood
ratio or the mixture decomposition it validates.  All arithmetic is in
``fractions.Fraction``; shifts are converted via ``Fraction(delta)``, which
is exact for the dyadic grids used throughout.

A *snapshot* is a final graph observed with the arrival labels of late
vertices (arrival > M) erased: two record sequences are equivalent iff some
relabelling of the late vertices maps one final edge multiset onto the
other, anchoring vertices 1..M pointwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import numpy as np

from .model import DeltaSchedule, EvolvingGraph

ENUMERATION_CAP = 12  # free records per enumeration
RELABEL_CAP = 10  # late vertices per canonicalization


@dataclass(frozen=True)
class HistoryAtom:
    """One complete record sequence and its (prefix-conditional) probability."""

    records: tuple[int, ...]
    probability: Fraction


def _check_cap(free_steps: int) -> None:
    if free_steps > ENUMERATION_CAP:
        raise ValueError(
            f"{free_steps} free records exceed the enumeration cap of {ENUMERATION_CAP}"
        )


def enumerate_histories(
    n: int, m: int, schedule: DeltaSchedule, prefix: EvolvingGraph | None = None
) -> list[HistoryAtom]:
    """Every admissible record sequence with its exact probability.

    With a prefix (a graph grown to M < n) the histories continue it and the
    probabilities are conditional on it, summing to exactly 1.
    """
    start_m = prefix.n if prefix is not None else 2
    base = [int(v) for v in prefix.targets] if prefix is not None else []
    _check_cap(m * (n - 2) - len(base))
    delta = Fraction(schedule.delta)
    delta_prime = Fraction(schedule.delta_prime)

    deg = [0] + [m] * n
    for v in base:
        deg[v] += 1

    steps = [(t, i) for t in range(start_m + 1, n + 1) for i in range(1, m + 1)]
    out: list[HistoryAtom] = []

    def recurse(idx: int, prob: Fraction):
        if idx == len(steps):
            out.append(HistoryAtom(tuple(base), prob))
            return
        t, i = steps[idx]
        dt = delta if t <= schedule.tau else delta_prime
        den = (t - 1) * dt + 2 * m * (t - 2) + i - 1
        for v in range(1, t):
            p = (deg[v] + dt) / den
            if p == 0:
                continue
            deg[v] += 1
            base.append(v)
            recurse(idx + 1, prob * p)
            base.pop()
            deg[v] -= 1

    recurse(0, Fraction(1))
    return out


def _edge_multiset(records, n: int, m: int):
    edges = [(1, 2)] * m
    for r, target in enumerate(records):
        edges.append((int(target), 3 + r // m))
    return edges


def canonical_snapshot(records, n: int, m: int, M: int):
    """Hashable key for a final graph with late arrival labels erased."""
    big_n = n - M
    if big_n > RELABEL_CAP:
        raise ValueError(f"{big_n} late vertices exceed the relabelling cap")
    edges = _edge_multiset(records, n, m)
    late = list(range(M + 1, n + 1))
    best = None
    for perm in permutations(late):
        sigma = {v: perm[v - M - 1] for v in late}
        relabelled = tuple(
            sorted(
                (min(sigma.get(a, a), sigma.get(b, b)), max(sigma.get(a, a), sigma.get(b, b)))
                for a, b in edges
            )
        )
        if best is None or relabelled < best:
            best = relabelled
    return best


def snapshot_automorphisms(records, n: int, m: int, M: int) -> int:
    """Number of late-vertex relabellings fixing the final edge multiset."""
    edges = sorted(
        (min(a, b), max(a, b)) for a, b in _edge_multiset(records, n, m)
    )
    late = list(range(M + 1, n + 1))
    count = 0
    for perm in permutations(late):
        sigma = {v: perm[v - M - 1] for v in late}
        relabelled = sorted(
            (min(sigma.get(a, a), sigma.get(b, b)), max(sigma.get(a, a), sigma.get(b, b)))
            for a, b in _edge_multiset(records, n, m)
        )
        if relabelled == edges:
            count += 1
    return count


@dataclass(frozen=True)
class SnapshotLaw:
    """Exact law over snapshot classes plus one representative graph each."""

    probs: dict
    representatives: dict

    def total(self) -> Fraction:
        return sum(self.probs.values(), Fraction(0))


def conditional_snapshot_law(prefix: EvolvingGraph, n: int, schedule: DeltaSchedule) -> SnapshotLaw:
    """Marginal of the snapshot class at time n given the prefix, exactly."""
    m = prefix.m
    probs: dict = {}
    reps: dict = {}
    for atom in enumerate_histories(n, m, schedule, prefix):
        key = canonical_snapshot(atom.records, n, m, prefix.n)
        probs[key] = probs.get(key, Fraction(0)) + atom.probability
        if key not in reps:
            reps[key] = EvolvingGraph(n, m, np.array(atom.records, dtype=np.int64), schedule)
    return SnapshotLaw(probs, reps)


def lr_map(prefix: EvolvingGraph, n: int, delta, delta_prime) -> tuple[dict, dict]:
    """Snapshot-class likelihood ratios for a change one step before the horizon.

    Returns (ratios, representatives).  The numerator law switches the shift
    to ``delta_prime`` for the final arrival only; the denominator keeps
    ``delta`` throughout.  Computed purely by enumeration.
    """
    null = conditional_snapshot_law(prefix, n, DeltaSchedule(delta, delta, n))
    alt = conditional_snapshot_law(prefix, n, DeltaSchedule(delta, delta_prime, n - 1))
    ratios = {}
    for key, p in null.probs.items():
        ratios[key] = alt.probs.get(key, Fraction(0)) / p
    return ratios, null.representatives


def exact_lr(prefix: EvolvingGraph, snapshot: EvolvingGraph, delta, delta_prime) -> Fraction:
    """One-step likelihood ratio of a snapshot class, by brute force."""
    key = canonical_snapshot(snapshot.targets, snapshot.n, snapshot.m, prefix.n)
    ratios, _ = lr_map(prefix, snapshot.n, delta, delta_prime)
    if key not in ratios:
        raise ValueError("snapshot has zero probability under the conditional null law")
    return ratios[key]


def sequential_law(partial_targets, t: int, i: int, m: int, delta) -> list[Fraction]:
    """Exact attachment law at step (t, i) from degree counting on a raw prefix.

    ``partial_targets`` holds the targets of all records before (t, i) in
    lexicographic order (length m(t-3) + i - 1).
    """
    expected = m * (t - 3) + i - 1
    if len(partial_targets) != expected:
        raise ValueError(f"prefix has {len(partial_targets)} records, expected {expected}")
    delta = Fraction(delta)
    deg = [0] + [m] * (t - 1)
    for v in partial_targets:
        deg[v] += 1
    den = (t - 1) * delta + 2 * m * (t - 2) + i - 1
    return [(deg[v] + delta) / den for v in range(1, t)]


def encoding_induced_law(partial_targets, t: int, i: int, m: int, delta) -> list[Fraction]:
    """Exact law of the decoded target at step (t, i), enumerating all triples.

    Walks the whole (I, W, Y) space with its exact weights: the uniform
    vertex branch carries the rational mixture weight, each edge slot carries
    (1 - weight)/K.  Must coincide with :func:`sequential_law`.
    """
    from .encoding import exact_bernoulli_parameter, k_size
    from .model import kappa

    expected = m * (t - 3) + i - 1
    if len(partial_targets) != expected:
        raise ValueError(f"prefix has {len(partial_targets)} records, expected {expected}")
    p = exact_bernoulli_parameter(t, i, m, delta)
    k_total = k_size(t, i, m, delta)
    mk = m - kappa(delta)
    seg1 = (t - 1) * mk
    law = [Fraction(0)] * t  # index by vertex, 0 unused
    for v in range(1, t):
        law[v] += p / (t - 1)
    if k_total > 0:
        edge_w = (1 - p) / k_total
        for r in range(1, k_total + 1):
            if r <= seg1:
                v = 1 + (r - 1) // mk
            else:
                v = int(partial_targets[r - seg1 - 1])
            law[v] += edge_w
    return law[1:]
