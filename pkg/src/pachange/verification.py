"""Exact verification suites run by the CLI and the acceptance tests.

Everything here compares two independently computed exact-rational objects:
the enumeration oracle on one side, the closed forms (mixture decode law,
one-step likelihood ratio) on the other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product

import numpy as np

from . import components, oracle
from .model import DeltaSchedule, EvolvingGraph

DEFAULT_DELTAS = (Fraction(-1, 2), Fraction(0), Fraction(1))
DEFAULT_DELTA_PAIRS = ((Fraction(0), Fraction(1)), (Fraction(1), Fraction(-1, 2)))


@dataclass
class VerificationReport:
    checked: int = 0
    mismatches: list = field(default_factory=list)

    def ok(self) -> bool:
        return not self.mismatches


def _partial_prefixes(t: int, i: int, m: int):
    """All record-target sequences up to (but excluding) step (t, i)."""
    steps = [(tt, ii) for tt in range(3, t + 1) for ii in range(1, m + 1)]
    steps = steps[: m * (t - 3) + i - 1]
    ranges = [range(1, tt) for tt, _ in steps]
    if not ranges:
        yield ()
        return
    yield from product(*ranges)


def verify_encoding_grid(max_t: int = 6, max_m: int = 2, deltas=DEFAULT_DELTAS) -> VerificationReport:
    """Decode-enumerated law == sequential attachment law, for every prefix.

    Exhausts all shifts in ``deltas`` with shift > -m, all steps (t, i) with
    t <= max_t, and all record prefixes before each step.
    """
    report = VerificationReport()
    for m in range(1, max_m + 1):
        for delta in deltas:
            if not delta > -m:
                continue
            for t in range(3, max_t + 1):
                for i in range(1, m + 1):
                    for prefix in _partial_prefixes(t, i, m):
                        induced = oracle.encoding_induced_law(prefix, t, i, m, delta)
                        direct = oracle.sequential_law(prefix, t, i, m, delta)
                        report.checked += 1
                        if induced != direct:
                            report.mismatches.append(
                                {"m": m, "delta": str(delta), "t": t, "i": i,
                                 "prefix": list(prefix)}
                            )
    return report


def _all_prefix_graphs(big_m: int, m: int, schedule: DeltaSchedule):
    for prefix in _partial_prefixes(big_m + 1, 1, m):
        yield EvolvingGraph(big_m, m, np.array(prefix, dtype=np.int64), schedule)


def verify_lr_grid(
    ns=(4, 5, 6), ms=(1, 2), delta_pairs=DEFAULT_DELTA_PAIRS, reveal_offsets=(2, 3)
) -> VerificationReport:
    """Closed-form one-step likelihood ratio == enumeration oracle, exactly.

    Covers every snapshot class of every prefix of each instance; also
    checks that the null-conditional expectation of the ratio is exactly 1.
    """
    report = VerificationReport()
    for n, m, (delta, delta_prime) in product(ns, ms, delta_pairs):
        for off in reveal_offsets:
            big_m = n - off
            if big_m < 2:
                continue
            null_schedule = DeltaSchedule(delta, delta, big_m)
            for prefix in _all_prefix_graphs(big_m, m, null_schedule):
                ratios, reps = oracle.lr_map(prefix, n, delta, delta_prime)
                null_law = oracle.conditional_snapshot_law(
                    prefix, n, DeltaSchedule(delta, delta, n)
                )
                mean_lr = Fraction(0)
                for key, lr in ratios.items():
                    closed = components.likelihood_ratio(
                        reps[key], big_m, delta, delta_prime, exact=True
                    ).L
                    report.checked += 1
                    if closed != lr:
                        report.mismatches.append(
                            {"n": n, "m": m, "M": big_m,
                             "delta": str(delta), "delta_prime": str(delta_prime),
                             "records": [int(v) for v in reps[key].targets],
                             "closed": str(closed), "oracle": str(lr)}
                        )
                    mean_lr += null_law.probs[key] * lr
                if mean_lr != 1:
                    report.mismatches.append(
                        {"n": n, "m": m, "M": big_m, "expectation": str(mean_lr)}
                    )
    return report
