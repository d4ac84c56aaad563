"""Throughput comparison: compiled kernels vs the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--quick]
"""

import argparse
import time

from pachange._kernels import available_backends


def _time(fn, *args, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="smaller sizes, fewer reps")
    args = parser.parse_args()

    backends = available_backends()
    n = 20_000 if args.quick else 100_000
    reps = 200 if args.quick else 2_000
    cases = [
        ("grow n=%d m=2" % n,
         lambda b: b.grow_targets(n, 2, 0.0, 2.0, n - 500, 1)),
        ("min-degree counts, 20 graphs n=%d" % (n // 10),
         lambda b: b.min_degree_counts(n // 10, 2, 0.0, 2.0, n // 10 - 100, 7, 20)),
        ("continuations, %d x N=1000 m=1" % (reps // 10),
         None),  # filled below, needs a prefix per backend
        ("branching trees, %d samples" % (reps * 50),
         lambda b: b.branching_tree_sizes(2, 1000, n, 10_000, 3, reps * 50)),
    ]

    rows = []
    for label, call in cases:
        timings = {}
        for name, backend in backends.items():
            if call is None:
                big_m = n - 1000
                prefix = backend.grow_targets(big_m, 1, 0.0, 0.0, big_m, 1)
                timings[name] = _time(
                    lambda: [
                        backend.continue_growth(prefix, n, 1, big_m, 0.0, 0.0, n, s)
                        for s in range(reps // 10)
                    ]
                )
            else:
                timings[name] = _time(call, backend)
        rows.append((label, timings))

    width = max(len(r[0]) for r in rows) + 2
    names = list(backends)
    print(f"{'case':<{width}}" + "".join(f"{nm:>12}" for nm in names) + f"{'speedup':>10}")
    for label, timings in rows:
        line = f"{label:<{width}}" + "".join(f"{timings[nm]:>11.3f}s" for nm in names)
        if "speed" in timings and "pure" in timings:
            line += f"{timings['pure'] / timings['speed']:>9.0f}x"
        print(line)


if __name__ == "__main__":
    main()
