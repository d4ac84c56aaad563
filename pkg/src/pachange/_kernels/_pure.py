"""Pure-Python sampling kernels (fallback backend).

Bit-compatible with the compiled backend in ``_speed.pyx``: both consume the
same SplitMix64 streams with the same draw order, so equal seeds produce
equal outputs regardless of which backend is active.

Growth uses the mixture form of the attachment rule.  At step (t, i) with
shift d and kappa = ceil(max(-d, 0)), a target is drawn as

  * with probability (t-1)(d+kappa) / ((t-1)d + 2m(t-2) + i - 1):
    a uniform vertex in [1, t-1];
  * otherwise: position r uniform over K = (t-1)(m-kappa) + m(t-3) + i - 1
    slots, where the first (t-1)(m-kappa) slots enumerate each arrived
    vertex (m-kappa) times in arrival order and the remaining slots map to
    the targets of the earlier attachment records in lexicographic order.

Both branches together give each vertex v probability
(deg(v) + d) / ((t-1)d + 2m(t-2) + i - 1), the sequential attachment law.
"""

from __future__ import annotations

import math

import numpy as np

BACKEND = "pure"

_MASK = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_INV53 = 1.1102230246251565e-16  # 2**-53


def _mix64(x):
    x &= _MASK
    x = ((x ^ (x >> 30)) * _MIX1) & _MASK
    x = ((x ^ (x >> 27)) * _MIX2) & _MASK
    return x ^ (x >> 31)


class _Stream:
    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = seed & _MASK

    def next_u64(self):
        self.state = (self.state + _GAMMA) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self):
        return (self.next_u64() >> 11) * _INV53

    def bounded(self, bound):
        x = self.next_u64()
        m = x * bound
        low = m & _MASK
        if low < bound:
            threshold = (_MASK + 1 - bound) % bound
            while low < threshold:
                x = self.next_u64()
                m = x * bound
                low = m & _MASK
        return m >> 64


def _sample_continuation(prefix, out, n, m, M, delta, delta_prime, tau, stream):
    """Fill ``out`` with targets for arrivals M+1..n; ``prefix`` holds records to M."""
    n_prefix = m * (M - 2)
    pos = 0
    for t in range(M + 1, n + 1):
        dt = delta if t <= tau else delta_prime
        kap = math.ceil(max(-dt, 0.0))
        mk = m - kap
        seg1 = (t - 1) * mk
        num = (t - 1) * (dt + kap)
        for i in range(1, m + 1):
            # int part grouped first so the compiled backend rounds identically
            den = (t - 1) * dt + (2 * m * (t - 2) + i - 1)
            if stream.next_float() < num / den:
                v = 1 + stream.bounded(t - 1)
            else:
                k_total = seg1 + m * (t - 3) + i - 1
                r = stream.bounded(k_total)
                if r < seg1:
                    v = 1 + r // mk
                elif r - seg1 < n_prefix:
                    v = prefix[r - seg1]
                else:
                    v = out[r - seg1 - n_prefix]
            out[pos] = v
            pos += 1


def grow_targets(n, m, delta, delta_prime, tau, seed):
    """Targets of all m(n-2) attachment records of a full growth run."""
    out = np.empty(m * (n - 2), dtype=np.int64)
    _sample_continuation(
        np.empty(0, dtype=np.int64), out, n, m, 2, delta, delta_prime, tau, _Stream(seed)
    )
    return out


def continue_growth(prefix_targets, n, m, M, delta, delta_prime, tau, seed):
    """Targets of the m(n-M) records that extend a fixed prefix to time n."""
    out = np.empty(m * (n - M), dtype=np.int64)
    _sample_continuation(prefix_targets, out, n, m, M, delta, delta_prime, tau, _Stream(seed))
    return out


def min_degree_counts(n, m, delta, delta_prime, tau, master_seed, reps, base_index=0):
    """Per-replicate count of degree-m vertices at time n, one fresh graph each."""
    counts = np.empty(reps, dtype=np.int64)
    for r in range(reps):
        targets = grow_targets(n, m, delta, delta_prime, tau, _mix64((master_seed ^ (base_index + r)) & _MASK))
        deg = np.bincount(targets, minlength=n + 1)
        counts[r] = int(np.count_nonzero(deg[1:] == 0))  # degree = m + hits
    return counts


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _union_late(cont_targets, n, m, M, parent, size):
    big_n = n - M
    for v in range(big_n):
        parent[v] = v
        size[v] = 1
    for r in range(m * big_n):
        u = cont_targets[r]
        if u > M:
            a = _find(parent, int(u) - M - 1)
            b = _find(parent, r // m)  # arrival index (t - M - 1)
            if a != b:
                if size[a] < size[b]:
                    a, b = b, a
                parent[b] = a
                size[a] += size[b]


def late_component_labels(cont_targets, n, m, M):
    """0-based component label per late vertex, numbered in first-vertex order."""
    big_n = n - M
    parent = [0] * big_n
    size = [0] * big_n
    _union_late(cont_targets, n, m, M, parent, size)
    labels = np.empty(big_n, dtype=np.int64)
    seen = {}
    for v in range(big_n):
        root = _find(parent, v)
        if root not in seen:
            seen[root] = len(seen)
        labels[v] = seen[root]
    return labels


def sampled_component_sizes(
    prefix_targets, n, m, M, delta, delta_prime, tau, master_seed, reps, base_index=0
):
    """Late-component size of one uniformly drawn late vertex per fresh continuation."""
    big_n = n - M
    out = np.empty(m * big_n, dtype=np.int64)
    parent = [0] * big_n
    size = [0] * big_n
    sizes = np.empty(reps, dtype=np.int64)
    for r in range(reps):
        stream = _Stream(_mix64((master_seed ^ (base_index + r)) & _MASK))
        _sample_continuation(prefix_targets, out, n, m, M, delta, delta_prime, tau, stream)
        _union_late(out, n, m, M, parent, size)
        v = stream.bounded(big_n)
        sizes[r] = size[_find(parent, v)]
    return sizes


def branching_tree_sizes(m, late_n, n, cap, master_seed, reps, base_index=0):
    """Total progeny of the dominating branching tree; -1 marks size > cap."""
    p_bin = 2.0 * late_n / n
    p_geo = 2.0 * m * late_n / n
    sizes = np.empty(reps, dtype=np.int64)
    for r in range(reps):
        stream = _Stream(_mix64((master_seed ^ (base_index + r)) & _MASK))
        size = 1
        pending = 1
        while pending > 0:
            x = 0
            for _ in range(m):
                if stream.next_float() < p_bin:
                    x += 1
            while stream.next_float() < p_geo:
                x += 1
            size += x
            pending += x - 1
            if size > cap:
                size = -1
                break
        sizes[r] = size
    return sizes


def draw_u_arrays(n, m, M, delta, delta_prime, tau, seed):
    """Independent (I, W, Y) triples for all steps (t, i), t in [M+1, n].

    Per entry the stream is consumed as: one float for I, one bounded draw
    for W over [1, t-1], one bounded draw for Y over [1, K] (skipped, Y = 0,
    when K = 0).
    """
    big_n = n - M
    out_i = np.empty(m * big_n, dtype=np.uint8)
    out_w = np.empty(m * big_n, dtype=np.int64)
    out_y = np.empty(m * big_n, dtype=np.int64)
    stream = _Stream(seed)
    pos = 0
    for t in range(M + 1, n + 1):
        dt = delta if t <= tau else delta_prime
        kap = math.ceil(max(-dt, 0.0))
        seg1 = (t - 1) * (m - kap)
        num = (t - 1) * (dt + kap)
        for i in range(1, m + 1):
            den = (t - 1) * dt + (2 * m * (t - 2) + i - 1)
            out_i[pos] = 1 if stream.next_float() < num / den else 0
            out_w[pos] = 1 + stream.bounded(t - 1)
            k_total = seg1 + m * (t - 3) + i - 1
            out_y[pos] = 1 + stream.bounded(k_total) if k_total > 0 else 0
            pos += 1
    return out_i, out_w, out_y


def decode_continuation(prefix_targets, n, m, M, delta, delta_prime, tau, ind, w, y):
    """Deterministic decode of (I, W, Y) triples into continuation targets."""
    n_prefix = m * (M - 2)
    out = np.empty(m * (n - M), dtype=np.int64)
    pos = 0
    for t in range(M + 1, n + 1):
        dt = delta if t <= tau else delta_prime
        kap = math.ceil(max(-dt, 0.0))
        mk = m - kap
        seg1 = (t - 1) * mk
        for i in range(1, m + 1):
            if ind[pos]:
                v = w[pos]
            else:
                r = y[pos] - 1
                if r < seg1:
                    v = 1 + r // mk
                elif r - seg1 < n_prefix:
                    v = prefix_targets[r - seg1]
                else:
                    v = out[r - seg1 - n_prefix]
            out[pos] = v
            pos += 1
    return out
