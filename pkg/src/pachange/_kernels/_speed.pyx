# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sampling kernels.

Mirrors ``_pure.py`` operation for operation: identical SplitMix64 streams,
identical draw order, identical float expression grouping, so outputs are
bit-identical across the two backends.
"""

from libc.math cimport ceil, fmax
from libc.string cimport memset

import numpy as np

BACKEND = "speed"

ctypedef unsigned long long u64
ctypedef long long i64

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

cdef u64 _GAMMA = 0x9E3779B97F4A7C15ULL
cdef u64 _MIX1 = 0xBF58476D1CE4E5B9ULL
cdef u64 _MIX2 = 0x94D049BB133111EBULL
cdef double _INV53 = 1.1102230246251565e-16  # 2**-53


cdef inline u64 _mix64(u64 x) nogil:
    x = (x ^ (x >> 30)) * _MIX1
    x = (x ^ (x >> 27)) * _MIX2
    return x ^ (x >> 31)


cdef struct Stream:
    u64 state


cdef inline u64 _next_u64(Stream* s) nogil:
    s.state += _GAMMA
    cdef u64 z = s.state
    z = (z ^ (z >> 30)) * _MIX1
    z = (z ^ (z >> 27)) * _MIX2
    return z ^ (z >> 31)


cdef inline double _next_float(Stream* s) nogil:
    return <double>(_next_u64(s) >> 11) * _INV53


cdef inline u64 _bounded(Stream* s, u64 bound) nogil:
    cdef u64 x = _next_u64(s)
    cdef u128 mm = (<u128>x) * (<u128>bound)
    cdef u64 low = <u64>mm
    cdef u64 threshold
    if low < bound:
        threshold = (0 - bound) % bound
        while low < threshold:
            x = _next_u64(s)
            mm = (<u128>x) * (<u128>bound)
            low = <u64>mm
    return <u64>(mm >> 64)


cdef void _sample_cont(const i64* prefix, i64 n_prefix, i64* out,
                       i64 n, i64 m, i64 M, double delta, double delta_prime,
                       i64 tau, Stream* s) nogil:
    cdef i64 t, i, kap, mk, seg1, k_total, r, v, pos = 0
    cdef double dt, num, den
    for t in range(M + 1, n + 1):
        dt = delta if t <= tau else delta_prime
        kap = <i64>ceil(fmax(-dt, 0.0))
        mk = m - kap
        seg1 = (t - 1) * mk
        num = (<double>(t - 1)) * (dt + <double>kap)
        for i in range(1, m + 1):
            den = (<double>(t - 1)) * dt + (<double>(2 * m * (t - 2) + i - 1))
            if _next_float(s) < num / den:
                v = 1 + <i64>_bounded(s, <u64>(t - 1))
            else:
                k_total = seg1 + m * (t - 3) + i - 1
                r = <i64>_bounded(s, <u64>k_total)
                if r < seg1:
                    v = 1 + r / mk  # unreachable when mk == 0 (then seg1 == 0)
                elif r - seg1 < n_prefix:
                    v = prefix[r - seg1]
                else:
                    v = out[r - seg1 - n_prefix]
            out[pos] = v
            pos += 1


def grow_targets(i64 n, i64 m, double delta, double delta_prime, i64 tau, u64 seed):
    """Targets of all m(n-2) attachment records of a full growth run."""
    out = np.empty(m * (n - 2), dtype=np.int64)
    cdef i64[::1] out_v = out
    cdef i64* out_p = &out_v[0] if out_v.shape[0] > 0 else NULL
    cdef Stream s
    s.state = seed
    with nogil:
        _sample_cont(NULL, 0, out_p, n, m, 2, delta, delta_prime, tau, &s)
    return out


def continue_growth(prefix_targets, i64 n, i64 m, i64 M, double delta,
                    double delta_prime, i64 tau, u64 seed):
    """Targets of the m(n-M) records that extend a fixed prefix to time n."""
    cdef const i64[::1] pre_v = np.ascontiguousarray(prefix_targets, dtype=np.int64)
    out = np.empty(m * (n - M), dtype=np.int64)
    cdef i64[::1] out_v = out
    cdef const i64* pre_p = &pre_v[0] if pre_v.shape[0] > 0 else NULL
    cdef i64* out_p = &out_v[0] if out_v.shape[0] > 0 else NULL
    cdef i64 n_prefix = pre_v.shape[0]
    cdef Stream s
    s.state = seed
    with nogil:
        _sample_cont(pre_p, n_prefix, out_p, n, m, M, delta, delta_prime, tau, &s)
    return out


def min_degree_counts(i64 n, i64 m, double delta, double delta_prime, i64 tau,
                      u64 master_seed, i64 reps, i64 base_index=0):
    """Per-replicate count of degree-m vertices at time n, one fresh graph each."""
    counts = np.empty(reps, dtype=np.int64)
    scratch = np.empty(m * (n - 2), dtype=np.int64)
    hits = np.empty(n + 1, dtype=np.int64)
    cdef i64[::1] counts_v = counts
    cdef i64[::1] out_v = scratch
    cdef i64[::1] hits_v = hits
    cdef i64* out_p = &out_v[0] if out_v.shape[0] > 0 else NULL
    cdef i64 r, j, c, n_rec = m * (n - 2)
    cdef Stream s
    with nogil:
        for r in range(reps):
            s.state = _mix64(master_seed ^ (<u64>(base_index + r)))
            _sample_cont(NULL, 0, out_p, n, m, 2, delta, delta_prime, tau, &s)
            memset(&hits_v[0], 0, (n + 1) * sizeof(i64))
            for j in range(n_rec):
                hits_v[out_p[j]] += 1
            c = 0
            for j in range(1, n + 1):
                if hits_v[j] == 0:  # final degree is m + hits
                    c += 1
            counts_v[r] = c
    return counts


cdef inline i64 _find(i64* parent, i64 x) nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


cdef void _union_late(const i64* cont, i64 n, i64 m, i64 M,
                      i64* parent, i64* size) nogil:
    cdef i64 big_n = n - M
    cdef i64 v, r, a, b, tmp
    for v in range(big_n):
        parent[v] = v
        size[v] = 1
    for r in range(m * big_n):
        if cont[r] > M:
            a = _find(parent, cont[r] - M - 1)
            b = _find(parent, r / m)
            if a != b:
                if size[a] < size[b]:
                    tmp = a
                    a = b
                    b = tmp
                parent[b] = a
                size[a] += size[b]


def late_component_labels(cont_targets, i64 n, i64 m, i64 M):
    """0-based component label per late vertex, numbered in first-vertex order."""
    cdef const i64[::1] cont_v = np.ascontiguousarray(cont_targets, dtype=np.int64)
    cdef i64 big_n = n - M
    parent = np.empty(big_n, dtype=np.int64)
    size = np.empty(big_n, dtype=np.int64)
    labels = np.empty(big_n, dtype=np.int64)
    label_of = np.empty(big_n, dtype=np.int64)
    cdef i64[::1] parent_v = parent
    cdef i64[::1] size_v = size
    cdef i64[::1] labels_v = labels
    cdef i64[::1] label_of_v = label_of
    cdef i64 v, root, n_labels = 0
    if big_n == 0:
        return labels
    with nogil:
        _union_late(&cont_v[0] if cont_v.shape[0] > 0 else NULL,
                    n, m, M, &parent_v[0], &size_v[0])
        for v in range(big_n):
            label_of_v[v] = -1
        for v in range(big_n):
            root = _find(&parent_v[0], v)
            if label_of_v[root] < 0:
                label_of_v[root] = n_labels
                n_labels += 1
            labels_v[v] = label_of_v[root]
    return labels


def sampled_component_sizes(prefix_targets, i64 n, i64 m, i64 M, double delta,
                            double delta_prime, i64 tau, u64 master_seed,
                            i64 reps, i64 base_index=0):
    """Late-component size of one uniformly drawn late vertex per fresh continuation."""
    cdef const i64[::1] pre_v = np.ascontiguousarray(prefix_targets, dtype=np.int64)
    cdef i64 big_n = n - M
    out = np.empty(m * big_n, dtype=np.int64)
    parent = np.empty(big_n, dtype=np.int64)
    size = np.empty(big_n, dtype=np.int64)
    sizes = np.empty(reps, dtype=np.int64)
    cdef i64[::1] out_v = out
    cdef i64[::1] parent_v = parent
    cdef i64[::1] size_v = size
    cdef i64[::1] sizes_v = sizes
    cdef const i64* pre_p = &pre_v[0] if pre_v.shape[0] > 0 else NULL
    cdef i64 n_prefix = pre_v.shape[0]
    cdef i64 r, v
    cdef Stream s
    with nogil:
        for r in range(reps):
            s.state = _mix64(master_seed ^ (<u64>(base_index + r)))
            _sample_cont(pre_p, n_prefix, &out_v[0], n, m, M, delta, delta_prime, tau, &s)
            _union_late(&out_v[0], n, m, M, &parent_v[0], &size_v[0])
            v = <i64>_bounded(&s, <u64>big_n)
            sizes_v[r] = size_v[_find(&parent_v[0], v)]
    return sizes


def branching_tree_sizes(i64 m, i64 late_n, i64 n, i64 cap, u64 master_seed,
                         i64 reps, i64 base_index=0):
    """Total progeny of the dominating branching tree; -1 marks size > cap."""
    cdef double p_bin = 2.0 * late_n / n
    cdef double p_geo = 2.0 * m * late_n / n
    sizes = np.empty(reps, dtype=np.int64)
    cdef i64[::1] sizes_v = sizes
    cdef i64 r, size, pending, x, j
    cdef Stream s
    with nogil:
        for r in range(reps):
            s.state = _mix64(master_seed ^ (<u64>(base_index + r)))
            size = 1
            pending = 1
            while pending > 0:
                x = 0
                for j in range(m):
                    if _next_float(&s) < p_bin:
                        x += 1
                while _next_float(&s) < p_geo:
                    x += 1
                size += x
                pending += x - 1
                if size > cap:
                    size = -1
                    break
            sizes_v[r] = size
    return sizes


def draw_u_arrays(i64 n, i64 m, i64 M, double delta, double delta_prime,
                  i64 tau, u64 seed):
    """Independent (I, W, Y) triples for all steps (t, i), t in [M+1, n]."""
    cdef i64 big_n = n - M
    out_i = np.empty(m * big_n, dtype=np.uint8)
    out_w = np.empty(m * big_n, dtype=np.int64)
    out_y = np.empty(m * big_n, dtype=np.int64)
    cdef unsigned char[::1] i_v = out_i
    cdef i64[::1] w_v = out_w
    cdef i64[::1] y_v = out_y
    cdef i64 t, i, kap, seg1, k_total, pos = 0
    cdef double dt, num, den
    cdef Stream s
    s.state = seed
    if big_n == 0:
        return out_i, out_w, out_y
    with nogil:
        for t in range(M + 1, n + 1):
            dt = delta if t <= tau else delta_prime
            kap = <i64>ceil(fmax(-dt, 0.0))
            seg1 = (t - 1) * (m - kap)
            num = (<double>(t - 1)) * (dt + <double>kap)
            for i in range(1, m + 1):
                den = (<double>(t - 1)) * dt + (<double>(2 * m * (t - 2) + i - 1))
                i_v[pos] = 1 if _next_float(&s) < num / den else 0
                w_v[pos] = 1 + <i64>_bounded(&s, <u64>(t - 1))
                k_total = seg1 + m * (t - 3) + i - 1
                y_v[pos] = 1 + <i64>_bounded(&s, <u64>k_total) if k_total > 0 else 0
                pos += 1
    return out_i, out_w, out_y


def decode_continuation(prefix_targets, i64 n, i64 m, i64 M, double delta,
                        double delta_prime, i64 tau, ind, w, y):
    """Deterministic decode of (I, W, Y) triples into continuation targets."""
    cdef const i64[::1] pre_v = np.ascontiguousarray(prefix_targets, dtype=np.int64)
    cdef const unsigned char[::1] i_v = np.ascontiguousarray(ind, dtype=np.uint8)
    cdef const i64[::1] w_v = np.ascontiguousarray(w, dtype=np.int64)
    cdef const i64[::1] y_v = np.ascontiguousarray(y, dtype=np.int64)
    cdef i64 n_prefix = pre_v.shape[0]
    out = np.empty(m * (n - M), dtype=np.int64)
    cdef i64[::1] out_v = out
    cdef const i64* pre_p = &pre_v[0] if pre_v.shape[0] > 0 else NULL
    cdef i64 t, i, kap, mk, seg1, r, v, pos = 0
    cdef double dt
    if out_v.shape[0] == 0:
        return out
    with nogil:
        for t in range(M + 1, n + 1):
            dt = delta if t <= tau else delta_prime
            kap = <i64>ceil(fmax(-dt, 0.0))
            mk = m - kap
            seg1 = (t - 1) * mk
            for i in range(1, m + 1):
                if i_v[pos]:
                    v = w_v[pos]
                else:
                    r = y_v[pos] - 1
                    if r < seg1:
                        v = 1 + r / mk
                    elif r - seg1 < n_prefix:
                        v = pre_p[r - seg1]
                    else:
                        v = out_v[r - seg1 - n_prefix]
                out_v[pos] = v
                pos += 1
    return out
