"""Late-arrival component forest and the one-step likelihood ratio.

Reveal the history up to time M and observe the final snapshot.  The
subgraph induced by the late vertices (arrival > M) splits into connected
components; which late vertex arrived last is hidden, and the conditional
likelihood ratio of a one-step shift change (``delta`` -> ``delta_prime``
for the final arrival only) averages over the candidates:

    L = (C1 / N) * sum_v |C(v)| * lam_v * X_v

with lam_v the fraction of admissible arrival orders of v's component in
which v is last, and X_v the product of shifted-degree ratios over the
degree increments v causes on its neighbours.

Everything here evaluates either in floats (simulation scale) or in exact
rationals (``exact=True``, oracle scale).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

import numpy as np

from . import _kernels
from .model import EvolvingGraph

ORDER_DP_CAP = 24


@dataclass(frozen=True)
class Component:
    """One connected component of the late-induced subgraph.

    ``edges`` are precedence pairs (u, v): v attached to u, both late, u
    earlier; parallel attachments collapse here but keep multiplicity in the
    degree data used for X factors.  ``anchor_counts[v]`` counts v's
    attachments (with multiplicity) into the revealed part V_M.
    """

    vertices: tuple[int, ...]
    edges: frozenset
    anchor_counts: dict

    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class ComponentForest:
    M: int
    n: int
    components: tuple[Component, ...]
    component_of: dict

    def late_count(self) -> int:
        return self.n - self.M


@dataclass(frozen=True)
class OrderCount:
    """Linear-extension counts of one component's precedence DAG."""

    total: int
    maximal: dict


@dataclass(frozen=True)
class LikelihoodReport:
    n: int
    M: int
    N: int
    S: float
    C1: float
    L: float
    per_vertex: tuple = field(default=())  # (v, |C(v)|, lam_v, X_v)
    component_sizes: tuple = field(default=())  # (size, vertex tuple) per component

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "M": self.M,
            "N": self.N,
            "S": float(self.S),
            "C1": float(self.C1),
            "L": float(self.L),
            "components": [
                {"size": size, "vertices": list(vertices)}
                for size, vertices in self.component_sizes
            ],
        }


def late_components(graph: EvolvingGraph, M: int) -> ComponentForest:
    """Connected components of the subgraph induced by arrivals M+1..n."""
    if not (2 <= M <= graph.n):
        raise ValueError(f"M={M} outside [2, n]")
    n, m = graph.n, graph.m
    cont = graph.targets[m * (M - 2) :]
    labels = _kernels.late_component_labels(cont, n, m, M)
    edges: dict[int, set] = {}
    anchors: dict[int, dict] = {}
    for r, target in enumerate(cont):
        v = M + 1 + r // m
        u = int(target)
        if u > M:
            edges.setdefault(int(labels[v - M - 1]), set()).add((u, v))
        else:
            anchors.setdefault(v, {})
            anchors[v][u] = anchors[v].get(u, 0) + 1
    members: dict[int, list] = {}
    for idx in range(n - M):
        members.setdefault(int(labels[idx]), []).append(M + 1 + idx)
    comps = []
    component_of = {}
    for lab in sorted(members):
        verts = tuple(sorted(members[lab]))
        comp = Component(
            vertices=verts,
            edges=frozenset(edges.get(lab, set())),
            anchor_counts={v: sum(anchors.get(v, {}).values()) for v in verts},
        )
        comps.append(comp)
        for v in verts:
            component_of[v] = len(comps) - 1
    return ComponentForest(M=M, n=n, components=tuple(comps), component_of=component_of)


def admissible_order_counts(component: Component) -> OrderCount:
    """Count linear extensions of the precedence DAG by subset DP.

    ``maximal[v]`` counts extensions with v last; it is zero exactly when v
    has an internal successor.  Exact big-integer arithmetic.
    """
    verts = component.vertices
    k = len(verts)
    if k > ORDER_DP_CAP:
        raise ValueError(
            f"component size {k} exceeds the order-counting cap {ORDER_DP_CAP}"
        )
    index = {v: j for j, v in enumerate(verts)}
    succ = [0] * k
    for u, v in component.edges:
        succ[index[u]] |= 1 << index[v]
    full = (1 << k) - 1
    memo = {0: 1}

    def count(mask: int) -> int:
        cached = memo.get(mask)
        if cached is not None:
            return cached
        total = 0
        rest = mask
        while rest:
            low = rest & -rest
            j = low.bit_length() - 1
            if succ[j] & mask == 0:  # j can be last within mask
                total += count(mask ^ low)
            rest ^= low
        memo[mask] = total
        return total

    maximal = {}
    for v in verts:
        j = index[v]
        maximal[v] = count(full ^ (1 << j)) if succ[j] & full == 0 else 0
    return OrderCount(total=count(full), maximal=maximal)


def _neighbor_multiplicities(graph: EvolvingGraph, v: int) -> dict:
    """Distinct neighbours of v with edge multiplicities (v's own targets plus hits)."""
    m = graph.m
    mult: dict[int, int] = {}
    if v >= 3:
        base = (v - 3) * m
        for r in range(base, base + m):
            u = int(graph.targets[r])
            mult[u] = mult.get(u, 0) + 1
    else:
        other = 2 if v == 1 else 1
        mult[other] = m
    # hits from later arrivals
    for r, target in enumerate(graph.targets):
        if int(target) == v:
            w = 3 + r // m
            mult[w] = mult.get(w, 0) + 1
    return mult


def x_factor(graph: EvolvingGraph, v: int, delta, delta_prime, exact: bool = False):
    """Shifted-degree ratio product over the degree increments v causes.

    For each distinct neighbour w, multiply (j + delta')/(j + delta) for j
    running over the degrees w takes while v's edges are added, i.e. from
    deg(w) - mult(v, w) up to deg(w) - 1 in the final graph.
    """
    deg = graph.degrees
    if exact:
        delta, delta_prime = Fraction(delta), Fraction(delta_prime)
        result = Fraction(1)
    else:
        delta, delta_prime = float(delta), float(delta_prime)
        result = 1.0
    for w, mult in _neighbor_multiplicities(graph, v).items():
        d = int(deg[w])
        for j in range(d - mult, d):
            result *= (j + delta_prime) / (j + delta)
    return result


def c1(n: int, m: int, delta, delta_prime, exact: bool = False):
    """Normalizing prefactor of the one-step likelihood ratio.

    Product over i of ((n-1)delta + 2m(n-2) + i - 1) / (same with delta').
    """
    if exact:
        delta, delta_prime = Fraction(delta), Fraction(delta_prime)
        result = Fraction(1)
    else:
        result = 1.0
    for i in range(1, m + 1):
        base = 2 * m * (n - 2) + i - 1
        result *= ((n - 1) * delta + base) / ((n - 1) * delta_prime + base)
    return result


def _per_vertex_terms(graph: EvolvingGraph, forest: ComponentForest, delta, delta_prime, exact):
    terms = []
    deg = graph.degrees
    m = graph.m
    for comp in forest.components:
        counts = admissible_order_counts(comp)
        size = comp.size()
        for v in comp.vertices:
            if counts.maximal[v] == 0:
                terms.append((v, size, Fraction(0) if exact else 0.0, None))
                continue
            if exact:
                lam = Fraction(counts.maximal[v], counts.total)
            else:
                lam = counts.maximal[v] / counts.total
            assert int(deg[v]) == m  # no internal successor <=> degree m for late v
            x = x_factor(graph, v, delta, delta_prime, exact=exact)
            terms.append((v, size, lam, x))
    return terms


def s_statistic(graph: EvolvingGraph, M: int, delta, delta_prime, exact: bool = False):
    """Average of |C(v)| * lam_v * X_v over late vertices (the LR core)."""
    if M >= graph.n:
        raise ValueError("need at least one late vertex (M < n)")
    forest = late_components(graph, M)
    terms = _per_vertex_terms(graph, forest, delta, delta_prime, exact)
    big_n = graph.n - M
    total = Fraction(0) if exact else 0.0
    for _, size, lam, x in terms:
        if x is not None and lam != 0:
            total += size * lam * x
    return total / big_n


def likelihood_ratio(
    graph: EvolvingGraph, M: int, delta, delta_prime, exact: bool = False
) -> LikelihoodReport:
    """One-step conditional likelihood ratio L = C1 * S with diagnostics."""
    if M >= graph.n:
        raise ValueError("need at least one late vertex (M < n)")
    forest = late_components(graph, M)
    terms = _per_vertex_terms(graph, forest, delta, delta_prime, exact)
    big_n = graph.n - M
    s = Fraction(0) if exact else 0.0
    for _, size, lam, x in terms:
        if x is not None and lam != 0:
            s += size * lam * x
    s = s / big_n
    c = c1(graph.n, graph.m, delta, delta_prime, exact=exact)
    return LikelihoodReport(
        n=graph.n, M=M, N=big_n, S=s, C1=c, L=c * s, per_vertex=tuple(terms),
        component_sizes=tuple((comp.size(), comp.vertices) for comp in forest.components),
    )


def x_max(m: int, delta, delta_prime) -> float:
    """Upper envelope of X over degree-m vertices: max(1, ((m+d')/(m+d))^m)."""
    return max(1.0, ((m + delta_prime) / (m + delta)) ** m)


def ordering_multiplicity(graph: EvolvingGraph, v: int) -> int:
    """Distinct orderings of v's own attachment multiset: m! / prod(mult!)."""
    m = graph.m
    if v < 3:
        return 1
    base = (v - 3) * m
    mult: dict[int, int] = {}
    for r in range(base, base + m):
        u = int(graph.targets[r])
        mult[u] = mult.get(u, 0) + 1
    out = factorial(m)
    for c in mult.values():
        out //= factorial(c)
    return out


# ---------------------------------------------------------------------------
# Fast float path over raw continuation arrays (no EvolvingGraph built)
# ---------------------------------------------------------------------------


def s_from_continuation(
    prefix_degrees: np.ndarray,
    cont_targets: np.ndarray,
    n: int,
    m: int,
    M: int,
    delta: float,
    delta_prime: float,
) -> float:
    """Float S for a continuation given the frozen prefix's degree array.

    Vectorizes the dominant singleton components for m <= 2 and falls back
    to a per-component loop (still on raw arrays) for everything else.
    Matches :func:`s_statistic` to float round-off; see tests.
    """
    big_n = n - M
    cont = np.asarray(cont_targets)
    hit_vertices, hit_counts = np.unique(cont, return_counts=True)

    def deg_of(w_arr):
        # final degree of each vertex in w_arr
        base = np.where(w_arr > M, m, prefix_degrees[np.minimum(w_arr, M)])
        pos = np.searchsorted(hit_vertices, w_arr)
        pos = np.clip(pos, 0, len(hit_vertices) - 1)
        hits = np.where(hit_vertices[pos] == w_arr, hit_counts[pos], 0)
        return base + hits

    late_hits = np.zeros(big_n, dtype=np.int64)
    late_mask = hit_vertices > M
    late_hits[hit_vertices[late_mask] - M - 1] = hit_counts[late_mask]

    labels = np.asarray(_kernels.late_component_labels(cont, n, m, M))
    comp_sizes = np.bincount(labels)
    per_vertex_size = comp_sizes[labels]

    by_target = cont.reshape(big_n, m)
    singleton = (per_vertex_size == 1)
    total = 0.0
    if m == 1 and singleton.any():
        d = deg_of(by_target[singleton, 0]).astype(np.float64)
        total += float(np.sum((d - 1 + delta_prime) / (d - 1 + delta)))
    elif m == 2 and singleton.any():
        w1 = by_target[singleton, 0]
        w2 = by_target[singleton, 1]
        d1 = deg_of(w1).astype(np.float64)
        d2 = deg_of(w2).astype(np.float64)
        same = w1 == w2
        # distinct targets: one factor each at degree d-1
        x = np.where(
            same,
            (d1 - 2 + delta_prime) * (d1 - 1 + delta_prime)
            / ((d1 - 2 + delta) * (d1 - 1 + delta)),
            (d1 - 1 + delta_prime) * (d2 - 1 + delta_prime)
            / ((d1 - 1 + delta) * (d2 - 1 + delta)),
        )
        total += float(np.sum(x))
    elif singleton.any():
        for idx in np.nonzero(singleton)[0]:
            total += _x_from_targets(by_target[idx], deg_of, delta, delta_prime)

    for lab in np.unique(labels[~singleton]):
        members = np.nonzero(labels == lab)[0]
        size = len(members)
        edges = set()
        for idx in members:
            for u in by_target[idx]:
                if u > M:
                    edges.add((int(u), int(M + 1 + idx)))
        comp = Component(
            vertices=tuple(int(M + 1 + idx) for idx in members),
            edges=frozenset(edges),
            anchor_counts={},
        )
        counts = admissible_order_counts(comp)
        for idx in members:
            v = M + 1 + idx
            if late_hits[idx] > 0 or counts.maximal[v] == 0:
                continue
            lam = counts.maximal[v] / counts.total
            x = _x_from_targets(by_target[idx], deg_of, delta, delta_prime)
            total += size * lam * x
    return total / big_n


def _x_from_targets(targets_of_v, deg_of, delta, delta_prime) -> float:
    mult: dict[int, int] = {}
    for u in targets_of_v:
        mult[int(u)] = mult.get(int(u), 0) + 1
    ws = np.array(sorted(mult), dtype=np.int64)
    degs = deg_of(ws)
    x = 1.0
    for w, d in zip(ws, degs):
        for j in range(int(d) - mult[int(w)], int(d)):
            x *= (j + delta_prime) / (j + delta)
    return x
