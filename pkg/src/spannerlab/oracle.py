"""Ground truth: exact minimum-weight spanners by branch and bound, the
spanner predicate, and a tiny brute-force SAT solver for reduction checks."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from heapq import heappop, heappush

from .graphs import INF, EdgeKey, WeightedGraph, apsp, edge_key, is_connected, stretch
from .hardness import SatInstance


class OracleCapError(RuntimeError):
    """Instance exceeds the configured exhaustive-search budget."""


def is_spanner(g: WeightedGraph, h: WeightedGraph, eps) -> bool:
    """Exact check that h stretches no g-distance beyond 1 + eps."""
    s = stretch(g, h)
    return s is not INF and s <= 1 + Fraction(eps)


@dataclass(frozen=True)
class OracleResult:
    opt_weight: Fraction
    opt_edges: frozenset[EdgeKey]
    nodes_explored: int


def _bounded_dist(adj, s: int, t: int, limit):
    """Dijkstra that gives up once the frontier passes `limit`."""
    if s == t:
        return Fraction(0)
    dist = {s: Fraction(0)}
    done = set()
    heap = [(Fraction(0), s)]
    while heap:
        d, u = heappop(heap)
        if u in done:
            continue
        if d > limit:
            return INF
        if u == t:
            return d
        done.add(u)
        for v, w in adj.get(u, ()):
            if v in done:
                continue
            nd = d + w
            if nd <= limit and (v not in dist or nd < dist[v]):
                dist[v] = nd
                heappush(heap, (nd, v))
    return INF


def _build_adj(g: WeightedGraph, keys) -> dict[int, list[tuple[int, Fraction]]]:
    adj: dict[int, list[tuple[int, Fraction]]] = {}
    for k in keys:
        w = g.weights[k]
        u, v = k
        adj.setdefault(u, []).append((v, w))
        adj.setdefault(v, []).append((u, w))
    return adj


def _feasible(g: WeightedGraph, keys, thresholds) -> bool:
    """Does the edge set `keys` keep every g-edge within its threshold?"""
    adj = _build_adj(g, keys)
    for (u, v), limit in thresholds.items():
        if edge_key(u, v) in keys:
            continue
        if _bounded_dist(adj, u, v, limit) is INF:
            return False
    return True


def _local_ok(g: WeightedGraph, keys, thresholds, around: EdgeKey) -> bool:
    """Cheap necessary check after dropping `around`: every g-edge touching
    one of its endpoints must still be within threshold."""
    adj = _build_adj(g, keys)
    for x in around:
        for y, _ in g.adjacency[x]:
            k = edge_key(x, y)
            if k in keys:
                continue
            if _bounded_dist(adj, x, y, thresholds[k]) is INF:
                return False
    return True


def _completion_bound(g: WeightedGraph, fixed_keys, free_rest) -> Fraction | None:
    """Cheapest extra weight connecting the components of `fixed_keys` using
    edges from `free_rest`; None when even all of them cannot connect."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = g.n
    for u, v in fixed_keys:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    if comps == 1:
        return Fraction(0)
    extra = Fraction(0)
    for w, (u, v) in free_rest:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
            extra += w
            if comps == 1:
                return extra
    return None


def exact_opt_spanner(g: WeightedGraph, eps, max_edges: int = 24) -> OracleResult:
    """Exact minimum-weight (1+eps)-spanner by exhaustive branch and bound.

    Weight-zero edges can only help and are always included, so the cap
    `max_edges` counts positive-weight edges only. Edges with no alternative
    route within stretch are forced up front; the remaining edges are decided
    heaviest-first, exclusion branch first, pruning on a spanning-completion
    lower bound against the incumbent. Among equal-weight optima the
    lexicographically smallest edge set is returned.
    """
    eps = Fraction(eps)
    if not is_connected(g):
        raise ValueError("exact_opt_spanner requires a connected graph")
    zeros = frozenset(k for k, w in g.weights.items() if w == 0)
    candidates = [k for k, w in g.weights.items() if w > 0]
    if len(candidates) > max_edges:
        raise OracleCapError(
            f"{len(candidates)} positive-weight edges exceed the cap {max_edges}"
        )

    oracle = apsp(g)
    thresholds = {k: (1 + eps) * oracle.dist(*k) for k in g.weights}

    nodes = 0
    all_keys = frozenset(g.weights)
    forced = set()
    for k in candidates:
        nodes += 1
        adj = _build_adj(g, all_keys - {k})
        if _bounded_dist(adj, k[0], k[1], thresholds[k]) is INF:
            forced.add(k)
    free = sorted((k for k in candidates if k not in forced), key=lambda k: (-g.weights[k], k))
    free_weights = [g.weights[k] for k in free]
    base = zeros | forced
    base_weight = sum((g.weights[k] for k in forced), Fraction(0))

    # full edge set is always feasible, giving the starting incumbent
    best_weight = sum(free_weights, base_weight)
    best_edges = tuple(sorted(all_keys))

    suffix: list[list[tuple[Fraction, EdgeKey]]] = [[] for _ in range(len(free) + 1)]
    for i in range(len(free) - 1, -1, -1):
        suffix[i] = sorted(suffix[i + 1] + [(free_weights[i], free[i])])

    def search(idx: int, chosen: set[EdgeKey], chosen_weight: Fraction, available: set[EdgeKey]):
        nonlocal nodes, best_weight, best_edges
        nodes += 1
        bound = _completion_bound(g, base | chosen, suffix[idx])
        if bound is None or base_weight + chosen_weight + bound > best_weight:
            return
        if idx == len(free):
            keys = base | chosen
            if _feasible(g, keys, thresholds):
                total = base_weight + chosen_weight
                cand = tuple(sorted(keys))
                if total < best_weight or (total == best_weight and cand < best_edges):
                    best_weight = total
                    best_edges = cand
            return
        k = free[idx]
        # exclusion first so light incumbents appear early
        available.discard(k)
        if _local_ok(g, available, thresholds, k):
            search(idx + 1, chosen, chosen_weight, available)
        available.add(k)
        chosen.add(k)
        search(idx + 1, chosen, chosen_weight + free_weights[idx], available)
        chosen.discard(k)

    search(0, set(), Fraction(0), set(all_keys))
    return OracleResult(best_weight, frozenset(best_edges), nodes)


def sat_brute_force(inst: SatInstance, max_vars: int = 20) -> tuple[bool, ...] | None:
    """Satisfying assignment by enumeration (first in bitmask order), or None."""
    if inst.num_vars > max_vars:
        raise OracleCapError(f"{inst.num_vars} variables exceed the cap {max_vars}")
    for mask in range(1 << inst.num_vars):
        assignment = tuple(bool(mask >> i & 1) for i in range(inst.num_vars))
        if inst.satisfied_by(assignment):
            return assignment
    return None
