"""Exact-arithmetic weighted graphs, shortest paths, walks, and edge-list I/O.

Every weight is a `fractions.Fraction`; nothing in the core rounds through
floats. Distances of disconnected pairs use the ``INF`` sentinel, which is
only ever compared, never mixed into exact arithmetic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from heapq import heappop, heappush
from pathlib import Path
from typing import Iterable, Sequence

INF = math.inf

EdgeKey = tuple[int, int]
Edge = tuple[int, int, Fraction]


def edge_key(u: int, v: int) -> EdgeKey:
    """Canonical unordered key for the edge between u and v."""
    return (u, v) if u < v else (v, u)


def _as_fraction(w) -> Fraction:
    if isinstance(w, float):
        raise TypeError(f"float weight {w!r} rejected; pass Fraction, int or 'p/q'")
    return Fraction(w)


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable undirected graph with exact nonnegative rational weights.

    Vertices are ``0..n-1``. Edges are stored canonically (``u < v``, sorted),
    so two graphs built from permuted edge lists compare equal. Setting
    ``declared_planar`` asserts the caller knows the graph is planar; only the
    edge-count sanity bound m <= 3n - 6 is checked, never planarity itself.
    """

    n: int
    edges: tuple[Edge, ...] = ()
    declared_planar: bool = False

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen: dict[EdgeKey, Fraction] = {}
        for u, v, w in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            key = edge_key(u, v)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            w = _as_fraction(w)
            if w < 0:
                raise ValueError(f"negative weight on edge {key}")
            seen[key] = w
        norm = tuple((u, v, seen[(u, v)]) for u, v in sorted(seen))
        object.__setattr__(self, "edges", norm)
        if self.declared_planar and self.n >= 3 and len(norm) > 3 * self.n - 6:
            raise ValueError(
                f"declared planar but m={len(norm)} exceeds 3n-6={3 * self.n - 6}"
            )

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def weights(self) -> dict[EdgeKey, Fraction]:
        return {(u, v): w for u, v, w in self.edges}

    @cached_property
    def edge_keys(self) -> frozenset[EdgeKey]:
        return frozenset(self.weights)

    @cached_property
    def adjacency(self) -> tuple[tuple[tuple[int, Fraction], ...], ...]:
        adj: list[list[tuple[int, Fraction]]] = [[] for _ in range(self.n)]
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return tuple(tuple(sorted(a)) for a in adj)

    def weight_of(self, u: int, v: int) -> Fraction:
        return self.weights[edge_key(u, v)]

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.weights

    @property
    def total_weight(self) -> Fraction:
        return sum((w for _, _, w in self.edges), Fraction(0))

    def subgraph(self, keys: Iterable[EdgeKey]) -> "WeightedGraph":
        """Same vertex set, edges restricted to `keys` (all must exist)."""
        keys = set(keys)
        missing = keys - self.edge_keys
        if missing:
            raise ValueError(f"edges {sorted(missing)} not in graph")
        kept = tuple(e for e in self.edges if (e[0], e[1]) in keys)
        return WeightedGraph(self.n, kept, self.declared_planar)

    def is_subgraph_of(self, g: "WeightedGraph") -> bool:
        if self.n != g.n:
            return False
        return all(g.weights.get(k) == w for k, w in self.weights.items())


def is_connected(g: WeightedGraph) -> bool:
    if g.n <= 1:
        return True
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for v, _ in g.adjacency[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return len(seen) == g.n


@dataclass(frozen=True)
class Walk:
    """A walk (repeats allowed) with per-step weights from its host graph."""

    vertices: tuple[int, ...]
    step_weights: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.vertices:
            raise ValueError("walk needs at least one vertex")
        if len(self.step_weights) != len(self.vertices) - 1:
            raise ValueError("step weight count must be len(vertices) - 1")

    @classmethod
    def from_vertices(cls, g: WeightedGraph, vertices: Sequence[int]) -> "Walk":
        verts = tuple(vertices)
        steps = []
        for a, b in zip(verts, verts[1:]):
            if not g.has_edge(a, b):
                raise ValueError(f"({a},{b}) is not an edge of the host graph")
            steps.append(g.weight_of(a, b))
        return cls(verts, tuple(steps))

    @property
    def weight(self) -> Fraction:
        return sum(self.step_weights, Fraction(0))

    @property
    def first(self) -> int:
        return self.vertices[0]

    @property
    def last(self) -> int:
        return self.vertices[-1]

    def edge_keys(self) -> frozenset[EdgeKey]:
        return frozenset(edge_key(a, b) for a, b in zip(self.vertices, self.vertices[1:]))

    def prefix_weights(self) -> list[Fraction]:
        """prefix_weights()[i] = weight of the walk up to vertex i."""
        acc = Fraction(0)
        out = [acc]
        for w in self.step_weights:
            acc += w
            out.append(acc)
        return out


def concat(a: Walk, b: Walk) -> Walk:
    """Join two walks sharing an endpoint; weight is additive."""
    if a.last != b.first:
        raise ValueError(f"cannot concatenate: {a.last} != {b.first}")
    return Walk(a.vertices + b.vertices[1:], a.step_weights + b.step_weights)


class EdgeMultiset:
    """Multiset of edge keys; union sums multiplicities."""

    __slots__ = ("counts",)

    def __init__(self, counts: dict[EdgeKey, int] | None = None):
        self.counts: dict[EdgeKey, int] = {}
        for k, c in (counts or {}).items():
            if c <= 0:
                raise ValueError("multiplicities must be positive")
            self.counts[k] = c

    @classmethod
    def from_keys(cls, keys: Iterable[EdgeKey]) -> "EdgeMultiset":
        ms = cls()
        for k in keys:
            ms.counts[k] = ms.counts.get(k, 0) + 1
        return ms

    def union(self, other: "EdgeMultiset") -> "EdgeMultiset":
        out = EdgeMultiset(dict(self.counts))
        for k, c in other.counts.items():
            out.counts[k] = out.counts.get(k, 0) + c
        return out

    @property
    def support(self) -> frozenset[EdgeKey]:
        return frozenset(self.counts)

    def total_multiplicity(self) -> int:
        return sum(self.counts.values())

    def weight(self, g: WeightedGraph) -> Fraction:
        return sum((c * g.weights[k] for k, c in self.counts.items()), Fraction(0))

    def __eq__(self, other):
        return isinstance(other, EdgeMultiset) and self.counts == other.counts

    def __repr__(self):
        return f"EdgeMultiset({self.counts!r})"


def _dijkstra(adj, source: int, n: int) -> list:
    dist = [INF] * n
    dist[source] = Fraction(0)
    heap = [(Fraction(0), source)]
    done = [False] * n
    while heap:
        d, u = heappop(heap)
        if done[u]:
            continue
        done[u] = True
        for v, w in adj[u]:
            if done[v]:
                continue
            nd = d + w
            if dist[v] is INF or nd < dist[v]:
                dist[v] = nd
                heappush(heap, (nd, v))
    return dist


class DistanceOracle:
    """All-pairs exact shortest-path distances with canonical paths.

    The canonical path between two vertices is the lexicographically smallest
    vertex sequence among all minimum-weight paths; it is materialised lazily
    (one next-hop column per target) and requires strictly positive weights.
    """

    def __init__(self, g: WeightedGraph):
        self.graph = g
        self._dist = [_dijkstra(g.adjacency, s, g.n) for s in range(g.n)]
        self._next_hop: dict[int, list] = {}
        self._all_positive = all(w > 0 for _, _, w in g.edges)

    def dist(self, u: int, v: int):
        """Exact distance, or the INF sentinel when disconnected."""
        return self._dist[u][v]

    def row(self, u: int):
        """The full distance row of u (read-only by convention)."""
        return self._dist[u]

    def connected(self, u: int, v: int) -> bool:
        return self._dist[u][v] is not INF or u == v

    def _column(self, t: int) -> list:
        col = self._next_hop.get(t)
        if col is not None:
            return col
        col = [None] * self.graph.n
        dist_t = self._dist[t]
        for u in range(self.graph.n):
            if u == t or dist_t[u] is INF:
                continue
            # smallest neighbour lying on some shortest u-t path; choosing it
            # greedily yields the lex-min vertex sequence
            best = None
            for v, w in self.graph.adjacency[u]:
                if dist_t[v] is not INF and w + dist_t[v] == dist_t[u]:
                    best = v if best is None else min(best, v)
            col[u] = best
        self._next_hop[t] = col
        return col

    def path(self, s: int, t: int) -> Walk:
        if not self._all_positive:
            raise ValueError("canonical paths require strictly positive weights")
        if self._dist[s][t] is INF:
            raise ValueError(f"vertices {s} and {t} are disconnected")
        col = self._column(t)
        verts = [s]
        while verts[-1] != t:
            verts.append(col[verts[-1]])
        return Walk.from_vertices(self.graph, verts)


def apsp(g: WeightedGraph) -> DistanceOracle:
    """Exact all-pairs shortest paths with deterministic tie-breaking."""
    return DistanceOracle(g)


def stretch(g: WeightedGraph, h: WeightedGraph):
    """Worst distance blow-up of h relative to g, as an exact Fraction.

    Computed as the maximum over edges (u,v) of g of dist_h(u,v) / w(u,v),
    which equals the maximum over all vertex pairs of dist_h / dist_g: along
    a shortest g-path every edge contributes exactly its weight, so a bound
    per edge lifts to every pair. Returns INF when h disconnects a pair that
    g connects, and exactly 1 for h = g.
    """
    if not h.is_subgraph_of(g):
        raise ValueError("h is not a subgraph of g")
    if not g.edges:
        return Fraction(1)
    dist_h = apsp(h)
    worst = Fraction(0)
    for u, v, w in g.edges:
        d = dist_h.dist(u, v)
        if d is INF:
            return INF
        if w == 0:
            if d > 0:
                return INF
            continue
        worst = max(worst, d / w)
    # the lightest edge of g is always its own shortest path in h = g
    return max(worst, Fraction(1))


def normalize_edges(g: WeightedGraph) -> WeightedGraph:
    """Drop every edge that is strictly heavier than the distance it spans.

    Such edges lie on no shortest path, so removal changes no distance;
    afterwards every remaining edge is its own shortest path. Idempotent.
    """
    oracle = apsp(g)
    kept = tuple(e for e in g.edges if e[2] <= oracle.dist(e[0], e[1]))
    return WeightedGraph(g.n, kept, g.declared_planar)


def floor_pow2(x: int) -> int:
    """Largest power of two not exceeding x (x must be a positive integer)."""
    if not isinstance(x, int) or isinstance(x, bool) or x < 1:
        raise ValueError(f"floor_pow2 needs a positive integer, got {x!r}")
    return 1 << (x.bit_length() - 1)


def scale_to_integers(g: WeightedGraph) -> tuple[WeightedGraph, Fraction]:
    """Uniformly rescale so every weight is an integer; returns (graph, scale).

    The scale is the LCM of the weight denominators. Uniform scaling keeps
    every distance ratio, hence the stretch of any subgraph, unchanged.
    """
    scale = math.lcm(*(w.denominator for _, _, w in g.edges)) if g.edges else 1
    scaled = tuple((u, v, w * scale) for u, v, w in g.edges)
    return WeightedGraph(g.n, scaled, g.declared_planar), Fraction(scale)


# --- edge-list text format ------------------------------------------------
#
# header:  n m planar:{0|1}
# then m lines:  u v w     (w an exact rational like 5 or 3/2)
# '#' starts a comment; blank lines are ignored.

def format_graph(g: WeightedGraph) -> str:
    lines = [f"{g.n} {g.m} planar:{1 if g.declared_planar else 0}"]
    lines.extend(f"{u} {v} {w}" for u, v, w in g.edges)
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> WeightedGraph:
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line)
    if not rows:
        raise ValueError("empty graph file")
    head = rows[0].split()
    if len(head) != 3 or not head[2].startswith("planar:"):
        raise ValueError(f"bad header {rows[0]!r}; expected 'n m planar:0|1'")
    n, m = int(head[0]), int(head[1])
    planar = head[2] == "planar:1"
    if len(rows) - 1 != m:
        raise ValueError(f"header promises {m} edges, file has {len(rows) - 1}")
    edges = []
    for line in rows[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"bad edge line {line!r}")
        edges.append((int(parts[0]), int(parts[1]), Fraction(parts[2])))
    return WeightedGraph(n, tuple(edges), planar)


def write_graph(g: WeightedGraph, path: str | Path) -> None:
    Path(path).write_text(format_graph(g))


def read_graph(path: str | Path) -> WeightedGraph:
    return parse_graph(Path(path).read_text())
