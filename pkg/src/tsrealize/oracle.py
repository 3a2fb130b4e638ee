"""Desk-scale brute-force ground truth: exhaustive tight-span vertex
enumeration, vertex adjacency via midpoint face dimension, exact minimal
subrealizations, and minimum Manhattan network lengths.

Everything here is exponential and guarded by size bounds; it exists to
verify the fast paths, not to scale.
"""

from __future__ import annotations

import heapq
from fractions import Fraction
from itertools import combinations

from .errors import InstanceTooLarge, NotARealization, NotAVertex
from .instances import hanan_grid
from .metric import (
    FiniteMetric,
    RealizationGraph,
    TightPoint,
    kuratowski,
    linf_dist,
    verify_realization,
)
from .splits import PointSet2D
from .tightspan import face_dim, in_polyhedron, is_vertex

DEFAULT_MAX_N = 6
DEFAULT_MAX_EDGES = 20


def _solve_constraint_subset(metric: FiniteMetric, subset) -> tuple | None:
    """Solve the equality system of the chosen constraint pairs exactly.

    Pairs (i, j) with i != j mean f_i + f_j = D(i, j); (i, i) means
    f_i = 0.  Coordinates are propagated as affine forms a + s*t per
    component; returns None when the system is inconsistent or leaves a
    free parameter.
    """
    n = metric.n
    dist = metric.dist
    adj = [[] for _ in range(n)]
    zeros = []
    for i, j in subset:
        if i == j:
            zeros.append(i)
        else:
            adj[i].append(j)
            adj[j].append(i)
    coords = [None] * n
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        offset = {start: Fraction(0)}
        sign = {start: 1}
        t_val = None
        stack = [start]
        seen[start] = True
        comp = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v in offset:
                    # closing constraint: offset_u + offset_v + (s_u + s_v) t = D(u, v)
                    s = sign[u] + sign[v]
                    rhs = dist[u][v] - offset[u] - offset[v]
                    if s == 0:
                        if rhs != 0:
                            return None
                    else:
                        t = rhs / s
                        if t_val is None:
                            t_val = t
                        elif t_val != t:
                            return None
                else:
                    offset[v] = dist[u][v] - offset[u]
                    sign[v] = -sign[u]
                    seen[v] = True
                    comp.append(v)
                    stack.append(v)
        for i in comp:
            if i in zeros:
                t = -offset[i] / sign[i]
                if t_val is None:
                    t_val = t
                elif t_val != t:
                    return None
        if t_val is None:
            return None
        for i in comp:
            coords[i] = offset[i] + sign[i] * t_val
    return tuple(coords)


def enumerate_vertices(metric: FiniteMetric, max_n: int = DEFAULT_MAX_N) -> list[TightPoint]:
    """All vertices of the constraint polyhedron, by exhaustively solving
    n-subsets of the constraint set and keeping feasible vertex solutions.
    Every vertex is determined by some such subset, so nothing is missed.
    Results are deduplicated and sorted by coordinates."""
    n = metric.n
    if n > max_n:
        raise InstanceTooLarge(f"vertex enumeration bounded at n <= {max_n}, got {n}")
    constraints = [(i, j) for i in range(n) for j in range(i, n)]
    found = {}
    for subset in combinations(constraints, n):
        coords = _solve_constraint_subset(metric, subset)
        if coords is None or coords in found:
            continue
        point = TightPoint(metric, coords)
        if in_polyhedron(point) and is_vertex(point):
            found[coords] = point
    return [found[c] for c in sorted(found)]


def oracle_adjacent(f: TightPoint, g: TightPoint) -> bool:
    """True iff the exact midpoint of two vertices lies on a bounded
    1-face, i.e. the segment [f, g] is an edge of the 1-skeleton."""
    if not is_vertex(f) or not is_vertex(g):
        raise NotAVertex("oracle adjacency is defined for vertices only")
    if f == g:
        return False
    mid = TightPoint(
        f.metric,
        tuple((a + b) / 2 for a, b in zip(f.coords, g.coords)),
    )
    return face_dim(mid) == 1


def skeleton_graph(metric: FiniteMetric, max_n: int = DEFAULT_MAX_N) -> RealizationGraph:
    """The full 1-skeleton of the tight span, assembled from brute-force
    vertex enumeration and midpoint adjacency."""
    vertices = enumerate_vertices(metric, max_n)
    graph = RealizationGraph(metric)
    for point in vertices:
        graph.add_vertex(point)
    for f, g in combinations(vertices, 2):
        if oracle_adjacent(f, g):
            graph.add_edge(
                graph.find_vertex(f.coords),
                graph.find_vertex(g.coords),
                linf_dist(f, g),
            )
    for x in metric.labels:
        node = graph.find_vertex(kuratowski(metric, x).coords)
        if node is None:
            raise NotAVertex(f"Kuratowski point of {x!r} missing from enumeration")
        graph.set_label(x, node)
    return graph


class _SubsetSearch:
    """Branch and bound over edge subsets that still realize the metric.

    Feasibility (exact labeled distances) is monotone under adding edges,
    so a branch dies as soon as even its full remaining edge set fails.
    A reverse-delete greedy pass seeds the incumbent.  Among all optima
    the lexicographically smallest edge-index subset is returned.
    """

    def __init__(self, graph: RealizationGraph, metric: FiniteMetric):
        self.graph = graph
        self.metric = metric
        self.edge_list = sorted(graph.edges)
        self.weights = [graph.edges[e] for e in self.edge_list]
        self.m = len(self.edge_list)
        self.tau = [graph.labeling[x] for x in metric.labels]
        self.rows = metric.dist
        self.best_len: Fraction | None = None
        self.best_set: tuple | None = None

    def feasible(self, mask: int) -> bool:
        adj = {}
        for k in range(self.m):
            if mask >> k & 1:
                u, v = self.edge_list[k]
                w = self.weights[k]
                adj.setdefault(u, []).append((v, w))
                adj.setdefault(v, []).append((u, w))
        for si, source in enumerate(self.tau):
            dist = {source: Fraction(0)}
            heap = [(Fraction(0), source)]
            done = set()
            while heap:
                d, u = heapq.heappop(heap)
                if u in done:
                    continue
                done.add(u)
                for v, w in adj.get(u, ()):
                    nd = d + w
                    if v not in dist or nd < dist[v]:
                        dist[v] = nd
                        heapq.heappush(heap, (nd, v))
            for sj in range(si + 1, len(self.tau)):
                if dist.get(self.tau[sj]) != self.rows[si][sj]:
                    return False
        return True

    def _greedy_incumbent(self) -> None:
        mask = (1 << self.m) - 1
        order = sorted(range(self.m), key=lambda k: (-self.weights[k], -k))
        for k in order:
            trial = mask & ~(1 << k)
            if self.feasible(trial):
                mask = trial
        self._offer(mask)

    def _offer(self, mask: int) -> None:
        subset = tuple(k for k in range(self.m) if mask >> k & 1)
        total = sum((self.weights[k] for k in subset), Fraction(0))
        key = (total, subset)
        if self.best_len is None or key < (self.best_len, self.best_set):
            self.best_len, self.best_set = key

    def run(self) -> tuple[tuple, Fraction]:
        self._greedy_incumbent()
        full = (1 << self.m) - 1

        def dfs(k: int, included: int, weight: Fraction) -> None:
            if weight > self.best_len:
                return
            if k == self.m:
                self._offer(included)
                return
            rest_above = full & ~((1 << (k + 1)) - 1)
            # exclude edge k if everything else still realizes the metric
            if self.feasible(included | rest_above):
                dfs(k + 1, included, weight)
            dfs(k + 1, included | (1 << k), weight + self.weights[k])

        dfs(0, 0, Fraction(0))
        edges = tuple(self.edge_list[k] for k in self.best_set)
        return edges, self.best_len


def min_subrealization(
    graph: RealizationGraph,
    metric: FiniteMetric,
    max_edges: int = DEFAULT_MAX_EDGES,
) -> tuple[tuple, Fraction]:
    """Exhaustive minimum-total-length edge subset whose subgraph still
    realizes the metric exactly.  Returns (edge keys, total length)."""
    report = verify_realization(graph, metric)
    if not report.ok:
        raise NotARealization(f"input graph fails on pair {report.first_failure[:2]}")
    if len(graph.edges) > max_edges:
        raise InstanceTooLarge(
            f"subrealization search bounded at {max_edges} edges, got {len(graph.edges)}"
        )
    return _SubsetSearch(graph, metric).run()


def min_manhattan_length(pset: PointSet2D, max_edges: int = DEFAULT_MAX_EDGES) -> Fraction:
    """Minimum Manhattan network length for a planar point set: the
    minimal subrealization of its full Hanan grid, which always contains
    a minimum network."""
    grid = hanan_grid(pset)
    _, total = min_subrealization(grid, pset.metric(), max_edges)
    return total
