"""The realization heuristic: build a realization of a finite metric as a
subgraph of the 1-skeleton of its tight span, pair by pair, stepping
between adjacent tight-span vertices along l-infinity geodesics and
reusing edges added for earlier pairs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import StepFailure
from .metric import FiniteMetric, RealizationGraph, TightPoint, kuratowski, linf_dist
from .tightspan import adjacent_vertices


def pair_schedule(metric: FiniteMetric) -> tuple:
    """All unordered label pairs, sorted by increasing distance; ties are
    broken by label order.  Processing short pairs first maximizes edge
    reuse: a pair on a geodesic through an already-processed element adds
    no edges at all."""
    labels = metric.labels
    pairs = [
        (labels[i], labels[j])
        for i in range(metric.n)
        for j in range(i + 1, metric.n)
    ]
    pairs.sort(key=lambda p: (metric.d(*p), metric.index(p[0]), metric.index(p[1])))
    return tuple(pairs)


def _geodesic_step(v: TightPoint, target: TightPoint, x: str, cache=None) -> TightPoint:
    if cache is None:
        neighbors = adjacent_vertices(v)
    else:
        neighbors = cache.get(v.coords)
        if neighbors is None:
            neighbors = adjacent_vertices(v)
            cache[v.coords] = neighbors
    to_target = linf_dist(v, target)
    best = None
    for w, length in neighbors:
        remaining = linf_dist(w, target)
        if length + remaining == to_target:
            key = (remaining, w.coords)
            if best is None or key < best[0]:
                best = (key, w)
    if best is None:
        raise StepFailure(v, x)
    return best[1]


def simplex_step(v: TightPoint, x: str) -> TightPoint:
    """Move from vertex v to an adjacent vertex w on a geodesic toward
    k_x, minimizing the remaining distance; ties go to the smallest
    coordinate vector.  The geodesic condition forces a strict decrease.
    """
    return _geodesic_step(v, kuratowski(v.metric, x), x)


def _linf_equals(a: tuple, b: tuple, value: Fraction) -> bool:
    """max|a - b| == value, aborting as soon as the bound is exceeded."""
    running = None
    for p, q in zip(a, b):
        diff = p - q if p >= q else q - p
        if diff > value:
            return False
        if running is None or diff > running:
            running = diff
    return running == value


def _best_reuse(u: TightPoint, target: TightPoint, graph: RealizationGraph, u_id: int) -> TightPoint:
    """The vertex of the partial graph that is reachable from u along
    existing edges at its exact l-infinity distance, lies on a geodesic
    from u to the target, and is closest to the target (ties: smallest
    coordinates).  u itself always qualifies, at distance zero."""
    bound = linf_dist(u, target)
    dist = graph.shortest_paths_from(u_id, limit=bound)
    best = None
    for node, d_graph in dist.items():
        cand = graph.points[node]
        if not _linf_equals(u.coords, cand.coords, d_graph):
            continue
        remaining = linf_dist(cand, target)
        if d_graph + remaining != bound:
            continue
        key = (remaining, cand.coords)
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def find_path(
    metric: FiniteMetric,
    u: TightPoint,
    x: str,
    graph: RealizationGraph,
    _cache=None,
) -> None:
    """Extend the partial realization so it contains a path from u to k_x
    of total weight exactly max|u - k_x|.

    While u is a vertex of the graph, the search first walks as far
    toward k_x as the existing edges allow (see _best_reuse), then a
    simplex step adds one fresh skeleton edge, and the walk continues
    from its far end.  A vertex just added with its single edge can never
    offer a better reuse than itself, so the scan is skipped there.
    """
    target = kuratowski(metric, x)
    fresh = False
    while True:
        u_id = graph.find_vertex(u.coords)
        if u_id is None:
            graph.add_vertex(u)
            v = u
        elif fresh:
            v = u
        else:
            v = _best_reuse(u, target, graph, u_id)
        if v == target:
            return
        w = _geodesic_step(v, target, x, _cache)
        existed = graph.find_vertex(w.coords) is not None
        w_id = graph.add_vertex(w)
        graph.add_edge(graph.find_vertex(v.coords), w_id, linf_dist(v, w))
        u = w
        fresh = not existed


def realize(metric: FiniteMetric) -> RealizationGraph:
    """Build a realization of the metric as a subgraph of the tight-span
    1-skeleton.  The result is connected, verifies exactly against the
    metric, and is deterministic for a fixed input."""
    graph = RealizationGraph(metric)
    for x in metric.labels:
        node = graph.add_vertex(kuratowski(metric, x))
        graph.set_label(x, node)
    neighbor_cache: dict = {}
    for x, y in pair_schedule(metric):
        find_path(metric, kuratowski(metric, x), y, graph, _cache=neighbor_cache)
    return graph


@dataclass
class StatsReport:
    total_length: Fraction
    r_sg: Fraction | None = None
    r_ts: Fraction | None = None


def stats(
    graph: RealizationGraph,
    metric: FiniteMetric,
    minimal_total: Fraction | None = None,
    skeleton_total: Fraction | None = None,
) -> StatsReport:
    """Total length plus the quality ratios against a minimal
    subrealization and against the full 1-skeleton, when those baseline
    lengths are supplied."""
    total = graph.total_length()
    r_sg = total / minimal_total if minimal_total else None
    r_ts = total / skeleton_total if skeleton_total else None
    return StatsReport(total, r_sg, r_ts)
