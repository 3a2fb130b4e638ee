"""Seeded instance generators for the four benchmark families (planar l1
point sets, sums of two random tree metrics, random two-compatible split
systems, uniformly random metrics) and the Hanan grid construction that
bridges planar l1 metrics to Manhattan networks.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .errors import GenerationStall, ZeroOffDiagonal
from .metric import FiniteMetric, RealizationGraph, TightPoint
from .splits import PointSet2D, Split, WeightedSplitSystem, compatible, induced_metric

GRID_BOUND = 10**6
WEIGHT_BOUND = 10**6
DISTANCE_LOW = 10**6
DISTANCE_HIGH = 2 * 10**6
_STALL_LIMIT = 10**4


def _labels(n: int) -> tuple:
    return tuple(f"x{i}" for i in range(n))


def gen_l1_points(n: int, seed: int) -> PointSet2D:
    """n distinct points with integer coordinates uniform on the
    [0, 10^6]^2 grid; duplicate draws are resampled."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = random.Random(seed)
    points = []
    seen = set()
    while len(points) < n:
        p = (rng.randint(0, GRID_BOUND), rng.randint(0, GRID_BOUND))
        if p in seen:
            continue
        seen.add(p)
        points.append(p)
    return PointSet2D(points)


def gen_random_metric(n: int, seed: int) -> FiniteMetric:
    """Pairwise distances uniform integers in [10^6, 2*10^6]; the upper
    bound is twice the lower, so every triangle inequality holds."""
    if n < 2:
        raise ValueError("need n >= 2")
    rng = random.Random(seed)
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = Fraction(rng.randint(DISTANCE_LOW, DISTANCE_HIGH))
            rows[i][j] = rows[j][i] = d
    return FiniteMetric(_labels(n), rows)


# -- tree metrics ------------------------------------------------------


def _random_binary_tree(n_leaves: int, rng: random.Random) -> list:
    """Random leaf-labeled binary tree topology built by attaching each
    new leaf to a uniformly chosen edge.  Leaves are 0..n-1, internal
    nodes get ids from n upward.  Returns (u, v, weight) triples with
    integer weights uniform in [1, 10^6]."""
    edges = [(0, 1)]
    next_internal = n_leaves
    for leaf in range(2, n_leaves):
        k = rng.randrange(len(edges))
        u, v = edges[k]
        m = next_internal
        next_internal += 1
        edges[k] = (u, m)
        edges.append((m, v))
        edges.append((m, leaf))
    return [(u, v, Fraction(rng.randint(1, WEIGHT_BOUND))) for u, v in edges]


def _leaf_distances(edges: list, n_leaves: int) -> list:
    adj = {}
    for u, v, w in edges:
        adj.setdefault(u, []).append((v, w))
        adj.setdefault(v, []).append((u, w))
    rows = [[Fraction(0)] * n_leaves for _ in range(n_leaves)]
    for source in range(n_leaves):
        dist = {source: Fraction(0)}
        stack = [source]
        while stack:
            u = stack.pop()
            for v, w in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + w
                    stack.append(v)
        for other in range(n_leaves):
            rows[source][other] = dist[other]
    return rows


def gen_tree_metric(n: int, seed: int) -> tuple[FiniteMetric, Fraction]:
    """One random weighted binary tree: its leaf metric together with the
    total edge weight (the optimal realization length of a tree metric)."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(seed)
    edges = _random_binary_tree(n, rng)
    total = sum(w for _, _, w in edges)
    return FiniteMetric(_labels(n), _leaf_distances(edges, n)), total


def gen_double_tree_metric(n: int, seed: int) -> FiniteMetric:
    """Sum of the leaf metrics of two independent random weighted binary
    trees on the same n leaves."""
    if n < 3:
        raise ValueError("need n >= 3")
    rng = random.Random(seed)
    rows_a = _leaf_distances(_random_binary_tree(n, rng), n)
    rows_b = _leaf_distances(_random_binary_tree(n, rng), n)
    rows = [
        [rows_a[i][j] + rows_b[i][j] for j in range(n)] for i in range(n)
    ]
    return FiniteMetric(_labels(n), rows)


# -- two-compatible split systems --------------------------------------


def gen_two_compatible_system(n: int, seed: int) -> WeightedSplitSystem:
    """2n distinct random splits kept two-compatible by rejection, with
    integer weights uniform in [1, 10^6].  Whole systems are retried when
    some pair of elements ends up separated by no split; generation
    aborts with GenerationStall after 10^4 consecutive rejections."""
    if n < 2:
        raise ValueError("need n >= 2")
    labels = _labels(n)
    rng = random.Random(seed)
    while True:
        accepted: list[Split] = []
        weights: list[Fraction] = []
        incompat: list[set] = []
        stall = 0
        while len(accepted) < 2 * n:
            if stall >= _STALL_LIMIT:
                raise GenerationStall(
                    f"no admissible split found in {_STALL_LIMIT} draws (n={n})"
                )
            side = frozenset(x for x in labels if rng.randrange(2))
            if not side or len(side) == n:
                stall += 1
                continue
            cand = Split.of(labels, side)
            if any(cand == s for s in accepted):
                stall += 1
                continue
            clashes = [
                i for i, s in enumerate(accepted) if not compatible(cand, s)
            ]
            if any(
                j in incompat[i]
                for k, i in enumerate(clashes)
                for j in clashes[k + 1 :]
            ):
                stall += 1
                continue
            for i in clashes:
                incompat[i].add(len(accepted))
            incompat.append(set(clashes))
            accepted.append(cand)
            weights.append(Fraction(rng.randint(1, WEIGHT_BOUND)))
            stall = 0
        system = WeightedSplitSystem(labels, dict(zip(accepted, weights)))
        try:
            induced_metric(system)
        except ZeroOffDiagonal:
            continue
        return system


# -- Hanan grids -------------------------------------------------------


def hanan_grid(pset: PointSet2D) -> RealizationGraph:
    """The full grid graph on all coordinate pairs occurring in the point
    set, edges weighted by l1 length, labeled by the input points.

    Grid vertices carry their distance vectors to the point set as
    coordinates, so grid graphs and tight-span subgraphs share one vertex
    representation; the dedup key is the grid position itself, because
    distinct grid points may have equal distance vectors.
    """
    if len(pset) < 2:
        raise ValueError("need at least two points")
    metric = pset.metric()
    xs = sorted({p[0] for p in pset.points})
    ys = sorted({p[1] for p in pset.points})
    graph = RealizationGraph(metric)
    node = {}
    for x in xs:
        for y in ys:
            vec = tuple(abs(x - px) + abs(y - py) for px, py in pset.points)
            node[(x, y)] = graph.add_vertex(
                TightPoint(metric, vec), key=("grid", x, y)
            )
    for y in ys:
        for x1, x2 in zip(xs, xs[1:]):
            graph.add_edge(node[(x1, y)], node[(x2, y)], x2 - x1)
    for x in xs:
        for y1, y2 in zip(ys, ys[1:]):
            graph.add_edge(node[(x, y1)], node[(x, y2)], y2 - y1)
    for label, p in zip(pset.labels, pset.points):
        graph.set_label(label, node[p])
    return graph
