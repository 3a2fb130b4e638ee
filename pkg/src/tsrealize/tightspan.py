"""Local polyhedral geometry of the constraint polyhedron of a metric:
tight graphs, membership and vertex tests, face dimension, and the
enumeration of all polyhedron vertices adjacent to a given vertex.

The polyhedron in question is {f : f(x) + f(y) >= D(x, y) for all x, y},
with x = y allowed (the diagonal constraints f(x) >= 0).  Nothing here
ever materializes the whole complex; everything is local to one point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NotAVertex, NotInPolyhedron, NotInTightSpan
from .metric import FiniteMetric, TightPoint, linf_dist


@dataclass(frozen=True)
class TightGraph:
    """Equality structure of the polyhedron constraints at a point.

    Nodes are ground-set indices; an edge {i, j} means f_i + f_j equals
    D(i, j) exactly, a loop at i means f_i = 0.
    """

    metric: FiniteMetric
    adj: tuple  # tuple of frozensets of indices
    loops: frozenset

    @property
    def edges(self) -> set:
        """Tight edges as frozensets of label pairs."""
        labels = self.metric.labels
        return {
            frozenset((labels[i], labels[j]))
            for i in range(len(labels))
            for j in self.adj[i]
            if i < j
        }

    @property
    def loop_labels(self) -> set:
        return {self.metric.labels[i] for i in self.loops}


def _check_in_polyhedron(f: TightPoint) -> tuple | None:
    """Return the first violated constraint (i, j) or None."""
    coords = f.coords
    dist = f.metric.dist
    n = len(coords)
    for i in range(n):
        if coords[i] < 0:
            return (i, i)
        for j in range(i + 1, n):
            if coords[i] + coords[j] < dist[i][j]:
                return (i, j)
    return None


def in_polyhedron(f: TightPoint) -> bool:
    return _check_in_polyhedron(f) is None


def tight_graph(f: TightPoint) -> TightGraph:
    """The exact equality graph at f; raises NotInPolyhedron otherwise."""
    bad = _check_in_polyhedron(f)
    if bad is not None:
        i, j = bad
        labels = f.metric.labels
        raise NotInPolyhedron(
            labels[i], labels[j], f.coords[i] + f.coords[j], f.metric.dist[i][j]
        )
    coords = f.coords
    dist = f.metric.dist
    n = len(coords)
    adj = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if coords[i] + coords[j] == dist[i][j]:
                adj[i].add(j)
                adj[j].add(i)
    loops = frozenset(i for i in range(n) if coords[i] == 0)
    return TightGraph(f.metric, tuple(frozenset(s) for s in adj), loops)


def _odd_components(adj, loops, nodes) -> list[tuple[frozenset, bool]]:
    """Connected components of the tight graph induced on `nodes`, each
    with a flag for containing an odd closed walk (loop or odd cycle)."""
    nodes = set(nodes)
    out = []
    unseen = set(nodes)
    while unseen:
        start = unseen.pop()
        color = {start: 0}
        queue = [start]
        odd = start in loops
        while queue:
            u = queue.pop()
            for v in adj[u]:
                if v not in nodes:
                    continue
                if v in color:
                    if color[v] == color[u]:
                        odd = True
                else:
                    color[v] = 1 - color[u]
                    if v in loops:
                        odd = True
                    unseen.discard(v)
                    queue.append(v)
        out.append((frozenset(color), odd))
    return out


def in_tight_span(f: TightPoint) -> bool:
    """True iff f is in the polyhedron and coordinatewise minimal, i.e.
    every ground element is covered by a tight edge or loop."""
    if _check_in_polyhedron(f) is not None:
        return False
    tg = tight_graph(f)
    return all(tg.adj[i] or i in tg.loops for i in range(f.metric.n))


def face_dim(f: TightPoint) -> int:
    """Dimension of the smallest face of the polyhedron containing f:
    the number of tight-graph components without an odd closed walk,
    isolated nodes included."""
    tg = tight_graph(f)
    comps = _odd_components(tg.adj, tg.loops, range(f.metric.n))
    return sum(1 for _, odd in comps if not odd)


def is_vertex(f: TightPoint) -> bool:
    """True iff every tight-graph component carries an odd closed walk."""
    return face_dim(f) == 0


@dataclass(frozen=True)
class EdgeDirection:
    """A normalized direction of a bounded 1-face leaving a vertex:
    -1 on neg_set, +1 on pos_set (its tight neighborhood), 0 elsewhere."""

    metric: FiniteMetric
    neg_set: frozenset
    pos_set: frozenset

    def sign(self, x: str) -> int:
        i = self.metric.index(x)
        if i in self.neg_set:
            return -1
        if i in self.pos_set:
            return 1
        return 0


def _neg_set_candidates(adj, loops, n):
    """Enumerate nonempty negSet candidates: loop-free independent sets of
    the tight graph, connected in its common-neighbor square graph.

    Yields each candidate exactly once (rooted growth with exclusion).
    Branches whose permanently excluded nodes can no longer be covered by
    any extension are cut; this is what keeps star-like tight graphs,
    where the square graph is complete, from exploding.
    """
    eligible = [v for v in range(n) if v not in loops]
    elig_set = set(eligible)

    def satisfiable(z, neg, pos, excluded, root, comp_odd):
        # Can excluded node z still be covered in some completion?
        if z in loops or z in pos:
            return True
        # future negs: eligible, above the root, unexcluded, independent of neg
        for w in adj[z]:
            if w in elig_set and w > root and w not in excluded and not (adj[w] & neg):
                return True
        return comp_odd.get(z, False)

    def rec(neg, pos, excluded, root):
        yield frozenset(neg)
        ext = sorted(
            v
            for v in elig_set
            if v > root
            and v not in neg
            and v not in excluded
            and not (adj[v] & neg)
            and any(adj[v] & adj[u] for u in neg)
        )
        if not ext:
            return
        # largest zero set any completion of this neg can leave behind
        zero_max = set(range(len(adj))) - neg - pos
        comp_odd = {}
        for comp, odd in _odd_components(adj, loops, zero_max):
            for node in comp:
                comp_odd[node] = odd
        local_excluded = set(excluded)
        for v in ext:
            yield from rec(neg | {v}, pos | adj[v], local_excluded, root)
            local_excluded.add(v)
            # prune: if v can never be covered again, later siblings are dead
            if not satisfiable(v, neg, pos, local_excluded, root, comp_odd):
                return

    for root in eligible:
        yield from rec({root}, set(adj[root]), set(range(root)), root)


def adjacent_vertices(f: TightPoint) -> list[tuple[TightPoint, Fraction]]:
    """All vertices w of the polyhedron such that [f, w] is a bounded
    1-face, each with its exact length max|f - w|.

    A candidate direction is valid when no tight constraint decreases
    along it, its neg/pos bipartite tight subgraph is connected, and
    every tight component left in the zero set keeps an odd closed walk.
    Directions with no blocking constraint span unbounded rays and are
    dropped.  Results are sorted by neighbor coordinates.
    """
    if not in_tight_span(f):
        raise NotInTightSpan(f"{f!r} is not in the tight span")
    if not is_vertex(f):
        raise NotAVertex(f"{f!r} is not a vertex")
    metric = f.metric
    n = metric.n
    tg = tight_graph(f)
    adj, loops = tg.adj, tg.loops
    coords = f.coords
    dist = metric.dist
    slack = [
        [coords[i] + coords[j] - dist[i][j] for j in range(n)] for i in range(n)
    ]

    results = []
    for neg in _neg_set_candidates(adj, loops, n):
        pos = frozenset().union(*(adj[v] for v in neg))
        zero = [k for k in range(n) if k not in neg and k not in pos]
        if not all(odd for _, odd in _odd_components(adj, loops, zero)):
            continue
        # first non-tight constraint hit along the ray f + t*d; only pairs
        # inside neg (rate 2), neg-to-zero pairs (rate 1), and the neg
        # diagonals (never tight: neg carries no loops) can block, and the
        # diagonals always do, so the segment is bounded.
        neg_sorted = sorted(neg)
        step = min(coords[i] for i in neg_sorted)
        for a, i in enumerate(neg_sorted):
            row = slack[i]
            for j in neg_sorted[a + 1 :]:
                t = row[j] / 2
                if t < step:
                    step = t
            for j in zero:
                if row[j] < step:
                    step = row[j]
        d = [0] * n
        for v in neg:
            d[v] = -1
        for v in pos:
            d[v] = 1
        neighbor = TightPoint(
            metric, tuple(coords[i] + step * d[i] for i in range(n))
        )
        results.append((neighbor, step))
    results.sort(key=lambda pair: pair[0].coords)
    return results
