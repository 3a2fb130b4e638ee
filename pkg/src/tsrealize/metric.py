"""Exact finite metric spaces, points of the ambient l-infinity space, and
weighted realization graphs.

All coordinates, distances and edge weights are `fractions.Fraction`;
every comparison is exact, there is no tolerance anywhere.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    AsymmetricMatrix,
    DisconnectedGraph,
    GroundSetMismatch,
    NonzeroDiagonal,
    ParseError,
    TriangleViolation,
    UnknownLabel,
    UnlabeledElement,
    ZeroOffDiagonal,
)


def as_fraction(value) -> Fraction:
    """Coerce ints, Fractions and strings like '3' or '5/2' to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


def format_fraction(q: Fraction) -> str:
    """Exact text form: integer when possible, 'p/q' otherwise."""
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


class FiniteMetric:
    """A finite metric space: ordered labels plus an exact distance matrix.

    Construction validates all metric axioms (symmetry, zero diagonal,
    strict positivity off the diagonal, triangle inequality) and raises
    the matching error for the first violation found.  The label order is
    the canonical total order used for tie-breaking everywhere else.
    """

    __slots__ = ("labels", "dist", "_index")

    def __init__(self, labels: Sequence[str], dist: Sequence[Sequence]):
        labels = tuple(str(x) for x in labels)
        if len(set(labels)) != len(labels):
            raise ParseError("duplicate labels")
        n = len(labels)
        if len(dist) != n or any(len(row) != n for row in dist):
            raise ParseError("distance matrix shape does not match label count")
        rows = tuple(tuple(as_fraction(v) for v in row) for row in dist)
        for i in range(n):
            if rows[i][i] != 0:
                raise NonzeroDiagonal(labels[i])
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise AsymmetricMatrix(labels[i], labels[j])
                if rows[i][j] == 0:
                    raise ZeroOffDiagonal(labels[i], labels[j])
                if rows[i][j] < 0:
                    raise TriangleViolation(labels[i], labels[j], labels[i])
        for j in range(n):
            for i in range(n):
                if i == j:
                    continue
                dij = rows[i][j]
                for k in range(i + 1, n):
                    if k == j:
                        continue
                    if rows[i][k] > dij + rows[j][k]:
                        raise TriangleViolation(labels[i], labels[j], labels[k])
        self.labels = labels
        self.dist = rows
        self._index = {x: i for i, x in enumerate(labels)}

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, x: str) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise UnknownLabel(x) from None

    def d(self, x: str, y: str) -> Fraction:
        return self.dist[self.index(x)][self.index(y)]

    def point(self, coords) -> TightPoint:
        """Build a TightPoint from a mapping {label: value} or a sequence
        in label order."""
        if isinstance(coords, Mapping):
            missing = set(self.labels) - set(coords)
            if missing:
                raise UnknownLabel(sorted(missing)[0])
            vec = tuple(as_fraction(coords[x]) for x in self.labels)
        else:
            vec = tuple(as_fraction(v) for v in coords)
            if len(vec) != self.n:
                raise GroundSetMismatch(
                    f"expected {self.n} coordinates, got {len(vec)}"
                )
        return TightPoint(self, vec)

    def __eq__(self, other):
        return (
            isinstance(other, FiniteMetric)
            and self.labels == other.labels
            and self.dist == other.dist
        )

    def __hash__(self):
        return hash((self.labels, self.dist))

    def __repr__(self):
        return f"FiniteMetric(n={self.n}, labels={self.labels!r})"


def validate_metric(raw_matrix, labels) -> FiniteMetric:
    """Validate a raw square matrix of rationals as a finite metric."""
    return FiniteMetric(labels, raw_matrix)


@dataclass(frozen=True)
class TightPoint:
    """A candidate point f: X -> Q of the ambient polyhedron of a metric.

    Membership in the polyhedron or the tight span is a query (see the
    tightspan module), not a construction invariant.
    """

    metric: FiniteMetric
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.metric.n:
            raise GroundSetMismatch("coordinate count does not match ground set")

    def coord(self, x: str) -> Fraction:
        return self.coords[self.metric.index(x)]

    def __getitem__(self, x: str) -> Fraction:
        return self.coord(x)

    def as_dict(self) -> dict:
        return dict(zip(self.metric.labels, self.coords))

    def __eq__(self, other):
        return (
            isinstance(other, TightPoint)
            and self.metric.labels == other.metric.labels
            and self.coords == other.coords
        )

    def __hash__(self):
        return hash(self.coords)

    def __repr__(self):
        vals = ", ".join(format_fraction(c) for c in self.coords)
        return f"TightPoint({vals})"


def kuratowski(metric: FiniteMetric, x: str) -> TightPoint:
    """The canonical image of x: the distance row y -> D(x, y)."""
    i = metric.index(x)
    return TightPoint(metric, metric.dist[i])


def linf_dist(f: TightPoint, g: TightPoint) -> Fraction:
    """Exact maximum coordinate deviation between two points."""
    if f.metric.labels != g.metric.labels:
        raise GroundSetMismatch("points live over different ground sets")
    return max(abs(a - b) for a, b in zip(f.coords, g.coords))


class RealizationGraph:
    """Weighted graph over TightPoints with a labeling of ground-set elements.

    Vertices are deduplicated by an exact identity key, by default the
    coordinate vector of the point.  Hanan grids pass explicit grid keys
    instead, because distinct grid points may share one distance vector.
    """

    def __init__(self, metric: FiniteMetric):
        self.metric = metric
        self.points: list[TightPoint] = []
        self._by_key: dict = {}
        self._keys: list = []
        self.edges: dict[tuple[int, int], Fraction] = {}
        self._adj: dict[int, set[int]] = {}
        self.labeling: dict[str, int] = {}

    # -- construction -------------------------------------------------

    def add_vertex(self, point: TightPoint, key=None) -> int:
        if key is None:
            key = point.coords
        node = self._by_key.get(key)
        if node is not None:
            return node
        node = len(self.points)
        self.points.append(point)
        self._by_key[key] = node
        self._keys.append(key)
        self._adj[node] = set()
        return node

    def find_vertex(self, key) -> int | None:
        return self._by_key.get(key)

    def add_edge(self, u: int, v: int, weight: Fraction) -> None:
        if u == v:
            raise ValueError("self-loops are not allowed")
        weight = as_fraction(weight)
        if weight <= 0:
            raise ValueError("edge weights must be strictly positive")
        e = (u, v) if u < v else (v, u)
        old = self.edges.get(e)
        if old is not None:
            if old != weight:
                raise ValueError(f"edge {e} re-added with different weight")
            return
        self.edges[e] = weight
        self._adj[u].add(v)
        self._adj[v].add(u)

    def set_label(self, x: str, node: int) -> None:
        self.metric.index(x)
        self.labeling[x] = node

    # -- queries ------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.points)

    def neighbors(self, u: int):
        return self._adj[u]

    def total_length(self) -> Fraction:
        return sum(self.edges.values(), Fraction(0))

    def has_vertex(self, point: TightPoint) -> bool:
        return point.coords in self._by_key

    def is_connected(self) -> bool:
        if not self.points:
            return True
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(self.points)

    def shortest_paths_from(self, source: int, limit: Fraction | None = None) -> dict[int, Fraction]:
        """Exact Dijkstra distances from a vertex to all reachable
        vertices, optionally only those within a distance limit."""
        dist = {source: Fraction(0)}
        heap = [(Fraction(0), source)]
        done = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v in self._adj[u]:
                e = (u, v) if u < v else (v, u)
                nd = d + self.edges[e]
                if limit is not None and nd > limit:
                    continue
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    heapq.heappush(heap, (nd, v))
        return dist

    def edge_subgraph(self, edge_keys) -> "RealizationGraph":
        """The subgraph on a set of edges, keeping labeled vertices and
        edge endpoints, with vertices renumbered in original id order."""
        keep = set(self.labeling.values())
        for u, v in edge_keys:
            keep.add(u)
            keep.add(v)
        sub = RealizationGraph(self.metric)
        mapping = {}
        for node in sorted(keep):
            mapping[node] = sub.add_vertex(self.points[node], key=self._keys[node])
        for u, v in sorted(edge_keys):
            sub.add_edge(mapping[u], mapping[v], self.edges[(u, v) if u < v else (v, u)])
        for x, node in self.labeling.items():
            sub.set_label(x, mapping[node])
        return sub

    # -- serialization ------------------------------------------------

    def to_json(self) -> str:
        nodes = [
            {
                "id": i,
                "coords": {
                    x: format_fraction(c)
                    for x, c in zip(self.metric.labels, p.coords)
                },
            }
            for i, p in enumerate(self.points)
        ]
        edges = [
            {"u": u, "v": v, "weight": format_fraction(w)}
            for (u, v), w in sorted(self.edges.items())
        ]
        labels = {x: self.labeling[x] for x in self.metric.labels if x in self.labeling}
        return json.dumps(
            {"nodes": nodes, "edges": edges, "labels": labels},
            indent=2,
            sort_keys=False,
        )

    @classmethod
    def from_json(cls, text: str, metric: FiniteMetric) -> "RealizationGraph":
        try:
            data = json.loads(text)
            graph = cls(metric)
            for node in data["nodes"]:
                point = metric.point({x: Fraction(v) for x, v in node["coords"].items()})
                got = graph.add_vertex(point, key=("node", int(node["id"])))
                if got != int(node["id"]):
                    raise ParseError("node ids must be 0..n-1 in order")
            for edge in data["edges"]:
                graph.add_edge(int(edge["u"]), int(edge["v"]), Fraction(edge["weight"]))
            for x, node in data["labels"].items():
                graph.set_label(x, int(node))
        except (KeyError, ValueError, TypeError) as exc:
            raise ParseError(f"malformed graph JSON: {exc}") from exc
        return graph

    def to_dot(self) -> str:
        lines = ["graph realization {"]
        node_labels = {}
        for x, node in self.labeling.items():
            node_labels.setdefault(node, []).append(x)
        for i in range(len(self.points)):
            tags = node_labels.get(i)
            if tags:
                name = ",".join(sorted(tags, key=self.metric.index))
                lines.append(f'  n{i} [label="{name}", shape=box];')
            else:
                lines.append(f'  n{i} [label="", shape=point];')
        for (u, v), w in sorted(self.edges.items()):
            lines.append(f'  n{u} -- n{v} [label="{format_fraction(w)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass
class VerificationReport:
    ok: bool
    total_length: Fraction
    first_failure: tuple | None = None  # (x, y, graph_distance, expected)

    def __bool__(self):
        return self.ok


def verify_realization(graph: RealizationGraph, metric: FiniteMetric) -> VerificationReport:
    """Check that shortest paths between labeled vertices reproduce the
    metric exactly.

    Raises UnlabeledElement or DisconnectedGraph for structural problems;
    distance mismatches are reported, not raised.
    """
    for x in metric.labels:
        if x not in graph.labeling:
            raise UnlabeledElement(x)
    if not graph.is_connected():
        raise DisconnectedGraph("realization graph is not connected")
    total = graph.total_length()
    for i, x in enumerate(metric.labels):
        dist = graph.shortest_paths_from(graph.labeling[x])
        for y in metric.labels[i + 1 :]:
            got = dist.get(graph.labeling[y])
            expected = metric.d(x, y)
            if got != expected:
                return VerificationReport(False, total, (x, y, got, expected))
    return VerificationReport(True, total)


# -- metric text format ----------------------------------------------


def _content_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        out.append(stripped)
    return out


def parse_metric_file(text: str) -> FiniteMetric:
    """Parse the metric text format: n, labels, then n matrix rows."""
    lines = _content_lines(text)
    if not lines:
        raise ParseError("empty metric file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"expected element count, got {lines[0]!r}") from None
    if len(lines) < 2 + n:
        raise ParseError("truncated metric file")
    labels = lines[1].split()
    if len(labels) != n:
        raise ParseError(f"expected {n} labels, got {len(labels)}")
    rows = []
    for line in lines[2 : 2 + n]:
        entries = line.split()
        if len(entries) != n:
            raise ParseError(f"expected {n} entries per row, got {len(entries)}")
        try:
            rows.append([Fraction(e) for e in entries])
        except ValueError:
            raise ParseError(f"bad rational in row: {line!r}") from None
    return FiniteMetric(labels, rows)


def format_metric_file(metric: FiniteMetric) -> str:
    lines = [str(metric.n), " ".join(metric.labels)]
    for row in metric.dist:
        lines.append(" ".join(format_fraction(v) for v in row))
    return "\n".join(lines) + "\n"
