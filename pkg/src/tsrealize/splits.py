"""Split systems over a finite ground set, compatibility tests, and the
decomposition of planar l1 metrics into weighted splits.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import GroundSetMismatch, ParseError
from .metric import FiniteMetric, as_fraction, format_fraction, validate_metric


@dataclass(frozen=True)
class Split:
    """A bipartition of an ordered ground set into two nonempty sides.

    Canonical form: side_a contains the first label of the ground order,
    so equal bipartitions compare and hash equal.
    """

    ground: tuple
    side_a: frozenset
    side_b: frozenset

    @classmethod
    def of(cls, ground: Sequence[str], one_side: Iterable[str]) -> "Split":
        ground = tuple(ground)
        members = set(ground)
        a = frozenset(one_side)
        if not a <= members:
            raise GroundSetMismatch(f"labels {sorted(a - members)} not in ground set")
        b = frozenset(members - a)
        if not a or not b:
            raise ParseError("both sides of a split must be nonempty")
        if ground[0] not in a:
            a, b = b, a
        return cls(ground, a, b)

    def side_of(self, x: str) -> frozenset:
        if x in self.side_a:
            return self.side_a
        if x in self.side_b:
            return self.side_b
        raise GroundSetMismatch(f"label {x!r} not in ground set")

    def separates(self, x: str, y: str) -> bool:
        return self.side_of(x) is not self.side_of(y)

    def sort_key(self) -> tuple:
        return tuple(1 if x in self.side_b else 0 for x in self.ground)

    def __repr__(self):
        order = {x: i for i, x in enumerate(self.ground)}
        a = " ".join(sorted(self.side_a, key=order.get))
        b = " ".join(sorted(self.side_b, key=order.get))
        return f"Split({a} | {b})"


def compatible(s1: Split, s2: Split) -> bool:
    """True iff one of the four side intersections is empty."""
    if s1.ground != s2.ground:
        raise GroundSetMismatch("splits live over different ground sets")
    return (
        not (s1.side_a & s2.side_a)
        or not (s1.side_a & s2.side_b)
        or not (s1.side_b & s2.side_a)
        or not (s1.side_b & s2.side_b)
    )


class WeightedSplitSystem:
    """A set of canonical splits with strictly positive rational weights."""

    def __init__(self, ground: Sequence[str], weights: dict | None = None):
        self.ground = tuple(ground)
        self._weights: dict[Split, Fraction] = {}
        if weights:
            for split, w in weights.items():
                self.add(split, w)

    def add(self, split: Split, weight) -> None:
        if split.ground != self.ground:
            raise GroundSetMismatch("split ground set differs from system ground set")
        weight = as_fraction(weight)
        if weight <= 0:
            raise ValueError("split weights must be strictly positive")
        if split in self._weights:
            raise ValueError(f"duplicate split {split!r}")
        self._weights[split] = weight

    @property
    def splits(self) -> list[Split]:
        return sorted(self._weights, key=Split.sort_key)

    def weight(self, split: Split) -> Fraction:
        return self._weights[split]

    def __len__(self):
        return len(self._weights)

    def __contains__(self, split: Split):
        return split in self._weights

    def __iter__(self):
        return iter(self.splits)

    def items(self):
        return [(s, self._weights[s]) for s in self.splits]


def is_two_compatible(system) -> bool:
    """True iff no three splits are pairwise incompatible (triangle-free
    incompatibility graph).  Accepts a system or any iterable of splits."""
    splits = list(system.splits) if isinstance(system, WeightedSplitSystem) else list(system)
    m = len(splits)
    incompat = [set() for _ in range(m)]
    for i in range(m):
        for j in range(i + 1, m):
            if not compatible(splits[i], splits[j]):
                incompat[i].add(j)
                incompat[j].add(i)
    for i in range(m):
        for j in incompat[i]:
            if j > i and incompat[i] & incompat[j]:
                return False
    return True


def split_metric(split: Split) -> tuple:
    """The 0/1 pseudometric matrix of a split, in ground order.

    Returned as a raw matrix: it has off-diagonal zeros on same-side
    pairs and is not a valid FiniteMetric on its own.
    """
    n = len(split.ground)
    rows = []
    for i in range(n):
        xi = split.ground[i] in split.side_a
        rows.append(
            tuple(
                Fraction(0) if (split.ground[j] in split.side_a) == xi else Fraction(1)
                for j in range(n)
            )
        )
    return tuple(rows)


def system_matrix(system: WeightedSplitSystem) -> tuple:
    """Weighted sum of split pseudometrics as a raw matrix."""
    n = len(system.ground)
    acc = [[Fraction(0)] * n for _ in range(n)]
    for split, w in system.items():
        m = split_metric(split)
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    acc[i][j] += w
    return tuple(tuple(row) for row in acc)


def induced_metric(system: WeightedSplitSystem) -> FiniteMetric:
    """The metric induced by a weighted split system.

    Raises ZeroOffDiagonal when some pair is separated by no split.
    """
    return validate_metric(system_matrix(system), system.ground)


# -- planar point sets and the l1 decomposition -----------------------


class PointSet2D:
    """An ordered set of distinct rational points in the plane.

    Points are named p0, p1, ... in input order; that order is the
    ground order for all splits and metrics derived from the set.
    """

    def __init__(self, points: Iterable):
        pts = []
        for p in points:
            x, y = p
            pts.append((as_fraction(x), as_fraction(y)))
        if len(set(pts)) != len(pts):
            raise ParseError("points must be pairwise distinct")
        self.points = tuple(pts)
        self.labels = tuple(f"p{i}" for i in range(len(pts)))

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def l1(self, i: int, j: int) -> Fraction:
        (x1, y1), (x2, y2) = self.points[i], self.points[j]
        return abs(x1 - x2) + abs(y1 - y2)

    def metric(self) -> FiniteMetric:
        """The restriction of the planar l1 distance to this point set."""
        n = len(self.points)
        rows = [[self.l1(i, j) for j in range(n)] for i in range(n)]
        return FiniteMetric(self.labels, rows)


def _axis_splits(pset: PointSet2D, axis: int) -> list[tuple[Split, Fraction]]:
    """Threshold splits along one axis with their minimal-gap weights."""
    coords = sorted({p[axis] for p in pset.points})
    out = []
    for lo, hi in zip(coords, coords[1:]):
        low_side = {
            pset.labels[i] for i, p in enumerate(pset.points) if p[axis] <= lo
        }
        out.append((Split.of(pset.labels, low_side), hi - lo))
    return out


def l1_decompose(pset: PointSet2D) -> WeightedSplitSystem:
    """Decompose the planar l1 metric on a point set into a two-compatible
    weighted split system whose induced metric reproduces it exactly.

    Splits arising both vertically and horizontally get the sum of the
    two gap weights.
    """
    if len(pset) < 2:
        raise ParseError("need at least two points")
    merged: dict[Split, Fraction] = {}
    for axis in (0, 1):
        for split, w in _axis_splits(pset, axis):
            merged[split] = merged.get(split, Fraction(0)) + w
    return WeightedSplitSystem(pset.labels, merged)


def l1_two_trees(pset: PointSet2D) -> tuple[WeightedSplitSystem, WeightedSplitSystem]:
    """The vertical and horizontal halves of the decomposition, each a
    pairwise compatible (treelike) system; their matrices sum to l1."""
    if len(pset) < 2:
        raise ParseError("need at least two points")
    vertical = WeightedSplitSystem(pset.labels, dict(_axis_splits(pset, 0)))
    horizontal = WeightedSplitSystem(pset.labels, dict(_axis_splits(pset, 1)))
    return vertical, horizontal


# -- text formats ------------------------------------------------------


def parse_points_file(text: str) -> PointSet2D:
    """One 'x y' rational pair per line; '#' starts a comment."""
    pts = []
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'x y' pair, got {stripped!r}")
        try:
            pts.append((Fraction(parts[0]), Fraction(parts[1])))
        except ValueError:
            raise ParseError(f"bad rational in {stripped!r}") from None
    if not pts:
        raise ParseError("empty points file")
    return PointSet2D(pts)


def format_points_file(pset: PointSet2D) -> str:
    return "\n".join(
        f"{format_fraction(x)} {format_fraction(y)}" for x, y in pset.points
    ) + "\n"


def parse_splits_file(text: str) -> WeightedSplitSystem:
    """Header as in the metric format (count line, label line), then one
    'weight : a b ... | c d ...' line per split."""
    lines = [
        s.strip()
        for s in text.splitlines()
        if s.strip() and not s.strip().startswith("#")
    ]
    if len(lines) < 2:
        raise ParseError("truncated split-system file")
    try:
        n = int(lines[0])
    except ValueError:
        raise ParseError(f"expected element count, got {lines[0]!r}") from None
    ground = tuple(lines[1].split())
    if len(ground) != n:
        raise ParseError(f"expected {n} labels, got {len(ground)}")
    system = WeightedSplitSystem(ground)
    for line in lines[2:]:
        try:
            weight_part, sides = line.split(":", 1)
            side_a, _ = sides.split("|", 1)
            weight = Fraction(weight_part.strip())
        except ValueError:
            raise ParseError(f"bad split line {line!r}") from None
        system.add(Split.of(ground, side_a.split()), weight)
    return system


def format_splits_file(system: WeightedSplitSystem) -> str:
    order = {x: i for i, x in enumerate(system.ground)}
    lines = [str(len(system.ground)), " ".join(system.ground)]
    for split, w in system.items():
        a = " ".join(sorted(split.side_a, key=order.get))
        b = " ".join(sorted(split.side_b, key=order.get))
        lines.append(f"{format_fraction(w)} : {a} | {b}")
    return "\n".join(lines) + "\n"
