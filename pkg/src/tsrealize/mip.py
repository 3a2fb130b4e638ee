"""Mixed-integer model for the minimal-subrealization problem: binary
edge selectors, one unit of flow per label pair restricted to selected
edges, and a length bound per pair, serialized to LP text for external
solvers.  Everything stays rational; LP files are made integral by
per-row denominator clearing.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import MissingVariable, NotARealization, ParseError
from .metric import FiniteMetric, RealizationGraph, format_fraction, verify_realization


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str  # "binary" or "continuous"
    lb: Fraction = Fraction(0)
    ub: Fraction | None = None


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple  # ((coefficient, variable name), ...)
    rel: str  # "<=", "=", ">="
    rhs: Fraction


@dataclass
class MipModel:
    variables: list = field(default_factory=list)
    constraints: list = field(default_factory=list)
    objective: tuple = ()  # ((coefficient, variable name), ...)

    def variable_names(self) -> list:
        return [v.name for v in self.variables]

    def check_closed(self) -> None:
        declared = set(self.variable_names())
        if len(declared) != len(self.variables):
            raise ParseError("duplicate variable names")
        used = {name for _, name in self.objective}
        for c in self.constraints:
            used.update(name for _, name in c.terms)
        missing = used - declared
        if missing:
            raise ParseError(f"undeclared variables referenced: {sorted(missing)}")


def _pair_list(metric: FiniteMetric) -> list:
    labels = metric.labels
    return [
        (labels[i], labels[j])
        for i in range(metric.n)
        for j in range(i + 1, metric.n)
    ]


def _dijkstra(graph: RealizationGraph, source: int):
    dist = {source: Fraction(0)}
    parent = {source: None}
    heap = [(Fraction(0), source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v in graph.neighbors(u):
            e = (u, v) if u < v else (v, u)
            nd = d + graph.edges[e]
            if v not in dist or nd < dist[v]:
                dist[v] = nd
                parent[v] = u
                heapq.heappush(heap, (nd, v))
    return dist, parent


def build_subrealization_mip(
    graph: RealizationGraph, metric: FiniteMetric, reduce: bool = False
) -> MipModel:
    """The subrealization program for a verified realization: minimize
    the selected edge length subject to, per label pair, one unit of flow
    between the labeled vertices on selected edges within the pair's
    shortest-path budget.

    With `reduce`, flow variables exist only for edges lying on some
    shortest path between the pair's endpoints; the conservation and
    length rows shrink accordingly.
    """
    report = verify_realization(graph, metric)
    if not report.ok:
        raise NotARealization(f"graph fails on pair {report.first_failure[:2]}")
    edge_list = sorted(graph.edges)
    weights = [graph.edges[e] for e in edge_list]
    model = MipModel()
    for i in range(len(edge_list)):
        model.variables.append(Variable(f"xe{i}", "binary"))
    model.objective = tuple((weights[i], f"xe{i}") for i in range(len(edge_list)))

    sp = {
        x: _dijkstra(graph, graph.labeling[x])[0] for x in metric.labels
    }
    for j, (x, y) in enumerate(_pair_list(metric)):
        tx, ty = graph.labeling[x], graph.labeling[y]
        budget = sp[x][ty]
        if reduce:
            pair_edges = [
                i
                for i, (u, v) in enumerate(edge_list)
                if sp[x][u] + weights[i] + sp[y][v] == budget
                or sp[x][v] + weights[i] + sp[y][u] == budget
            ]
        else:
            pair_edges = list(range(len(edge_list)))
        incident: dict[int, list] = {}
        for i in pair_edges:
            u, v = edge_list[i]
            for d in (0, 1):
                model.variables.append(
                    Variable(f"f{i}d{d}p{j}", "continuous", Fraction(0), Fraction(1))
                )
                model.constraints.append(
                    Constraint(
                        f"cap{i}d{d}p{j}",
                        ((Fraction(1), f"f{i}d{d}p{j}"), (Fraction(-1), f"xe{i}")),
                        "<=",
                        Fraction(0),
                    )
                )
            # direction 0 runs u -> v, direction 1 runs v -> u
            incident.setdefault(u, []).append((f"f{i}d1p{j}", f"f{i}d0p{j}"))
            incident.setdefault(v, []).append((f"f{i}d0p{j}", f"f{i}d1p{j}"))
        for v in sorted(incident):
            if v == tx:
                rhs = Fraction(-1)
            elif v == ty:
                rhs = Fraction(1)
            else:
                rhs = Fraction(0)
            terms = []
            for f_in, f_out in incident[v]:
                terms.append((Fraction(1), f_in))
                terms.append((Fraction(-1), f_out))
            model.constraints.append(
                Constraint(f"bal{v}p{j}", tuple(terms), "=", rhs)
            )
        len_terms = []
        for i in pair_edges:
            len_terms.append((weights[i], f"f{i}d0p{j}"))
            len_terms.append((weights[i], f"f{i}d1p{j}"))
        model.constraints.append(
            Constraint(f"len{j}", tuple(len_terms), "<=", budget)
        )
    model.check_closed()
    return model


# -- LP text serialization ---------------------------------------------


def _lcm_denominator(values) -> int:
    lcm = 1
    for v in values:
        lcm = lcm * v.denominator // math.gcd(lcm, v.denominator)
    return lcm


def _terms_text(terms) -> str:
    parts = []
    for coef, name in terms:
        if not parts:
            parts.append(f"{coef} {name}" if coef >= 0 else f"- {-coef} {name}")
        elif coef >= 0:
            parts.append(f"+ {coef} {name}")
        else:
            parts.append(f"- {-coef} {name}")
    return " ".join(parts)


def write_lp(model: MipModel) -> str:
    """Serialize to LP text.  Constraint rows are scaled to integers by
    their coefficient LCM (an equivalent system); a non-integral
    objective is scaled likewise and the factor recorded in a comment
    header so the bundled reader can undo it."""
    model.check_closed()
    lines = []
    scale = _lcm_denominator([c for c, _ in model.objective])
    if scale != 1:
        lines.append(f"\\ objective-scale: {scale}")
    lines.append("Minimize")
    obj_terms = tuple((c * scale, n) for c, n in model.objective)
    lines.append(f" obj: {_terms_text(obj_terms)}")
    lines.append("Subject To")
    for c in model.constraints:
        row_scale = _lcm_denominator([v for v, _ in c.terms] + [c.rhs])
        terms = tuple((v * row_scale, n) for v, n in c.terms)
        lines.append(f" {c.name}: {_terms_text(terms)} {c.rel} {c.rhs * row_scale}")
    bounded = [
        v for v in model.variables if v.kind == "continuous"
    ]
    if bounded:
        lines.append("Bounds")
        for v in bounded:
            ub = format_fraction(v.ub) if v.ub is not None else "+inf"
            lines.append(f" {format_fraction(v.lb)} <= {v.name} <= {ub}")
    binaries = [v.name for v in model.variables if v.kind == "binary"]
    if binaries:
        lines.append("Binary")
        for i in range(0, len(binaries), 12):
            lines.append(" " + " ".join(binaries[i : i + 12]))
    lines.append("End")
    return "\n".join(lines) + "\n"


def parse_lp(text: str) -> MipModel:
    """Read back LP text produced by write_lp (round-trip checking aid).
    The objective-scale annotation, when present, is divided out again so
    the recovered objective matches the original model exactly."""

    def parse_terms(tokens):
        terms = []
        sign = 1
        k = 0
        while k < len(tokens):
            tok = tokens[k]
            if tok == "+":
                sign = 1
                k += 1
                continue
            if tok == "-":
                sign = -1
                k += 1
                continue
            try:
                coef = Fraction(tok)
                name = tokens[k + 1]
                k += 2
            except ValueError:
                coef = Fraction(1)
                name = tok
                k += 1
            terms.append((sign * coef, name))
            sign = 1
        return tuple(terms)

    scale = Fraction(1)
    section = None
    model = MipModel()
    names = set()
    bounds = {}
    binaries = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("\\"):
            if "objective-scale:" in line:
                scale = Fraction(line.split(":", 1)[1].strip())
            continue
        lowered = line.lower()
        if lowered in ("minimize", "maximize", "subject to", "bounds", "binary", "end"):
            section = lowered
            continue
        if section == "minimize":
            body = line.split(":", 1)[1] if ":" in line else line
            model.objective = tuple(
                (c / scale, n) for c, n in parse_terms(body.split())
            )
        elif section == "subject to":
            name, body = line.split(":", 1)
            tokens = body.split()
            if "<=" in tokens:
                rel = "<="
            elif ">=" in tokens:
                rel = ">="
            elif "=" in tokens:
                rel = "="
            else:
                raise ParseError(f"no relation in constraint {name!r}")
            split_at = tokens.index(rel)
            terms = parse_terms(tokens[:split_at])
            rhs = Fraction(tokens[split_at + 1])
            model.constraints.append(Constraint(name.strip(), terms, rel, rhs))
        elif section == "bounds":
            tokens = line.split()
            if len(tokens) != 5 or tokens[1] != "<=" or tokens[3] != "<=":
                raise ParseError(f"unsupported bounds line {line!r}")
            lb, name, ub = Fraction(tokens[0]), tokens[2], tokens[4]
            bounds[name] = (lb, None if ub == "+inf" else Fraction(ub))
        elif section == "binary":
            binaries.extend(line.split())
    for name in binaries:
        model.variables.append(Variable(name, "binary"))
        names.add(name)
    referenced = [n for _, n in model.objective]
    for c in model.constraints:
        referenced.extend(n for _, n in c.terms)
    for n in referenced:
        if n not in names:
            lb, ub = bounds.get(n, (Fraction(0), None))
            model.variables.append(Variable(n, "continuous", lb, ub))
            names.add(n)
    model.check_closed()
    return model


# -- assignment evaluation ---------------------------------------------


@dataclass
class CheckReport:
    ok: bool
    objective: Fraction
    violations: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def check_assignment(model: MipModel, assignment) -> CheckReport:
    """Evaluate every bound and constraint exactly against an assignment
    covering all variables; report violations and the objective value."""
    values = {}
    for v in model.variables:
        if v.name not in assignment:
            raise MissingVariable(v.name)
        values[v.name] = Fraction(assignment[v.name])
    violations = []
    for v in model.variables:
        val = values[v.name]
        if v.kind == "binary" and val not in (0, 1):
            violations.append((v.name, f"binary variable set to {val}"))
        if val < v.lb or (v.ub is not None and val > v.ub):
            violations.append((v.name, f"value {val} outside bounds"))
    for c in model.constraints:
        lhs = sum((coef * values[name] for coef, name in c.terms), Fraction(0))
        holds = {
            "<=": lhs <= c.rhs,
            ">=": lhs >= c.rhs,
            "=": lhs == c.rhs,
        }[c.rel]
        if not holds:
            violations.append((c.name, f"{lhs} {c.rel} {c.rhs} fails"))
    objective = sum((coef * values[name] for coef, name in model.objective), Fraction(0))
    return CheckReport(not violations, objective, violations)


def subset_assignment(
    graph: RealizationGraph,
    metric: FiniteMetric,
    model: MipModel,
    selected_edges,
) -> dict:
    """Extend an edge subset to a full variable assignment: selectors from
    membership, flows routed along one shortest path per pair inside the
    subset.  For infeasible subsets the routing degrades (flow omitted or
    over budget), so check_assignment surfaces a concrete violation."""
    edge_list = sorted(graph.edges)
    index = {e: i for i, e in enumerate(edge_list)}
    chosen = {index[e] for e in selected_edges}
    values = {name: Fraction(0) for name in model.variable_names()}
    for i in chosen:
        values[f"xe{i}"] = Fraction(1)

    adj: dict[int, list] = {}
    for i in chosen:
        u, v = edge_list[i]
        w = graph.edges[edge_list[i]]
        adj.setdefault(u, []).append((v, w, i))
        adj.setdefault(v, []).append((u, w, i))

    for j, (x, y) in enumerate(_pair_list(metric)):
        tx, ty = graph.labeling[x], graph.labeling[y]
        dist = {tx: Fraction(0)}
        parent: dict[int, tuple | None] = {tx: None}
        heap = [(Fraction(0), tx)]
        done = set()
        while heap:
            d, u = heapq.heappop(heap)
            if u in done:
                continue
            done.add(u)
            for v, w, i in adj.get(u, ()):
                nd = d + w
                if v not in dist or nd < dist[v]:
                    dist[v] = nd
                    parent[v] = (u, i)
                    heapq.heappush(heap, (nd, v))
        if ty not in dist:
            continue  # no path: the pair's source/sink rows stay violated
        node = ty
        while parent[node] is not None:
            prev, i = parent[node]
            u, v = edge_list[i]
            direction = 0 if (prev, node) == (u, v) else 1
            name = f"f{i}d{direction}p{j}"
            if name in values:
                values[name] = Fraction(1)
            node = prev
    return values
