"""Exact covering LPs indexed by a graph and a profile.

Three families share the shape ``min <c, x>`` subject to ``A x >= 1`` and
``x >= 0``:

* ``unit``: ``c = lam`` and row i is ``lam_i x_i + sum_{j non-adjacent to i} x_j``.
* ``diameter``: as ``unit`` with ``floor((lam_i + 1) / 2)`` in place of ``lam_i``.
* ``pattern``: row i is ``lam_i x_i + sum_{(i,j) in E \\ E'} x_j`` where E is
  the pattern edge set and E' the edges of the graph.

Everything is in :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

from . import exact
from .graphs import (SmallGraph, girth, graph_stats, maximal_cliques,
                     shortest_cycle, shortest_odd_cycle, two_coloring)
from .numbers import format_rational

FAMILIES = ("unit", "diameter", "pattern")

Vector = Tuple[Fraction, ...]


class LPError(ValueError):
    pass


class HypothesisError(LPError):
    """A certificate strategy was applied outside its structural hypothesis."""


class BoundViolation(LPError):
    """A certificate came out above the bound its strategy promises."""


@dataclass(frozen=True)
class Profile:
    values: Tuple[int, ...]
    d: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        bad = [v for v in self.values if not 0 <= v <= self.d]
        if bad:
            raise LPError(f"profile entries must lie in [0, {self.d}], got {bad}")

    @property
    def k(self) -> int:
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)


def _values(lam) -> Tuple[int, ...]:
    return tuple(lam.values) if isinstance(lam, Profile) else tuple(int(v) for v in lam)


def diameter_weight(lam_i: int) -> int:
    return (lam_i + 1) // 2


@dataclass(frozen=True)
class LPInstance:
    objective: Vector
    matrix: Tuple[Vector, ...]
    rhs: Vector
    family: str
    graph: Optional[SmallGraph] = None
    lam: Tuple[int, ...] = ()
    pattern_edges: Optional[FrozenSet[Tuple[int, int]]] = None

    def __post_init__(self) -> None:
        n = len(self.objective)
        if any(len(row) != n for row in self.matrix):
            raise LPError("constraint rows must match the objective length")
        if len(self.rhs) != len(self.matrix):
            raise LPError("right-hand side length must match the row count")

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    def row_value(self, i: int, x: Sequence[Fraction]) -> Fraction:
        return sum((a * v for a, v in zip(self.matrix[i], x)), Fraction(0))

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.n_vars or any(v < 0 for v in x):
            return False
        return all(self.row_value(i, x) >= self.rhs[i] for i in range(len(self.matrix)))

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), Fraction(0))

    def tight_rows(self, x: Sequence[Fraction]) -> FrozenSet[int]:
        return frozenset(i for i in range(len(self.matrix))
                         if self.row_value(i, x) == self.rhs[i])

    def to_text(self) -> str:
        """Plain-text export: header, objective row, then one row per constraint."""
        lines = [f"family {self.family}", f"vars {self.n_vars}"]
        if self.lam:
            lines.append("lambda " + ",".join(str(v) for v in self.lam))
        lines.append("min " + " ".join(format_rational(c) for c in self.objective))
        for row, b in zip(self.matrix, self.rhs):
            lines.append("row " + " ".join(format_rational(a) for a in row)
                         + " >= " + format_rational(b))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "LPInstance":
        family, objective, rows, rhs, lam = "unit", (), [], [], ()
        for line in text.splitlines():
            parts = line.split()
            if not parts:
                continue
            tag, rest = parts[0], parts[1:]
            if tag == "family":
                family = rest[0]
            elif tag == "lambda":
                lam = tuple(int(v) for v in rest[0].split(","))
            elif tag == "min":
                objective = tuple(Fraction(v) for v in rest)
            elif tag == "row":
                if rest[-2] != ">=":
                    raise LPError(f"malformed row: {line!r}")
                rows.append(tuple(Fraction(v) for v in rest[:-2]))
                rhs.append(Fraction(rest[-1]))
        return cls(objective, tuple(rows), tuple(rhs), family, lam=lam)


def build_lp(family: str, g: SmallGraph, lam, pattern_edges=None) -> LPInstance:
    """Covering LP of the given family for graph ``g`` and profile ``lam``."""
    lam = _values(lam)
    if family == "diam":
        family = "diameter"
    if family not in FAMILIES:
        raise LPError(f"unknown LP family {family!r}")
    if len(lam) != g.k:
        raise LPError(f"profile has {len(lam)} entries but the graph has {g.k} vertices")
    k = g.k
    if family == "pattern":
        if pattern_edges is None:
            raise LPError("the pattern family needs the pattern edge set")
        big = SmallGraph(k, frozenset(pattern_edges))
        if not g.edges <= big.edges:
            raise LPError("pattern edges must contain every edge of the graph")
        free = big.edges - g.edges
        diag = lam
        partners = [{j for j in range(k) if (min(i, j), max(i, j)) in free}
                    for i in range(k)]
        pe = big.edges
    else:
        diag = lam if family == "unit" else tuple(diameter_weight(v) for v in lam)
        partners = [{j for j in range(k) if j != i and not g.has_edge(i, j)}
                    for i in range(k)]
        pe = None
    rows = []
    for i in range(k):
        row = [Fraction(1) if j in partners[i] else Fraction(0) for j in range(k)]
        row[i] = Fraction(diag[i])
        rows.append(tuple(row))
    return LPInstance(tuple(Fraction(v) for v in diag), tuple(rows),
                      tuple(Fraction(1) for _ in range(k)), family, g, lam, pe)


# ---------------------------------------------------------------- simplex

@dataclass(frozen=True)
class LPSolution:
    status: str
    value: Optional[Fraction] = None
    x: Optional[Vector] = None
    tight: FrozenSet[int] = frozenset()
    basis: Tuple[int, ...] = ()
    pivots: int = 0

    def to_json_obj(self) -> dict:
        return {
            "status": self.status,
            "value": None if self.value is None else format_rational(self.value),
            "x": None if self.x is None else [format_rational(v) for v in self.x],
            "tight": sorted(i + 1 for i in self.tight),
            "basis": list(self.basis),
        }


class _Tableau:
    """Dense rational tableau; the last column is the right-hand side."""

    def __init__(self, rows: List[List[Fraction]], basis: List[int]) -> None:
        self.rows = rows
        self.basis = basis
        self.pivots = 0

    def pivot(self, r: int, col: int) -> None:
        row = self.rows[r]
        inv = 1 / row[col]
        row[:] = [v * inv for v in row]
        for i, other in enumerate(self.rows):
            if i != r and other[col] != 0:
                f = other[col]
                other[:] = [a - f * b for a, b in zip(other, row)]
        self.basis[r] = col
        self.pivots += 1

    def optimize(self, cost: List[Fraction], allowed: int) -> str:
        """Minimise ``cost`` over columns ``< allowed`` with Bland's rule."""
        while True:
            reduced = self._reduced(cost, allowed)
            entering = next((j for j in range(allowed) if reduced[j] < 0), None)
            if entering is None:
                return "optimal"
            best = None
            for i, row in enumerate(self.rows):
                a = row[entering]
                if a > 0:
                    ratio = row[-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)

    def _reduced(self, cost: List[Fraction], allowed: int) -> List[Fraction]:
        red = list(cost[:allowed])
        for i, b in enumerate(self.basis):
            cb = cost[b]
            if cb:
                row = self.rows[i]
                for j in range(allowed):
                    if row[j]:
                        red[j] -= cb * row[j]
        return red

    def solution(self, n_cols: int) -> List[Fraction]:
        x = [Fraction(0)] * n_cols
        for i, b in enumerate(self.basis):
            if b < n_cols:
                x[b] = self.rows[i][-1]
        return x


def solve_exact(lp: LPInstance) -> LPSolution:
    """Two-phase rational simplex with Bland's anti-cycling rule.

    Columns are the k structural variables, one surplus per row, then one
    artificial per row. The reported basis lists structural and surplus
    column indices (0-based).
    """
    k, m = lp.n_vars, len(lp.matrix)
    n_real = k + m
    rows = []
    for i, (a, b) in enumerate(zip(lp.matrix, lp.rhs)):
        row = list(a) + [Fraction(-1) if j == i else Fraction(0) for j in range(m)]
        rhs = Fraction(b)
        if rhs < 0:
            row, rhs = [-v for v in row], -rhs
        row += [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [rhs]
        rows.append(row)
    tab = _Tableau(rows, [n_real + i for i in range(m)])
    phase1 = [Fraction(0)] * n_real + [Fraction(1)] * m
    tab.optimize(phase1, n_real + m)
    infeas = sum((tab.rows[i][-1] for i, b in enumerate(tab.basis) if b >= n_real),
                 Fraction(0))
    if infeas > 0:
        return LPSolution("infeasible", pivots=tab.pivots)
    # drive zero-level artificials out of the basis; drop redundant rows
    for r in range(len(tab.rows) - 1, -1, -1):
        if tab.basis[r] < n_real:
            continue
        col = next((j for j in range(n_real) if tab.rows[r][j] != 0), None)
        if col is None:
            del tab.rows[r]
            del tab.basis[r]
        else:
            tab.pivot(r, col)
    cost = list(lp.objective) + [Fraction(0)] * (m + m)
    status = tab.optimize(cost, n_real)
    if status == "unbounded":
        return LPSolution("unbounded", pivots=tab.pivots)
    x = tuple(tab.solution(n_real)[:k])
    if not lp.is_feasible(x):
        raise AssertionError("simplex returned an infeasible point")
    return LPSolution("optimal", lp.objective_value(x), x, lp.tight_rows(x),
                      tuple(sorted(tab.basis)), tab.pivots)


def vertex_enumeration(lp: LPInstance) -> LPSolution:
    """Oracle: best basic feasible point over all choices of tight constraints.

    Independent of the simplex code. Requires a nonnegative objective, so
    that the minimum over a pointed polyhedron is attained at a vertex.
    """
    k, m = lp.n_vars, len(lp.matrix)
    if any(c < 0 for c in lp.objective):
        raise LPError("vertex enumeration oracle needs a nonnegative objective")
    if k > 8:
        raise LPError("vertex enumeration is limited to k <= 8")
    best: Optional[Tuple[Fraction, Vector]] = None
    for n_zero in range(k + 1):
        for zeros in combinations(range(k), n_zero):
            free = [j for j in range(k) if j not in zeros]
            for tight in combinations(range(m), len(free)):
                a = [[lp.matrix[i][j] for j in free] for i in tight]
                sol = exact.solve(a, [lp.rhs[i] for i in tight]) if free else []
                if sol is None:
                    continue
                x = [Fraction(0)] * k
                for j, v in zip(free, sol):
                    x[j] = v
                if lp.is_feasible(x):
                    val = lp.objective_value(x)
                    if best is None or (val, tuple(x)) < (best[0], best[1]):
                        best = (val, tuple(x))
    if best is None:
        return LPSolution("infeasible")
    return LPSolution("optimal", best[0], best[1], lp.tight_rows(best[1]))


# ---------------------------------------------------------------- certificates

@dataclass(frozen=True)
class Certificate:
    strategy: str
    x: Vector
    value: Fraction
    bound: Fraction
    family: str
    notes: Dict[str, object] = field(default_factory=dict, compare=False)


STRATEGIES = ("main-weight", "diam-clique", "pattern-edge", "odd-cycle", "girth",
              "triangle-free", "independent", "small-k")


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise HypothesisError(msg)


def _finish(strategy: str, lp: LPInstance, x: Sequence[Fraction], bound: Fraction,
            strict: bool = False, **notes) -> Certificate:
    x = tuple(Fraction(v) for v in x)
    if not lp.is_feasible(x):
        raise HypothesisError(f"{strategy}: constructed point is infeasible, "
                              "so the profile breaks the strategy's hypotheses")
    value = lp.objective_value(x)
    if value > bound or (strict and value == bound):
        raise BoundViolation(
            f"{strategy}: certificate value {format_rational(value)} exceeds "
            f"the bound {format_rational(bound)}")
    return Certificate(strategy, x, value, bound, lp.family, dict(notes))


def main_weight_clique(g: SmallGraph, lam: Sequence[int]) -> Tuple[int, ...]:
    """Largest clique, then largest profile sum, then lexicographically first."""
    best = None
    for c in maximal_cliques(g):
        key = (-len(c), -sum(lam[i] for i in c), c)
        if best is None or key < best:
            best = key
    if best is None:
        return ()
    return best[2]


def construct_feasible(strategy: str, g: SmallGraph, lam, d: Optional[int] = None,
                       pattern_edges=None) -> Certificate:
    """Explicit feasible point for one of the proof strategies.

    The point is checked by exact substitution, and its value is checked
    against the strategy's bound (``BoundViolation`` when it fails). Where
    the textbook assignment assumes all profile entries of a group are equal,
    the weights are rescaled by ``lam_group / lam_s`` so the rows stay
    satisfied with the same objective.
    """
    lam = _values(lam)
    if d is None:
        raise LPError("construct_feasible needs the ambient dimension d")
    k = g.k
    if len(lam) != k:
        raise LPError("profile and graph sizes differ")
    F = Fraction
    if strategy == "main-weight":
        _require(all(v >= 2 for v in lam), "main-weight needs every profile entry >= 2")
        lp = build_lp("unit", g, lam)
        clique = main_weight_clique(g, lam)
        x = [F(0)] * k
        for i in clique:
            x[i] = F(1, 2)
        adj = g.adjacency
        for i in clique:
            rest = [j for j in clique if j != i]
            members = [v for v in range(k) if v != i and v not in clique
                       and all(adj[v] >> j & 1 for j in rest)]
            ell = len(members)
            for s in members:
                x[s] = F(lam[i], lam[s]) / (2 * (lam[i] + ell - 1))
        return _finish(strategy, lp, x, F(5, 8) * d + F(k, 8), clique=clique)

    if strategy == "diam-clique":
        lp = build_lp("diameter", g, lam)
        _require(all(v >= 1 for v in lam), "diam-clique needs every profile entry >= 1")
        best = None
        for c in maximal_cliques(g):
            val = sum(diameter_weight(lam[i]) for i in c)
            if best is None or (val, c) < best:
                best = (val, c)
        x = [F(1) if i in best[1] else F(0) for i in range(k)]
        return _finish(strategy, lp, x, F(d, 2), clique=best[1])

    if strategy == "pattern-edge":
        _require(pattern_edges is not None, "pattern-edge needs the pattern edge set")
        _require(all(v >= 1 for v in lam), "pattern-edge needs every profile entry >= 1")
        lp = build_lp("pattern", g, lam, pattern_edges)
        free = sorted(lp.pattern_edges - g.edges)
        _require(bool(free), "pattern-edge needs a proper subgraph of the pattern graph")
        best = None
        for i, j in free:
            x = [F(1, v) for v in lam]
            li, lj = lam[i], lam[j]
            if li == 1 and lj == 1:
                x[i] = x[j] = F(1, 2)
            else:
                x[i] = F(lj - 1, li * lj - 1)
                x[j] = F(li - 1, li * lj - 1)
            val = lp.objective_value(x)
            if best is None or (val, (i, j)) < (best[0], best[1]):
                best = (val, (i, j), x)
        bound = k - min(F(1), F(4, d))
        return _finish(strategy, lp, best[2], bound, edge=best[1])

    if strategy == "odd-cycle":
        cyc = shortest_odd_cycle(g)
        _require(cyc is not None, "odd-cycle needs a graph with an odd cycle")
        ell = (len(cyc) - 1) // 2
        _require(ell >= 2, "odd-cycle needs shortest odd cycle of length >= 5")
        _require(all(lam[i] >= 1 for i in cyc), "odd-cycle needs entries >= 1 on the cycle")
        lp = build_lp("unit", g, lam)
        x = [F(1, 2 * ell - 1) if i in cyc else F(0) for i in range(k)]
        return _finish(strategy, lp, x, F(ell * d, 2 * ell - 1), cycle=tuple(cyc))

    if strategy == "girth":
        _require(all(v >= 2 for v in lam), "girth needs every profile entry >= 2")
        gi = girth(g)
        _require(gi is not None, "girth needs a cycle")
        cyc = shortest_cycle(g)
        lp = build_lp("unit", g, lam)
        if gi % 2:
            ell = (gi - 1) // 2
            _require(ell > 1, "girth 2l+1 needs l > 1")
            x = [F(1, 2 * ell) if i in cyc else F(0) for i in range(k)]
            bound = F(d, 2)
        else:
            ell = gi // 2
            _require(ell > 2, "girth 2l needs l > 2")
            x = [F(1, 2 * ell - 1) if i in cyc else F(0) for i in range(k)]
            bound = F(ell * d, 2 * ell - 1)
        return _finish(strategy, lp, x, bound, cycle=tuple(cyc))

    if strategy == "triangle-free":
        return _triangle_free(g, lam, d)

    if strategy == "independent":
        _require(not g.edges, "independent needs the empty graph")
        _require(all(v >= 1 for v in lam), "independent needs every profile entry >= 1")
        lp = build_lp("unit", g, lam)
        mx = max(lam)
        x = [F(mx, v) / (k + mx - 1) for v in lam]
        return _finish(strategy, lp, x, F(k * mx, k + mx - 1))

    if strategy == "small-k":
        _require(k == d // 2 + 1, "small-k needs k = floor(d/2) + 1")
        _require(max(g.degrees(), default=0) < d // 2 - 1,
                 "small-k needs every degree below floor(d/2) - 1")
        _require(all(v >= 1 for v in lam), "small-k needs every profile entry >= 1")
        lp = build_lp("unit", g, lam)
        x = [F(d, v * (d + 2)) for v in lam]
        if d % 2 == 0:
            return _finish(strategy, lp, x, F(d, 2))
        return _finish(strategy, lp, x, F(d, 2) - F(1, 6), strict=True)

    raise LPError(f"unknown strategy {strategy!r}")


def _triangle_free(g: SmallGraph, lam: Tuple[int, ...], d: int) -> Certificate:
    F = Fraction
    k = g.k
    _require(graph_stats(g).triangle_free, "triangle-free needs a triangle-free graph")
    _require(all(v >= 1 for v in lam), "triangle-free needs every profile entry >= 1")
    degs = g.degrees()
    _require(all(degs[i] <= d - lam[i] for i in range(k)),
             "triangle-free needs the degree condition (nonzero count)")
    lp = build_lp("unit", g, lam)
    bound = F(2 * d, 3)
    low = [i for i in range(k) if 3 * lam[i] <= d]
    if low:
        # one low vertex carries weight 1; its independent neighbourhood shares the rest
        best = None
        for i in low:
            nbrs = g.neighbors(i)
            x = [F(0)] * k
            x[i] = F(1)
            top = d - lam[i] - 2
            if nbrs and top < 1:
                continue
            for j in nbrs:
                x[j] = F(top, lam[j]) / (len(nbrs) + top - 1)
            val = lp.objective_value(x)
            if best is None or (val, i) < (best[0], best[1]):
                best = (val, i, x)
        _require(best is not None, "triangle-free: low vertex has neighbours but no room")
        return _finish("triangle-free", lp, best[2], bound, case=1, vertex=best[1])
    coloring = two_coloring(g)
    if coloring is None:
        cert = construct_feasible("odd-cycle", g, lam, d)
        return _finish("triangle-free", lp, cert.x, bound, case="odd-cycle")
    if not g.edges:
        cert = construct_feasible("independent", g, lam, d)
        return _finish("triangle-free", lp, cert.x, bound, case="independent")
    # every entry exceeds d/3: split the low-profile vertices by colour class
    top = F(2 * d, 3)
    x = [F(0)] * k
    for side in (0, 1):
        cls = [i for i in range(k) if coloring[i] == side and lam[i] < top]
        for i in cls:
            x[i] = (top / lam[i]) / (len(cls) + top - 1)
    if not lp.is_feasible(x):
        total = lp.objective_value(x)
        if total > 0:
            x = [v * top / total for v in x]
    return _finish("triangle-free", lp, x, bound, case=2)


@dataclass(frozen=True)
class EqualityReport:
    all_tight: bool
    bound_checked: bool
    bound_ok: Optional[bool]


def check_equality_case(g: SmallGraph, lam, sol: LPSolution, d: int) -> EqualityReport:
    """Whether the optimum meets every covering row with equality.

    When it does, ``k = d + 1`` and every vertex passes the degree condition,
    the value must be at most ``d/2 + 1/2``.
    """
    lam = _values(lam)
    lp = build_lp("unit", g, lam)
    if sol.status != "optimal" or sol.x is None:
        return EqualityReport(False, False, None)
    all_tight = lp.tight_rows(sol.x) == frozenset(range(g.k))
    degs = g.degrees()
    applies = (all_tight and g.k == d + 1
               and all(degs[i] <= d - lam[i] for i in range(g.k)))
    if not applies:
        return EqualityReport(all_tight, False, None)
    return EqualityReport(True, True, sol.value <= Fraction(d, 2) + Fraction(1, 2))
