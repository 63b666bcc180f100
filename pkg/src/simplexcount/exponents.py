"""Exponent calculator: the graph-lattice recursion plus closed-form solvers.

``compute_bound(k, d, mode)`` walks every graph on k vertices from the
complete graph down to the empty graph. A graph's exponent is the larger of
its own LP maximum and the exponents of its one-edge supergraphs, unless an
override supplies the value. The result for the empty graph is the bound.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .graphs import SmallGraph, all_graphs, canonical_form, key_string, supergraphs
from .lp import build_lp, solve_exact
from .numbers import format_rational
from .realizability import maximal_profiles

MODES = ("unit", "diameter")
PROVENANCES = ("lp", "base-complete-graph", "injected-override", "low-profile-reduction")


class ExponentError(ValueError):
    pass


def normalize_mode(mode: str) -> str:
    if mode == "diam":
        return "diameter"
    if mode not in MODES:
        raise ExponentError(f"unknown mode {mode!r}")
    return mode


# ---------------------------------------------------------------- overrides

@dataclass(frozen=True)
class Override:
    """Externally justified exponent for the graphs matching ``predicate``."""

    predicate: Callable[[SmallGraph, int, int], bool]
    exponent: Fraction
    citation: str
    mode: Optional[str] = None

    def applies(self, g: SmallGraph, k: int, d: int, mode: str) -> bool:
        if self.mode is not None and normalize_mode(self.mode) != mode:
            return False
        return bool(self.predicate(g, k, d))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Override":
        """Build from ``{"when": {...}, "exponent": "p/q", "citation": "..."}``.

        Recognised ``when`` keys: ``k``, ``d``, ``min_max_degree``,
        ``min_edges``, ``max_edges``. Every listed key must hold.
        """
        when = dict(obj.get("when", {}))
        unknown = set(when) - {"k", "d", "min_max_degree", "min_edges", "max_edges"}
        if unknown:
            raise ExponentError(f"unknown override keys: {sorted(unknown)}")

        def predicate(g: SmallGraph, k: int, d: int) -> bool:
            if "k" in when and k != when["k"]:
                return False
            if "d" in when and d != when["d"]:
                return False
            if "min_max_degree" in when and max(g.degrees(), default=0) < when["min_max_degree"]:
                return False
            if "min_edges" in when and len(g.edges) < when["min_edges"]:
                return False
            if "max_edges" in when and len(g.edges) > when["max_edges"]:
                return False
            return True

        return cls(predicate, Fraction(obj["exponent"]), str(obj.get("citation", "")),
                   obj.get("mode"))


def load_overrides(text: str) -> List[Override]:
    data = json.loads(text)
    if isinstance(data, dict):
        data = data.get("overrides", [])
    return [Override.from_json_obj(o) for o in data]


def degree_two_override() -> Override:
    """Four classes in R^7 with a vertex of degree >= 2: exponent 10/3."""
    return Override(
        lambda g, k, d: k == 4 and d == 7 and max(g.degrees(), default=0) >= 2,
        Fraction(10, 3),
        "geometric case analysis for four classes in R^7 when some class is "
        "orthogonal to two others",
        "unit")


def edge_present_override() -> Override:
    """Three classes of a diameter set in R^5 with at least one edge: exponent 2."""
    return Override(
        lambda g, k, d: k == 3 and d == 5 and len(g.edges) >= 1,
        Fraction(2),
        "geometric case analysis for three classes of a diameter-1 set in R^5 "
        "with an orthogonal pair",
        "diameter")


# ---------------------------------------------------------------- bound table

@dataclass(frozen=True)
class Entry:
    graph: SmallGraph
    k: int
    d: int
    mode: str
    exponent: Fraction
    provenance: str
    profile: Optional[Tuple[int, ...]] = None
    note: str = ""


@dataclass
class BoundTable:
    """Write-once memo keyed by (canonical graph, k, d, mode)."""

    entries: Dict[tuple, Entry] = field(default_factory=dict)

    def key(self, g: SmallGraph, d: int, mode: str) -> tuple:
        return (canonical_form(g), g.k, d, mode)

    def get(self, g: SmallGraph, d: int, mode: str) -> Optional[Entry]:
        return self.entries.get(self.key(g, d, mode))

    def put(self, entry: Entry) -> Entry:
        key = self.key(entry.graph, entry.d, entry.mode)
        old = self.entries.get(key)
        if old is not None:
            if old.exponent != entry.exponent:
                raise ExponentError(f"conflicting writes for {key_string(entry.graph)}")
            return old
        self.entries[key] = entry
        return entry

    def rows(self, k: Optional[int] = None, d: Optional[int] = None,
             mode: Optional[str] = None) -> List[Entry]:
        out = [e for e in self.entries.values()
               if (k is None or e.k == k) and (d is None or e.d == d)
               and (mode is None or e.mode == mode)]
        return sorted(out, key=lambda e: (e.k, e.d, e.mode, len(e.graph.edges),
                                          e.graph.sorted_edges()))

    def to_csv(self, k: Optional[int] = None, d: Optional[int] = None,
               mode: Optional[str] = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["graph_key", "edges", "mode", "exponent", "provenance"])
        for e in self.rows(k, d, mode):
            edges = ";".join(f"{i + 1}-{j + 1}" for i, j in e.graph.sorted_edges())
            w.writerow([key_string(e.graph), edges, e.mode,
                        format_rational(e.exponent), e.provenance])
        return buf.getvalue()


# ---------------------------------------------------------------- LP maxima

@dataclass(frozen=True)
class ZetaResult:
    value: Fraction
    profile: Optional[Tuple[int, ...]]
    provenance: str
    empty: bool = False


def complete_graph_base(k: int, d: int) -> Fraction:
    """At most floor(d/2) classes of a clique can hold more than three points."""
    return Fraction(min(k, d // 2))


def is_complete(g: SmallGraph) -> bool:
    return len(g.edges) == g.k * (g.k - 1) // 2


def zeta_max(g: SmallGraph, k: int, d: int, mode: str = "unit",
             floor: int = 2) -> ZetaResult:
    """Largest LP optimum over the maximal admissible profiles of ``g``.

    Complete graphs (k >= 2) return the clique base value instead. When no
    profile is admissible the value is 0 and ``empty`` is set.
    """
    mode = normalize_mode(mode)
    if k != g.k:
        raise ExponentError("k must equal the vertex count of g")
    if k >= 2 and is_complete(g):
        return ZetaResult(complete_graph_base(k, d), None, "base-complete-graph")
    return _zeta_max(g, d, mode, floor)


@lru_cache(maxsize=50_000)
def _zeta_max(g: SmallGraph, d: int, mode: str, floor: int) -> ZetaResult:
    best: Optional[Tuple[Fraction, Tuple[int, ...]]] = None
    for lam in maximal_profiles(g, d, floor):
        sol = solve_exact(build_lp(mode, g, lam))
        if sol.status != "optimal":
            raise AssertionError(f"covering LP not optimal for {lam}: {sol.status}")
        if best is None or sol.value > best[0]:
            best = (sol.value, lam)
    if best is None:
        return ZetaResult(Fraction(0), None, "lp", empty=True)
    return ZetaResult(best[0], best[1], "lp")


# ---------------------------------------------------------------- lattice walk

@dataclass(frozen=True)
class BoundResult:
    value: Fraction
    k: int
    d: int
    mode: str
    table: BoundTable
    low_profile_value: Fraction
    headline_entry: Entry

    def to_csv(self) -> str:
        return self.table.to_csv(self.k, self.d, self.mode)


def compute_bound(k: int, d: int, mode: str = "unit",
                  overrides: Sequence[Override] = (),
                  low_profile: str = "monotone",
                  table: Optional[BoundTable] = None) -> BoundResult:
    """Exponent bound for k classes in R^d.

    ``low_profile`` selects how classes with profile entry 0 or 1 enter:

    * ``"monotone"`` (default): entries equal to 1 are scanned directly by
      the LP (profile floor 1). A class of at most three points (entry 0)
      contributes the bound for k-1 classes.
    * ``"recursive"``: profile floor 2, and the bound folds in
      ``max(bound(k-1, d), 1 + bound(k-1, d-2))``. This literal recursion
      overshoots known values, because the small cases it feeds on are lossy.
    """
    mode = normalize_mode(mode)
    if k < 1 or k > d + 1 or d + 1 > 11:
        raise ExponentError("need 1 <= k <= d + 1 <= 11")
    if low_profile not in ("monotone", "recursive"):
        raise ExponentError(f"unknown low-profile rule {low_profile!r}")
    table = table if table is not None else BoundTable()
    overrides = tuple(overrides)
    low = _low_profile_value(k, d, mode, overrides, low_profile, table)
    floor = 1 if low_profile == "monotone" else 2
    graphs = sorted(all_graphs(k), key=lambda g: -len(g.edges))
    for g in graphs:
        if table.get(g, d, mode) is not None:
            continue
        table.put(_graph_entry(g, k, d, mode, overrides, floor, low, table))
    head = table.get(SmallGraph.empty(k), d, mode)
    return BoundResult(head.exponent, k, d, mode, table, low, head)


def _graph_entry(g, k, d, mode, overrides, floor, low, table) -> Entry:
    for ov in overrides:
        if ov.applies(g, k, d, mode):
            return Entry(g, k, d, mode, ov.exponent, "injected-override", note=ov.citation)
    z = zeta_max(g, k, d, mode, floor)
    best = Entry(g, k, d, mode, z.value, z.provenance, z.profile,
                 "no admissible profile" if z.empty else "")
    for h in supergraphs(g):
        sup = table.get(h, d, mode)
        if sup.exponent > best.exponent:
            best = Entry(g, k, d, mode, sup.exponent, sup.provenance, sup.profile,
                         f"attained by supergraph {key_string(h)}")
    if low > best.exponent:
        best = Entry(g, k, d, mode, low, "low-profile-reduction", None,
                     "a class with profile entry below the floor")
    return best


def _low_profile_value(k, d, mode, overrides, rule, table) -> Fraction:
    if k == 1:
        return Fraction(1)
    prev = compute_bound(k - 1, d, mode, overrides, rule, table).value
    if rule == "monotone":
        return prev
    if d - 2 >= k - 2 and k - 1 >= 1 and d - 2 >= 1:
        shrunk = compute_bound(k - 1, d - 2, mode, overrides, rule, table).value
    else:
        shrunk = Fraction(k - 1)
    return max(prev, 1 + shrunk)


def check_edge_monotone(result: BoundResult, overrides: Sequence[Override] = ()) -> List[str]:
    """Violations of bound(G) >= bound(G + e) among non-overridden graphs."""
    bad = []
    for e in result.table.rows(result.k, result.d, result.mode):
        if e.provenance == "injected-override":
            continue
        for h in supergraphs(e.graph):
            sup = result.table.get(h, result.d, result.mode)
            if sup.exponent > e.exponent:
                bad.append(f"{key_string(e.graph)} < {key_string(h)}")
    return bad


# ---------------------------------------------------------------- closed forms

def solve_recurrence(a, b, c, symmetric: bool = True) -> Fraction:
    """Exponent of the fixed point of a divide-and-conquer incidence recurrence.

    ``g(m, n) <= r^a g(m / r^b, n / r^c)``, stepped once per side in the
    symmetric mode, gives ``g(n, n) = n^(2a/(b+c))``; a single step gives
    ``a/b``.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    if a <= 0 or b <= 0 or c <= 0:
        raise ExponentError("recurrence parameters must be positive")
    return 2 * a / (b + c) if symmetric else a / b


@dataclass(frozen=True)
class RichnessResult:
    d: int
    value: Fraction
    maximizers: Tuple[Fraction, ...]
    breakpoints: Tuple[Tuple[Fraction, Fraction], ...]


def ktt_exponent(d: int) -> RichnessResult:
    """Exponent of the rich-point recursion in R^d.

    ``e(1) = 1`` (unit pairs on a line) and
    ``e(d) = max_a min(max(d - (d+1) a, 1 - a), 1) + a e(d-1)`` over ``a`` in
    [0, 1]; this reproduces ``e(2) = 4/3``. The objective is piecewise linear with kinks only at
    ``(d-1)/(d+1)`` and ``(d-1)/d``, so it is maximised over those and the
    endpoints.
    """
    if d < 2:
        raise ExponentError("d must be at least 2")
    return _ktt(d)


@lru_cache(maxsize=None)
def _ktt(d: int) -> RichnessResult:
    if d == 1:
        return RichnessResult(1, Fraction(1), (), ())
    prev = _ktt(d - 1).value
    cands = sorted({Fraction(0), Fraction(1), Fraction(d - 1, d + 1), Fraction(d - 1, d)})

    def objective(a: Fraction) -> Fraction:
        return min(max(d - (d + 1) * a, 1 - a), Fraction(1)) + a * prev

    table = tuple((a, objective(a)) for a in cands)
    value = max(v for _, v in table)
    maxi = tuple(a for a, v in table if v == value)
    if value != Fraction(d + 2, 3) or Fraction(d - 1, d + 1) not in maxi:
        raise AssertionError(f"rich-point recursion at d={d} gave {value} at {maxi}")
    return RichnessResult(d, value, maxi, table)
