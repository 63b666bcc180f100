"""The acceptance suite: ten end-to-end checks with pinned tolerances.

Each check returns a :class:`CriterionResult`; ``run_all`` runs them in
order. The CLI ``verify`` subcommand and the test suite both call this.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from .constructions import LenzSpec, lenz
from .counting import count_unit_tuples
from .cuttings import (build_arrangement, fan_triangulate,
                       random_unit_circles, sample_cutting, simplex_volume, verify_cutting)
from .exponents import compute_bound, ktt_exponent, load_overrides, solve_recurrence
from .geom import Hyperplane, PointSet
from .graphs import SmallGraph, all_graphs, graph_stats, maximal_cliques, shortest_odd_cycle
from .lp import (LPError, build_lp, construct_feasible, diameter_weight, solve_exact,
                 vertex_enumeration)
from .numbers import format_rational
from .realizability import maximal_profiles

F = Fraction


@dataclass(frozen=True)
class CriterionResult:
    ident: int
    name: str
    passed: bool
    detail: str
    seconds: float
    budget: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] criterion {self.ident}: {self.name} "
                f"({self.seconds:.2f}s of {self.budget:g}s) {self.detail}")


def known_overrides():
    text = resources.files("simplexcount").joinpath("data/known_overrides.json").read_text()
    return load_overrides(text)


def _fail(msgs: List[str], limit: int = 3) -> str:
    more = f" (+{len(msgs) - limit} more)" if len(msgs) > limit else ""
    return "; ".join(msgs[:limit]) + more


def criterion_1() -> str:
    bad: List[str] = []
    head = compute_bound(4, 7, "unit", known_overrides()).value
    if head != F(10, 3):
        bad.append(f"headline {format_rational(head)} != 10/3")
    for g in all_graphs(4):
        if max(g.degrees()) >= 2:
            continue
        for floor in (1, 2):
            for lam in maximal_profiles(g, 7, floor):
                lp = build_lp("unit", g, lam)
                sol = solve_exact(lp)
                if sol.value != vertex_enumeration(lp).value:
                    bad.append(f"solver disagrees with oracle at {lam}")
                if not sol.value < F(10, 3):
                    bad.append(f"{g.sorted_edges()} {lam}: {format_rational(sol.value)}")
        # the uniform 1/9 point on the top profile
        lp = build_lp("unit", g, (7, 7, 7, 7))
        x = [F(1, 9)] * 4
        if not lp.is_feasible(x) or not lp.objective_value(x) < F(10, 3):
            bad.append(f"1/9 point fails for {g.sorted_edges()}")
    if bad:
        raise AssertionError(_fail(bad))
    return "headline 10/3; every degree<2 LP value below 10/3"


def criterion_2() -> str:
    bad: List[str] = []
    head = compute_bound(3, 5, "diameter", known_overrides()).value
    if head != 2:
        bad.append(f"headline {format_rational(head)} != 2")
    g = SmallGraph.empty(3)
    lp = build_lp("diameter", g, (5, 5, 5))
    x = [F(1, 5)] * 3
    if not lp.is_feasible(x) or not lp.objective_value(x) < 2:
        bad.append("1/5 point fails")
    best = F(0)
    for floor in (1, 2):
        for lam in maximal_profiles(g, 5, floor):
            best = max(best, solve_exact(build_lp("diameter", g, lam)).value)
    if not best < 2:
        bad.append(f"empty-graph diameter optimum {format_rational(best)}")
    if bad:
        raise AssertionError(_fail(bad))
    return f"headline 2; empty-graph diameter optimum {format_rational(best)} < 2"


def _scan():
    for k in range(1, 6):
        for g in all_graphs(k):
            for d in range(k, 9):
                for lam in maximal_profiles(g, d, 2):
                    yield k, g, d, lam


def criterion_3() -> str:
    bad: List[str] = []
    n = 0
    for k, g, d, lam in _scan():
        n += 1
        bound = F(5, 8) * d + F(k, 8)
        v = solve_exact(build_lp("unit", g, lam)).value
        if v > bound:
            bad.append(f"{g.sorted_edges()} d={d} {lam}: {format_rational(v)}")
        try:
            cert = construct_feasible("main-weight", g, lam, d)
            if cert.value > bound:
                bad.append(f"certificate above bound at {lam}")
        except LPError as exc:
            bad.append(f"{g.sorted_edges()} d={d} {lam}: {exc}")
    if bad:
        raise AssertionError(_fail(bad))
    return f"{n} (graph, d, profile) instances within 5d/8 + k/8"


def _diam_clique_applies(g: SmallGraph, lam, d: int) -> bool:
    """The clique argument needs its chosen clique to satisfy the clique bound.

    A lone vertex at full dimension (lam_i = d) does not when d is odd.
    """
    return any(sum(diameter_weight(lam[i]) for i in c) <= F(d, 2) for c in maximal_cliques(g))


def criterion_4() -> str:
    bad: List[str] = []
    counts: Dict[str, int] = {"diameter": 0, "diam-clique": 0, "triangle-free": 0, "odd-cycle": 0}
    for k, g, d, lam in _scan():
        st = graph_stats(g)
        unit = solve_exact(build_lp("unit", g, lam)).value
        diam = solve_exact(build_lp("diameter", g, lam)).value
        counts["diameter"] += 1
        if diam > F(d, 2):
            bad.append(f"diameter {g.sorted_edges()} d={d} {lam}: {format_rational(diam)}")
        if _diam_clique_applies(g, lam, d):
            counts["diam-clique"] += 1
            try:
                construct_feasible("diam-clique", g, lam, d)
            except LPError as exc:
                bad.append(str(exc))
        degs = g.degrees()
        if st.triangle_free and all(degs[i] <= d - lam[i] for i in range(k)):
            counts["triangle-free"] += 1
            if unit > F(2 * d, 3):
                bad.append(f"triangle-free {g.sorted_edges()} d={d} {lam}")
            try:
                construct_feasible("triangle-free", g, lam, d)
            except LPError as exc:
                bad.append(str(exc))
        cyc = shortest_odd_cycle(g)
        if cyc is not None and len(cyc) >= 5:
            ell = (len(cyc) - 1) // 2
            counts["odd-cycle"] += 1
            bound = F(ell * d, 2 * ell - 1)
            if unit > bound:
                bad.append(f"odd-cycle {g.sorted_edges()} d={d} {lam}")
            try:
                cert = construct_feasible("odd-cycle", g, lam, d)
                if cert.value > bound:
                    bad.append("odd-cycle certificate above bound")
            except LPError as exc:
                bad.append(str(exc))
    if bad:
        raise AssertionError(_fail(bad))
    return ", ".join(f"{k}: {v}" for k, v in counts.items())


def criterion_5() -> str:
    bad = []
    for d in range(2, 11):
        if solve_recurrence(d, d, 1) != F(2 * d, d + 1):
            bad.append(f"(d,d,1) at d={d}")
    for d in range(5, 11):
        if solve_recurrence(2 * d - 4, 2 * d - 4, 1) != F(2 * (2 * d - 4), 2 * d - 3):
            bad.append(f"(2d-4,2d-4,1) at d={d}")
    if bad:
        raise AssertionError(_fail(bad))
    return "2d/(d+1) and 2(2d-4)/(2d-3) reproduced"


def criterion_6() -> str:
    bad = []
    for d in range(2, 11):
        r = ktt_exponent(d)
        if r.value != F(d + 2, 3) or F(d - 1, d + 1) not in r.maximizers:
            bad.append(f"d={d}: {format_rational(r.value)} at {r.maximizers}")
    if bad:
        raise AssertionError(_fail(bad))
    return "(d+2)/3 with maximizer (d-1)/(d+1) for d = 2..10"


def criterion_7() -> str:
    bad = []
    p = lenz(LenzSpec(4, 12, "rich")).points
    pairs = count_unit_tuples(p, 2).unordered
    tri = count_unit_tuples(p, 3).unordered
    if pairs != 42 or tri != 36:
        bad.append(f"lenz(4,12): {pairs} pairs, {tri} triangles")
    notes = []
    for n in (8, 16, 32):
        res = lenz(LenzSpec(4, n, "rich"))
        total = count_unit_tuples(res.points, 2).unordered
        same = sum(1 for i in range(n) for j in range(i + 1, n)
                   if res.circle_of[i] == res.circle_of[j]
                   and abs(_d2(res.points, i, j) - 1) <= 1e-9)
        cross = total - same
        target = (n / 2) ** 2
        notes.append(f"n={n}: {cross}")
        if not target / 2 <= cross <= 2 * target:
            bad.append(f"n={n}: cross pairs {cross} vs {target}")
    if bad:
        raise AssertionError(_fail(bad))
    return "42 pairs, 36 triangles; cross pairs " + ", ".join(notes)


def _d2(p: PointSet, i: int, j: int) -> float:
    a, b = p.points[i].coords, p.points[j].coords
    return float(sum((float(x) - float(y)) ** 2 for x, y in zip(a, b)))


def criterion_8(seeds: int = 100) -> str:
    retries = []
    bad = []
    for seed in range(seeds):
        sig = [random_unit_circles(50, seed)]
        cut = sample_cutting(sig, 4, seed=seed, constant=8.0)
        rep = verify_cutting(cut, sig, n_points=10_000, seed=seed)
        retries.append(cut.retries)
        if not rep.passed:
            bad.append(f"seed {seed}: {rep}")
    mean = sum(retries) / len(retries)
    if mean > 2.5:
        bad.append(f"mean retries {mean:.3f} > 2.5")
    if bad:
        raise AssertionError(_fail(bad))
    return f"{seeds} cuttings verified; mean retries {mean:.3f}"


def _shoelace(pts: np.ndarray) -> float:
    c = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0]))
    q = pts[order]
    x, y = q[:, 0], q[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def criterion_9(trials: int = 40, seed: int = 0) -> str:
    rng = np.random.default_rng(seed)
    bad = []
    cells = 0
    for t in range(trials):
        n = int(rng.integers(3, 11))
        hs = [Hyperplane(tuple(float(v) for v in rng.normal(size=2)), float(rng.normal()))
              for _ in range(n)]
        arr = build_arrangement(hs, 2)
        for i, f in enumerate(arr.faces):
            if f.dim != 2 or not arr.is_bounded(i):
                continue
            cells += 1
            poly = arr.region_polytope(i)
            lattice = poly.faces()
            tris = fan_triangulate(lattice, poly.coords)
            if len(tris) > math.factorial(2) * len(lattice):
                bad.append(f"trial {t} cell {i}: {len(tris)} triangles")
            area = sum(simplex_volume(np.array([poly.coords[v] for v in s])) for s in tris)
            exact = _shoelace(np.array(list(poly.coords.values())))
            if abs(area - exact) > 1e-9:
                bad.append(f"trial {t} cell {i}: area {area} vs {exact}")
    if bad:
        raise AssertionError(_fail(bad))
    return f"{cells} bounded cells over {trials} arrangements"


def _random_profile_lp(rng: np.random.Generator):
    k = int(rng.integers(1, 6))
    edges = [(i, j) for i in range(k) for j in range(i + 1, k) if rng.random() < 0.5]
    g = SmallGraph(k, frozenset(edges))
    lam = tuple(int(v) for v in rng.integers(0, 9, size=k))
    family = "unit" if rng.random() < 0.5 else "diameter"
    return build_lp(family, g, lam)


def criterion_10(instances: int = 500, seed: int = 0) -> str:
    rng = np.random.default_rng(seed)
    bad = []
    for n in range(instances):
        lp = _random_profile_lp(rng)
        a, b = solve_exact(lp), vertex_enumeration(lp)
        if a.status != b.status or a.value != b.value:
            bad.append(f"instance {n} {lp.family} lam={lp.lam}: {a.value} vs {b.value}")
    if bad:
        raise AssertionError(_fail(bad))
    return f"{instances} instances agree exactly"


CRITERIA: Dict[int, tuple] = {
    1: ("unit headline k=4 d=7", criterion_1, 60.0),
    2: ("diameter headline k=3 d=5", criterion_2, 10.0),
    3: ("5d/8 + k/8 envelope", criterion_3, 300.0),
    4: ("diameter, triangle-free and odd-cycle envelopes", criterion_4, 300.0),
    5: ("incidence recurrence exponents", criterion_5, 1.0),
    6: ("rich-point recursion", criterion_6, 1.0),
    7: ("Lenz ground-truth counts", criterion_7, 10.0),
    8: ("verified cuttings, 100 seeds", criterion_8, 120.0),
    9: ("triangulation combinatorics", criterion_9, 30.0),
    10: ("exact simplex vs vertex enumeration", criterion_10, 120.0),
}


def run_criterion(ident: int) -> CriterionResult:
    name, fn, budget = CRITERIA[ident]
    start = time.perf_counter()
    try:
        detail = fn()
        ok = True
    except AssertionError as exc:
        detail, ok = f"violation: {exc}", False
    elapsed = time.perf_counter() - start
    if ok and elapsed > budget:
        ok, detail = False, f"over time budget; {detail}"
    return CriterionResult(ident, name, ok, detail, elapsed, budget)


def run_all(only: Optional[Sequence[int]] = None,
            report: Optional[Callable[[CriterionResult], None]] = None) -> List[CriterionResult]:
    out = []
    for ident in (only or sorted(CRITERIA)):
        res = run_criterion(ident)
        if report is not None:
            report(res)
        out.append(res)
    return out
