"""Necessary conditions for a profile to be realisable over a graph.

These only prune: a profile that passes may still be unrealisable, so any
maximum taken over the passing profiles is an over-approximation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import List, Optional, Tuple

import numpy as np

from .graphs import (SmallGraph, independence_numbers, maximal_cliques, popcount,
                     spanning_cycle_sets, _bits)
from .lp import _values


@dataclass(frozen=True)
class Condition:
    name: str
    passed: bool
    witness: Optional[Tuple[int, ...]] = None
    detail: str = ""


@dataclass(frozen=True)
class ConditionReport:
    conditions: Tuple[Condition, ...]
    count_zero: bool

    @property
    def admissible(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failed(self) -> List[Condition]:
        return [c for c in self.conditions if not c.passed]

    def to_json_obj(self) -> dict:
        return {
            "admissible": self.admissible,
            "count_zero": self.count_zero,
            "conditions": [
                {"name": c.name, "passed": c.passed,
                 "witness": None if c.witness is None else [v + 1 for v in c.witness],
                 "detail": c.detail}
                for c in self.conditions
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


@dataclass(frozen=True)
class _Structures:
    cliques: Tuple[Tuple[int, ...], ...]
    odd_cycles: Tuple[Tuple[int, ...], ...]
    alpha_two: Tuple[Tuple[int, ...], ...]
    degrees: Tuple[int, ...]


@lru_cache(maxsize=20_000)
def _structures(g: SmallGraph) -> _Structures:
    cliques = tuple(c for c in maximal_cliques(g) if len(c) >= 2)
    odd = tuple(sorted(tuple(sorted(s)) for s in spanning_cycle_sets(g) if len(s) % 2))
    alpha = independence_numbers(g)
    # two-vertex sets are skipped: two isolated classes at full dimension
    # (lam = (d, d)) are plainly realisable but would break the inequality
    a2 = tuple(tuple(_bits(mask)) for mask in range(1 << g.k)
               if popcount(mask) >= 3 and alpha[mask] == 2)
    return _Structures(cliques, odd, a2, tuple(g.degrees()))


def necessary_conditions(g: SmallGraph, lam, d: int) -> ConditionReport:
    """Clique, odd-cycle, independence-2 and degree conditions.

    * every maximal clique V' with at least two vertices: sum lam <= d - |V'|
    * every odd cycle C of length 2l+1: sum lam <= l*d - (2l+1)
    * every vertex set K (|K| >= 3) inducing independence number 2:
      sum lam <= 2d - |K| + 1
    * every vertex: deg(i) <= d - lam_i, otherwise the count is zero
    """
    lam = _values(lam)
    if len(lam) != g.k:
        raise ValueError(f"profile has {len(lam)} entries but the graph has {g.k} vertices")
    st = _structures(g)
    conds: List[Condition] = []
    conds.append(_first_violation(
        "clique", st.cliques, lam, lambda c: d - len(c)))
    conds.append(_first_violation(
        "odd-cycle", st.odd_cycles, lam, lambda c: (len(c) - 1) // 2 * d - len(c)))
    conds.append(_first_violation(
        "independence-2", st.alpha_two, lam, lambda c: 2 * d - len(c) + 1))
    bad = [i for i in range(g.k) if st.degrees[i] > d - lam[i]]
    if bad:
        i = bad[0]
        conds.append(Condition("degree", False, (i,),
                               f"degree {st.degrees[i]} > d - lam = {d - lam[i]}"))
    else:
        conds.append(Condition("degree", True))
    return ConditionReport(tuple(conds), count_zero=bool(bad))


def _first_violation(name, structures, lam, limit) -> Condition:
    for c in structures:
        total = sum(lam[i] for i in c)
        lim = limit(c)
        if total > lim:
            return Condition(name, False, tuple(c), f"sum {total} > {lim}")
    return Condition(name, True)


def admissible(g: SmallGraph, lam, d: int) -> bool:
    return necessary_conditions(g, lam, d).admissible


def maximal_profiles(g: SmallGraph, d: int, floor: int = 2) -> List[Tuple[int, ...]]:
    """Componentwise-maximal profiles in ``{floor..d}^k`` passing every condition.

    The passing set is down-closed, so a passing profile is maximal exactly
    when no single-coordinate increment passes; that test is what is run.
    """
    return list(_maximal_profiles(g, d, floor))


def condition_system(g: SmallGraph, d: int) -> Tuple[np.ndarray, np.ndarray]:
    """All conditions as linear inequalities ``S @ lam <= b``."""
    st = _structures(g)
    rows, rhs = [], []
    for group, limit in ((st.cliques, lambda c: d - len(c)),
                         (st.odd_cycles, lambda c: (len(c) - 1) // 2 * d - len(c)),
                         (st.alpha_two, lambda c: 2 * d - len(c) + 1)):
        for c in group:
            row = np.zeros(g.k, dtype=np.int64)
            row[list(c)] = 1
            rows.append(row)
            rhs.append(limit(c))
    for i in range(g.k):
        row = np.zeros(g.k, dtype=np.int64)
        row[i] = 1
        rows.append(row)
        rhs.append(d - st.degrees[i])
    return np.array(rows, dtype=np.int64).reshape(-1, g.k), np.array(rhs, dtype=np.int64)


@lru_cache(maxsize=20_000)
def _maximal_profiles(g: SmallGraph, d: int, floor: int) -> Tuple[Tuple[int, ...], ...]:
    k = g.k
    if floor > d or k == 0:
        return ()
    grid = np.array(list(product(range(floor, d + 1), repeat=k)), dtype=np.int64)
    s, b = condition_system(g, d)

    def passes(lams: np.ndarray) -> np.ndarray:
        return np.all(lams @ s.T <= b, axis=1)

    ok = passes(grid)
    maximal = ok.copy()
    for i in range(k):
        up = grid.copy()
        up[:, i] += 1
        bumped = (up[:, i] <= d) & passes(up)
        maximal &= ~bumped
    return tuple(tuple(int(v) for v in row) for row in grid[maximal])
