"""Brute-force counting: unit tuples, congruent pattern copies, rich points.

These are the ground-truth oracles, so clarity wins over speed. Each count
is a backtracking search over precomputed pairwise predicates.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .geom import GeometryError, PointSet, squared_distance_matrix, unit_adjacency
from .numbers import TOL, format_number, parse_number


class CountingError(ValueError):
    pass


@dataclass(frozen=True)
class Counts:
    ordered: int
    unordered: Optional[int]
    tol: float

    def to_json_obj(self) -> dict:
        return {"ordered": self.ordered, "unordered": self.unordered, "tol": self.tol}

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def _count_cliques(adj: Sequence[Sequence[bool]], classes: Sequence[Sequence[int]],
                   allowed=None) -> int:
    """Ordered tuples (v_1..v_k), v_i from ``classes[i]``, pairwise related.

    ``allowed(i, j, a, b)`` overrides the plain adjacency test when given.
    """
    k = len(classes)
    chosen: List[int] = []

    def ok(pos: int, v: int) -> bool:
        for i, u in enumerate(chosen):
            if u == v:
                return False
            if allowed is None:
                if not adj[u][v]:
                    return False
            elif not allowed(i, pos, u, v):
                return False
        return True

    def search(pos: int) -> int:
        if pos == k:
            return 1
        total = 0
        for v in classes[pos]:
            if ok(pos, v):
                chosen.append(v)
                total += search(pos + 1)
                chosen.pop()
        return total

    return search(0)


def count_unit_tuples(sets: Union[PointSet, Sequence[PointSet]], k: Optional[int] = None,
                      tol: float = TOL) -> Counts:
    """Tuples whose points are pairwise at distance 1.

    Pass one point set with ``k`` to count k-tuples inside it (the unordered
    count is ``ordered / k!``). Pass a list of sets to count tuples with the
    i-th point taken from the i-th set; the unordered count is then reported
    only when every set is the same one.
    """
    if isinstance(sets, PointSet):
        if k is None:
            raise CountingError("a single point set needs k")
        sets = [sets] * k
    sets = list(sets)
    if k is not None and k != len(sets):
        raise CountingError("k does not match the number of sets")
    k = len(sets)
    if k < 1:
        raise CountingError("need at least one set")
    dims = {s.dim for s in sets}
    if len(dims) != 1:
        raise GeometryError(f"point sets of different dimensions: {sorted(dims)}")
    # index every distinct point once so repeated sets share vertices
    universe, classes = _merge(sets)
    adj = unit_adjacency(universe, tol=tol).tolist()
    ordered = _count_cliques(adj, classes)
    same = all(s is sets[0] or s == sets[0] for s in sets)
    unordered = ordered // math.factorial(k) if same else None
    return Counts(ordered, unordered, tol)


def _merge(sets: Sequence[PointSet]) -> Tuple[PointSet, List[List[int]]]:
    index = {}
    pts = []
    classes = []
    for s in sets:
        idx = []
        for p in s.points:
            key = p.coords
            if key not in index:
                index[key] = len(pts)
                pts.append(p)
            idx.append(index[key])
        classes.append(idx)
    return PointSet(tuple(pts), tol=0.0, dim_hint=sets[0].dim), classes


@dataclass(frozen=True)
class PatternSpec:
    """Required distances: ``distances[i][j]`` is a number or None (free)."""

    k: int
    distances: Tuple[Tuple[Optional[float], ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(v for v in row) for row in self.distances)
        object.__setattr__(self, "distances", rows)
        if len(rows) != self.k or any(len(r) != self.k for r in rows):
            raise CountingError("distance matrix must be k x k")
        for i in range(self.k):
            if rows[i][i] not in (None, 0):
                raise CountingError("diagonal entries must be free")
            for j in range(self.k):
                if rows[i][j] != rows[j][i]:
                    raise CountingError(f"distance matrix not symmetric at {(i + 1, j + 1)}")

    @classmethod
    def unit_simplex(cls, k: int) -> "PatternSpec":
        return cls(k, tuple(tuple(None if i == j else 1 for j in range(k)) for i in range(k)))

    @classmethod
    def from_points(cls, p: PointSet) -> "PatternSpec":
        """Fully fixed pattern: every distance of ``p``."""
        d2 = squared_distance_matrix(p)
        k = len(p)
        return cls(k, tuple(tuple(None if i == j else float(math.sqrt(d2[i, j]))
                                  for j in range(k)) for i in range(k)))

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PatternSpec":
        rows = obj["distances"]
        return cls(int(obj["k"]), tuple(
            tuple(None if v is None else parse_number(v) for v in row) for row in rows))

    def to_json_obj(self) -> dict:
        return {"k": self.k, "distances": [
            [None if v is None else format_number(v) for v in row] for row in self.distances]}

    @property
    def is_unit_simplex(self) -> bool:
        return all(self.distances[i][j] == 1 for i in range(self.k)
                   for j in range(self.k) if i != j)


def count_pattern(p: PointSet, spec: PatternSpec, tol: float = TOL) -> Counts:
    """Ordered injective embeddings of the pattern into ``p``.

    Point v_i goes to position i; every fixed entry must match the squared
    distance within ``tol``. Unordered counts are given only for the
    complete unit simplex, where the automorphism group is all of S_k.
    """
    k = spec.k
    if k > 8:
        raise CountingError("patterns are limited to k <= 8")
    d2 = squared_distance_matrix(p)
    targets = [[None if spec.distances[i][j] is None else float(spec.distances[i][j]) ** 2
                for j in range(k)] for i in range(k)]

    def allowed(i: int, j: int, a: int, b: int) -> bool:
        t = targets[i][j]
        return t is None or abs(d2[a, b] - t) <= tol

    classes = [list(range(len(p)))] * k
    ordered = _count_cliques(None, classes, allowed)
    unordered = ordered // math.factorial(k) if spec.is_unit_simplex else None
    return Counts(ordered, unordered, tol)


def rich_points(p: PointSet, q_candidates: PointSet, r: int, tol: float = TOL) -> PointSet:
    """The candidates with at least r points of ``p`` at distance 1."""
    if p.dim != q_candidates.dim:
        raise GeometryError(f"dimension mismatch: {p.dim} vs {q_candidates.dim}")
    degree = unit_adjacency(q_candidates, p, tol=tol).sum(axis=1) if len(p) else \
        np.zeros(len(q_candidates), dtype=int)
    keep = tuple(q for q, deg in zip(q_candidates.points, degree) if deg >= r)
    return PointSet(keep, label=f"{r}-rich", dim_hint=p.dim)


def unit_degrees(p: PointSet, tol: float = TOL) -> List[int]:
    adj = unit_adjacency(p, tol=tol)
    np.fill_diagonal(adj, False)
    return [int(v) for v in adj.sum(axis=1)]
