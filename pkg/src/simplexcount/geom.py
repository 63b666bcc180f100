"""Points, spheres, hyperplanes and simplices, with the paraboloid lift.

Coordinates are exact rationals when the inputs allow it and floats
otherwise. Every predicate is exact on rational data and uses an absolute
tolerance (default ``1e-9``) on floats.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from . import exact
from .numbers import TOL, Real, all_exact, format_number, parse_number, sign


class GeometryError(ValueError):
    """Rejected geometric input (dimension mismatch, degeneracy, ...)."""


@dataclass(frozen=True)
class Point:
    coords: Tuple[Real, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(self.coords))
        if len(self.coords) < 1:
            raise GeometryError("a point needs at least one coordinate")

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def is_exact(self) -> bool:
        return all_exact(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __getitem__(self, i: int) -> Real:
        return self.coords[i]


def as_point(p) -> Point:
    return p if isinstance(p, Point) else Point(tuple(p))


def _sum_sq(values: Iterable[Real]) -> Real:
    total: Real = 0
    for v in values:
        total = total + v * v
    return total


def squared_distance(a, b) -> Real:
    """Squared Euclidean distance; exact when both points are rational."""
    a, b = as_point(a), as_point(b)
    if a.dim != b.dim:
        raise GeometryError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return _sum_sq(x - y for x, y in zip(a.coords, b.coords))


def is_unit_pair(a, b, tol: float = TOL) -> bool:
    d2 = squared_distance(a, b)
    if isinstance(d2, (int, Fraction)):
        return d2 == 1
    return abs(d2 - 1) <= tol


def lift_point(p) -> Tuple[Real, ...]:
    """The paraboloid map x -> (x, |x|^2)."""
    p = as_point(p)
    return p.coords + (_sum_sq(p.coords),)


@dataclass(frozen=True)
class Sphere:
    center: Point
    radius_sq: Real

    def __post_init__(self) -> None:
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius_sq > 0:
            raise GeometryError("sphere radius must be positive")

    @property
    def dim_ambient(self) -> int:
        return self.center.dim

    def contains_point(self, p, tol: float = TOL) -> bool:
        value = squared_distance(p, self.center) - self.radius_sq
        return sign(value, tol) == 0


@dataclass(frozen=True)
class Hyperplane:
    """The set ``<normal, x> = offset``."""

    normal: Tuple[Real, ...]
    offset: Real
    artificial: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "normal", tuple(self.normal))
        if all(v == 0 for v in self.normal):
            raise GeometryError("hyperplane normal must be nonzero")

    @property
    def dim(self) -> int:
        return len(self.normal)

    def evaluate(self, x: Sequence[Real]) -> Real:
        if len(x) != self.dim:
            raise GeometryError(f"dimension mismatch: {len(x)} vs {self.dim}")
        total: Real = 0
        for a, v in zip(self.normal, x):
            total = total + a * v
        return total - self.offset

    def side(self, x: Sequence[Real], tol: float = TOL) -> int:
        return sign(self.evaluate(x), tol)


def lift_sphere(s: Sphere) -> Hyperplane:
    """Hyperplane ``x_{d+1} = 2c.x + (rho - |c|^2)`` in one dimension up.

    A point p lies on ``s`` exactly when ``lift_point(p)`` lies on the image.
    """
    c = s.center.coords
    normal = tuple(-2 * v for v in c) + (1,)
    return Hyperplane(normal, s.radius_sq - _sum_sq(c))


@dataclass(frozen=True)
class LiftedSimplex:
    """Relatively open simplex given by affinely independent vertices."""

    vertices: Tuple[Tuple[Real, ...], ...]

    def __post_init__(self) -> None:
        verts = tuple(tuple(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not verts:
            raise GeometryError("a simplex needs at least one vertex")
        dims = {len(v) for v in verts}
        if len(dims) != 1:
            raise GeometryError("simplex vertices have mixed dimensions")
        if len(verts) > self.ambient_dim + 1 or not affinely_independent(verts):
            raise GeometryError("simplex vertices are affinely dependent")

    @property
    def ambient_dim(self) -> int:
        return len(self.vertices[0])

    @property
    def dim_cell(self) -> int:
        return len(self.vertices) - 1


def affinely_independent(verts: Sequence[Sequence[Real]], tol: float = TOL) -> bool:
    if len(verts) <= 1:
        return True
    base = verts[0]
    diffs = [[a - b for a, b in zip(v, base)] for v in verts[1:]]
    if all(all_exact(v) for v in verts):
        return exact.rank(diffs) == len(diffs)
    arr = np.asarray(diffs, dtype=float)
    scale = max(1.0, float(np.abs(arr).max()))
    return int(np.linalg.matrix_rank(arr, tol=tol * scale)) == len(diffs)


class Relation(enum.Enum):
    CROSSES = "crosses"
    CONTAINS = "contains"
    MISSES = "misses"


def classify_signs(signs: Iterable[int], open_cell: bool = False) -> Relation:
    """Decide the relation from the vertex signs of a hyperplane.

    With ``open_cell`` the simplex is read as relatively open, so touching it
    only at the boundary counts as a miss.
    """
    signs = list(signs)
    pos, neg, zero = 1 in signs, -1 in signs, 0 in signs
    if not pos and not neg:
        return Relation.CONTAINS
    if pos and neg:
        return Relation.CROSSES
    if zero and not open_cell:
        return Relation.CROSSES
    return Relation.MISSES


def classify(h: Hyperplane, s: LiftedSimplex, tol: float = TOL,
             open_cell: bool = False) -> Relation:
    """Crosses / contains / misses for a hyperplane against a simplex.

    Contains when every vertex lies on ``h``. Crosses when two vertices
    have strictly opposite signs, or (closed reading) when a vertex on ``h``
    sits next to one off it.
    """
    if h.dim != s.ambient_dim:
        raise GeometryError(f"dimension mismatch: {h.dim} vs {s.ambient_dim}")
    return classify_signs((h.side(v, tol) for v in s.vertices), open_cell)


@dataclass(frozen=True)
class PointSet:
    points: Tuple[Point, ...]
    label: str = ""
    dim_hint: int = 0
    tol: float = field(default=TOL, compare=False)

    def __post_init__(self) -> None:
        pts = tuple(as_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        dims = {p.dim for p in pts}
        if self.dim_hint:
            dims.add(self.dim_hint)
        if len(dims) > 1:
            raise GeometryError(f"points of mixed dimension: {sorted(dims)}")
        if not dims:
            raise GeometryError("an empty point set needs an explicit dimension")
        object.__setattr__(self, "dim_hint", dims.pop())
        dup = find_duplicate(pts, self.tol)
        if dup is not None:
            raise GeometryError(f"duplicate points at indices {dup[0]} and {dup[1]}")

    @property
    def dim(self) -> int:
        return self.dim_hint

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def is_exact(self) -> bool:
        return all(p.is_exact for p in self.points)

    def as_array(self) -> np.ndarray:
        if not self.points:
            return np.zeros((0, self.dim))
        return np.array([[float(v) for v in p.coords] for p in self.points])

    def to_json_obj(self) -> dict:
        return {
            "dim": self.dim,
            "points": [[format_number(v) for v in p.coords] for p in self.points],
            "label": self.label,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "PointSet":
        pts = [Point(tuple(parse_number(v) for v in row)) for row in obj["points"]]
        return cls(tuple(pts), label=obj.get("label", ""), dim_hint=int(obj["dim"]))

    @classmethod
    def from_json(cls, text: str) -> "PointSet":
        return cls.from_json_obj(json.loads(text))


def find_duplicate(points: Sequence[Point], tol: float = TOL):
    """First pair of coincident points (squared distance within ``tol``)."""
    if len(points) < 2:
        return None
    if all(p.is_exact for p in points):
        seen = {}
        for i, p in enumerate(points):
            if p.coords in seen:
                return seen[p.coords], i
            seen[p.coords] = i
        return None
    arr = np.array([[float(v) for v in p.coords] for p in points])
    d2 = ((arr[:, None, :] - arr[None, :, :]) ** 2).sum(axis=2)
    iu = np.triu_indices(len(points), k=1)
    hits = np.nonzero(d2[iu] <= tol)[0]
    if hits.size == 0:
        return None
    return int(iu[0][hits[0]]), int(iu[1][hits[0]])


def unit_adjacency(a: PointSet, b: PointSet = None, tol: float = TOL) -> np.ndarray:
    """Boolean matrix of pairs at squared distance 1 (within ``tol``)."""
    b = a if b is None else b
    if a.dim != b.dim:
        raise GeometryError(f"dimension mismatch: {a.dim} vs {b.dim}")
    if a.is_exact and b.is_exact:
        out = np.zeros((len(a), len(b)), dtype=bool)
        for i, p in enumerate(a.points):
            for j, q in enumerate(b.points):
                out[i, j] = squared_distance(p, q) == 1
        return out
    d2 = squared_distance_matrix(a, b)
    return np.abs(d2 - 1.0) <= tol


def squared_distance_matrix(a: PointSet, b: PointSet = None) -> np.ndarray:
    b = a if b is None else b
    x, y = a.as_array(), b.as_array()
    return ((x[:, None, :] - y[None, :, :]) ** 2).sum(axis=2)


def to_point_list(rows: Sequence[Sequence[Real]]) -> List[Point]:
    return [Point(tuple(r)) for r in rows]
