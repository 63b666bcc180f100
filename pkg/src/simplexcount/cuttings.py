"""Hyperplane arrangements, bottom-vertex triangulation and sampled cuttings.

Spheres in R^d (d = 2 or 3) are lifted to hyperplanes in R^D, D = d + 1.
A random sample of them is cut into cells, the cells are triangulated and
every input surface is classified against every simplex. All geometry here
is floating point with a scale-relative tolerance; inputs must be generic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from .geom import (GeometryError, Hyperplane, LiftedSimplex, Point, PointSet, Relation,
                   Sphere, classify_signs, lift_sphere)
from .numbers import format_number, parse_number


class CuttingError(ValueError):
    """Raised when no verified cutting is found; ``best`` holds the closest attempt."""

    def __init__(self, msg: str, best: "Optional[Cutting]" = None) -> None:
        super().__init__(msg)
        self.best = best


class DegenerateError(GeometryError):
    """Input not in general position; the message names a witness."""


MAX_HYPERPLANES = 25


def _as_arrays(hs: Sequence[Hyperplane], dim: int) -> Tuple[np.ndarray, np.ndarray]:
    if any(h.dim != dim for h in hs):
        raise GeometryError(f"every hyperplane must live in R^{dim}")
    a = np.array([[float(v) for v in h.normal] for h in hs], dtype=float).reshape(-1, dim)
    b = np.array([float(h.offset) for h in hs], dtype=float)
    return a, b


def _scale(a: np.ndarray, b: np.ndarray) -> float:
    if a.size == 0:
        return 1.0
    return max(1.0, float(np.abs(a).max()), float(np.abs(b).max()))


def affine_dim(coords: np.ndarray, tol: float = 1e-9) -> int:
    if len(coords) <= 1:
        return 0 if len(coords) else -1
    diffs = coords[1:] - coords[0]
    scale = max(1.0, float(np.abs(diffs).max()))
    return int(np.linalg.matrix_rank(diffs, tol=tol * scale))


# ---------------------------------------------------------------- arrangement

@dataclass(frozen=True)
class Face:
    covector: Tuple[int, ...]
    dim: int

    @property
    def zero_set(self) -> Tuple[int, ...]:
        return tuple(i for i, s in enumerate(self.covector) if s == 0)


@dataclass
class Arrangement:
    """Face lattice of a simple arrangement; faces are relatively open."""

    hyperplanes: Tuple[Hyperplane, ...]
    D: int
    faces: List[Face]
    index: Dict[Tuple[int, ...], int]
    vertices: Dict[Tuple[int, ...], np.ndarray]
    tol: float

    def counts_by_dim(self) -> List[int]:
        out = [0] * (self.D + 1)
        for f in self.faces:
            out[f.dim] += 1
        return out

    def facets_of(self, i: int) -> List[int]:
        """Faces one dimension lower in the closure of face ``i``."""
        cov = self.faces[i].covector
        out = []
        for h, s in enumerate(cov):
            if s != 0:
                lower = cov[:h] + (0,) + cov[h + 1:]
                j = self.index.get(lower)
                if j is not None:
                    out.append(j)
        return out

    def cofacets_of(self, i: int) -> List[int]:
        cov = self.faces[i].covector
        out = []
        for h, s in enumerate(cov):
            if s == 0:
                for t in (-1, 1):
                    j = self.index.get(cov[:h] + (t,) + cov[h + 1:])
                    if j is not None:
                        out.append(j)
        return out

    def face_vertices(self, i: int) -> List[Tuple[int, ...]]:
        """Arrangement vertices in the closure of face ``i`` (keyed by plane subsets)."""
        cov = self.faces[i].covector
        out = []
        for key in self.vertices:
            vc = self.index_covector(key)
            if all(v == 0 or v == c for v, c in zip(vc, cov)) and \
                    all(vc[h] == 0 for h in range(len(cov)) if cov[h] == 0):
                out.append(key)
        return out

    def index_covector(self, vertex_key: Tuple[int, ...]) -> Tuple[int, ...]:
        return self.faces[self.index_by_zero[vertex_key]].covector

    @property
    def index_by_zero(self) -> Dict[Tuple[int, ...], int]:
        cache = getattr(self, "_zero_cache", None)
        if cache is None:
            cache = {self.faces[i].zero_set: i for i in range(len(self.faces))
                     if self.faces[i].dim == 0}
            self._zero_cache = cache
        return cache

    def covector_of(self, x: Sequence[float]) -> Tuple[int, ...]:
        a, b = _as_arrays(self.hyperplanes, self.D)
        vals = a @ np.asarray(x, dtype=float) - b
        return tuple(int(v) for v in np.where(np.abs(vals) <= self.tol, 0, np.sign(vals)))

    def locate(self, x: Sequence[float]) -> Optional[int]:
        return self.index.get(self.covector_of(x))

    def is_bounded(self, i: int) -> bool:
        """LP test: the closed face has no recession direction."""
        f = self.faces[i]
        a, b = _as_arrays(self.hyperplanes, self.D)
        a_ub, b_ub, a_eq, b_eq = [], [], [], []
        for h, s in enumerate(f.covector):
            if s == 0:
                a_eq.append(a[h])
                b_eq.append(b[h])
            else:
                a_ub.append(-s * a[h])
                b_ub.append(-s * b[h])
        for j in range(self.D):
            for sense in (1.0, -1.0):
                c = np.zeros(self.D)
                c[j] = sense
                res = linprog(c, A_ub=np.array(a_ub).reshape(-1, self.D) if a_ub else None,
                              b_ub=np.array(b_ub) if b_ub else None,
                              A_eq=np.array(a_eq).reshape(-1, self.D) if a_eq else None,
                              b_eq=np.array(b_eq) if b_eq else None,
                              bounds=[(None, None)] * self.D, method="highs")
                if res.status == 3:
                    return False
        return True

    def region_polytope(self, i: int) -> "ConvexPolytope":
        f = self.faces[i]
        if f.dim != self.D:
            raise GeometryError("only full-dimensional faces become polytopes")
        a, b = _as_arrays(self.hyperplanes, self.D)
        s = np.array(f.covector, dtype=float)
        return ConvexPolytope.from_halfspaces(-s[:, None] * a, -s * b)


def expected_face_counts(n: int, D: int) -> List[int]:
    """Face numbers of a simple arrangement of n hyperplanes in R^D."""
    return [math.comb(n, D - j) * sum(math.comb(n - D + j, i) for i in range(j + 1))
            if n >= D - j else 0 for j in range(D + 1)]


def check_general_position(hs: Sequence[Hyperplane], D: int, tol: float = 1e-9):
    """Vertices of the arrangement keyed by the D planes through them.

    Raises :class:`DegenerateError` naming the planes when D normals are
    dependent (parallel or coincident flats) or D + 1 planes share a point.
    """
    a, b = _as_arrays(hs, D)
    n = len(hs)
    scale = _scale(a, b)
    verts: Dict[Tuple[int, ...], np.ndarray] = {}
    for sub in combinations(range(n), min(D, n)):
        if len(sub) < 2:
            break
        m = a[list(sub)]
        sv = np.linalg.svd(m, compute_uv=False)
        if sv[-1] <= tol * max(1.0, sv[0]):
            raise DegenerateError(
                f"hyperplanes {[i + 1 for i in sub]} have dependent normals")
    if n < D:
        return verts
    for sub in combinations(range(n), D):
        x = np.linalg.solve(a[list(sub)], b[list(sub)])
        vals = np.abs(a @ x - b)
        vals[list(sub)] = np.inf
        hit = np.nonzero(vals <= tol * scale * max(1.0, float(np.abs(x).max())))[0]
        if hit.size:
            raise DegenerateError(
                f"hyperplanes {[i + 1 for i in sub] + [int(hit[0]) + 1]} share a point")
        verts[sub] = x
    return verts


def build_arrangement(hs: Sequence[Hyperplane], D: int, tol: float = 1e-9) -> Arrangement:
    """Complete face lattice of a simple arrangement in R^D (D in 2..4).

    A j-face lies in the flat of exactly D - j hyperplanes and is a region
    of the arrangement induced on that flat. Such a region either touches a
    vertex of the flat (every sign completion around a vertex is a region)
    or, when fewer than j other planes remain, every sign pattern occurs.
    """
    if D not in (2, 3, 4):
        raise GeometryError("arrangements are supported for D in {2, 3, 4}")
    hs = tuple(hs)
    if len(hs) > MAX_HYPERPLANES:
        raise GeometryError(f"at most {MAX_HYPERPLANES} hyperplanes")
    verts = check_general_position(hs, D, tol)
    a, b = _as_arrays(hs, D)
    n = len(hs)
    vsign: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
    for sub, x in verts.items():
        vals = a @ x - b
        s = [1 if v > 0 else -1 for v in vals]
        for h in sub:
            s[h] = 0
        vsign[sub] = tuple(s)
    covectors = set()
    for k in range(min(D, n) + 1):
        j = D - k
        for flat in combinations(range(n), k):
            others = [h for h in range(n) if h not in flat]
            if len(others) < j or n < D:
                # too few planes for vertices: all sign patterns occur
                for signs in product((-1, 1), repeat=len(others)):
                    cov = [0] * n
                    for h, s in zip(others, signs):
                        cov[h] = s
                    covectors.add(tuple(cov))
                continue
            fs = set(flat)
            for sub, s in vsign.items():
                if not fs.issubset(sub):
                    continue
                free = [h for h in sub if h not in fs]
                for signs in product((-1, 1), repeat=len(free)):
                    cov = list(s)
                    for h, t in zip(free, signs):
                        cov[h] = t
                    covectors.add(tuple(cov))
    faces = sorted((Face(c, D - sum(1 for v in c if v == 0)) for c in covectors),
                   key=lambda f: (f.dim, f.covector))
    index = {f.covector: i for i, f in enumerate(faces)}
    scale = _scale(a, b)
    return Arrangement(hs, D, faces, index, verts, tol * scale)


# ---------------------------------------------------------------- polytopes

@dataclass
class ConvexPolytope:
    """Bounded polytope with vertices tagged by the constraint rows tight there."""

    coords: Dict[int, np.ndarray]
    tight: Dict[int, FrozenSet[int]]
    D: int

    @classmethod
    def from_halfspaces(cls, a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> "ConvexPolytope":
        """Vertices of ``{a x <= b}`` by trying every D-subset of rows."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        D = a.shape[1]
        scale = _scale(a, b)
        coords, tight = {}, {}
        seen = []
        for sub in combinations(range(len(a)), D):
            m = a[list(sub)]
            if abs(np.linalg.det(m)) <= 1e-12 * max(1.0, float(np.abs(m).max())) ** D:
                continue
            x = np.linalg.solve(m, b[list(sub)])
            slack = a @ x - b
            lim = tol * scale * max(1.0, float(np.abs(x).max()))
            if np.any(slack > lim):
                continue
            if any(np.allclose(x, y, atol=lim, rtol=0) for y in seen):
                continue
            vid = len(seen)
            seen.append(x)
            coords[vid] = x
            tight[vid] = frozenset(int(i) for i in np.nonzero(np.abs(slack) <= lim)[0])
        poly = cls(coords, tight, D)
        if not coords:
            raise GeometryError("the halfspaces define an empty or unbounded region")
        return poly

    @classmethod
    def from_vertices(cls, points: Sequence[Sequence[float]]) -> "ConvexPolytope":
        pts = np.asarray(points, dtype=float)
        hull = ConvexHull(pts)
        eq = hull.equations
        return cls.from_halfspaces(eq[:, :-1], -eq[:, -1])

    @classmethod
    def box(cls, lo: Sequence[float], hi: Sequence[float]) -> "ConvexPolytope":
        D = len(lo)
        a = np.vstack([-np.eye(D), np.eye(D)])
        b = np.concatenate([-np.asarray(lo, float), np.asarray(hi, float)])
        return cls.from_halfspaces(a, b)

    def faces(self) -> "FaceLattice":
        return FaceLattice.build(self.coords, self.tight, self.D)

    def volume(self) -> float:
        pts = np.array(list(self.coords.values()))
        if self.D == 1:
            return float(pts.max() - pts.min())
        return float(ConvexHull(pts).volume)


@dataclass
class FaceLattice:
    """Faces of one polytope as frozensets of vertex ids, with dimensions."""

    dims: Dict[FrozenSet[int], int]
    children: Dict[FrozenSet[int], List[FrozenSet[int]]]
    top: FrozenSet[int]

    @classmethod
    def build(cls, coords: Dict[int, np.ndarray], tight: Dict[int, FrozenSet[int]],
              D: int) -> "FaceLattice":
        ids = frozenset(coords)
        planes = set().union(*tight.values()) if tight else set()

        def dim_of(s: FrozenSet[int]) -> int:
            return affine_dim(np.array([coords[v] for v in sorted(s)]))

        top_dim = dim_of(ids)
        facets = set()
        for p in planes:
            members = frozenset(v for v in ids if p in tight[v])
            if members and dim_of(members) == top_dim - 1:
                facets.add(members)
        # every proper face is an intersection of facets
        faces = set(facets)
        frontier = set(facets)
        while frontier:
            nxt = set()
            for f in frontier:
                for g in facets:
                    inter = f & g
                    if inter and inter not in faces:
                        nxt.add(inter)
            faces |= nxt
            frontier = nxt
        faces.add(ids)
        dims = {f: dim_of(f) for f in faces}
        for v in ids:
            dims[frozenset([v])] = 0
        children = {f: [g for g in dims if g < f and dims[g] == dims[f] - 1] for f in dims}
        return cls(dims, children, ids)

    def __len__(self) -> int:
        return len(self.dims)


def _bottom(vertex_set: Iterable[int], coords: Dict[int, np.ndarray]) -> int:
    return min(vertex_set, key=lambda v: (tuple(coords[v]), v))


def fan_triangulate(lattice: FaceLattice, coords: Dict[int, np.ndarray],
                    memo: Optional[Dict[FrozenSet[int], List[Tuple[int, ...]]]] = None,
                    face: Optional[FrozenSet[int]] = None) -> List[Tuple[int, ...]]:
    """Bottom-vertex triangulation of a face into simplices (vertex-id tuples).

    The lowest vertex v (lexicographic coordinates) is coned over the
    triangulations of all facets that avoid v. Faces shared with a
    neighbouring polytope are triangulated identically via ``memo``.
    """
    memo = {} if memo is None else memo
    face = lattice.top if face is None else face
    if face in memo:
        return memo[face]
    dim = lattice.dims[face]
    if dim == 0:
        out = [tuple(face)]
    else:
        v = _bottom(face, coords)
        out = []
        for g in lattice.children[face]:
            if v in g:
                continue
            for s in fan_triangulate(lattice, coords, memo, g):
                out.append(s + (v,))
    memo[face] = out
    return out


def simplex_volume(verts: np.ndarray) -> float:
    diffs = verts[1:] - verts[0]
    return abs(float(np.linalg.det(diffs))) / math.factorial(len(diffs))


def bottom_vertex_triangulation(target, box: Optional[Tuple[Sequence[float], Sequence[float]]] = None
                                ) -> List[LiftedSimplex]:
    """Triangulate a bounded polytope or every region of an arrangement.

    Unbounded regions need ``box = (lo, hi)``; they are intersected with it
    first, and the box facets play the role of artificial hyperplanes.
    """
    if isinstance(target, ConvexPolytope):
        lat = target.faces()
        return [LiftedSimplex(tuple(tuple(target.coords[v]) for v in s))
                for s in fan_triangulate(lat, target.coords)]
    if not isinstance(target, Arrangement):
        raise GeometryError("expected an Arrangement or a ConvexPolytope")
    out = []
    for i, f in enumerate(target.faces):
        if f.dim != target.D:
            continue
        bounded = target.is_bounded(i)
        if not bounded and box is None:
            raise GeometryError(f"region {i} is unbounded; pass a bounding box to clip it")
        a, b = _as_arrays(target.hyperplanes, target.D)
        s = np.array(f.covector, dtype=float)
        ha, hb = -s[:, None] * a, -s * b
        if not bounded:
            lo, hi = (np.asarray(v, float) for v in box)
            ha = np.vstack([ha, -np.eye(target.D), np.eye(target.D)])
            hb = np.concatenate([hb, -lo, hi])
        out.extend(bottom_vertex_triangulation(ConvexPolytope.from_halfspaces(ha, hb)))
    return out


# ---------------------------------------------------------------- cuttings

SurfaceId = Tuple[int, int]  # (class index, surface index), 0-based


@dataclass(frozen=True)
class Slab:
    direction: Tuple[float, ...]
    lo: float
    hi: float

    def holds(self, x: np.ndarray) -> np.ndarray:
        t = x @ np.asarray(self.direction)
        return (t > self.lo) & (t <= self.hi)


@dataclass(frozen=True)
class Cell:
    vertices: Tuple[Tuple[float, ...], ...]
    triggers: Tuple[SurfaceId, ...]
    stoppers: Tuple[Tuple[int, ...], ...]
    contained: Tuple[Tuple[int, ...], ...] = ()
    points: Tuple[int, ...] = ()
    slab: Optional[Slab] = None

    @property
    def dim_cell(self) -> int:
        return len(self.vertices) - 1

    def simplex(self) -> LiftedSimplex:
        return LiftedSimplex(self.vertices)

    def corners(self) -> np.ndarray:
        """Vertex coordinates of the cell itself (clipped when it is a slab piece)."""
        verts = np.array(self.vertices)
        if self.slab is None:
            return verts
        return _clip_simplex(verts, self.slab)

    def stopper_counts(self) -> Tuple[int, ...]:
        return tuple(len(s) for s in self.stoppers)


def _clip_simplex(verts: np.ndarray, slab: Slab) -> np.ndarray:
    u = np.asarray(slab.direction)
    t = verts @ u
    out = [v for v, tv in zip(verts, t) if slab.lo <= tv <= slab.hi]
    for (i, j) in combinations(range(len(verts)), 2):
        for level in (slab.lo, slab.hi):
            if math.isinf(level):
                continue
            if (t[i] - level) * (t[j] - level) < 0:
                w = (level - t[i]) / (t[j] - t[i])
                out.append(verts[i] + w * (verts[j] - verts[i]))
    return np.array(out)


@dataclass
class Cutting:
    cells: List[Cell]
    D: int
    r: int
    seed: int
    retries: int
    sample: Tuple[Tuple[int, ...], ...]
    class_sizes: Tuple[int, ...]
    thresholds: Tuple[float, ...]
    constant: float
    box: Tuple[Tuple[float, ...], Tuple[float, ...]]
    dropped_off_surface: int = 0
    max_triggers: int = 0

    def full_cells(self) -> List[Cell]:
        return [c for c in self.cells if c.dim_cell == self.D]

    def max_stoppers(self) -> Tuple[int, ...]:
        return tuple(max((c.stoppers[i].__len__() for c in self.cells), default=0)
                     for i in range(len(self.class_sizes)))

    def to_json_obj(self) -> dict:
        return {
            "lifted_dim": self.D,
            "r": self.r,
            "seed": self.seed,
            "retries": self.retries,
            "constant": self.constant,
            "class_sizes": list(self.class_sizes),
            "thresholds": [float(format(t, ".12g")) for t in self.thresholds],
            "sample": [[i + 1 for i in s] for s in self.sample],
            "box": [[float(format(v, ".12g")) for v in side] for side in self.box],
            "cells": [
                {"dim": c.dim_cell,
                 "vertices": [[format(float(v), ".12g") for v in row] for row in c.corners()],
                 "stopper_counts": list(c.stopper_counts()),
                 "triggers": [[ci + 1, si + 1] for ci, si in c.triggers],
                 "points": [p + 1 for p in c.points]}
                for c in self.cells
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def thresholds_for(class_sizes: Sequence[int], r: int, constant: float) -> Tuple[float, ...]:
    """Per-class crossing allowance ``c (n_i / r) log r``, or n_i when r = 1."""
    if r == 1:
        return tuple(float(n) for n in class_sizes)
    return tuple(constant * (n / r) * math.log(r) for n in class_sizes)


def _validate_sigmas(sigmas: Sequence[Sequence[Sphere]]) -> int:
    if not sigmas or not any(len(s) for s in sigmas):
        raise GeometryError("need at least one sphere")
    dims = {s.dim_ambient for cls in sigmas for s in cls}
    if len(dims) != 1:
        raise GeometryError(f"spheres of mixed dimensions: {sorted(dims)}")
    d = dims.pop()
    if d not in (2, 3):
        raise GeometryError("cuttings support spheres in R^2 and R^3 only")
    return d


def _lifted_arrays(sigmas) -> List[Tuple[np.ndarray, np.ndarray]]:
    return [_as_arrays([lift_sphere(s) for s in cls], _validate_sigmas(sigmas) + 1)
            if cls else (np.zeros((0, _validate_sigmas(sigmas) + 1)), np.zeros(0))
            for cls in sigmas]


def bounding_box(sigmas: Sequence[Sequence[Sphere]]) -> Tuple[Tuple[float, ...], Tuple[float, ...]]:
    """Box in lifted space; base coordinates span twice the input radius."""
    d = _validate_sigmas(sigmas)
    radius = max(max(abs(float(v)) for v in s.center.coords) + math.sqrt(float(s.radius_sq))
                 for cls in sigmas for s in cls)
    half = 2.0 * radius
    lo = tuple([-half] * d + [-1.0])
    hi = tuple([half] * d + [2.0 * d * half * half])
    return lo, hi


def _region_cells(planes_a: np.ndarray, planes_b: np.ndarray, lo, hi, tol: float):
    """Triangulated regions of the sampled planes inside the box.

    Returns vertex coordinates, per-vertex tight plane sets (sample planes
    first, then the 2D box planes) and the list of top simplices.
    """
    D = len(lo)
    s = len(planes_a)
    box_a = np.vstack([np.eye(D), np.eye(D)])
    box_b = np.concatenate([np.asarray(lo, float), np.asarray(hi, float)])
    all_a = np.vstack([planes_a.reshape(-1, D), box_a])
    all_b = np.concatenate([planes_b, box_b])
    scale = _scale(all_a, all_b)
    lim = tol * scale
    coords: Dict[int, np.ndarray] = {}
    tight: Dict[int, FrozenSet[int]] = {}
    for sub in combinations(range(len(all_a)), D):
        m = all_a[list(sub)]
        if abs(np.linalg.det(m)) <= 1e-12 * max(1.0, float(np.abs(m).max())) ** D:
            continue
        x = np.linalg.solve(m, all_b[list(sub)])
        if np.any(x < np.asarray(lo) - lim) or np.any(x > np.asarray(hi) + lim):
            continue
        vals = np.abs(all_a @ x - all_b)
        t = frozenset(int(i) for i in np.nonzero(vals <= lim * max(1.0, float(np.abs(x).max())))[0])
        if t != frozenset(sub):
            raise DegenerateError(f"planes {sorted(t)} meet in a common point")
        vid = len(coords)
        coords[vid] = x
        tight[vid] = t
    ids = sorted(coords)
    signs = np.zeros((len(ids), s), dtype=int)
    for vid in ids:
        if s:
            vals = planes_a @ coords[vid] - planes_b
            row = np.where(vals > 0, 1, -1)
            for p in tight[vid]:
                if p < s:
                    row[p] = 0
            signs[vid] = row
    regions = set()
    for vid in ids:
        zeros = [p for p in range(s) if signs[vid, p] == 0]
        for completion in product((-1, 1), repeat=len(zeros)):
            row = signs[vid].copy()
            row[zeros] = completion
            regions.add(tuple(int(v) for v in row))
    memo: Dict[FrozenSet[int], List[Tuple[int, ...]]] = {}
    simplices: List[Tuple[int, ...]] = []
    for reg in sorted(regions):
        sig = np.array(reg, dtype=int)
        ok = np.all((signs == 0) | (signs == sig), axis=1) if s else np.ones(len(ids), bool)
        members = [ids[i] for i in np.nonzero(ok)[0]]
        sub_coords = {v: coords[v] for v in members}
        sub_tight = {v: tight[v] for v in members}
        lattice = FaceLattice.build(sub_coords, sub_tight, D)
        if lattice.dims[lattice.top] != D:
            continue
        simplices.extend(fan_triangulate(lattice, coords, memo))
    return coords, tight, simplices


def _all_faces(simplices: Sequence[Tuple[int, ...]]) -> List[Tuple[int, ...]]:
    seen = set()
    out = []
    for s in simplices:
        key = tuple(sorted(s))
        for size in range(len(key), 0, -1):
            for f in combinations(key, size):
                if f not in seen:
                    seen.add(f)
                    out.append(f)
    return sorted(out, key=lambda f: (-len(f), f))


def _classify_groups(verts: np.ndarray, a: np.ndarray, b: np.ndarray, tol: float):
    """Vertex signs of every surface; returns (crosses, contains) boolean arrays."""
    if a.shape[0] == 0:
        empty = np.zeros((verts.shape[0], 0), dtype=bool)
        return empty, empty
    vals = np.einsum("cvd,sd->cvs", verts, a) - b
    pos = (vals > tol).any(axis=1)
    neg = (vals < -tol).any(axis=1)
    zero_all = (np.abs(vals) <= tol).all(axis=1)
    return pos & neg, zero_all


def _build_attempt(sigmas, r: int, rng: np.random.Generator, sample_size: int,
                   constant: float, tol: float, surface_filter: bool) -> Cutting:
    d = _validate_sigmas(sigmas)
    D = d + 1
    lifted = _lifted_arrays(sigmas)
    sizes = tuple(len(c) for c in sigmas)
    lo, hi = bounding_box(sigmas)
    sample = []
    for n_i in sizes:
        m = 0 if r == 1 else min(n_i, sample_size)
        sample.append(tuple(sorted(int(v) for v in rng.choice(n_i, size=m, replace=False))))
    owner: List[SurfaceId] = [(ci, si) for ci, idx in enumerate(sample) for si in idx]
    pa = np.array([lifted[ci][0][si] for ci, si in owner]).reshape(-1, D)
    pb = np.array([lifted[ci][1][si] for ci, si in owner])
    all_scale = max(_scale(a, b) for a, b in lifted if a.size) if any(a.size for a, _ in lifted) else 1.0
    box_scale = max(max(abs(v) for v in lo), max(abs(v) for v in hi))
    ctol = tol * max(all_scale, box_scale) * box_scale
    coords, tight, simplices = _region_cells(pa, pb, lo, hi, tol)
    faces = _all_faces(simplices)
    dropped = 0
    kept: List[Tuple[int, ...]] = []
    for f in faces:
        if surface_filter:
            pts = np.array([coords[v] for v in f])
            gap = pts[:, -1] - (pts[:, :-1] ** 2).sum(axis=1)
            if np.all(gap > ctol):
                dropped += 1
                continue
        kept.append(f)
    by_size: Dict[int, List[int]] = {}
    for n, f in enumerate(kept):
        by_size.setdefault(len(f), []).append(n)
    stoppers = [[()] * len(sizes) for _ in kept]
    contained = [[()] * len(sizes) for _ in kept]
    for size, members in by_size.items():
        verts = np.array([[coords[v] for v in kept[n]] for n in members])
        for ci, (a, b) in enumerate(lifted):
            cross, cont = _classify_groups(verts, a, b, ctol)
            for row, n in enumerate(members):
                stoppers[n][ci] = tuple(int(j) for j in np.nonzero(cross[row])[0])
                contained[n][ci] = tuple(int(j) for j in np.nonzero(cont[row])[0])
    cells = []
    max_trig = 0
    for n, f in enumerate(kept):
        planes = sorted({p for v in f for p in tight[v] if p < len(owner)})
        trig = tuple(owner[p] for p in planes)
        max_trig = max(max_trig, len(trig))
        cells.append(Cell(tuple(tuple(float(x) for x in coords[v]) for v in f), trig,
                          tuple(stoppers[n]), tuple(contained[n])))
    return Cutting(cells, D, r, 0, 0, tuple(sample), sizes,
                   thresholds_for(sizes, r, constant), constant, (lo, hi), dropped, max_trig)


def _worst_ratio(c: Cutting) -> float:
    worst = 0.0
    for cell in c.cells:
        for ci, st in enumerate(cell.stoppers):
            t = c.thresholds[ci]
            ratio = len(st) / t if t > 0 else (math.inf if st else 0.0)
            worst = max(worst, ratio)
    return worst


def sample_cutting(sigmas: Sequence[Sequence[Sphere]], r: int, seed: int = 0,
                   constant: float = 8.0, budget: int = 64,
                   sample_size: Optional[int] = None, tol: float = 1e-9,
                   surface_filter: bool = True) -> Cutting:
    """Random-sample cutting of k classes of spheres, retried until verified.

    Each class contributes ``sample_size`` surfaces (default r) to the
    sample. The lifted sample is cut inside the bounding box and
    triangulated, and every surface is classified against every simplex.
    An attempt succeeds when no cell is crossed by more than the class
    threshold; each new attempt draws from a fresh stream of the same seed.
    """
    if r < 1 or r > 16:
        raise GeometryError("r must lie in 1..16")
    _validate_sigmas(sigmas)
    if sum(len(c) for c in sigmas) > 200:
        raise GeometryError("at most 200 surfaces")
    size = r if sample_size is None else sample_size
    best: Optional[Cutting] = None
    best_ratio = math.inf
    failures = []
    for attempt in range(budget):
        rng = np.random.default_rng([seed, attempt])
        try:
            cut = _build_attempt(sigmas, r, rng, size, constant, tol, surface_filter)
        except DegenerateError as exc:
            failures.append(str(exc))
            continue
        cut.seed, cut.retries = seed, attempt
        ratio = _worst_ratio(cut)
        if ratio <= 1.0:
            return cut
        if ratio < best_ratio:
            best, best_ratio = cut, ratio
    raise CuttingError(f"no verified cutting within {budget} attempts "
                       f"(best crossing ratio {best_ratio:.3g})", best)


# ---------------------------------------------------------------- verification

@dataclass(frozen=True)
class CuttingReport:
    max_stoppers: Tuple[int, ...]
    thresholds: Tuple[float, ...]
    stopper_bound_ok: bool
    classification_mismatches: int
    trigger_stopper_overlaps: int
    coverage_failures: int
    disjointness_violations: int
    points_checked: int

    @property
    def passed(self) -> bool:
        return (self.stopper_bound_ok and self.classification_mismatches == 0
                and self.trigger_stopper_overlaps == 0 and self.coverage_failures == 0
                and self.disjointness_violations == 0)


def _barycentric_maps(cells: Sequence[Cell]) -> np.ndarray:
    """For full cells: matrices M with bary = M @ (x, 1)."""
    mats = []
    for c in cells:
        v = np.array(c.vertices)
        h = np.hstack([v, np.ones((len(v), 1))]).T
        mats.append(np.linalg.inv(h))
    return np.array(mats)


def _hits(cells: Sequence[Cell], maps: np.ndarray, pts: np.ndarray, tol: float):
    """Per point: number of cells containing it in the interior and in the closure."""
    homog = np.hstack([pts, np.ones((len(pts), 1))])
    inner = np.zeros(len(pts), dtype=int)
    closed = np.zeros(len(pts), dtype=int)
    for start in range(0, len(pts), 512):
        chunk = homog[start:start + 512]
        bary = np.einsum("cij,pj->cpi", maps, chunk)
        lo = bary.min(axis=2)
        inside_closed = lo >= -tol
        inside_open = lo > tol
        for ci, c in enumerate(cells):
            if c.slab is not None:
                keep = c.slab.holds(pts[start:start + 512])
                inside_closed[ci] &= keep
                inside_open[ci] &= keep
        inner[start:start + 512] = inside_open.sum(axis=0)
        closed[start:start + 512] = inside_closed.sum(axis=0)
    return inner, closed


def verify_cutting(c: Cutting, sigmas: Sequence[Sequence[Sphere]],
                   thresholds: Optional[Sequence[float]] = None,
                   n_points: int = 10_000, seed: int = 0, tol: float = 1e-9) -> CuttingReport:
    """Independent recount of a cutting.

    * stoppers: each lifted surface is re-evaluated at the cell vertices and
      classified with the open-cell rule; the result must match the stored
      sets and respect the thresholds
    * triggers and stoppers must be disjoint
    * coverage: random base points, lifted to the paraboloid, must each lie
      in exactly one full cell (within ``tol``)
    * disjointness: no full cell's centroid may lie inside another full cell,
      and no two cells may share a vertex set
    """
    lifted = _lifted_arrays(sigmas)
    th = c.thresholds if thresholds is None else tuple(
        float(t) for t in (thresholds if isinstance(thresholds, (list, tuple))
                           else [thresholds] * len(c.class_sizes)))
    if isinstance(thresholds, (int, float)):
        th = tuple([float(thresholds)] * len(c.class_sizes))
    scale = max(max(abs(v) for v in c.box[0]), max(abs(v) for v in c.box[1]))
    all_scale = max((_scale(a, b) for a, b in lifted if a.size), default=1.0)
    ctol = tol * max(all_scale, scale) * scale
    mismatches = 0
    overlaps = 0
    max_st = [0] * len(lifted)
    for cell in c.cells:
        verts = np.array(cell.vertices)
        for ci, (a, b) in enumerate(lifted):
            found = []
            for si in range(len(a)):
                vals = verts @ a[si] - b[si]
                signs = [0 if abs(v) <= ctol else (1 if v > 0 else -1) for v in vals]
                if classify_signs(signs, open_cell=True) is Relation.CROSSES:
                    found.append(si)
            if tuple(found) != tuple(cell.stoppers[ci]):
                mismatches += 1
            max_st[ci] = max(max_st[ci], len(found))
            overlaps += len(set(found) & {si for cj, si in cell.triggers if cj == ci})
    bound_ok = all(m <= t + 1e-12 for m, t in zip(max_st, th))
    full = c.full_cells()
    maps = _barycentric_maps(full) if full else np.zeros((0, c.D + 1, c.D + 1))
    rng = np.random.default_rng(seed)
    lo, hi = np.array(c.box[0]), np.array(c.box[1])
    base = rng.uniform(lo[:-1], hi[:-1], size=(n_points, c.D - 1))
    lifted_pts = np.hstack([base, (base ** 2).sum(axis=1, keepdims=True)])
    btol = 1e-9
    inner, closed = _hits(full, maps, lifted_pts, btol) if full else \
        (np.zeros(n_points, int), np.zeros(n_points, int))
    coverage_failures = int(np.sum(closed < 1))
    disjoint = int(np.sum(inner > 1))
    keys = [tuple(sorted(cell.vertices)) + (cell.slab,) for cell in c.cells]
    disjoint += len(keys) - len(set(keys))
    if full:
        cents = np.array([cell.corners().mean(axis=0) for cell in full])
        cin, _ = _hits(full, maps, cents, btol)
        disjoint += int(np.sum(cin > 1))
    return CuttingReport(tuple(max_st), tuple(th), bound_ok, mismatches, overlaps,
                         coverage_failures, disjoint, n_points)


# ---------------------------------------------------------------- balancing

def _locate_cells(c: Cutting, pts: np.ndarray, tol: float = 1e-9) -> List[Optional[int]]:
    """Index of the (relatively open) cell holding each lifted point."""
    out: List[Optional[int]] = [None] * len(pts)
    for ci, cell in enumerate(c.cells):
        v = np.array(cell.vertices)
        base = v[0]
        edges = (v[1:] - base).T
        for pi in range(len(pts)):
            if out[pi] is not None:
                continue
            if len(v) == 1:
                inside = np.allclose(pts[pi], base, atol=tol * 10)
            else:
                coef, *_ = np.linalg.lstsq(edges, pts[pi] - base, rcond=None)
                resid = np.linalg.norm(edges @ coef + base - pts[pi])
                bary = np.concatenate([[1 - coef.sum()], coef])
                inside = resid <= tol * 10 * max(1.0, float(np.abs(pts[pi]).max())) \
                    and bary.min() > tol
            if inside and (cell.slab is None or bool(cell.slab.holds(pts[pi:pi + 1])[0])):
                out[pi] = ci
    return out


def balance_points(c: Cutting, pts: PointSet, cap: int, seed: int = 0,
                   tol: float = 1e-9) -> Cutting:
    """Split overfull cells into slabs so each holds at most ``cap`` points.

    Points in the base space are lifted first. An overfull cell is cut by
    parallel hyperplanes ``u.x = t`` with thresholds between consecutive
    sorted projections along a generic direction u, giving
    ``ceil(count / cap)`` pieces. Pieces keep the parent's triggers and
    stoppers.
    """
    if cap < 1:
        raise GeometryError("cap must be at least 1")
    arr = pts.as_array()
    if pts.dim == c.D - 1:
        arr = np.hstack([arr, (arr ** 2).sum(axis=1, keepdims=True)])
    elif pts.dim != c.D:
        raise GeometryError(f"points must live in R^{c.D - 1} or R^{c.D}")
    where = _locate_cells(c, arr, tol)
    missing = [i for i, w in enumerate(where) if w is None]
    if missing:
        raise GeometryError(f"point {missing[0] + 1} lies outside the cutting")
    groups: Dict[int, List[int]] = {}
    for pi, ci in enumerate(where):
        groups.setdefault(ci, []).append(pi)
    rng = np.random.default_rng(seed)
    cells: List[Cell] = []
    for ci, cell in enumerate(c.cells):
        members = groups.get(ci, [])
        if len(members) <= cap:
            cells.append(replace(cell, points=tuple(members)))
            continue
        sub = arr[members]
        for _ in range(100):
            u = rng.normal(size=c.D)
            u /= np.linalg.norm(u)
            proj = sub @ u
            order = np.argsort(proj, kind="stable")
            gaps = np.diff(proj[order])
            if np.all(gaps > 1e-12):
                break
            # coincident projections: check for truly repeated points
            for a_, b_ in zip(order[:-1], order[1:]):
                if np.allclose(sub[a_], sub[b_], atol=tol):
                    same = int(np.sum(np.all(np.isclose(sub, sub[a_], atol=tol), axis=1)))
                    if same > cap:
                        raise GeometryError(
                            f"{same} points coincide at one location, more than cap {cap}")
        else:
            raise GeometryError("could not find a direction separating the points")
        pieces = math.ceil(len(members) / cap)
        ordered = [members[i] for i in order]
        cuts = [-math.inf]
        for p in range(1, pieces):
            left, right = proj[order[p * cap - 1]], proj[order[p * cap]]
            cuts.append(float((left + right) / 2))
        cuts.append(math.inf)
        for p in range(pieces):
            slab = Slab(tuple(float(v) for v in u), cuts[p], cuts[p + 1])
            chunk = tuple(sorted(ordered[p * cap:(p + 1) * cap]))
            cells.append(replace(cell, slab=slab, points=chunk))
    return replace(c, cells=cells)


# ---------------------------------------------------------------- io

def spheres_from_json_obj(obj: dict) -> List[List[Sphere]]:
    """``{"dim": d, "classes": [[{"center": [...], "radius_sq": "1"}, ...], ...]}``.

    A flat ``"spheres"`` list is read as a single class.
    """
    groups = obj.get("classes")
    if groups is None:
        groups = [obj.get("spheres", [])]
    out = []
    for group in groups:
        cls = []
        for s in group:
            center = Point(tuple(parse_number(v) for v in s["center"]))
            cls.append(Sphere(center, parse_number(s.get("radius_sq", 1))))
        out.append(cls)
    dim = obj.get("dim")
    if dim is not None and any(s.dim_ambient != int(dim) for c in out for s in c):
        raise GeometryError(f"sphere centers must have {dim} coordinates")
    return out


def spheres_to_json_obj(sigmas: Sequence[Sequence[Sphere]]) -> dict:
    return {"dim": _validate_sigmas(sigmas),
            "classes": [[{"center": [format_number(v) for v in s.center.coords],
                          "radius_sq": format_number(s.radius_sq)} for s in cls]
                        for cls in sigmas]}


def random_unit_circles(n: int, seed: int, spread: float = 2.0, dim: int = 2) -> List[Sphere]:
    """n unit spheres with centers uniform in ``[-spread, spread]^dim``."""
    rng = np.random.default_rng(seed)
    return [Sphere(Point(tuple(float(v) for v in rng.uniform(-spread, spread, dim))), 1.0)
            for _ in range(n)]
