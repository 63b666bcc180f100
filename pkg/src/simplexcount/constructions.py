"""Extremal point configurations: Lenz sets, pattern sets, regular simplices.

A Lenz set in R^d uses t = floor(d/2) circles of radius 1/sqrt(2) in the
coordinate planes (e1,e2), (e3,e4), ... . Points on different circles have
orthogonal supports, so their squared distance is 1/2 + 1/2 = 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .geom import Point, PointSet
from .graphs import SmallGraph

RADIUS = 1 / math.sqrt(2)

#: Generic angular step between successive unit pairs on one circle.
DELTA = 1 / 97


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class LenzSpec:
    d: int
    n: int
    mode: str = "rich"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.mode not in ("rich", "clique"):
            raise ConstructionError(f"unknown Lenz mode {self.mode!r}")
        if self.d < 4:
            raise ConstructionError("Lenz sets need d >= 4")
        t = self.d // 2
        if self.n < t:
            raise ConstructionError(f"need n >= t = {t} points (one per circle)")
        if self.mode == "clique":
            if self.d % 2:
                raise ConstructionError("clique mode needs even d")
            if self.n > 2 * t:
                raise ConstructionError(f"clique mode holds at most 2t = {2 * t} points")

    @property
    def circles(self) -> int:
        return self.d // 2


@dataclass(frozen=True)
class LenzResult:
    points: PointSet
    circle_of: Tuple[int, ...]
    angles: Tuple[float, ...]
    params: Dict[str, object] = field(default_factory=dict)

    def sidecar_json(self) -> str:
        return json.dumps({
            **self.params,
            "circle_of": [c + 1 for c in self.circle_of],
            "angles": [repr(a) for a in self.angles],
        })


def circle_point(d: int, plane: int, angle: float) -> Point:
    """Point on the radius-1/sqrt(2) circle in coordinate plane ``plane``."""
    coords = [0.0] * d
    coords[2 * plane] = RADIUS * math.cos(angle)
    coords[2 * plane + 1] = RADIUS * math.sin(angle)
    return Point(tuple(coords))


def unit_pair_angles(count: int, offset: float) -> List[float]:
    """``count`` angles grouped in pairs ``(a, a + pi/2)`` with ``a = offset + j*DELTA``.

    Two points a quarter turn apart on the circle are at chord length 1.
    """
    out = []
    j = 0
    while len(out) < count:
        base = offset + j * DELTA
        out.append(base)
        if len(out) < count:
            out.append(base + math.pi / 2)
        j += 1
    return out


def lenz(spec: LenzSpec) -> LenzResult:
    """Points spread over the orthogonal circles.

    Rich mode splits n as evenly as possible over the t circles. Clique mode
    puts a unit pair on the first n - t circles and one point on the rest.
    Odd d reuses the construction in d - 1 coordinates, padding a zero.
    """
    t = spec.circles
    if spec.mode == "rich":
        counts = [spec.n // t + (1 if c < spec.n % t else 0) for c in range(t)]
    else:
        pairs = spec.n - t
        counts = [2 if c < pairs else 1 for c in range(t)]
    pts, circle_of, angles = [], [], []
    for c, cnt in enumerate(counts):
        offset = c * DELTA / 3 + spec.seed * DELTA / 7
        for a in unit_pair_angles(cnt, offset):
            pts.append(circle_point(spec.d, c, a))
            circle_of.append(c)
            angles.append(a)
    label = f"lenz d={spec.d} n={spec.n} mode={spec.mode}"
    params = {"d": spec.d, "n": spec.n, "mode": spec.mode, "seed": spec.seed,
              "circles": t, "radius_sq": "1/2", "delta": "1/97",
              "coordinates_used": 2 * t}
    return LenzResult(PointSet(tuple(pts), label=label), tuple(circle_of),
                      tuple(angles), params)


@dataclass(frozen=True)
class PatternFamily:
    classes: Tuple[PointSet, ...]
    planes: Tuple[int, ...]


def lenz_pattern(g: SmallGraph, assignment: Sequence[int], points_per_vertex: int,
                 d: int) -> PatternFamily:
    """One class per pattern vertex, on a circle in its assigned coordinate plane.

    ``assignment[v]`` is a 0-based coordinate-plane index. Adjacent vertices
    must get different (hence orthogonal) planes. Classes that share a plane
    use interleaved angles so that no two points coincide.
    """
    if len(assignment) != g.k:
        raise ConstructionError("assignment must give a plane for every pattern vertex")
    if points_per_vertex < 1:
        raise ConstructionError("need at least one point per vertex")
    for i, j in g.sorted_edges():
        if assignment[i] == assignment[j]:
            raise ConstructionError(
                f"vertices {i + 1} and {j + 1} are adjacent but share plane "
                f"{assignment[i] + 1}, so their supports are not orthogonal")
    used = sorted(set(assignment))
    if 2 * len(used) > d or max(used, default=0) >= d // 2:
        raise ConstructionError(
            f"{len(used)} orthogonal planes (max index {max(used) + 1}) do not fit in R^{d}")
    share: Dict[int, int] = {}
    classes = []
    for v in range(g.k):
        plane = assignment[v]
        slot = share.get(plane, 0)
        share[plane] = slot + 1
        offset = slot * 0.5 + plane * DELTA / 3
        angles = unit_pair_angles(points_per_vertex, offset)
        pts = tuple(circle_point(d, plane, a) for a in angles)
        classes.append(PointSet(pts, label=f"class {v + 1} plane {plane + 1}"))
    return PatternFamily(tuple(classes), tuple(assignment))


def regular_simplex(d: int, scale: float = 1.0) -> PointSet:
    """d + 1 points in R^d with every pairwise distance equal to ``scale``.

    Vertices ``(s/sqrt2) e_i`` and ``(s/sqrt2) c (1, ..., 1)`` with
    ``c = (1 - sqrt(d+1)) / d``.
    """
    if d < 1:
        raise ConstructionError("d must be at least 1")
    s = scale / math.sqrt(2)
    rows = [tuple(s if j == i else 0.0 for j in range(d)) for i in range(d)]
    c = (1 - math.sqrt(d + 1)) / d
    rows.append(tuple(s * c for _ in range(d)))
    return PointSet(tuple(Point(r) for r in rows), label=f"regular simplex d={d}")


def random_isometry(points: PointSet, rng: np.random.Generator) -> PointSet:
    """Image under a random orthogonal map followed by a translation."""
    d = points.dim
    q, r = np.linalg.qr(rng.normal(size=(d, d)))
    q = q * np.sign(np.diag(r))
    shift = rng.normal(size=d)
    arr = points.as_array() @ q.T + shift
    return PointSet(tuple(Point(tuple(float(v) for v in row)) for row in arr),
                    label=points.label)
