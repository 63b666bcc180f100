import itertools
import math

import numpy as np
import pytest

from simplexcount.constructions import LenzSpec, lenz, random_isometry, regular_simplex
from simplexcount.counting import (CountingError, PatternSpec, count_pattern,
                                   count_unit_tuples, rich_points, unit_degrees)
from simplexcount.geom import GeometryError, Point, PointSet


def _ps(rows, dim=None):
    return PointSet(tuple(Point(tuple(r)) for r in rows), dim_hint=dim or len(rows[0]))


def _brute_unit(p, k, tol=1e-9):
    arr = p.as_array()
    total = 0
    for tup in itertools.permutations(range(len(p)), k):
        if all(abs(((arr[a] - arr[b]) ** 2).sum() - 1) <= tol
               for a, b in itertools.combinations(tup, 2)):
            total += 1
    return total


def test_tetrahedron():
    c = count_unit_tuples(regular_simplex(3), 4)
    assert (c.ordered, c.unordered) == (24, 1)


def test_lenz_pairs():
    c = count_unit_tuples(lenz(LenzSpec(4, 12)).points, 2)
    assert c.unordered == 42
    res = lenz(LenzSpec(4, 12))
    a = PointSet(tuple(p for p, c in zip(res.points, res.circle_of) if c == 0))
    b = PointSet(tuple(p for p, c in zip(res.points, res.circle_of) if c == 1))
    c = count_unit_tuples([a, b])
    assert c.ordered == 36 and c.unordered is None


def test_against_permutation_brute_force():
    rng = np.random.default_rng(1)
    for _ in range(20):
        pts = lenz(LenzSpec(4, int(rng.integers(4, 9)), seed=int(rng.integers(5)))).points
        for k in (2, 3):
            assert count_unit_tuples(pts, k).ordered == _brute_unit(pts, k)


def test_unit_square_pattern():
    square = _ps([(0, 0), (1, 0), (1, 1), (0, 1)])
    spec = PatternSpec.from_points(square)
    assert count_pattern(square, spec).ordered == 8
    assert float(spec.to_json_obj()["distances"][0][2]) == pytest.approx(math.sqrt(2))
    assert count_pattern(square, PatternSpec.from_json_obj(spec.to_json_obj())).ordered == 8


def test_tetrahedron_full_pattern():
    t = regular_simplex(3)
    assert count_pattern(t, PatternSpec.from_points(t)).ordered == 24
    c = count_pattern(t, PatternSpec.unit_simplex(4))
    assert (c.ordered, c.unordered) == (24, 1)


def test_path_pattern_is_sum_of_degree_pairs():
    pts = lenz(LenzSpec(4, 7)).points
    spec = PatternSpec(3, ((None, 1, None), (1, None, 1), (None, 1, None)))
    deg = unit_degrees(pts)
    assert count_pattern(pts, spec).ordered == sum(v * (v - 1) for v in deg)


def test_pattern_matches_unit_count():
    pts = lenz(LenzSpec(6, 9)).points
    for k in (2, 3, 4):
        assert count_pattern(pts, PatternSpec.unit_simplex(k)) == count_unit_tuples(pts, k)


def test_pattern_spec_validation():
    with pytest.raises(CountingError):
        PatternSpec(2, ((None, 1), (2, None)))
    with pytest.raises(CountingError):
        PatternSpec(2, ((1, 1), (1, None)))
    with pytest.raises(CountingError):
        PatternSpec(2, ((None, 1),))
    with pytest.raises(CountingError):
        count_pattern(regular_simplex(9), PatternSpec.unit_simplex(9))
    spec = PatternSpec(2, ((None, 0.5), (0.5, None)))
    assert PatternSpec.from_json_obj(spec.to_json_obj()) == spec


def test_rich_points():
    circle = PointSet(tuple(Point((math.cos(t), math.sin(t)))
                            for t in np.linspace(0, 2 * math.pi, 5, endpoint=False)))
    origin = _ps([(0, 0), (3, 3)])
    assert [p.coords for p in rich_points(circle, origin, 5)] == [(0, 0)]
    assert len(rich_points(circle, origin, 6)) == 0
    res = lenz(LenzSpec(4, 12))
    assert len(rich_points(res.points, res.points, 6)) == 12
    with pytest.raises(GeometryError):
        rich_points(circle, regular_simplex(3), 1)


def test_isometry_invariance():
    rng = np.random.default_rng(2)
    pts = lenz(LenzSpec(6, 10)).points
    moved = random_isometry(pts, rng)
    for k in (2, 3):
        assert count_unit_tuples(moved, k, tol=1e-8) == count_unit_tuples(pts, k, tol=1e-8)


def test_class_order_symmetry():
    res = lenz(LenzSpec(6, 9))
    groups = [PointSet(tuple(p for p, c in zip(res.points, res.circle_of) if c == i))
              for i in range(3)]
    want = count_unit_tuples(groups).ordered
    for perm in itertools.permutations(groups):
        assert count_unit_tuples(list(perm)).ordered == want == 27


def test_adding_points_never_lowers_counts():
    full = lenz(LenzSpec(6, 12)).points
    prev = 0
    for n in range(1, 13):
        c = count_unit_tuples(PointSet(full.points[:n]), 3).ordered
        assert c >= prev
        prev = c


def test_tolerance_stability():
    pts = lenz(LenzSpec(8, 16)).points
    vals = {count_unit_tuples(pts, 3, tol=t).ordered for t in (1e-12, 1e-10, 1e-9, 1e-7)}
    assert len(vals) == 1


def test_errors():
    with pytest.raises(CountingError):
        count_unit_tuples(regular_simplex(2))
    with pytest.raises(CountingError):
        count_unit_tuples([regular_simplex(2)], k=2)
    with pytest.raises(GeometryError):
        count_unit_tuples([regular_simplex(2), regular_simplex(3)])
