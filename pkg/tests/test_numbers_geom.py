import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplexcount import exact
from simplexcount.geom import (GeometryError, Hyperplane, LiftedSimplex, Point, PointSet,
                               Relation, Sphere, classify, lift_point, lift_sphere,
                               squared_distance)
from simplexcount.numbers import format_number, format_rational, parse_number, sign


def test_parse_and_format_round_trip():
    assert parse_number("10/3") == F(10, 3)
    assert parse_number(2) == F(2)
    assert isinstance(parse_number("0.25"), float)
    assert format_rational(F(10, 3)) == "10/3"
    assert format_rational(F(4, 2)) == "2"
    assert format_number(1 / 3) == "0.333333333333"


def test_sign_is_exact_for_rationals():
    assert sign(F(1, 10**30)) == 1
    assert sign(1e-12) == 0


def test_exact_solve_and_rank():
    assert exact.solve([[2, 1], [1, 3]], [3, 5]) == [F(4, 5), F(7, 5)]
    assert exact.solve([[1, 2], [2, 4]], [1, 2]) is None
    assert exact.rank([[1, 2, 3], [2, 4, 6], [0, 1, 1]]) == 2


def test_squared_distance_examples():
    assert squared_distance(Point((0, 0)), Point((1, 0))) == 1
    assert squared_distance(Point((0, 0)), Point((0, 0))) == 0
    r = 1 / math.sqrt(2)
    assert abs(squared_distance(Point((r, 0, 0, 0)), Point((0, 0, r, 0))) - 1) <= 1e-9


def test_squared_distance_dimension_mismatch():
    with pytest.raises(GeometryError):
        squared_distance(Point((0, 0)), Point((0, 0, 0)))


def test_lift_sphere_examples():
    h = lift_sphere(Sphere(Point((0, 0)), 1))
    assert h.normal == (0, 0, 1) and h.offset == 1
    h = lift_sphere(Sphere(Point((1, 0)), 1))
    # z = 2x, i.e. -2x + 0y + z = 0
    assert h.normal == (-2, 0, 1) and h.offset == 0
    for p in [(0, 0), (2, 0), (1, 1)]:
        assert h.evaluate(lift_point(Point(p))) == 0
    h = lift_sphere(Sphere(Point((0, 0)), F(1, 2)))
    assert h.offset == F(1, 2)


def test_lifting_correctness_exact_random():
    rng = random.Random(7)
    for _ in range(1000):
        d = rng.choice([2, 3])
        c = Point(tuple(F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(d)))
        p = Point(tuple(F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(d)))
        # half the spheres pass through p exactly
        rho = squared_distance(p, c) if rng.random() < 0.5 else F(rng.randint(1, 9), 4)
        if rho == 0:
            continue
        s = Sphere(c, rho)
        on_sphere = squared_distance(p, s.center) == s.radius_sq
        on_plane = lift_sphere(s).evaluate(lift_point(p)) == 0
        assert on_sphere == on_plane


def _simplex_with_z(zs):
    verts = [(0, 0, zs[0]), (1, 0, zs[1]), (0, 1, zs[2])]
    return LiftedSimplex(tuple(verts))


def test_classify_examples():
    h = Hyperplane((0, 0, 1), 0)
    assert classify(h, _simplex_with_z([-1, 1, 2])) is Relation.CROSSES
    assert classify(h, _simplex_with_z([0, 0, 0])) is Relation.CONTAINS
    assert classify(h, _simplex_with_z([1, 2, 3])) is Relation.MISSES


def test_classify_touching_closed_versus_open():
    h = Hyperplane((0, 0, 1), 0)
    s = _simplex_with_z([0, 1, 2])
    assert classify(h, s) is Relation.CROSSES
    assert classify(h, s, open_cell=True) is Relation.MISSES


def test_degenerate_simplex_rejected():
    with pytest.raises(GeometryError):
        LiftedSimplex(((0, 0), (1, 1), (2, 2)))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3),
       st.integers(1, 5), st.permutations([0, 1, 2]))
def test_classify_scaling_and_permutation_invariance(zs, scale, perm):
    h = Hyperplane((0, 0, 1), 0)
    h2 = Hyperplane((0, 0, scale), 0)
    s = _simplex_with_z(zs)
    s2 = LiftedSimplex(tuple(s.vertices[i] for i in perm))
    rel = classify(h, s)
    assert classify(h2, s) is rel
    assert classify(h, s2) is rel
    assert rel in (Relation.CROSSES, Relation.CONTAINS, Relation.MISSES)


def test_pointset_json_and_duplicates():
    p = PointSet((Point((F(1, 2), 0)), Point((0.25, 1))), label="x")
    obj = p.to_json_obj()
    assert obj == {"dim": 2, "points": [["1/2", "0"], ["0.25", "1"]], "label": "x"}
    assert PointSet.from_json_obj(obj) == p
    with pytest.raises(GeometryError):
        PointSet((Point((0, 0)), Point((0, 0))))
    with pytest.raises(GeometryError):
        PointSet((Point((0, 0)), Point((0, 0, 0))))


def test_sphere_and_hyperplane_validation():
    with pytest.raises(GeometryError):
        Sphere(Point((0, 0)), 0)
    with pytest.raises(GeometryError):
        Hyperplane((0, 0), 1)
