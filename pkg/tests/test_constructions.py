import itertools
import json
import math

import numpy as np
import pytest

from simplexcount.constructions import (ConstructionError, LenzSpec, lenz, lenz_pattern,
                                        random_isometry, regular_simplex)
from simplexcount.counting import count_unit_tuples
from simplexcount.geom import squared_distance_matrix
from simplexcount.graphs import SmallGraph


def test_lenz_cross_circle_pairs_are_unit():
    res = lenz(LenzSpec(6, 12))
    d2 = squared_distance_matrix(res.points)
    for a, b in itertools.combinations(range(12), 2):
        if res.circle_of[a] != res.circle_of[b]:
            assert abs(d2[a, b] - 1) <= 1e-12
    assert sorted(res.circle_of) == [0] * 4 + [1] * 4 + [2] * 4


def test_lenz_points_sit_on_radius_half_circles():
    res = lenz(LenzSpec(8, 10, seed=3))
    arr = res.points.as_array()
    assert np.allclose((arr ** 2).sum(axis=1), 0.5)
    assert len(res.points) == 10


def test_lenz_diameter_between_one_and_root_two():
    d2 = squared_distance_matrix(lenz(LenzSpec(4, 20)).points)
    assert 1 < d2.max() < 2


def test_lenz_unit_pair_count():
    res = lenz(LenzSpec(4, 12))
    c = count_unit_tuples(res.points, 2)
    # 36 cross-circle pairs and three quarter-turn pairs on each circle
    assert c.unordered == 42


def test_lenz_clique_mode():
    res = lenz(LenzSpec(6, 6, "clique"))
    assert count_unit_tuples(res.points, 6).unordered == 1
    with pytest.raises(ConstructionError):
        LenzSpec(6, 7, "clique")
    with pytest.raises(ConstructionError):
        LenzSpec(7, 5, "clique")


def test_lenz_odd_dimension_pads_a_zero():
    res = lenz(LenzSpec(7, 6))
    assert res.points.dim == 7
    assert np.all(res.points.as_array()[:, 6] == 0)


def test_lenz_spec_validation():
    with pytest.raises(ConstructionError):
        LenzSpec(3, 5)
    with pytest.raises(ConstructionError):
        LenzSpec(6, 2)
    with pytest.raises(ConstructionError):
        LenzSpec(6, 6, "dense")


def test_sidecar_is_one_indexed_json():
    obj = json.loads(lenz(LenzSpec(4, 5)).sidecar_json())
    assert obj["d"] == 4 and obj["circles"] == 2
    assert sorted(set(obj["circle_of"])) == [1, 2]
    assert len(obj["angles"]) == 5


def test_lenz_pattern_path():
    g = SmallGraph.path(3)
    fam = lenz_pattern(g, (0, 1, 0), 3, 4)
    a, b, c = fam.classes
    assert count_unit_tuples([a, b]).ordered == 9
    assert count_unit_tuples([b, c]).ordered == 9
    assert count_unit_tuples([a, b, c]).ordered >= 0


def test_lenz_pattern_rejects_bad_assignments():
    with pytest.raises(ConstructionError, match="vertices 1 and 2"):
        lenz_pattern(SmallGraph.path(2), (0, 0), 2, 4)
    # a triangle needs three orthogonal planes, which R^4 lacks
    with pytest.raises(ConstructionError):
        lenz_pattern(SmallGraph.complete(3), (0, 1, 2), 2, 4)
    with pytest.raises(ConstructionError):
        lenz_pattern(SmallGraph.path(2), (0,), 2, 4)


def test_regular_simplex():
    for d in range(1, 8):
        s = regular_simplex(d)
        assert len(s) == d + 1
        d2 = squared_distance_matrix(s)
        off = d2[~np.eye(d + 1, dtype=bool)]
        assert np.allclose(off, 1)
    assert count_unit_tuples(regular_simplex(4), 4).unordered == 5
    assert np.allclose(squared_distance_matrix(regular_simplex(3, 2.0))[0, 1], 4)
    with pytest.raises(ConstructionError):
        regular_simplex(0)


def test_random_isometry_preserves_distances():
    rng = np.random.default_rng(0)
    p = lenz(LenzSpec(6, 9)).points
    q = random_isometry(p, rng)
    assert np.allclose(squared_distance_matrix(p), squared_distance_matrix(q))
    assert not np.allclose(p.as_array(), q.as_array())
    assert math.isclose(len(q), len(p))
