import itertools
import json
import math
from dataclasses import replace

import numpy as np
import pytest

from simplexcount.cuttings import (Arrangement, ConvexPolytope, CuttingError, DegenerateError,
                                   balance_points, bottom_vertex_triangulation,
                                   build_arrangement, check_general_position,
                                   expected_face_counts, fan_triangulate, random_unit_circles,
                                   sample_cutting, simplex_volume, spheres_from_json_obj,
                                   spheres_to_json_obj, thresholds_for, verify_cutting)
from simplexcount.geom import GeometryError, Hyperplane, Point, PointSet, lift_sphere


def _random_planes(n, D, seed):
    rng = np.random.default_rng(seed)
    return [Hyperplane(tuple(rng.normal(size=D)), float(rng.normal())) for _ in range(n)]


def _brute_region_count(hs, D, seed=0, samples=200_000):
    # distinct sign vectors seen on a wide random sample; a lower bound on regions
    rng = np.random.default_rng(seed)
    a = np.array([h.normal for h in hs])
    b = np.array([h.offset for h in hs])
    pts = rng.normal(scale=30, size=(samples, D))
    signs = np.sign(pts @ a.T - b).astype(int)
    return len({tuple(row) for row in signs})


def test_face_counts_match_formula():
    for n, D in [(3, 2), (1, 3), (0, 3), (5, 3), (6, 4), (4, 2)]:
        arr = build_arrangement(_random_planes(n, D, n + D), D)
        assert arr.counts_by_dim() == expected_face_counts(n, D)


def test_region_count_against_sampling():
    hs = _random_planes(4, 2, 7)
    arr = build_arrangement(hs, 2)
    assert arr.counts_by_dim()[2] == 11
    assert _brute_region_count(hs, 2) <= 11


def test_expected_counts_examples():
    assert expected_face_counts(3, 2) == [3, 9, 7]
    assert sum(expected_face_counts(0, 3)) == 1


def test_degenerate_input_is_named():
    parallel = [Hyperplane((1.0, 0.0), 0.0), Hyperplane((1.0, 0.0), 1.0)]
    with pytest.raises(DegenerateError, match="1.*2"):
        build_arrangement(parallel, 2)
    concurrent = [Hyperplane((1.0, 0.0), 0.0), Hyperplane((0.0, 1.0), 0.0),
                  Hyperplane((1.0, 1.0), 0.0)]
    with pytest.raises(DegenerateError, match="1, 2, 3|1.*2.*3"):
        check_general_position(concurrent, 2)
    with pytest.raises(GeometryError):
        build_arrangement(_random_planes(2, 5, 0), 5)


def test_face_lattice_incidences():
    arr = build_arrangement(_random_planes(4, 3, 3), 3)
    for i, f in enumerate(arr.faces):
        for j in arr.facets_of(i):
            assert arr.faces[j].dim == f.dim - 1
            assert i in arr.cofacets_of(j)
        if f.dim == 1:
            # an edge of a simple arrangement has at most two vertices
            assert len(arr.facets_of(i)) <= 2


def test_point_location_covers_samples():
    arr = build_arrangement(_random_planes(5, 3, 11), 3)
    rng = np.random.default_rng(0)
    for x in rng.normal(scale=5, size=(500, 3)):
        i = arr.locate(x)
        assert i is not None and arr.faces[i].dim == 3


def test_pentagon_triangulation():
    ang = np.linspace(0, 2 * math.pi, 5, endpoint=False)
    poly = ConvexPolytope.from_vertices(np.c_[np.cos(ang), np.sin(ang)])
    tris = bottom_vertex_triangulation(poly)
    assert len(tris) == 3
    area = sum(simplex_volume(np.array(t.vertices)) for t in tris)
    x, y = np.cos(ang), np.sin(ang)
    shoelace = 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))
    assert area == pytest.approx(shoelace, abs=1e-12)


def test_triangle_and_cube():
    tri = ConvexPolytope.from_vertices([(0, 0), (1, 0), (0, 1)])
    assert len(bottom_vertex_triangulation(tri)) == 1
    cube = ConvexPolytope.box((0, 0, 0), (1, 1, 1))
    lat = cube.faces()
    assert len(lat) == 27
    simplices = fan_triangulate(lat, cube.coords)
    assert len(simplices) == 6
    assert cube.volume() == pytest.approx(1.0)


def test_arrangement_triangulation_tiles_box():
    arr = build_arrangement(_random_planes(3, 2, 5), 2)
    with pytest.raises(GeometryError, match="unbounded"):
        bottom_vertex_triangulation(arr)
    lo, hi = (-50.0, -50.0), (50.0, 50.0)
    tris = bottom_vertex_triangulation(arr, box=(lo, hi))
    total = sum(simplex_volume(np.array(t.vertices)) for t in tris)
    bounded = [i for i, f in enumerate(arr.faces) if f.dim == 2 and arr.is_bounded(i)]
    assert len(bounded) == 1
    assert total == pytest.approx(100.0 * 100.0, rel=1e-9)


def _two_classes(n, seed):
    return [random_unit_circles(n, seed), random_unit_circles(n, seed + 100)]


def test_sample_cutting_r1_passes_verification():
    sig = _two_classes(6, 1)
    cut = sample_cutting(sig, 1, seed=0)
    rep = verify_cutting(cut, sig, n_points=2000)
    assert rep.passed
    assert cut.thresholds == (6.0, 6.0)


def test_sample_cutting_verified_and_deterministic():
    sig = _two_classes(10, 2)
    a = sample_cutting(sig, 3, seed=4)
    b = sample_cutting(sig, 3, seed=4)
    assert a.to_json() == b.to_json()
    rep = verify_cutting(a, sig, n_points=3000)
    assert rep.passed
    assert rep.trigger_stopper_overlaps == 0
    assert a.max_triggers <= a.D * (a.D + 1)


def test_verify_detects_faults():
    sig = _two_classes(10, 3)
    cut = sample_cutting(sig, 3, seed=0)
    dup = replace(cut, cells=cut.cells + [cut.full_cells()[0]])
    assert verify_cutting(dup, sig, n_points=1000).disjointness_violations > 0
    assert not verify_cutting(cut, sig, thresholds=0, n_points=500).stopper_bound_ok
    big = max(cut.full_cells(), key=lambda c: simplex_volume(np.array(c.vertices)))
    missing = replace(cut, cells=[c for c in cut.cells if c is not big])
    assert verify_cutting(missing, sig, n_points=5000).coverage_failures > 0


def test_impossible_threshold_raises_with_best_attempt():
    sig = _two_classes(12, 4)
    with pytest.raises(CuttingError) as info:
        sample_cutting(sig, 4, constant=1e-6, budget=3)
    assert info.value.best is not None


def test_thresholds():
    assert thresholds_for((10, 20), 1, 8.0) == (10.0, 20.0)
    assert thresholds_for((10,), 4, 8.0)[0] == pytest.approx(8 * 2.5 * math.log(4))


def test_lifting_soundness_by_sampling():
    # a base point lies on a sphere exactly when its lift lies on the lifted plane
    rng = np.random.default_rng(5)
    for s in random_unit_circles(5, 9):
        h = lift_sphere(s)
        c = np.array(s.center.coords, dtype=float)
        for t in rng.uniform(0, 2 * math.pi, 50):
            p = c + np.array([math.cos(t), math.sin(t)])
            assert abs(h.evaluate(tuple(p) + (float(p @ p),))) <= 1e-9
        for p in rng.normal(scale=3, size=(50, 2)):
            inside = float(((p - c) ** 2).sum()) - float(s.radius_sq)
            assert np.sign(h.evaluate(tuple(p) + (float(p @ p),))) == np.sign(inside)


def test_cell_count_envelope():
    sig = _two_classes(15, 6)
    for r in (2, 4):
        cut = sample_cutting(sig, r, seed=1)
        planes = sum(len(s) for s in cut.sample)
        assert len(cut.full_cells()) <= 50 * max(planes, 1) ** 3


def test_balance_points():
    sig = _two_classes(8, 7)
    cut = sample_cutting(sig, 1, seed=0)
    rng = np.random.default_rng(0)
    pts = PointSet(tuple(Point(tuple(v)) for v in rng.uniform(-0.2, 0.2, size=(10, 2))))
    bal = balance_points(cut, pts, 3)
    held = sorted(p for c in bal.cells for p in c.points)
    assert held == list(range(10))
    assert max(len(c.points) for c in bal.cells) <= 3
    assert verify_cutting(bal, sig, n_points=2000).passed
    five = PointSet(pts.points[:5])
    assert max(len(c.points) for c in balance_points(cut, five, 1).cells) == 1
    noop = balance_points(cut, pts, 100)
    assert all(c.slab is None for c in noop.cells)
    with pytest.raises(GeometryError):
        balance_points(cut, pts, 0)


def test_json_round_trip_and_export():
    sig = [random_unit_circles(4, 1), random_unit_circles(3, 2)]
    back = spheres_from_json_obj(json.loads(json.dumps(spheres_to_json_obj(sig))))
    assert [len(c) for c in back] == [4, 3]
    assert back[0][0].center.coords == pytest.approx(sig[0][0].center.coords, abs=1e-11)
    cut = sample_cutting(sig, 2, seed=0)
    obj = json.loads(cut.to_json())
    assert obj["lifted_dim"] == 3 and obj["class_sizes"] == [4, 3]
    assert all(min(s) >= 1 for s in obj["sample"] if s)
    flat = spheres_from_json_obj({"spheres": [{"center": [0, 0]}]})
    assert len(flat) == 1 and flat[0][0].radius_sq == 1
    with pytest.raises(GeometryError):
        spheres_from_json_obj({"dim": 3, "spheres": [{"center": [0, 0]}]})
