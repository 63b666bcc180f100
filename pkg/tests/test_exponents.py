import csv
import io
import json
from fractions import Fraction as F

import pytest

from simplexcount.exponents import (BoundTable, Entry, ExponentError, Override,
                                    check_edge_monotone, compute_bound, degree_two_override,
                                    edge_present_override, ktt_exponent, load_overrides,
                                    solve_recurrence, zeta_max)
from simplexcount.graphs import SmallGraph, all_graphs


def test_zeta_max_examples():
    z = zeta_max(SmallGraph.complete(4), 4, 7)
    assert z.value == 3 and z.provenance == "base-complete-graph"
    z = zeta_max(SmallGraph.empty(4), 4, 7)
    assert z.value == F(14, 5) and z.profile == (7, 7, 7, 7)
    assert zeta_max(SmallGraph.empty(3), 3, 5, "diameter").value == F(9, 5)
    with pytest.raises(ExponentError):
        zeta_max(SmallGraph.empty(3), 4, 5)


def test_zeta_max_empty_when_nothing_admissible():
    # a triangle in R^4 leaves no room for entries of 2
    g = SmallGraph(4, frozenset({(0, 1), (0, 2), (1, 2)}))
    z = zeta_max(g, 4, 4, floor=2)
    assert z.empty and z.value == 0


def test_bound_examples():
    assert compute_bound(2, 4).value == 2
    assert compute_bound(2, 2).value == F(4, 3)
    assert compute_bound(3, 3).value == F(9, 5)


def test_headline_values_without_overrides():
    r = compute_bound(4, 7, "unit")
    assert r.value == F(10, 3)
    assert r.headline_entry.provenance == "lp"
    assert compute_bound(3, 5, "diam").value == 2


def test_headline_values_with_overrides():
    r = compute_bound(4, 7, "unit", [degree_two_override(), edge_present_override()])
    assert r.value == F(10, 3)
    r = compute_bound(3, 5, "diameter", [degree_two_override(), edge_present_override()])
    assert r.value == 2
    assert r.headline_entry.provenance in ("lp", "injected-override")


def test_recursive_rule_overshoots():
    assert compute_bound(4, 7, low_profile="recursive").value == 4
    assert compute_bound(3, 5, "diameter", low_profile="recursive").value == 3


def test_edge_monotone_and_headline_dominates():
    for k in range(1, 5):
        for d in range(max(2, k - 1), 9):
            r = compute_bound(k, d)
            assert check_edge_monotone(r) == []
            assert all(e.exponent <= r.value for e in r.table.rows(k, d, "unit"))


def test_bound_monotone_in_d():
    for mode in ("unit", "diameter"):
        for k in range(1, 5):
            vals = [compute_bound(k, d, mode).value for d in range(max(2, k - 1), 9)]
            assert vals == sorted(vals)


def test_csv_columns_and_values():
    text = compute_bound(2, 4).to_csv()
    rows = list(csv.DictReader(io.StringIO(text)))
    assert list(rows[0]) == ["graph_key", "edges", "mode", "exponent", "provenance"]
    assert {r["edges"] for r in rows} == {"", "1-2"}
    assert all(r["exponent"] == "2" for r in rows)


def test_table_is_write_once():
    t = BoundTable()
    g = SmallGraph.empty(2)
    t.put(Entry(g, 2, 4, "unit", F(2), "lp"))
    t.put(Entry(g, 2, 4, "unit", F(2), "lp"))
    with pytest.raises(ExponentError):
        t.put(Entry(g, 2, 4, "unit", F(3), "lp"))


def test_argument_validation():
    with pytest.raises(ExponentError):
        compute_bound(5, 3)
    with pytest.raises(ExponentError):
        compute_bound(2, 4, "sphere")
    with pytest.raises(ExponentError):
        compute_bound(2, 4, low_profile="other")


def test_override_json():
    text = json.dumps({"overrides": [
        {"when": {"k": 2, "d": 4, "min_edges": 1}, "exponent": "7/4", "citation": "made up",
         "mode": "unit"}]})
    ovs = load_overrides(text)
    k2 = SmallGraph.complete(2)
    assert ovs[0].applies(k2, 2, 4, "unit")
    assert not ovs[0].applies(SmallGraph.empty(2), 2, 4, "unit")
    assert not ovs[0].applies(k2, 2, 4, "diameter")
    r = compute_bound(2, 4, overrides=ovs)
    assert r.table.get(k2, 4, "unit").provenance == "injected-override"
    with pytest.raises(ExponentError):
        Override.from_json_obj({"when": {"colour": 1}, "exponent": "1"})


def test_solve_recurrence():
    assert solve_recurrence(1, 1, 1) == 1
    assert solve_recurrence(2, 3, 1) == 1
    assert solve_recurrence(2, 3, 1, symmetric=False) == F(2, 3)
    with pytest.raises(ExponentError):
        solve_recurrence(0, 1, 1)


def test_ktt_values():
    assert [ktt_exponent(d).value for d in (2, 3, 4)] == [F(4, 3), F(5, 3), 2]
    assert ktt_exponent(2).maximizers == (F(1, 3),)
    assert ktt_exponent(4).maximizers == (F(3, 5),)
    with pytest.raises(ExponentError):
        ktt_exponent(1)


def test_ktt_against_dense_grid():
    prev = F(1)
    for d in range(2, 9):
        def obj(a):
            return min(max(d - (d + 1) * a, 1 - a), F(1)) + a * prev
        grid = {F(p, q) for q in range(1, 61) for p in range(q + 1)}
        best = max(obj(a) for a in grid)
        res = ktt_exponent(d)
        assert best == res.value == F(d + 2, 3)
        prev = res.value
