import itertools
import json

from simplexcount.graphs import SmallGraph, all_graphs, supergraphs
from simplexcount.realizability import admissible, maximal_profiles, necessary_conditions


def test_condition_examples():
    rep = necessary_conditions(SmallGraph.complete(2), (3, 3), 6)
    assert not rep.admissible
    assert [c.name for c in rep.failed()] == ["clique"]
    assert admissible(SmallGraph.complete(3), (2, 2, 2), 9)
    rep = necessary_conditions(SmallGraph.cycle(5), (2,) * 5, 7)
    assert [c.name for c in rep.failed()] == ["odd-cycle"]
    assert rep.failed()[0].witness == (0, 1, 2, 3, 4)


def test_degree_condition_forces_zero_count():
    star = SmallGraph(4, frozenset({(0, 1), (0, 2), (0, 3)}))
    rep = necessary_conditions(star, (3, 1, 1, 1), 5)
    assert rep.count_zero
    assert rep.failed()[-1].name == "degree" and rep.failed()[-1].witness == (0,)
    assert not necessary_conditions(star, (2, 1, 1, 1), 5).count_zero


def test_independence_two_condition():
    # two disjoint edges on four vertices: alpha = 2 on the whole set
    g = SmallGraph(4, frozenset({(0, 1), (2, 3)}))
    rep = necessary_conditions(g, (2, 2, 2, 2), 6)
    assert "independence-2" not in [c.name for c in rep.failed()]
    rep = necessary_conditions(g, (3, 3, 2, 2), 6)
    assert "independence-2" in [c.name for c in rep.failed()]
    assert rep.failed()[1].witness == (0, 1, 2, 3)


def test_json_report_is_one_indexed():
    obj = json.loads(necessary_conditions(SmallGraph.cycle(5), (2,) * 5, 7).to_json())
    bad = [c for c in obj["conditions"] if not c["passed"]]
    assert bad[0]["witness"] == [1, 2, 3, 4, 5]
    assert obj["admissible"] is False


def test_maximal_profile_examples():
    assert maximal_profiles(SmallGraph.empty(3), 5) == [(5, 5, 5)]
    assert maximal_profiles(SmallGraph.complete(2), 6) == [(2, 2)]
    assert maximal_profiles(SmallGraph.complete(3), 9) == [(2, 2, 2)]
    assert maximal_profiles(SmallGraph.complete(3), 8) == []


def _brute_maximal(g, d, floor):
    ok = {lam for lam in itertools.product(range(floor, d + 1), repeat=g.k)
          if admissible(g, lam, d)}
    return sorted(lam for lam in ok if not any(
        lam[:i] + (lam[i] + 1,) + lam[i + 1:] in ok for i in range(g.k)))


def test_maximal_profiles_against_brute_force():
    for k in range(1, 5):
        for g in all_graphs(k):
            for d in range(2, 8):
                for floor in (1, 2):
                    assert sorted(maximal_profiles(g, d, floor)) == _brute_maximal(g, d, floor)


def test_admissible_set_is_down_closed():
    for g in all_graphs(4):
        for d in (4, 6):
            for lam in itertools.product(range(1, d + 1), repeat=4):
                if admissible(g, lam, d):
                    for i in range(4):
                        if lam[i] > 1:
                            assert admissible(g, lam[:i] + (lam[i] - 1,) + lam[i + 1:], d)


def test_more_edges_never_admit_more():
    for g in all_graphs(4):
        for h in supergraphs(g):
            for lam in itertools.product(range(1, 6), repeat=4):
                if admissible(h, lam, 6):
                    assert admissible(g, lam, 6)
