import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from posetflow.errors import ConservationViolated, EdgeMismatch, NoSourceOrSink, NotBipartite, TooLargeForOracle
from posetflow.families import boolean_lattice
from posetflow.flownet import (
    FlowAssignment,
    Network,
    brute_force_min_vertex_cut,
    classify_flow,
    flow_to_list,
    hasse_network,
    is_normalized_flow,
    load_network,
    max_flow,
    min_flow,
    net_flow,
    network_from_dict,
    network_to_dict,
    nmc_bruteforce,
    normalized_flow,
    solve_normalized_flow,
    zero_flow,
)
from posetflow.poset import brute_force_width, build_poset, chain
from posetflow.selftest import random_bipartite, random_dag_network, random_graded_poset

seeds = st.integers(0, 2**32 - 1)


def edge(caps=(1, 1)):
    return Network.build(caps, [(0, 1)])


def path3(caps):
    return Network.build(caps, [(0, 1), (1, 2)])


def test_network_roles():
    N = Network.build([1, 1, 1, 1], [(0, 1), (1, 2)])
    assert N.sources == {0, 3} and N.sinks == {2, 3} and N.intermediates == {1}
    assert N.isolated == {3}


def test_classify_examples():
    N = path3([1, 2, 1])
    assert classify_flow(N, zero_flow(N)).kind == "underflow"
    E = edge()
    assert classify_flow(E, FlowAssignment({(0, 1): Fraction(1)})).kind == "both"
    bad = FlowAssignment({(0, 1): Fraction(2), (1, 2): Fraction(1)})
    c = classify_flow(path3([5, 5, 5]), bad)
    assert c.kind == "neither" and c.conservation
    over = FlowAssignment({(0, 1): Fraction(3), (1, 2): Fraction(3)})
    assert classify_flow(path3([1, 2, 1]), over).kind == "overflow"
    with pytest.raises(EdgeMismatch):
        classify_flow(N, FlowAssignment({}))


def test_net_flow_examples():
    N = path3([1, 1, 1])
    assert net_flow(N, zero_flow(N)) == 0
    assert net_flow(edge(), FlowAssignment({(0, 1): Fraction(1)})) == 1
    diamond = Network.build([2, 1, 1, 2], [(0, 1), (0, 2), (1, 3), (2, 3)])
    f = FlowAssignment({e: Fraction(1) for e in diamond.edges})
    assert net_flow(diamond, f) == 2
    with pytest.raises(ConservationViolated):
        net_flow(path3([5, 5, 5]), FlowAssignment({(0, 1): Fraction(2), (1, 2): Fraction(1)}))


def test_max_flow_examples():
    r = max_flow(edge())
    assert r.value == 1 and r.cut == {0}
    r = max_flow(path3([10, 5, 10]))
    assert r.value == 5 and r.cut == {1}
    # every source-sink path of B_2 passes through the bottom element of capacity 1
    B2 = hasse_network(boolean_lattice(2))
    r = max_flow(B2)
    assert r.value == 1 == brute_force_min_vertex_cut(B2)[0]
    assert classify_flow(B2, r.flow).kind in ("underflow", "both")
    with pytest.raises(NoSourceOrSink):
        max_flow(Network.build([], []))


def test_min_flow_examples():
    r = min_flow(hasse_network(chain(3)))
    assert r.value == 1 and len(r.antichain) == 1
    B2 = hasse_network(boolean_lattice(2))
    r = min_flow(B2)
    assert r.value == 2 and r.antichain == {1, 2}
    # consecutive ranks k=2,3 of the two-chain collapse for n=3
    fig4 = Network.build([9, 2, 3, 3], [(0, 2), (1, 3), (0, 3)])
    r = min_flow(fig4)
    assert r.value == 11
    assert brute_force_width(build_poset(fig4.labels, fig4.edges, fig4.capacities)).total_weight == 11
    assert classify_flow(fig4, r.flow).kind in ("overflow", "both")
    assert net_flow(fig4, r.flow) == 11


def test_isolated_vertex_flows():
    N = Network.build([3, 1, 1], [(1, 2)])
    r = min_flow(N)
    assert r.value == 4 and 0 in r.antichain and N.is_antichain(r.antichain)[0]
    assert net_flow(N, r.flow) == 4
    assert classify_flow(N, r.flow).kind in ("overflow", "both")
    m = max_flow(N)
    assert m.value == 4 and net_flow(N, m.flow) == 4


def test_normalized_flow_examples():
    left, right = {0: 2, 1: 3}, {2: 1, 3: 4, 4: 5}
    edges = [(x, y) for x in left for y in right]
    assert is_normalized_flow(left, right, normalized_flow(left, right, edges))
    product_flow = FlowAssignment({(x, y): Fraction(left[x] * right[y], 5 * 10) for x, y in edges})
    assert is_normalized_flow(left, right, product_flow)
    f = normalized_flow({0: 1}, {1: 1, 2: 1}, [(0, 1), (0, 2)])
    assert f.values == {(0, 1): Fraction(1, 2), (0, 2): Fraction(1, 2)}
    res = solve_normalized_flow({0: 1, 1: 2}, {2: 2, 3: 1}, [(0, 2), (1, 3)])
    assert not res.feasible and res.violating == {1}
    with pytest.raises(NotBipartite):
        normalized_flow({0: 1}, {1: 1}, [(1, 0)])


def test_nmc_examples():
    assert nmc_bruteforce({0: 1, 1: 2}, {2: 2, 3: 1}, [(0, 2), (1, 3)]) == (False, frozenset({1}))
    left, right = {0: 4, 1: 1}, {2: 7}
    assert nmc_bruteforce(left, right, [(0, 2), (1, 2)]) == (True, None)
    with pytest.raises(TooLargeForOracle):
        nmc_bruteforce({i: 1 for i in range(21)}, {99: 1}, [])


def test_network_json(tmp_path):
    N = Network.build([3, 1, 2], [(0, 1), (0, 2)], ["a", "b", "c"])
    data = network_to_dict(N)
    assert data["capacities"] == ["3", "1", "2"]
    assert network_from_dict(data) == N
    import json

    path = tmp_path / "n.json"
    path.write_text(json.dumps({"capacities": ["2", "2"], "edges": [[0, 1]]}))
    assert load_network(path).capacities == (2, 2)
    rows = flow_to_list(FlowAssignment({(0, 1): Fraction(1, 2)}))
    assert rows == [{"edge": [0, 1], "value": "1/2"}]


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_max_flow_equals_min_cut(seed):
    N = random_dag_network(random.Random(seed), max_vertices=12)
    r = max_flow(N)
    assert r.value == N.weight(r.cut) == brute_force_min_vertex_cut(N)[0]
    assert classify_flow(N, r.flow).kind in ("underflow", "both")
    assert net_flow(N, r.flow) == r.value


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_min_flow_equals_max_antichain(seed):
    P = random_graded_poset(random.Random(seed))
    N = hasse_network(P)
    r = min_flow(N)
    assert r.value == brute_force_width(P).total_weight
    assert N.is_antichain(r.antichain)[0]
    assert classify_flow(N, r.flow).kind in ("overflow", "both")
    assert net_flow(N, r.flow) == r.value


@settings(max_examples=80, deadline=None)
@given(seeds)
def test_min_flow_on_random_dags(seed):
    N = random_dag_network(random.Random(seed), max_vertices=10)
    r = min_flow(N)
    assert N.is_antichain(r.antichain)[0]
    assert net_flow(N, r.flow) == r.value


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_normalized_flow_nmc_duality(seed):
    left, right, edges = random_bipartite(random.Random(seed), max_side=8)
    res = solve_normalized_flow(left, right, edges)
    holds, X = nmc_bruteforce(left, right, edges)
    assert res.feasible == holds
    if res.feasible:
        assert is_normalized_flow(left, right, res.flow)
    else:
        wl, wr = sum(left.values()), sum(right.values())
        D = {y for x, y in edges if x in res.violating}
        assert sum(left[x] for x in res.violating) * wr > sum(right[y] for y in D) * wl
