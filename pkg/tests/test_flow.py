"""Max-flow engine against the brute-force min-cut oracle."""
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from relflow.errors import GraphError
from relflow.flow import max_flow

import helpers


def _random_capacitated(rng, max_nodes=8):
    n = rng.randint(2, max_nodes)
    hub = {x: rng.uniform(0.05, 2.0) for x in range(n)}
    edges = [(a, b) for a in range(n) for b in range(n)
             if a != b and rng.random() < 0.35]
    return helpers.make_subnetwork(hub, edges)


class TestToyFlows:
    def test_two_disjoint_paths(self, toy7_net):
        # 0 -> 5 direct plus 0 -> 2 -> 5
        got = max_flow(toy7_net, toy7_net.capacity, 0, 5)
        assert got.value == pytest.approx(0.736, abs=1e-3)

    def test_direct_plus_detour(self, toy7_net):
        got = max_flow(toy7_net, toy7_net.capacity, 2, 6)
        assert got.value == pytest.approx(1.183, abs=1e-3)

    def test_disconnected_pair_is_zero(self):
        net = helpers.make_subnetwork({0: 1.0, 1: 1.0, 2: 1.0, 3: 1.0},
                                      [(0, 1), (2, 3)])
        got = max_flow(net, net.capacity, 0, 3)
        assert got.value == 0.0
        assert all(f == 0.0 for f in got.edge_flows.values())

    def test_exclusion_blocks_a_route(self, toy7_net):
        got = max_flow(toy7_net, toy7_net.capacity, 0, 5, excluded=(2,))
        assert got.value == pytest.approx(helpers.TOY7_HUB[0], abs=1e-7)

    def test_source_equals_sink_rejected(self, toy7_net):
        with pytest.raises(GraphError):
            max_flow(toy7_net, toy7_net.capacity, 3, 3)

    def test_unknown_and_excluded_nodes_rejected(self, toy7_net):
        with pytest.raises(GraphError):
            max_flow(toy7_net, toy7_net.capacity, 0, 99)
        with pytest.raises(GraphError):
            max_flow(toy7_net, toy7_net.capacity, 0, 5, excluded=(5,))


class TestAgainstOracle:
    @given(st.integers(0, 2**32 - 1))
    def test_value_equals_min_cut(self, seed):
        rng = random.Random(seed)
        net = _random_capacitated(rng)
        nodes = list(net.nodes)
        s, t = rng.sample(nodes, 2)
        got = max_flow(net, net.capacity, s, t)
        want = helpers.brute_force_min_cut(nodes, net.capacity, s, t)
        assert got.value == pytest.approx(want, abs=1e-9)

    @given(st.integers(0, 2**32 - 1))
    def test_value_equals_min_cut_with_exclusion(self, seed):
        rng = random.Random(seed)
        net = _random_capacitated(rng)
        nodes = list(net.nodes)
        if len(nodes) < 3:
            return
        s, t, gone = rng.sample(nodes, 3)
        got = max_flow(net, net.capacity, s, t, excluded=(gone,))
        want = helpers.brute_force_min_cut(nodes, net.capacity, s, t,
                                           excluded=frozenset((gone,)))
        assert got.value == pytest.approx(want, abs=1e-9)


class TestFlowAssignment:
    @given(st.integers(0, 2**32 - 1))
    def test_capacity_and_conservation(self, seed):
        rng = random.Random(seed)
        net = _random_capacitated(rng, max_nodes=12)
        s, t = rng.sample(list(net.nodes), 2)
        got = max_flow(net, net.capacity, s, t)
        for e, f in got.edge_flows.items():
            assert -1e-12 <= f <= net.capacity[e] + 1e-12
        for x in net.nodes:
            inflow = sum(got.edge_flows[(y, x)] for y in net.pred[x])
            outflow = sum(got.edge_flows[(x, y)] for y in net.succ[x])
            if x == s:
                assert outflow - inflow == pytest.approx(got.value, abs=1e-9)
            elif x == t:
                assert inflow - outflow == pytest.approx(got.value, abs=1e-9)
            else:
                assert inflow == pytest.approx(outflow, abs=1e-9)

    @given(st.integers(0, 2**32 - 1))
    def test_bounded_by_terminal_capacities(self, seed):
        rng = random.Random(seed)
        net = _random_capacitated(rng, max_nodes=12)
        s, t = rng.sample(list(net.nodes), 2)
        got = max_flow(net, net.capacity, s, t)
        out_cap = sum(net.capacity[(s, y)] for y in net.succ[s])
        in_cap = sum(net.capacity[(y, t)] for y in net.pred[t])
        assert got.value <= out_cap + 1e-12
        assert got.value <= in_cap + 1e-12

    @given(st.integers(0, 2**32 - 1))
    def test_exclusion_never_increases_flow(self, seed):
        rng = random.Random(seed)
        net = _random_capacitated(rng, max_nodes=10)
        nodes = list(net.nodes)
        if len(nodes) < 3:
            return
        s, t, gone = rng.sample(nodes, 3)
        full = max_flow(net, net.capacity, s, t).value
        less = max_flow(net, net.capacity, s, t, excluded=(gone,)).value
        assert less <= full + 1e-12

    def test_deterministic_assignment(self, toy7_net):
        a = max_flow(toy7_net, toy7_net.capacity, 0, 6)
        b = max_flow(toy7_net, toy7_net.capacity, 0, 6)
        assert a.edge_flows == b.edge_flows
