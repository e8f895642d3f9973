import random

import networkx as nx
import pytest

from active_time.flow import FlowNetwork


def test_textbook_network():
    net = FlowNetwork(6)
    for u, v, c in [(0, 1, 3), (0, 2, 3), (1, 2, 2), (1, 3, 3), (2, 4, 2), (3, 4, 4), (3, 5, 2), (4, 5, 3)]:
        net.add_edge(u, v, c)
    assert net.max_flow(0, 5) == 5


@pytest.mark.parametrize("seed", range(30))
def test_matches_networkx(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 9)
    net = FlowNetwork(n)
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    edges = []
    for _ in range(rng.randint(0, 25)):
        u, v = rng.sample(range(n), 2)
        c = rng.randint(1, 5)
        edges.append((u, v, net.add_edge(u, v, c)))
        if g.has_edge(u, v):
            g[u][v]["capacity"] += c
        else:
            g.add_edge(u, v, capacity=c)
    value = net.max_flow(0, n - 1)
    assert value == nx.maximum_flow_value(g, 0, n - 1)
    # conservation on the computed flow
    balance = [0] * n
    for u, v, e in edges:
        balance[u] -= net.flow_on(e)
        balance[v] += net.flow_on(e)
    assert balance[n - 1] == value
    assert all(balance[x] == 0 for x in range(1, n - 1))


def test_limit_reaches_at_least_the_limit():
    net = FlowNetwork(4)
    net.add_edge(0, 1, 3)
    net.add_edge(0, 2, 3)
    net.add_edge(1, 3, 3)
    net.add_edge(2, 3, 3)
    assert 4 <= net.max_flow(0, 3, limit=4) <= 6


def test_disconnected_sink():
    net = FlowNetwork(3)
    net.add_edge(0, 1, 5)
    assert net.max_flow(0, 2) == 0
