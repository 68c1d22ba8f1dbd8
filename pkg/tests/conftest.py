import random

import pytest

from userscope.graph import RetweetGraph


def random_digraph(n: int, p: float, seed: int) -> RetweetGraph:
    """Erdos-Renyi style directed graph used as a test substrate."""
    rng = random.Random(seed)
    edges = [
        (u, v, 1)
        for u in range(n)
        for v in range(n)
        if u != v and rng.random() < p
    ]
    return RetweetGraph(range(n), edges)


def strongly_connected_digraph(n: int, extra_p: float, seed: int) -> RetweetGraph:
    """Directed cycle plus random chords: strongly connected by construction."""
    rng = random.Random(seed)
    edge_set = {(u, (u + 1) % n) for u in range(n)}
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < extra_p:
                edge_set.add((u, v))
    return RetweetGraph(range(n), [(u, v, 1) for u, v in sorted(edge_set)])


@pytest.fixture
def tiny_graph() -> RetweetGraph:
    # 3 users, 4 retweets collapsing to 3 distinct edges
    return RetweetGraph([1, 2, 3], [(1, 2, 2), (2, 3, 1), (3, 1, 1)])
