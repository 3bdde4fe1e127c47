"""Shared helpers: random graph instances for property tests."""
import numpy as np

from agssl import Graph, is_connected


def er_graph(rng: np.random.Generator, n: int, p: float) -> Graph:
    """Erdos-Renyi draw with unit weights (may be disconnected)."""
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((i, j, 1.0))
    return Graph(n=n, edges=tuple(edges))


def random_connected_graph(rng: np.random.Generator, n_max: int = 12,
                           p: float = 0.4, n_min: int = 4) -> Graph:
    """Connected ER instance; redraws until connectivity holds."""
    n = int(rng.integers(n_min, n_max + 1))
    while True:
        g = er_graph(rng, n, p)
        if g.num_edges and is_connected(g):
            return g
