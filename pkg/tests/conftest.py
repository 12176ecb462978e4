"""
Shared fixtures: small layers, a toy multiplex and edge-list files on disk.
"""

import numpy as np
import pytest

from layerrecon.models.network import Layer, MultilayerNetwork, NodeRegistry
from layerrecon.services.synthetic import synthetic_multiplex


def undirected(layer_id: str, n: int, edges) -> Layer:
    adj = np.zeros((n, n))
    for i, j in edges:
        adj[i, j] = adj[j, i] = 1.0
    return Layer(layer_id, False, adj)


def directed(layer_id: str, n: int, edges) -> Layer:
    adj = np.zeros((n, n))
    for i, j in edges:
        adj[i, j] = 1.0
    return Layer(layer_id, True, adj)


def random_connected(rng: np.random.Generator, n: int, extra: float = 0.3) -> np.ndarray:
    """Random spanning tree plus extra edges with probability `extra`."""
    adj = np.zeros((n, n))
    order = rng.permutation(n)
    for k in range(1, n):
        i, j = order[k], order[rng.integers(0, k)]
        adj[i, j] = adj[j, i] = 1.0
    upper = np.triu(rng.random((n, n)) < extra, k=1)
    adj[upper | upper.T] = 1.0
    np.fill_diagonal(adj, 0.0)
    return adj


@pytest.fixture
def triangle() -> Layer:
    return undirected("tri", 3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def toy_network() -> MultilayerNetwork:
    """Four layers over six nodes: a target, its copy, a near copy and an unrelated star."""
    n = 6
    base = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]
    layers = (
        undirected("A", n, base),
        undirected("B", n, base),
        undirected("C", n, base[:-1] + [(1, 4)]),
        undirected("D", n, [(0, k) for k in range(1, n)]),
    )
    return MultilayerNetwork(NodeRegistry(tuple(f"n{i}" for i in range(n))), layers)


@pytest.fixture
def edge_file(tmp_path):
    """Write edge-list text to a file and return its path."""
    def _write(text: str, name: str = "net.edges") -> str:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return str(path)

    return _write


@pytest.fixture(scope="session")
def small_synthetic() -> MultilayerNetwork:
    return synthetic_multiplex(n=40, similar=3, independent=2, dim=4, density=0.15, noise=0.05, seed=3)
