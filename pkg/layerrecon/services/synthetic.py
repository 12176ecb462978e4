"""
Synthetic Multiplex Service
Benchmark multiplexes with a known group of structurally similar layers.
"""

from typing import List

import numpy as np

from layerrecon.logger import get_logger
from layerrecon.models.network import Layer, MultilayerNetwork, NodeRegistry
from layerrecon.services.graph_core import rng_for

logger = get_logger("synthetic")

TARGET_ID = "target"


def _community_factors(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    """Non-negative node vectors: one dominant community per node plus a weak background."""
    membership = rng.integers(0, dim, size=n)
    W = rng.gamma(0.5, 0.1, size=(n, dim))
    W[np.arange(n), membership] += rng.gamma(4.0, 0.5, size=n)
    return W


def _link_probability(W: np.ndarray, density: float) -> np.ndarray:
    """1 - exp(-c W W^T), with c chosen so that 1 - exp(-mean off-diagonal rate) equals `density`."""
    E = W @ W.T
    np.fill_diagonal(E, 0.0)
    n = len(W)
    mean_rate = E.sum() / (n * (n - 1))
    c = -np.log1p(-density) / mean_rate
    return -np.expm1(-c * E)


def _sample_layer(
    rng: np.random.Generator,
    layer_id: str,
    prob: np.ndarray,
    density: float,
    noise: float,
) -> Layer:
    n = len(prob)
    mixed = (1.0 - noise) * prob + noise * density
    rows, cols = np.triu_indices(n, k=1)
    draws = rng.random(len(rows)) < mixed[rows, cols]
    adj = np.zeros((n, n))
    adj[rows[draws], cols[draws]] = 1.0
    adj[cols[draws], rows[draws]] = 1.0
    return Layer(layer_id, False, adj)


def synthetic_multiplex(
    n: int = 100,
    similar: int = 3,
    independent: int = 2,
    dim: int = 5,
    density: float = 0.1,
    noise: float = 0.1,
    seed: int = 0,
) -> MultilayerNetwork:
    """
    Undirected binary multiplex of 1 + similar + independent layers.

    The target and the `similar` layers are independent draws from one shared
    factor model, each mixed with `noise` of uniform random links; the
    `independent` layers come from factor models of their own. Layer ids are
    "target", "similar<k>" and "independent<k>"; node labels are "v<i>".
    """
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if similar < 0 or independent < 0:
        raise ValueError("layer counts must be >= 0")
    if not 0.0 < density < 1.0:
        raise ValueError(f"density must lie in (0, 1), got {density}")
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise must lie in [0, 1], got {noise}")

    rng = rng_for(seed)
    shared = _link_probability(_community_factors(rng, n, dim), density)
    layers: List[Layer] = [_sample_layer(rng, TARGET_ID, shared, density, noise)]
    layers += [_sample_layer(rng, f"similar{k + 1}", shared, density, noise) for k in range(similar)]
    for k in range(independent):
        own = _link_probability(_community_factors(rng, n, dim), density)
        layers.append(_sample_layer(rng, f"independent{k + 1}", own, density, noise))

    logger.debug(f"Synthetic multiplex: {len(layers)} layers, {n} nodes, seed={seed}")
    return MultilayerNetwork(NodeRegistry(tuple(f"v{i}" for i in range(n))), tuple(layers))
