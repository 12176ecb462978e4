"""
Centrality Service
Eigenvector centrality by power iteration, the token weights fed to SimHash.
"""

from typing import Optional, Sequence

import numpy as np

from layerrecon.config import settings
from layerrecon.logger import get_logger
from layerrecon.models.factors import CentralityVector
from layerrecon.models.network import Layer, MultilayerNetwork

logger = get_logger("centrality")


def eigenvector_centrality(
    layer: Layer,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    labels: Optional[Sequence[str]] = None,
) -> CentralityVector:
    """
    Dominant eigenvector of the layer's propagation matrix, unit-L2, non-negative.

    Undirected layers propagate along A; directed layers along A^T so a node
    gains prestige from its in-edges. The iteration runs on M = P / rho + I
    (rho = largest row sum of P): the unit shift keeps the eigenvectors and
    damps the +/- lambda oscillation of bipartite components, and dividing by
    rho makes the iterates independent of the weight scale.

    Disconnected layers concentrate on the component with the largest
    eigenvalue; other components may end near zero.
    """
    tol = settings.CENTRALITY_TOL if tol is None else tol
    max_iter = settings.CENTRALITY_MAX_ITER if max_iter is None else max_iter
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    if labels is None:
        labels = [str(i) for i in range(layer.n)]
    if len(labels) != layer.n:
        raise ValueError(f"expected {layer.n} labels, got {len(labels)}")

    n = layer.n
    propagation = layer.adjacency.T if layer.directed else layer.adjacency
    rho = float(propagation.sum(axis=1).max()) if n else 0.0
    if rho == 0.0:
        logger.warning(f"Layer '{layer.layer_id}' has no edges; centrality is all-zero")
        return CentralityVector(layer.layer_id, tuple(labels), np.zeros(n), degenerate=True)

    M = propagation / rho
    x = np.full(n, 1.0 / np.sqrt(n))
    iterations = 0
    for iterations in range(1, max_iter + 1):
        y = M @ x + x
        x_new = y / np.linalg.norm(y)
        delta = np.linalg.norm(x_new - x)
        x = x_new
        if delta < tol:
            break
    else:
        logger.warning(
            f"Centrality of layer '{layer.layer_id}' did not converge in {max_iter} iterations "
            f"(last change {delta:.3e})"
        )

    x = np.clip(x, 0.0, None)
    x /= np.linalg.norm(x)
    eigenvalue = float(x @ (propagation @ x))
    return CentralityVector(
        layer_id=layer.layer_id,
        labels=tuple(labels),
        values=x,
        eigenvalue=eigenvalue,
        iterations=iterations,
    )


def network_centralities(network: MultilayerNetwork, **kwargs) -> list:
    """Centrality vector of every layer, in layer order."""
    return [eigenvector_centrality(layer, labels=network.nodes.labels, **kwargs) for layer in network.layers]
