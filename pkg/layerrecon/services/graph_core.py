"""
Graph Core Service
Multiplex ingestion, serialization and uniform edge removal.
"""

from collections import OrderedDict
from typing import Dict, List, Tuple

import numpy as np

from layerrecon.logger import get_logger
from layerrecon.models.network import Layer, MultilayerNetwork, NodeRegistry
from layerrecon.models.responses import RemovalPlan
from layerrecon.services.edge_list_parser import EdgeListParser, ParsedEdgeList

logger = get_logger("graph_core")


def rng_for(seed: int) -> np.random.Generator:
    """Seeded generator; any Python int is folded into the 64-bit seed space."""
    return np.random.default_rng(int(seed) % (1 << 64))


# =============================================================================
# Ingestion
# =============================================================================

def load_multiplex(path: str, directed: bool = False, binarize: bool = True) -> MultilayerNetwork:
    """
    Load a multiplex edge list into a MultilayerNetwork.

    One layer per distinct layer_id (first-appearance order); the node registry
    is the union of all labels in first-appearance order. Duplicate lines for
    the same pair accumulate, then are clipped to 1 when binarizing.
    """
    parsed = EdgeListParser.parse_file(path)
    network = build_network(parsed, directed=directed, binarize=binarize)
    logger.info(
        f"Loaded {path}: {len(network)} layers over {network.n} nodes "
        f"({'directed' if directed else 'undirected'}, {'binary' if binarize else 'weighted'})"
    )
    return network


def build_network(parsed: ParsedEdgeList, directed: bool = False, binarize: bool = True) -> MultilayerNetwork:
    """Assemble adjacency matrices from parsed records."""
    index: Dict[str, int] = OrderedDict()
    for label in parsed.declared_nodes:
        index.setdefault(label, len(index))
    layer_edges: Dict[str, List[Tuple[str, str, float]]] = OrderedDict()
    for layer_id in parsed.declared_layers:
        layer_edges.setdefault(layer_id, [])
    for rec in parsed.edges:
        index.setdefault(rec.source, len(index))
        index.setdefault(rec.target, len(index))
        layer_edges.setdefault(rec.layer_id, []).append((rec.source, rec.target, rec.weight))

    n = len(index)
    layers = []
    for layer_id, edges in layer_edges.items():
        adj = np.zeros((n, n))
        rows = np.fromiter((index[s] for s, _, _ in edges), dtype=np.int64, count=len(edges))
        cols = np.fromiter((index[t] for _, t, _ in edges), dtype=np.int64, count=len(edges))
        weights = np.fromiter((w for _, _, w in edges), dtype=float, count=len(edges))
        np.add.at(adj, (rows, cols), weights)
        if not directed:
            np.add.at(adj, (cols, rows), weights)
        if binarize:
            adj = (adj > 0).astype(float)
        layers.append(Layer(layer_id, directed, adj))

    return MultilayerNetwork(NodeRegistry(tuple(index)), tuple(layers))


def write_multiplex(network: MultilayerNetwork, path: str) -> None:
    """
    Serialize a network to the canonical edge list.

    Undirected edges are written once (i < j); weights only when they differ
    from 1. The node and layer pragmas preserve ordering, isolated nodes and
    empty layers.
    """
    with open(path, "w", encoding=EdgeListParser.ENCODING) as fh:
        fh.write(format_multiplex(network))


def format_multiplex(network: MultilayerNetwork) -> str:
    labels = network.nodes.labels
    lines = [
        f"{EdgeListParser.NODE_PRAGMA} {' '.join(labels)}",
        f"{EdgeListParser.LAYER_PRAGMA} {' '.join(network.layer_ids)}",
    ]
    for layer in network.layers:
        for i, j in layer.edge_pairs():
            w = float(layer.adjacency[i, j])
            suffix = "" if w == 1.0 else f" {w!r}"
            lines.append(f"{layer.layer_id} {labels[i]} {labels[j]}{suffix}")
    return "\n".join(lines) + "\n"


# =============================================================================
# Edge Utilities
# =============================================================================

def edge_count(layer: Layer) -> int:
    """Unordered pairs with positive weight (undirected) or ordered pairs (directed)."""
    return int(layer.edge_pairs().shape[0])


def removal_count(fraction: float, m: int) -> int:
    """round(fraction * m), halves rounded up."""
    return int(np.floor(fraction * m + 0.5))


def remove_edges(layer: Layer, fraction: float, seed: int) -> Tuple[Layer, RemovalPlan]:
    """
    Hide round(fraction * m) edges chosen uniformly at random.

    The chosen edges are the first k of a seeded permutation of `edge_pairs()`.
    Undirected edges are removed in both directions. The input layer is not
    modified.
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")

    edges = layer.edge_pairs()
    k = removal_count(fraction, len(edges))
    chosen = rng_for(seed).permutation(len(edges))[:k]
    removed = edges[np.sort(chosen)]

    adj = np.array(layer.adjacency, copy=True)
    if k:
        adj[removed[:, 0], removed[:, 1]] = 0.0
        if not layer.directed:
            adj[removed[:, 1], removed[:, 0]] = 0.0

    plan = RemovalPlan(
        fraction=fraction,
        seed=seed,
        removed_edges=[(int(i), int(j)) for i, j in removed],
    )
    logger.debug(f"Removed {k}/{len(edges)} edges from layer '{layer.layer_id}' (seed={seed})")
    return layer.with_adjacency(adj), plan
