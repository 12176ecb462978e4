"""
Network Data Model
Node registry, layers and multilayer networks. All values are immutable once built.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Tuple

import numpy as np

from layerrecon.core.exceptions import RegistryMismatchError


@dataclass(frozen=True)
class NodeId:
    """Dense 0-based index plus the external label (country, gene, ...)."""
    index: int
    label: str


@dataclass(frozen=True)
class NodeRegistry:
    """Ordered, duplicate-free node labels shared by every layer of a network."""
    labels: Tuple[str, ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        index = {label: i for i, label in enumerate(self.labels)}
        if len(index) != len(self.labels):
            raise ValueError("node labels must be unique")
        object.__setattr__(self, "_index", index)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return (NodeId(i, label) for i, label in enumerate(self.labels))

    def __contains__(self, label: str) -> bool:
        return label in self._index

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown node label '{label}'") from None

    def node(self, index: int) -> NodeId:
        return NodeId(index, self.labels[index])


def _frozen(matrix: np.ndarray) -> np.ndarray:
    arr = np.array(matrix, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Layer:
    """
    One interaction type over the shared node set.

    Entries are non-negative, the diagonal is zero and undirected layers are
    exactly symmetric.
    """
    layer_id: str
    directed: bool
    adjacency: np.ndarray

    def __post_init__(self):
        adj = _frozen(self.adjacency)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError(f"layer '{self.layer_id}': adjacency must be square, got {adj.shape}")
        if not np.all(np.isfinite(adj)) or np.any(adj < 0):
            raise ValueError(f"layer '{self.layer_id}': adjacency entries must be finite and >= 0")
        if np.any(np.diag(adj) != 0):
            raise ValueError(f"layer '{self.layer_id}': self-loops are not allowed")
        if not self.directed and not np.array_equal(adj, adj.T):
            raise ValueError(f"layer '{self.layer_id}': undirected adjacency must be symmetric")
        object.__setattr__(self, "adjacency", adj)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def with_adjacency(self, adjacency: np.ndarray) -> "Layer":
        """Copy of this layer carrying a new adjacency matrix."""
        return Layer(self.layer_id, self.directed, adjacency)

    def edge_pairs(self) -> np.ndarray:
        """
        Edges as an (m, 2) index array: i < j for undirected layers,
        every ordered pair for directed ones. Row-major order.
        """
        adj = self.adjacency
        if self.directed:
            rows, cols = np.nonzero(adj)
        else:
            rows, cols = np.nonzero(np.triu(adj, k=1))
        return np.column_stack([rows, cols]).astype(np.int64)


@dataclass(frozen=True)
class MultilayerNetwork:
    """Node registry plus an ordered list of layers over it."""
    nodes: NodeRegistry
    layers: Tuple[Layer, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        n = len(self.nodes)
        seen = set()
        for layer in layers:
            if layer.n != n:
                raise RegistryMismatchError(
                    f"layer '{layer.layer_id}' is {layer.n}x{layer.n}, registry has {n} nodes"
                )
            if layer.layer_id in seen:
                raise ValueError(f"duplicate layer id '{layer.layer_id}'")
            seen.add(layer.layer_id)
        object.__setattr__(self, "layers", layers)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def layer_ids(self) -> List[str]:
        return [layer.layer_id for layer in self.layers]

    def __len__(self) -> int:
        return len(self.layers)

    def layer(self, layer_id: str) -> Layer:
        for layer in self.layers:
            if layer.layer_id == layer_id:
                return layer
        raise KeyError(f"layer '{layer_id}' not found")

    def replace_layer(self, layer: Layer) -> "MultilayerNetwork":
        """New network with the same-id layer swapped for `layer`."""
        self.layer(layer.layer_id)
        return MultilayerNetwork(
            self.nodes,
            tuple(layer if lyr.layer_id == layer.layer_id else lyr for lyr in self.layers),
        )

    def subnetwork(self, layer_ids: Iterable[str]) -> "MultilayerNetwork":
        """New network restricted to `layer_ids`, in the given order."""
        return MultilayerNetwork(self.nodes, tuple(self.layer(lid) for lid in layer_ids))
