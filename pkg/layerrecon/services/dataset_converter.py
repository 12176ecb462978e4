"""
Dataset Converter Service
Normalize the published multiplex layout into the canonical edge list.

Published layout:
    edges file   `layerID nodeID nodeID weight`, whitespace-separated, no header
    nodes table  `nodeID nodeLabel ...`, one header line (optional)
    layers table `layerID layerLabel`, one header line (optional)

Layer ids stay numeric so targets can be named by id; layer labels are kept as
comments. Node labels replace node ids when a nodes table is given.
"""

import re
from typing import Dict, Optional

import pandas as pd

from layerrecon.core.exceptions import ParseError
from layerrecon.logger import get_logger
from layerrecon.services.edge_list_parser import EdgeListParser

logger = get_logger("dataset_converter")

EDGE_COLUMNS = ["layer", "source", "target", "weight"]
_WHITESPACE = re.compile(r"\s+")


def _token(value) -> str:
    """Label usable as a whitespace-free edge-list token."""
    text = _WHITESPACE.sub("_", str(value).strip())
    if not text or text.startswith(EdgeListParser.COMMENT):
        raise ParseError(f"label {value!r} cannot be written as an edge-list token")
    return text


def _read_table(path: str, what: str) -> Dict[str, str]:
    """
    First two columns of a table with one header line, as id -> label.

    With a two-column header the label is the rest of the line, so
    "United States" survives as one label.
    """
    table: Dict[str, str] = {}
    with open(path, "r", encoding=EdgeListParser.ENCODING) as fh:
        header = next(fh, "").split()
        label_rest = len(header) == 2
        for line_number, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            if len(parts) < 2:
                raise ParseError(f"{what} table needs an id and a label column", line_number, path)
            table[parts[0]] = " ".join(parts[1:]) if label_rest else parts[1]
    return table


def _node_tokens(node_ids, node_labels: Dict[str, str], path: str) -> Dict[str, str]:
    """id -> written label; two ids may not share a label."""
    tokens: Dict[str, str] = {}
    owner: Dict[str, str] = {}
    for nid in node_ids:
        label = _token(node_labels.get(nid, nid))
        if label in owner:
            raise ParseError(
                f"node ids {owner[label]!r} and {nid!r} both map to label {label!r}", path=path
            )
        owner[label] = nid
        tokens[nid] = label
    return tokens


def convert_dataset(
    edges_path: str,
    out_path: str,
    nodes_path: Optional[str] = None,
    layers_path: Optional[str] = None,
) -> Dict[str, int]:
    """
    Convert one published multiplex to the canonical edge list at `out_path`.

    Self-loops are dropped (the canonical format has none). Returns counts of
    layers, nodes, written edges and dropped self-loops.
    """
    edges = pd.read_csv(edges_path, sep=r"\s+", header=None, dtype=str, engine="python", comment="#")
    if edges.shape[1] == 3:
        edges[3] = "1"
    if edges.shape[1] != 4:
        raise ParseError(f"expected 3 or 4 columns, found {edges.shape[1]}", path=edges_path)
    edges.columns = EDGE_COLUMNS

    weights = pd.to_numeric(edges["weight"], errors="coerce")
    if weights.isna().any():
        bad = int(weights.isna().to_numpy().argmax())
        raise ParseError(f"non-numeric weight {edges['weight'].iloc[bad]!r} in data row {bad + 1}", path=edges_path)
    edges["weight"] = weights

    node_labels = _read_table(nodes_path, "nodes") if nodes_path else {}
    layer_labels = _read_table(layers_path, "layers") if layers_path else {}

    loops = edges["source"] == edges["target"]
    if loops.any():
        logger.warning(f"Dropping {int(loops.sum())} self-loops from {edges_path}")
    edges = edges[~loops]

    # table order first, then ids that only appear in the edges
    layer_ids = list(dict.fromkeys([*layer_labels, *edges["layer"]]))
    endpoints = edges[["source", "target"]].to_numpy().ravel()
    node_ids = list(dict.fromkeys([*node_labels, *endpoints]))
    tokens = _node_tokens(node_ids, node_labels, nodes_path or edges_path)

    def node(value: str) -> str:
        return tokens[value]

    lines = [
        f"{EdgeListParser.NODE_PRAGMA} {' '.join(node(n) for n in node_ids)}",
        f"{EdgeListParser.LAYER_PRAGMA} {' '.join(_token(lid) for lid in layer_ids)}",
    ]
    for lid in layer_ids:
        if lid in layer_labels:
            lines.append(f"{EdgeListParser.COMMENT} layer {_token(lid)} {layer_labels[lid]}")
    for row in edges.itertuples(index=False):
        w = float(row.weight)
        suffix = "" if w == 1.0 else f" {w!r}"
        lines.append(f"{_token(row.layer)} {node(row.source)} {node(row.target)}{suffix}")

    with open(out_path, "w", encoding=EdgeListParser.ENCODING) as fh:
        fh.write("\n".join(lines) + "\n")

    summary = {
        "layers": len(layer_ids),
        "nodes": len(node_ids),
        "edges": int(len(edges)),
        "self_loops_dropped": int(loops.sum()),
    }
    logger.info(f"Converted {edges_path} -> {out_path}: {summary}")
    return summary
