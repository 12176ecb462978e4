"""
Centrality Command
Eigenvector centrality of one or every layer as a long CSV table.
"""

import argparse
import sys

import pandas as pd

from layerrecon.cli.commands.common import add_network, load_network, run_config, store_for
from layerrecon.services.centrality import eigenvector_centrality

COLUMNS = ["layer_id", "node_label", "centrality"]


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "centrality", parents=[parent], help="Eigenvector centrality per layer"
    )
    add_network(parser, target=False)
    parser.add_argument("--layer", action="append", help="Layer id (repeatable; default all layers)")
    parser.add_argument("--out", help="CSV file name in --out-dir; stdout when omitted")
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> None:
    network = load_network(args)
    layer_ids = args.layer or network.layer_ids
    rows = []
    degenerate = []
    for layer_id in layer_ids:
        cv = eigenvector_centrality(network.layer(layer_id), labels=network.nodes.labels)
        if cv.degenerate:
            degenerate.append(layer_id)
        rows.extend(
            {"layer_id": layer_id, "node_label": label, "centrality": float(value)}
            for label, value in zip(cv.labels, cv.values)
        )
    frame = pd.DataFrame(rows, columns=COLUMNS)

    store = store_for(args)
    if args.out:
        store.write_csv(args.out, frame)
    else:
        frame.to_csv(sys.stdout, index=False, lineterminator="\n")
    config = run_config(args, extra={"layers": list(layer_ids), "out": args.out})
    store.write_manifest(config, inputs=[args.network], results={"degenerate_layers": degenerate})
