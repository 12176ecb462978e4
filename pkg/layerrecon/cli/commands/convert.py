"""
Data Commands
convert: published multiplex layout -> canonical edge list
remove:  hide a fraction of one layer's edges and save the reduced network
"""

import argparse

from layerrecon.cli.commands.common import add_network, fraction, run_config, store_for, load_network
from layerrecon.services.dataset_converter import convert_dataset
from layerrecon.services.graph_core import remove_edges


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    convert = subparsers.add_parser(
        "convert", parents=[parent], help="Normalize a published multiplex into the canonical edge list"
    )
    convert.add_argument("--edges", required=True, help="`layerID nodeID nodeID weight` file")
    convert.add_argument("--nodes", help="Node table (`nodeID nodeLabel ...`, one header line)")
    convert.add_argument("--layers", help="Layer table (`layerID layerLabel`, one header line)")
    convert.add_argument("--out", required=True, help="Canonical edge-list output path")
    convert.set_defaults(handler=run_convert)

    remove = subparsers.add_parser(
        "remove", parents=[parent], help="Hide a uniform random fraction of a layer's edges"
    )
    add_network(remove)
    remove.add_argument("--fraction", type=fraction, required=True, help="Share of edges to hide")
    remove.add_argument("--seed", type=int, default=0, help="Removal seed")
    remove.add_argument("--out", default="reduced.edges", help="Reduced network file name in --out-dir")
    remove.set_defaults(handler=run_remove)


def run_convert(args: argparse.Namespace) -> None:
    store = store_for(args)
    summary = convert_dataset(args.edges, args.out, nodes_path=args.nodes, layers_path=args.layers)
    inputs = [p for p in (args.edges, args.nodes, args.layers) if p]
    config = run_config(args, network_path=args.edges, extra={"out": args.out, "nodes": args.nodes, "layers": args.layers})
    store.write_manifest(config, inputs=inputs, results=summary)


def run_remove(args: argparse.Namespace) -> None:
    store = store_for(args)
    network = load_network(args)
    reduced, plan = remove_edges(network.layer(args.target), args.fraction, args.seed)
    store.write_network(args.out, network.replace_layer(reduced))
    store.write_removal_plan("removal_plan.json", plan)
    config = run_config(args, fractions=[args.fraction], extra={"out": args.out})
    store.write_manifest(
        config,
        inputs=[args.network],
        seeds=[args.seed],
        results={"removed": len(plan.removed_edges)},
    )
