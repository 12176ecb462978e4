"""
Similarity Commands
compare:   rank every other layer against one target
layer-iqr: every target against all other layers, with IQR summaries
"""

import argparse

import pandas as pd

from layerrecon.cli.commands.common import add_network, add_similarity, load_network, run_config, store_for
from layerrecon.config import settings
from layerrecon.services.simhash import layer_comparison, rank_layers


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    compare = subparsers.add_parser(
        "compare", parents=[parent], help="Rank layers by SimHash similarity to a target"
    )
    add_network(compare)
    add_similarity(compare)
    compare.set_defaults(handler=run_compare)

    iqr = subparsers.add_parser(
        "layer-iqr", parents=[parent], help="Similarity of each target to all other layers, with IQR"
    )
    add_network(iqr, target=False)
    iqr.add_argument("--targets", nargs="+", help="Target layer ids (default all layers)")
    add_similarity(iqr)
    iqr.set_defaults(handler=run_layer_iqr)


def run_compare(args: argparse.Namespace) -> None:
    network = load_network(args)
    report = rank_layers(
        network, args.target, args.phi, args.method, hash_seeds=args.hash_seeds, jobs=args.jobs
    )
    frame = pd.DataFrame(
        [{"layer_id": e.layer_id, "similarity": e.similarity} for e in report.entries],
        columns=["layer_id", "similarity"],
    )
    store = store_for(args)
    store.write_csv(f"similarity_{args.target}.csv", frame)
    config = run_config(args, extra={"hash_seeds": args.hash_seeds})
    seeds = [settings.HASH_SEED + s for s in range(args.hash_seeds)]
    store.write_manifest(config, inputs=[args.network], seeds=seeds)


def run_layer_iqr(args: argparse.Namespace) -> None:
    network = load_network(args)
    table, summary = layer_comparison(
        network, args.targets, args.phi, args.method, hash_seeds=args.hash_seeds, jobs=args.jobs
    )
    store = store_for(args)
    store.write_csv("layer_comparison.csv", table)
    store.write_csv("layer_iqr.csv", summary)
    config = run_config(args, extra={"targets": args.targets, "hash_seeds": args.hash_seeds})
    seeds = [settings.HASH_SEED + s for s in range(args.hash_seeds)]
    store.write_manifest(config, inputs=[args.network], seeds=seeds)
