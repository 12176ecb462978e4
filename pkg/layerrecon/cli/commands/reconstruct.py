"""
Reconstruct Command
Fit the target layer (optionally after hiding edges) and write link scores.
"""

import argparse

import numpy as np
import pandas as pd

from layerrecon.cli.commands.common import (
    add_fit,
    add_network,
    add_similarity,
    fraction,
    load_network,
    run_config,
    store_for,
)
from layerrecon.config import settings
from layerrecon.models.requests import FitConfig, FitMode
from layerrecon.services.estimator import fit, predict_scores
from layerrecon.services.evaluation import map_prior
from layerrecon.services.graph_core import remove_edges
from layerrecon.services.prior import flat_prior, functional_prior


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "reconstruct", parents=[parent], help="Score every node pair of the target layer"
    )
    add_network(parser)
    add_fit(parser)
    add_similarity(parser)
    parser.add_argument("--remove-frac", type=fraction, default=0.0, help="Share of target edges to hide first")
    parser.add_argument(
        "--prior-layers", nargs="+",
        help="Use these layers as a functional prior instead of ranking by similarity",
    )
    parser.set_defaults(handler=run)


def score_table(scores: np.ndarray, labels, directed: bool) -> pd.DataFrame:
    """Off-diagonal scores as source,target,score; undirected pairs once (i < j)."""
    n = len(labels)
    if directed:
        rows, cols = np.nonzero(~np.eye(n, dtype=bool))
    else:
        rows, cols = np.triu_indices(n, k=1)
    names = np.asarray(labels, dtype=object)
    return pd.DataFrame({"source": names[rows], "target": names[cols], "score": scores[rows, cols]})


def run(args: argparse.Namespace) -> None:
    network = load_network(args)
    truth = network.layer(args.target)
    reduced, plan = remove_edges(truth, args.remove_frac, args.seed)

    extrapolated = False
    if args.mode is FitMode.MLE:
        priorf = flat_prior(network.n)
    elif args.prior_layers:
        priorf = functional_prior(network.subnetwork(args.prior_layers), network.nodes)
    else:
        priorf, extrapolated = map_prior(
            network, args.target, reduced, args.remove_frac, args.seed, args.top_l,
            args.phi, args.method, args.hash_seeds, settings.EXTRAPOLATION_FRACTION,
        )

    cfg = FitConfig(
        K=args.dim,
        max_iter=args.max_iter,
        rel_tol=args.rel_tol,
        seed=args.seed,
        mode=args.mode,
        tie_vectors=args.tie_vectors,
    )
    model, trace = fit(reduced, priorf, cfg)
    scores = predict_scores(model, truth.directed)

    store = store_for(args)
    store.write_csv(f"scores_{args.target}.csv", score_table(scores, network.nodes.labels, truth.directed))
    store.write_csv(
        f"trace_{args.target}.csv",
        pd.DataFrame({"iteration": np.arange(1, len(trace.log_posterior) + 1), "log_posterior": trace.log_posterior}),
    )
    if args.remove_frac > 0:
        store.write_removal_plan(f"removal_plan_{args.target}.json", plan)
    if args.mode is FitMode.MAP:
        store.write_prior(f"prior_{args.target}.npz", priorf)

    config = run_config(
        args,
        fractions=[args.remove_frac],
        extra={
            "max_iter": args.max_iter,
            "rel_tol": args.rel_tol,
            "tie_vectors": args.tie_vectors,
            "hash_seeds": args.hash_seeds,
            "prior_layers": args.prior_layers,
        },
    )
    store.write_manifest(
        config,
        inputs=[args.network],
        seeds=[args.seed],
        results={
            "iterations": trace.iterations,
            "converged": trace.converged,
            "final_log_posterior": trace.final,
            "prior_mode": priorf.mode.value,
            "contributing_layers": [{"layer_id": lid, "mu": mu} for lid, mu in priorf.contributing_layers],
            "extrapolated": extrapolated,
            "removed": len(plan.removed_edges),
        },
    )
