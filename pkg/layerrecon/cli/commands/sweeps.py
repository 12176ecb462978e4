"""
Sweep Commands
sweep-sim, sweep-removal, sweep-dim and sweep-top: experiment grids written
as sweep_sim.csv / sweep_auc.csv.
"""

import argparse

from layerrecon.cli.commands.common import (
    add_fit,
    add_network,
    add_similarity,
    fraction,
    fraction_list,
    load_network,
    mode_list,
    phi_list,
    positive_int,
    positive_int_list,
    run_config,
    store_for,
)
from layerrecon.cli.commands.evaluate import fit_config, report_summary
from layerrecon.config import settings
from layerrecon.models.requests import FitMode, SimilarityRandomization
from layerrecon.services.evaluation import (
    dimension_sweep,
    removal_sweep,
    similarity_sweep,
    summarize_similarity,
    top_l_sweep,
)

DEFAULT_FRACTIONS = ",".join(str(f) for f in settings.default_fractions_list)


def _add_runs(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--runs", type=positive_int, default=settings.DEFAULT_RUNS, help="Seeded runs per cell")


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    sim = subparsers.add_parser(
        "sweep-sim", parents=[parent], help="Similarity of the reduced target across removal fractions and phi"
    )
    add_network(sim)
    add_similarity(sim)
    sim.add_argument(
        "--fractions", type=fraction_list, default=fraction_list(DEFAULT_FRACTIONS),
        help="Comma-separated removal fractions",
    )
    sim.add_argument("--phis", type=phi_list, help="Digest sizes (default: --phi)")
    sim.add_argument(
        "--randomize", type=SimilarityRandomization, choices=list(SimilarityRandomization),
        default=SimilarityRandomization.REMOVAL, help="What the run index varies",
    )
    sim.add_argument("--top-similar", type=positive_int, default=5, help="Similar layers used as references")
    sim.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Base seed")
    _add_runs(sim)
    sim.set_defaults(handler=run_similarity)

    removal = subparsers.add_parser(
        "sweep-removal", parents=[parent], help="AUC against removal fraction for map and mle"
    )
    add_network(removal)
    add_fit(removal, mode=False)
    add_similarity(removal)
    removal.add_argument(
        "--fractions", type=fraction_list, default=fraction_list(DEFAULT_FRACTIONS),
        help="Comma-separated removal fractions",
    )
    removal.add_argument(
        "--modes", type=mode_list, default=[FitMode.MAP, FitMode.MLE], help="Comma-separated fit modes"
    )
    _add_runs(removal)
    removal.set_defaults(handler=run_removal)

    dims = subparsers.add_parser(
        "sweep-dim", parents=[parent], help="AUC against the node vector dimension"
    )
    add_network(dims)
    add_fit(dims, mode=False)
    add_similarity(dims)
    dims.add_argument(
        "--dims", type=positive_int_list, default=[5, 10, 20, 40, 80], help="Comma-separated dimensions K"
    )
    dims.add_argument("--fraction", type=fraction, default=0.4, help="Share of target edges to hide")
    dims.add_argument(
        "--modes", type=mode_list, default=[FitMode.MAP, FitMode.MLE], help="Comma-separated fit modes"
    )
    _add_runs(dims)
    dims.set_defaults(handler=run_dimension)

    top = subparsers.add_parser(
        "sweep-top", parents=[parent], help="Map AUC against the number of prior layers"
    )
    add_network(top)
    add_fit(top, mode=False)
    add_similarity(top)
    top.add_argument(
        "--top-ls", type=positive_int_list, default=[3, 5, 10, 20], help="Comma-separated prior layer counts"
    )
    top.add_argument(
        "--fractions", type=fraction_list, default=fraction_list(DEFAULT_FRACTIONS),
        help="Comma-separated removal fractions",
    )
    _add_runs(top)
    top.set_defaults(handler=run_top)


def run_similarity(args: argparse.Namespace) -> None:
    network = load_network(args)
    phis = args.phis or [args.phi]
    rows = similarity_sweep(
        network,
        args.target,
        args.fractions,
        phis=phis,
        runs=args.runs,
        randomize=args.randomize,
        base_seed=args.seed,
        method=args.method,
        top_similar=args.top_similar,
        jobs=args.jobs,
    )
    store = store_for(args)
    store.write_csv("sweep_sim.csv", rows)
    store.write_csv("sweep_sim_summary.csv", summarize_similarity(rows))
    config = run_config(
        args,
        fractions=args.fractions,
        extra={"phis": phis, "randomize": args.randomize.value, "top_similar": args.top_similar},
    )
    store.write_manifest(config, inputs=[args.network], seeds=[args.seed + r for r in range(args.runs)])


def _write_auc_sweep(args: argparse.Namespace, result, fractions, extra: dict) -> None:
    store = store_for(args)
    store.write_csv("sweep_auc.csv", result.rows)
    config = run_config(
        args,
        fractions=fractions,
        extra={"max_iter": args.max_iter, "rel_tol": args.rel_tol, "tie_vectors": args.tie_vectors,
               "hash_seeds": args.hash_seeds, **extra},
    )
    store.write_manifest(
        config,
        inputs=[args.network],
        seeds=[args.seed + r for r in range(args.runs)],
        results={"cells": [report_summary(report) for report in result.reports]},
    )


def run_removal(args: argparse.Namespace) -> None:
    network = load_network(args)
    result = removal_sweep(
        network, args.target, args.fractions, modes=args.modes, dim=args.dim, top_l=args.top_l,
        runs=args.runs, base_seed=args.seed, phi=args.phi, method=args.method, hash_seeds=args.hash_seeds,
        fit_cfg=fit_config(args), jobs=args.jobs,
    )
    _write_auc_sweep(args, result, args.fractions, {"modes": [m.value for m in args.modes]})


def run_dimension(args: argparse.Namespace) -> None:
    network = load_network(args)
    result = dimension_sweep(
        network, args.target, args.dims, fraction=args.fraction, top_l=args.top_l, runs=args.runs,
        base_seed=args.seed, modes=args.modes, phi=args.phi, method=args.method, hash_seeds=args.hash_seeds,
        fit_cfg=fit_config(args), jobs=args.jobs,
    )
    _write_auc_sweep(
        args, result, [args.fraction], {"dims": args.dims, "modes": [m.value for m in args.modes]}
    )


def run_top(args: argparse.Namespace) -> None:
    network = load_network(args)
    result = top_l_sweep(
        network, args.target, args.top_ls, fractions=args.fractions, runs=args.runs, base_seed=args.seed,
        dim=args.dim, phi=args.phi, method=args.method, hash_seeds=args.hash_seeds,
        fit_cfg=fit_config(args), jobs=args.jobs,
    )
    _write_auc_sweep(args, result, args.fractions, {"top_ls": args.top_ls})
