"""
Evaluate Command
One experiment cell: hide edges, reconstruct, score AUC over several runs.
"""

import argparse

import pandas as pd

from layerrecon.cli.commands.common import (
    add_fit,
    add_network,
    add_similarity,
    fraction,
    load_network,
    positive_int,
    run_config,
    store_for,
)
from layerrecon.config import settings
from layerrecon.models.requests import FitConfig
from layerrecon.services.evaluation import auc_result, run_cell


def register(subparsers, parent: argparse.ArgumentParser) -> None:
    parser = subparsers.add_parser(
        "evaluate", parents=[parent], help="AUC of one (mode, K, top_l, fraction) cell over several runs"
    )
    add_network(parser)
    add_fit(parser)
    add_similarity(parser)
    parser.add_argument("--fraction", type=fraction, default=0.4, help="Share of target edges to hide")
    parser.add_argument("--runs", type=positive_int, default=settings.DEFAULT_RUNS, help="Seeded runs per cell")
    parser.set_defaults(handler=run)


def fit_config(args: argparse.Namespace, **overrides) -> FitConfig:
    fields = {
        "K": args.dim,
        "max_iter": args.max_iter,
        "rel_tol": args.rel_tol,
        "seed": args.seed,
        "tie_vectors": args.tie_vectors,
    }
    if getattr(args, "mode", None) is not None:
        fields["mode"] = args.mode
    fields.update(overrides)
    return FitConfig(**fields)


def report_summary(report) -> dict:
    return {
        "target": report.target,
        "mode": report.mode.value,
        "K": report.K,
        "top_l": report.top_l,
        "fraction": report.removal_fraction,
        "auc": report.auc,
        "mean_auc": report.mean_auc,
        "per_run_auc": report.per_run_auc,
        "failed_runs": report.failed_runs,
        "extrapolated": report.extrapolated,
        "positives": report.positives,
        "negatives": report.negatives,
    }


def run(args: argparse.Namespace) -> None:
    network = load_network(args)
    report = run_cell(
        network,
        args.target,
        fit_config(args),
        args.fraction,
        args.top_l,
        args.runs,
        args.seed,
        phi=args.phi,
        method=args.method,
        hash_seeds=args.hash_seeds,
    )

    store = store_for(args)
    store.write_csv(f"eval_{args.target}.csv", auc_result([report]).rows)
    store.write_csv(
        f"roc_{args.target}.csv",
        pd.DataFrame(report.roc, columns=["fpr", "tpr"]),
    )
    config = run_config(
        args,
        fractions=[args.fraction],
        extra={"max_iter": args.max_iter, "rel_tol": args.rel_tol, "tie_vectors": args.tie_vectors,
               "hash_seeds": args.hash_seeds},
    )
    store.write_manifest(
        config,
        inputs=[args.network],
        seeds=report.per_run_seeds,
        results=report_summary(report),
    )
