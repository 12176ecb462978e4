"""
Shared CLI Helpers
Argument types, the flags every subcommand accepts, and run plumbing.
"""

import argparse
from typing import List

from layerrecon.config import settings
from layerrecon.core.exceptions import UsageError
from layerrecon.models.network import MultilayerNetwork
from layerrecon.models.requests import FitMode, RunConfig, SimilarityMethod, validate_phi
from layerrecon.services.artifact_store import ArtifactStore
from layerrecon.services.graph_core import load_multiplex


# =============================================================================
# Argument Types
# =============================================================================

def positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"must lie in [0, 1], got {value}")
    return value


def positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}")
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def phi_bits(text: str) -> int:
    try:
        return validate_phi(int(text))
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _list_of(item_type):
    def parse(text: str) -> list:
        items = [part for part in text.split(",") if part.strip()]
        if not items:
            raise argparse.ArgumentTypeError("expected a comma-separated list")
        return [item_type(part.strip()) for part in items]

    parse.__name__ = f"{item_type.__name__}_list"
    return parse


fraction_list = _list_of(fraction)
positive_int_list = _list_of(positive_int)
phi_list = _list_of(phi_bits)


def mode_list(text: str) -> List[FitMode]:
    try:
        return [FitMode(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"modes must be map and/or mle, got {text!r}")


# =============================================================================
# Shared Flags
# =============================================================================

def common_parser() -> argparse.ArgumentParser:
    """Parent parser with the flags every subcommand takes."""
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        "--out-dir", default=settings.out_dir_path,
        help="Directory for CSV outputs and the run manifest (env LAYERRECON_OUT_DIR)",
    )
    parent.add_argument("--jobs", type=positive_int, default=settings.JOBS, help="Max concurrent workers")
    parent.add_argument("--directed", action="store_true", help="Treat layers as directed")
    parent.add_argument("--keep-weights", action="store_true", help="Keep edge weights instead of binarizing")
    return parent


def add_network(parser: argparse.ArgumentParser, target: bool = True) -> None:
    parser.add_argument("--network", required=True, help="Multiplex edge-list file")
    if target:
        parser.add_argument("--target", required=True, help="Target layer id")


def add_similarity(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--phi", type=phi_bits, default=settings.DEFAULT_PHI, help="Digest size in bits")
    parser.add_argument(
        "--method", type=SimilarityMethod, choices=list(SimilarityMethod),
        default=SimilarityMethod.HAMMING, help="Digest comparison",
    )
    parser.add_argument(
        "--hash-seeds", type=positive_int, default=1,
        help="Average similarities over this many token-hash seeds",
    )


def add_fit(parser: argparse.ArgumentParser, mode: bool = True) -> None:
    if mode:
        parser.add_argument(
            "--mode", type=FitMode, choices=list(FitMode), default=FitMode.MAP,
            help="map uses the similarity prior, mle fits without one",
        )
    parser.add_argument("--dim", type=positive_int, default=settings.DEFAULT_DIM, help="Node vector dimension K")
    parser.add_argument(
        "--top-l", "--top-similar", dest="top_l", type=positive_int, default=settings.DEFAULT_TOP_L,
        help="Similar layers in the prior",
    )
    parser.add_argument("--max-iter", type=positive_int, default=settings.FIT_MAX_ITER, help="Iteration cap per fit")
    parser.add_argument(
        "--rel-tol", type=positive_float, default=settings.FIT_REL_TOL,
        help="Stop once the log posterior changes by less than this relative amount",
    )
    parser.add_argument("--tie-vectors", action="store_true", help="Learn one vector per node (undirected only)")
    parser.add_argument("--seed", type=int, default=settings.DEFAULT_SEED, help="Base seed")


# =============================================================================
# Run Plumbing
# =============================================================================

def load_network(args: argparse.Namespace) -> MultilayerNetwork:
    network = load_multiplex(args.network, directed=args.directed, binarize=not args.keep_weights)
    check_request(args, network)
    return network


def _uses_similarity_prior(args: argparse.Namespace) -> bool:
    if getattr(args, "prior_layers", None) or not hasattr(args, "top_l"):
        return False
    if hasattr(args, "top_ls"):
        return True
    modes = getattr(args, "modes", None) or [getattr(args, "mode", None)]
    return FitMode.MAP in modes


def check_request(args: argparse.Namespace, network: MultilayerNetwork) -> None:
    """Reject layer references the loaded network cannot satisfy, before any work starts."""
    ids = network.layer_ids
    target = getattr(args, "target", None)
    named = ([target] if target is not None else []) + list(getattr(args, "targets", None) or [])
    prior_layers = list(getattr(args, "prior_layers", None) or [])
    for layer_id in named + prior_layers:
        if layer_id not in ids:
            raise UsageError(f"unknown layer {layer_id!r}; network has {ids}")
    if target in prior_layers:
        raise UsageError("--prior-layers must not include the target layer")

    if _uses_similarity_prior(args):
        wanted = max(getattr(args, "top_ls", None) or [args.top_l])
        available = len(ids) - 1
        if wanted > available:
            raise UsageError(f"top_l={wanted} exceeds the {available} available comparison layers")


def run_config(args: argparse.Namespace, **fields) -> RunConfig:
    """RunConfig from the shared flags plus subcommand-specific fields."""
    base = {
        "subcommand": args.command,
        "network_path": getattr(args, "network", None),
        "target_layer": getattr(args, "target", None),
        "out_dir": args.out_dir,
        "directed": args.directed,
        "binarize": not args.keep_weights,
        "jobs": args.jobs,
    }
    for name, attr in (("mode", "mode"), ("K", "dim"), ("phi", "phi"), ("top_l", "top_l"),
                       ("runs", "runs"), ("seed", "seed"), ("method", "method")):
        if getattr(args, attr, None) is not None:
            base[name] = getattr(args, attr)
    base.update(fields)
    return RunConfig(**base)


def store_for(args: argparse.Namespace) -> ArtifactStore:
    return ArtifactStore(args.out_dir)
