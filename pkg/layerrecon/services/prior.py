"""
Prior Service
Gamma conjugate-prior fields built from similar or functionally similar layers.
"""

import json
from typing import List, Optional, Tuple

import numpy as np

from layerrecon.config import settings
from layerrecon.core.exceptions import RegistryMismatchError
from layerrecon.logger import get_logger
from layerrecon.models.factors import GammaPriorField, PriorMode
from layerrecon.models.network import MultilayerNetwork, NodeRegistry
from layerrecon.models.responses import SimilarityReport

logger = get_logger("prior")


def structural_prior(
    network: MultilayerNetwork,
    report: SimilarityReport,
    top_l: Optional[int] = None,
    beta_large: Optional[float] = None,
) -> GammaPriorField:
    """
    Prior from the top_l layers most similar to the target.

    With S1 = sum_r mu_r A^r_ij and S0 = sum_r mu_r:
      S1 >= 1      -> alpha = S1, beta = max(S0, S0 / S1)
      0 < S1 < 1   -> alpha = 1,  beta = S0 / S1   (prior mean S1 / S0 kept)
      S1 = 0       -> alpha = 1,  beta = beta_large
    Similarities are clipped to [0, 1] first (Pearson may go negative).
    """
    if not report.entries:
        raise ValueError(f"similarity report for '{report.target_id}' is empty")
    top_l = settings.DEFAULT_TOP_L if top_l is None else top_l
    beta_large = settings.BETA_LARGE if beta_large is None else beta_large
    chosen = report.top(top_l)

    n = network.n
    s1 = np.zeros((n, n))
    s0 = 0.0
    contributing: List[Tuple[str, float]] = []
    for entry in chosen:
        mu = min(1.0, max(0.0, entry.similarity))
        s1 += mu * network.layer(entry.layer_id).adjacency
        s0 += mu
        contributing.append((entry.layer_id, mu))

    alpha = np.ones((n, n))
    beta = np.full((n, n), beta_large)
    strong = s1 >= 1.0
    weak = (s1 > 0.0) & ~strong
    alpha[strong] = s1[strong]
    beta[strong] = np.maximum(s0, s0 / s1[strong])
    beta[weak] = s0 / s1[weak]

    logger.debug(
        f"Structural prior for '{report.target_id}' from {[lid for lid, _ in contributing]}: "
        f"{int(strong.sum())} strong, {int(weak.sum())} weak, {int((s1 == 0).sum())} empty pairs"
    )
    return GammaPriorField(
        alpha=alpha,
        beta=beta,
        mode=PriorMode.STRUCTURAL,
        contributing_layers=contributing,
        beta_large=beta_large,
    )


def functional_prior(
    aux_network: MultilayerNetwork,
    nodes: Optional[NodeRegistry] = None,
    beta_large: Optional[float] = None,
) -> GammaPriorField:
    """
    Prior from functionally similar layers, all taken with similarity 1:
    alpha = sum_r A^r_ij, beta = L'. Pairs with sum < 1 get alpha = 1,
    beta = beta_large. The estimator reads the prior mean alpha / beta as the
    target adjacency in this mode.
    """
    if len(aux_network) < 1:
        raise ValueError("functional prior needs at least one auxiliary layer")
    if nodes is not None and tuple(nodes.labels) != tuple(aux_network.nodes.labels):
        raise RegistryMismatchError("auxiliary network does not share the target's node registry")
    beta_large = settings.BETA_LARGE if beta_large is None else beta_large

    total = np.sum([layer.adjacency for layer in aux_network.layers], axis=0)
    present = total >= 1.0
    alpha = np.where(present, total, 1.0)
    beta = np.where(present, float(len(aux_network)), beta_large)
    return GammaPriorField(
        alpha=alpha,
        beta=beta,
        mode=PriorMode.FUNCTIONAL,
        contributing_layers=[(lid, 1.0) for lid in aux_network.layer_ids],
        beta_large=beta_large,
    )


def flat_prior(n: int) -> GammaPriorField:
    """Prior-free field: alpha = 1, beta = 0, so the fit is plain maximum likelihood."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return GammaPriorField(alpha=np.ones((n, n)), beta=np.zeros((n, n)), mode=PriorMode.FLAT)


# =============================================================================
# Persistence
# =============================================================================

def _sidecar_path(path: str) -> str:
    return f"{path[:-4] if path.endswith('.npz') else path}.json"


def save_prior(field: GammaPriorField, path: str) -> Tuple[str, str]:
    """Write alpha/beta to `path` (.npz) and the metadata to a JSON sidecar; returns both paths."""
    if not path.endswith(".npz"):
        path = f"{path}.npz"
    with open(path, "wb") as fh:
        np.savez(fh, alpha=field.alpha, beta=field.beta)
    meta = {
        "mode": field.mode.value,
        "contributing_layers": [{"layer_id": lid, "mu": mu} for lid, mu in field.contributing_layers],
        "beta_large": field.beta_large,
        "n": field.n,
    }
    sidecar = _sidecar_path(path)
    with open(sidecar, "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
    return path, sidecar


def load_prior(path: str) -> GammaPriorField:
    if not path.endswith(".npz"):
        path = f"{path}.npz"
    with np.load(path) as data:
        alpha, beta = data["alpha"], data["beta"]
    with open(_sidecar_path(path), "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    return GammaPriorField(
        alpha=alpha,
        beta=beta,
        mode=PriorMode(meta["mode"]),
        contributing_layers=[(c["layer_id"], c["mu"]) for c in meta["contributing_layers"]],
        beta_large=meta["beta_large"],
    )
