"""
Evaluation Service
ROC/AUC scoring of reconstructed layers and the experiment sweeps built on it.

Sweep functions return a SweepResult: the CSV rows as a DataFrame plus the
EvalReport of every cell, in cell order regardless of how many workers ran.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats
from sklearn import metrics

from layerrecon.config import settings
from layerrecon.core.exceptions import (
    DegenerateEvaluationError,
    LayerReconError,
    UndefinedCorrelationError,
)
from layerrecon.logger import get_logger
from layerrecon.models.factors import CentralityVector, GammaPriorField
from layerrecon.models.network import Layer, MultilayerNetwork
from layerrecon.models.requests import (
    EvalPolicy,
    FitConfig,
    FitMode,
    SimilarityMethod,
    SimilarityRandomization,
    validate_fraction,
    validate_phi,
)
from layerrecon.models.responses import EvalReport, RemovalPlan
from layerrecon.services.centrality import eigenvector_centrality
from layerrecon.services.estimator import fit, predict_scores
from layerrecon.services.graph_core import remove_edges
from layerrecon.services.prior import flat_prior, functional_prior, structural_prior
from layerrecon.services.simhash import iqr_summary, layer_digest, rank_layers, similarity

logger = get_logger("evaluation")

AUC_COLUMNS = ["target", "mode", "K", "top_l", "fraction", "run", "seed", "auc"]
SIM_COLUMNS = ["target", "fraction", "phi", "run", "similarity", "reference"]
ORIGINAL_REFERENCE = "original"


@dataclass
class SweepResult:
    rows: pd.DataFrame
    reports: List[EvalReport] = field(default_factory=list)


# =============================================================================
# Scoring
# =============================================================================

def evaluation_pairs(truth: Layer, hidden: RemovalPlan) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Unobserved pairs of the reduced layer as (rows, cols, labels).

    Diagonal excluded; undirected layers contribute each unordered pair once
    (i < j). Label 1 marks a hidden edge, 0 a true non-edge.
    """
    n = truth.n
    if truth.directed:
        rows, cols = np.nonzero(~np.eye(n, dtype=bool))
    else:
        rows, cols = np.triu_indices(n, k=1)

    hidden_mask = np.zeros((n, n), dtype=bool)
    if hidden.removed_edges:
        pairs = np.asarray(hidden.removed_edges, dtype=np.int64)
        hidden_mask[pairs[:, 0], pairs[:, 1]] = True
        if not truth.directed:
            hidden_mask[pairs[:, 1], pairs[:, 0]] = True

    positive = hidden_mask[rows, cols]
    negative = truth.adjacency[rows, cols] == 0
    keep = positive | negative
    return rows[keep], cols[keep], positive[keep].astype(np.int8)


def mann_whitney_auc(scores: np.ndarray, labels: np.ndarray) -> float:
    """P(positive outscores negative), ties counted 1/2, from average ranks."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    P = int(labels.sum())
    N = int(labels.size - P)
    if P == 0 or N == 0:
        raise DegenerateEvaluationError(P, N)
    ranks = stats.rankdata(scores, method="average")
    u = ranks[labels].sum() - P * (P + 1) / 2.0
    return float(u / (P * N))


def roc_curve(scores: np.ndarray, labels: np.ndarray) -> List[Tuple[float, float]]:
    """(fpr, tpr) at every distinct score threshold, from (0, 0) to (1, 1)."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels).astype(bool)
    P = int(labels.sum())
    N = int(labels.size - P)
    if P == 0 or N == 0:
        raise DegenerateEvaluationError(P, N)
    fpr, tpr, _ = metrics.roc_curve(labels.astype(np.int8), scores, pos_label=1, drop_intermediate=False)
    return [(float(f), float(t)) for f, t in zip(fpr, tpr)]


def trapezoid_area(roc: Sequence[Tuple[float, float]]) -> float:
    if len(roc) < 2:
        return 0.0
    pts = np.asarray(roc, dtype=float)
    return float(metrics.auc(pts[:, 0], pts[:, 1]))


def auc(
    scores: np.ndarray,
    truth: Layer,
    hidden: RemovalPlan,
    policy: EvalPolicy = EvalPolicy.ALL_UNOBSERVED,
) -> EvalReport:
    """
    Score a reconstruction of `truth` whose `hidden` edges were removed.

    Positives are the hidden edges, negatives the pairs that are not edges of
    the true layer.
    """
    if EvalPolicy(policy) is not EvalPolicy.ALL_UNOBSERVED:
        raise ValueError(f"unsupported evaluation policy: {policy}")
    scores = np.asarray(scores, dtype=float)
    if scores.shape != truth.adjacency.shape:
        raise ValueError(f"scores are {scores.shape}, layer '{truth.layer_id}' is {truth.adjacency.shape}")

    rows, cols, labels = evaluation_pairs(truth, hidden)
    values = scores[rows, cols]
    if not np.all(np.isfinite(values)):
        raise ValueError("scores must be finite on the evaluation set")

    area = mann_whitney_auc(values, labels)
    positives = int(labels.sum())
    return EvalReport(
        target=truth.layer_id,
        auc=area,
        roc=roc_curve(values, labels),
        removal_fraction=hidden.fraction,
        seed=hidden.seed,
        positives=positives,
        negatives=int(labels.size - positives),
    )


# =============================================================================
# Experiment Cells
# =============================================================================

def _check_top_l(network: MultilayerNetwork, top_l: int) -> None:
    available = len(network) - 1
    if top_l < 1:
        raise ValueError(f"top_l must be >= 1, got {top_l}")
    if top_l > available:
        raise ValueError(f"top_l={top_l} exceeds the {available} available comparison layers")


def map_prior(
    network: MultilayerNetwork,
    target: str,
    reduced: Layer,
    fraction: float,
    seed: int,
    top_l: int,
    phi: Optional[int],
    method: SimilarityMethod,
    hash_seeds: int,
    fallback_fraction: float,
) -> Tuple[GammaPriorField, bool]:
    """Prior for one map run and whether it was extrapolated from a partial ranking."""
    if fraction < 1.0:
        report = rank_layers(
            network.replace_layer(reduced), target, phi, method, hash_seeds=hash_seeds
        )
        return structural_prior(network, report, top_l), False

    # fully hidden target: rank against the reduction at the fallback fraction
    # and use the mean of the top layers as the observation
    reference, _ = remove_edges(network.layer(target), fallback_fraction, seed)
    report = rank_layers(
        network.replace_layer(reference), target, phi, method, hash_seeds=hash_seeds
    )
    aux = network.subnetwork([e.layer_id for e in report.top(top_l)])
    return functional_prior(aux, network.nodes), True


def run_cell(
    network: MultilayerNetwork,
    target: str,
    cfg: FitConfig,
    fraction: float,
    top_l: int,
    runs: int,
    base_seed: int,
    phi: Optional[int] = None,
    method: SimilarityMethod = SimilarityMethod.HAMMING,
    hash_seeds: int = 1,
    fallback_fraction: Optional[float] = None,
) -> EvalReport:
    """
    One experiment cell repeated over `runs` seeds (base_seed + r).

    Each run hides `fraction` of the target's edges, ranks the other layers
    against the reduced target, builds the prior from the top_l of them, fits
    and scores. Failed runs are logged and skipped; the cell fails only if
    every run does.
    """
    truth = network.layer(target)
    validate_fraction(fraction)
    if runs < 1:
        raise ValueError(f"runs must be >= 1, got {runs}")
    mode = FitMode(cfg.mode)
    if mode is FitMode.MAP:
        _check_top_l(network, top_l)
    fallback_fraction = settings.EXTRAPOLATION_FRACTION if fallback_fraction is None else fallback_fraction
    if not 0.0 <= fallback_fraction < 1.0:
        raise ValueError(f"fallback_fraction must lie in [0, 1), got {fallback_fraction}")

    aucs: List[float] = []
    seeds: List[int] = []
    failed: List[int] = []
    first: Optional[EvalReport] = None
    extrapolated = False
    last_error: Optional[Exception] = None
    for r in range(runs):
        seed = base_seed + r
        try:
            reduced, plan = remove_edges(truth, fraction, seed)
            if mode is FitMode.MLE:
                priorf = flat_prior(network.n)
            else:
                priorf, extrapolated = map_prior(
                    network, target, reduced, fraction, seed, top_l, phi, method, hash_seeds, fallback_fraction
                )
            model, _ = fit(reduced, priorf, cfg.model_copy(update={"seed": seed}))
            report = auc(predict_scores(model, truth.directed), truth, plan)
        except LayerReconError as e:
            logger.warning(f"[{target}] run {r} (seed={seed}, fraction={fraction}) failed: {e}")
            failed.append(r)
            last_error = e
            continue
        aucs.append(report.auc)
        seeds.append(seed)
        if first is None:
            first = report

    if first is None:
        raise last_error
    if extrapolated:
        logger.warning(
            f"[{target}] fraction={fraction}: prior taken from the ranking at {fallback_fraction} (extrapolated)"
        )

    # validated rebuild: auc and roc stay those of the first successful run
    return EvalReport(
        **{
            **first.model_dump(),
            "mean_auc": float(np.mean(aucs)),
            "mode": mode,
            "K": cfg.K,
            "top_l": top_l,
            "seed": base_seed,
            "runs": runs,
            "method": SimilarityMethod(method),
            "per_run_auc": aucs,
            "per_run_seeds": seeds,
            "failed_runs": failed,
            "extrapolated": extrapolated,
        }
    )


def _run_cells(cells: List[Callable[[], EvalReport]], jobs: int) -> List[EvalReport]:
    if jobs > 1 and len(cells) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(cell) for cell in cells]
            return [f.result() for f in futures]
    return [cell() for cell in cells]


def _auc_rows(report: EvalReport) -> List[Dict]:
    return [
        {
            "target": report.target,
            "mode": report.mode.value,
            "K": report.K,
            "top_l": report.top_l,
            "fraction": report.removal_fraction,
            "run": seed - report.seed,
            "seed": seed,
            "auc": value,
        }
        for value, seed in zip(report.per_run_auc, report.per_run_seeds)
    ]


def auc_result(reports: List[EvalReport]) -> SweepResult:
    rows = [row for report in reports for row in _auc_rows(report)]
    return SweepResult(pd.DataFrame(rows, columns=AUC_COLUMNS), reports)


# =============================================================================
# AUC Sweeps
# =============================================================================

def removal_sweep(
    network: MultilayerNetwork,
    target: str,
    fractions: Sequence[float],
    modes: Sequence[FitMode] = (FitMode.MAP, FitMode.MLE),
    dim: Optional[int] = None,
    top_l: Optional[int] = None,
    runs: Optional[int] = None,
    base_seed: Optional[int] = None,
    phi: Optional[int] = None,
    method: SimilarityMethod = SimilarityMethod.HAMMING,
    hash_seeds: int = 1,
    fit_cfg: Optional[FitConfig] = None,
    jobs: int = 1,
) -> SweepResult:
    """AUC against removal fraction for each mode (the map-vs-mle comparison)."""
    top_l = settings.DEFAULT_TOP_L if top_l is None else top_l
    runs = settings.DEFAULT_RUNS if runs is None else runs
    base_seed = settings.DEFAULT_SEED if base_seed is None else base_seed
    base = fit_cfg or FitConfig()
    dim = base.K if dim is None else dim
    if any(FitMode(m) is FitMode.MAP for m in modes):
        _check_top_l(network, top_l)

    cells = []
    for mode in modes:
        cfg = base.model_copy(update={"K": dim, "mode": FitMode(mode)})
        for fraction in fractions:
            cells.append(
                lambda cfg=cfg, fraction=fraction: run_cell(
                    network, target, cfg, fraction, top_l, runs, base_seed, phi, method, hash_seeds
                )
            )
    return auc_result(_run_cells(cells, jobs))


def dimension_sweep(
    network: MultilayerNetwork,
    target: str,
    dims: Sequence[int],
    fraction: float = 0.4,
    top_l: Optional[int] = None,
    runs: Optional[int] = None,
    base_seed: Optional[int] = None,
    modes: Sequence[FitMode] = (FitMode.MAP, FitMode.MLE),
    phi: Optional[int] = None,
    method: SimilarityMethod = SimilarityMethod.HAMMING,
    hash_seeds: int = 1,
    fit_cfg: Optional[FitConfig] = None,
    jobs: int = 1,
) -> SweepResult:
    """AUC against the node vector dimension K, for both modes."""
    if any(k < 1 for k in dims):
        raise ValueError("dims must all be >= 1")
    top_l = settings.DEFAULT_TOP_L if top_l is None else top_l
    runs = settings.DEFAULT_RUNS if runs is None else runs
    base_seed = settings.DEFAULT_SEED if base_seed is None else base_seed
    base = fit_cfg or FitConfig()
    if any(FitMode(m) is FitMode.MAP for m in modes):
        _check_top_l(network, top_l)

    cells = []
    for mode in modes:
        for K in dims:
            cfg = base.model_copy(update={"K": K, "mode": FitMode(mode)})
            cells.append(
                lambda cfg=cfg: run_cell(
                    network, target, cfg, fraction, top_l, runs, base_seed, phi, method, hash_seeds
                )
            )
    return auc_result(_run_cells(cells, jobs))


def top_l_sweep(
    network: MultilayerNetwork,
    target: str,
    top_ls: Sequence[int] = (3, 5, 10, 20),
    fractions: Optional[Sequence[float]] = None,
    runs: Optional[int] = None,
    base_seed: Optional[int] = None,
    dim: Optional[int] = None,
    phi: Optional[int] = None,
    method: SimilarityMethod = SimilarityMethod.HAMMING,
    hash_seeds: int = 1,
    fit_cfg: Optional[FitConfig] = None,
    jobs: int = 1,
) -> SweepResult:
    """Map AUC for each number of prior layers across removal fractions."""
    for top_l in top_ls:
        _check_top_l(network, top_l)
    fractions = settings.default_fractions_list if fractions is None else fractions
    runs = settings.DEFAULT_RUNS if runs is None else runs
    base_seed = settings.DEFAULT_SEED if base_seed is None else base_seed
    base = fit_cfg or FitConfig()
    cfg = base.model_copy(update={"mode": FitMode.MAP, "K": base.K if dim is None else dim})

    cells = [
        lambda top_l=top_l, fraction=fraction: run_cell(
            network, target, cfg, fraction, top_l, runs, base_seed, phi, method, hash_seeds
        )
        for top_l in top_ls
        for fraction in fractions
    ]
    return auc_result(_run_cells(cells, jobs))


# =============================================================================
# Similarity Sweep
# =============================================================================

def _safe_similarity(d1, d2, method: SimilarityMethod) -> float:
    try:
        return similarity(d1, d2, method)
    except UndefinedCorrelationError as e:
        logger.warning(f"Similarity {d1.layer_id} vs {d2.layer_id} undefined: {e}")
        return float("nan")


def similarity_sweep(
    network: MultilayerNetwork,
    target: str,
    fractions: Sequence[float],
    phis: Optional[Sequence[int]] = None,
    runs: Optional[int] = None,
    randomize: SimilarityRandomization = SimilarityRandomization.REMOVAL,
    base_seed: Optional[int] = None,
    method: SimilarityMethod = SimilarityMethod.HAMMING,
    top_similar: int = 5,
    jobs: int = 1,
) -> pd.DataFrame:
    """
    Similarity of the reduced target to the original target and to its
    most similar layers, for every (fraction, phi, run).

    `randomize` picks what the run index varies: the removal seed
    (base_seed + run), the token-hash seed (HASH_SEED + run), or both. The
    knob that is not varied stays at its base value.
    """
    truth = network.layer(target)
    phis = [settings.DEFAULT_PHI] if phis is None else [validate_phi(p) for p in phis]
    runs = settings.DEFAULT_RUNS if runs is None else runs
    base_seed = settings.DEFAULT_SEED if base_seed is None else base_seed
    randomize = SimilarityRandomization(randomize)
    method = SimilarityMethod(method)
    for fraction in fractions:
        validate_fraction(fraction)
    vary_removal = randomize in (SimilarityRandomization.REMOVAL, SimilarityRandomization.BOTH)
    vary_hash = randomize in (SimilarityRandomization.HASH, SimilarityRandomization.BOTH)

    labels = network.nodes.labels
    original = eigenvector_centrality(truth, labels=labels)
    references: Dict[int, List[CentralityVector]] = {}
    for phi in phis:
        if len(network) > 1:
            ranked = rank_layers(network, target, phi, method)
            chosen = ranked.entries[: min(top_similar, len(ranked.entries))]
            references[phi] = [eigenvector_centrality(network.layer(e.layer_id), labels=labels) for e in chosen]
        else:
            references[phi] = []

    def _cell(fraction: float, phi: int, run: int) -> List[Dict]:
        removal_seed = base_seed + run if vary_removal else base_seed
        hash_seed = settings.HASH_SEED + (run if vary_hash else 0)
        reduced, _ = remove_edges(truth, fraction, removal_seed)
        probe = layer_digest(eigenvector_centrality(reduced, labels=labels), phi, hash_seed)
        rows = []
        for cv, name in [(original, ORIGINAL_REFERENCE)] + [(cv, cv.layer_id) for cv in references[phi]]:
            rows.append(
                {
                    "target": target,
                    "fraction": fraction,
                    "phi": phi,
                    "run": run,
                    "similarity": _safe_similarity(probe, layer_digest(cv, phi, hash_seed), method),
                    "reference": name,
                }
            )
        return rows

    grid = [(fraction, phi, run) for fraction in fractions for phi in phis for run in range(runs)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(lambda cell: _cell(*cell), grid))
    else:
        chunks = [_cell(*cell) for cell in grid]
    return pd.DataFrame([row for chunk in chunks for row in chunk], columns=SIM_COLUMNS)


def summarize_similarity(rows: pd.DataFrame) -> pd.DataFrame:
    """Mean and quartiles of similarity per (target, fraction, phi, reference)."""
    return iqr_summary(rows.dropna(subset=["similarity"]), ["target", "fraction", "phi", "reference"], "similarity")
