"""
Estimator Service
MAP / MLE Poisson factorization of a target layer with a Gamma prior.

The expected link count is E = S T^T. Each iteration refreshes the auxiliary
distribution q_ijz = s_iz t_jz / E_ij, updates S from it, refreshes q again
and updates T:

    s_iz <- sum_j (A_ij + alpha_ij - 1) q_ijz / sum_j (beta_ij + 1) t_jz
    t_jz <- sum_i (A_ij + alpha_ij - 1) q_ijz / sum_i (beta_ij + 1) s_iz

Every half-step maximizes a Jensen bound that is tight at the current point,
so the log posterior never decreases.
"""

from typing import NamedTuple, Optional, Tuple

import numpy as np

from layerrecon.config import settings
from layerrecon.core.exceptions import NumericalFailureError
from layerrecon.logger import get_logger
from layerrecon.models.factors import FactorModel, GammaPriorField, PriorMode
from layerrecon.models.network import Layer
from layerrecon.models.requests import FitConfig, FitMode
from layerrecon.models.responses import FitTrace
from layerrecon.services.graph_core import rng_for
from layerrecon.services.prior import flat_prior

logger = get_logger("estimator")

PROGRESS_EVERY = 100


class QVector(NamedTuple):
    q: np.ndarray
    degenerate: bool


# =============================================================================
# Model Quantities
# =============================================================================

def expected_links(model: FactorModel) -> np.ndarray:
    """E_ij = sum_z s_iz t_jz."""
    return model.S @ model.T.T


def update_q(model: FactorModel, i: int, j: int) -> QVector:
    """Auxiliary distribution of pair (i, j); uniform when s_i * t_j is all zero."""
    prod = model.S[i] * model.T[j]
    total = prod.sum()
    if total <= 0:
        return QVector(np.full(model.K, 1.0 / model.K), True)
    return QVector(prod / total, False)


def _coefficients(target: Layer, priorf: GammaPriorField) -> Tuple[np.ndarray, np.ndarray]:
    """(A + alpha - 1, beta + 1) off the diagonal; functional priors stand in alpha / beta for A."""
    if priorf.alpha.shape != target.adjacency.shape:
        raise ValueError(
            f"prior is {priorf.alpha.shape}, target layer '{target.layer_id}' is {target.adjacency.shape}"
        )
    if np.any(priorf.alpha < 1.0):
        raise ValueError("prior alpha must be >= 1 everywhere; smaller values drive factors negative")
    observed = priorf.alpha / priorf.beta if priorf.mode is PriorMode.FUNCTIONAL else target.adjacency
    C = observed + (priorf.alpha - 1.0)
    B = priorf.beta + 1.0
    # self-pairs are not modelled
    np.fill_diagonal(C, 0.0)
    np.fill_diagonal(B, 0.0)
    return C, B


def _log_posterior(C: np.ndarray, B: np.ndarray, E: np.ndarray) -> float:
    # 0 * log 0 is taken as 0
    active = C > 0
    if np.any(E[active] <= 0):
        return float("-inf")
    log_term = np.zeros_like(E)
    np.log(E, out=log_term, where=active)
    return float(np.sum(C * log_term) - np.sum(B * E))


def log_posterior(target: Layer, priorf: GammaPriorField, model: FactorModel) -> float:
    """
    sum over i != j of [(A_ij + alpha_ij - 1) log E_ij - (beta_ij + 1) E_ij].

    With a flat field this is the Poisson log-likelihood up to constants.
    Returns -inf (logged) when E_ij = 0 where the log coefficient is positive.
    """
    C, B = _coefficients(target, priorf)
    value = _log_posterior(C, B, expected_links(model))
    if value == float("-inf"):
        logger.warning(f"Log posterior of '{target.layer_id}' is -inf: zero expectation on a positive pair")
    return value


# =============================================================================
# Fitting
# =============================================================================

def _ratio(C: np.ndarray, E: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """C / E where E > 0, plus the coefficients of pairs whose q falls back to uniform."""
    R = np.zeros_like(C)
    positive = E > 0
    np.divide(C, E, out=R, where=positive)
    stalled = np.where(positive, 0.0, C)
    return R, stalled


def _half_step(
    own: np.ndarray,
    other: np.ndarray,
    R: np.ndarray,
    stalled: np.ndarray,
    B: np.ndarray,
    floor: float,
) -> np.ndarray:
    """Row update of `own` given the frozen `other` factor (rows of R, B index `own`)."""
    K = own.shape[1]
    numerator = own * (R @ other)
    if np.any(stalled):
        numerator += stalled.sum(axis=1)[:, None] / K
    denominator = np.maximum(B @ other, floor)
    return numerator / denominator


def _tied_step(S: np.ndarray, R: np.ndarray, B: np.ndarray, floor: float) -> np.ndarray:
    numerator = (R + R.T) @ S
    denominator = np.maximum((B + B.T) @ S, floor)
    return S * np.sqrt(numerator / denominator)


def fit(
    target: Layer,
    priorf: GammaPriorField,
    cfg: Optional[FitConfig] = None,
    init: Optional[FactorModel] = None,
) -> Tuple[FactorModel, FitTrace]:
    """
    Fit source/target vectors to the target layer.

    In mle mode the prior is replaced by the flat field (alpha = 1, beta = 0),
    so an mle fit and a map fit on a flat field run the same arithmetic.
    Stops when the relative change of the log posterior drops below
    cfg.rel_tol or after cfg.max_iter iterations.

    `init` warm-starts from given factors (n x K, non-negative) instead of
    the seeded uniform draw; tied fits start from init.S.
    """
    cfg = cfg or FitConfig()
    n = target.n
    if FitMode(cfg.mode) is FitMode.MLE:
        priorf = flat_prior(n)
    C, B = _coefficients(target, priorf)
    tied = cfg.tie_vectors and not target.directed
    floor = settings.DENOMINATOR_FLOOR

    if init is None:
        rng = rng_for(cfg.seed)
        S = rng.random((n, cfg.K))
        T = S if tied else rng.random((n, cfg.K))
    else:
        if init.S.shape != (n, cfg.K) or init.T.shape != (n, cfg.K):
            raise ValueError(f"init factors must be {(n, cfg.K)}, got {init.S.shape} and {init.T.shape}")
        if np.any(init.S < 0) or np.any(init.T < 0):
            raise ValueError("init factors must be non-negative")
        S = np.array(init.S, dtype=float, copy=True)
        T = S if tied else np.array(init.T, dtype=float, copy=True)

    trace = FitTrace()
    previous = None
    for iteration in range(1, cfg.max_iter + 1):
        if tied:
            R, stalled = _ratio(C, S @ S.T)
            trace.degenerate_pairs = int(np.count_nonzero(stalled))
            S = T = _tied_step(S, R, B, floor)
        else:
            R, stalled = _ratio(C, S @ T.T)
            S = _half_step(S, T, R, stalled, B, floor)
            R, stalled = _ratio(C, S @ T.T)
            T = _half_step(T, S, R.T, stalled.T, B.T, floor)
            trace.degenerate_pairs = int(np.count_nonzero(stalled))

        if not (np.all(np.isfinite(S)) and np.all(np.isfinite(T))):
            raise NumericalFailureError(iteration)

        current = _log_posterior(C, B, S @ T.T)
        if np.isnan(current):
            raise NumericalFailureError(iteration, "log posterior")
        trace.log_posterior.append(current)
        trace.iterations = iteration

        if iteration % PROGRESS_EVERY == 0:
            logger.debug(f"[{target.layer_id}] iteration {iteration}: log posterior {current:.6f}")

        if previous is not None and np.isfinite(current) and np.isfinite(previous):
            change = abs(current - previous)
            if change <= cfg.rel_tol * max(abs(previous), np.finfo(float).tiny):
                trace.converged = True
                break
        previous = current

    if trace.degenerate_pairs:
        logger.warning(
            f"[{target.layer_id}] {trace.degenerate_pairs} pairs with zero expectation used a uniform q"
        )
    if not trace.converged:
        logger.info(f"[{target.layer_id}] stopped at max_iter={cfg.max_iter} without converging")
    model = FactorModel(S=np.array(S, copy=True), T=np.array(T, copy=True), seed=cfg.seed)
    return model, trace


def predict_scores(model: FactorModel, directed: bool) -> np.ndarray:
    """Link scores: E for directed layers, (E + E^T) / 2 otherwise; diagonal is NaN."""
    E = expected_links(model)
    scores = E if directed else (E + E.T) / 2.0
    scores = np.array(scores, dtype=float, copy=True)
    np.fill_diagonal(scores, np.nan)
    return scores
