"""
SimHash Service
Eigenvector-centrality SimHash digests and layer similarity.

Each node label is a token with a fixed phi-bit pattern; a layer's weighted
digest adds +w_i where token i has a 1 and -w_i where it has a 0, position by
position with no carries. Layers compare by Hamming distance of the
thresholded digests or by Pearson correlation of the weighted ones.
"""

from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import mmh3
import numpy as np
import pandas as pd
from scipy import stats

from layerrecon.config import settings
from layerrecon.core.exceptions import NoComparisonLayersError, UndefinedCorrelationError
from layerrecon.logger import get_logger
from layerrecon.models.factors import CentralityVector, LayerDigest
from layerrecon.models.network import MultilayerNetwork
from layerrecon.models.requests import SimilarityMethod, validate_phi
from layerrecon.models.responses import SimilarityEntry, SimilarityReport
from layerrecon.services.centrality import eigenvector_centrality

logger = get_logger("simhash")

BLOCK_BITS = 64
_BLOCK_SEP = "\x1f"


# =============================================================================
# Token Encoding
# =============================================================================

def _fold_seed(seed: int) -> int:
    return int(seed) % (1 << 32)


def token_digest(token: str, phi: int, hash_seed: Optional[int] = None) -> np.ndarray:
    """
    phi-bit pattern of one token as a uint8 0/1 vector.

    Block b of 64 bits is the low half of MurmurHash3-x64 over
    "<token>\\x1f<b>" under the hash seed, bits taken least-significant first.
    Patterns at different phi share blocks but not necessarily a prefix.
    """
    validate_phi(phi)
    seed = _fold_seed(settings.HASH_SEED if hash_seed is None else hash_seed)
    n_blocks = -(-phi // BLOCK_BITS)
    words = np.array(
        [mmh3.hash64(f"{token}{_BLOCK_SEP}{b}", seed=seed, signed=False)[0] for b in range(n_blocks)],
        dtype="<u8",
    )
    bits = np.unpackbits(words.view(np.uint8), bitorder="little")
    return bits[:phi]


@lru_cache(maxsize=64)
def _token_signs(labels: Tuple[str, ...], phi: int, hash_seed: int) -> np.ndarray:
    """n x phi matrix of +1/-1 token patterns, cached per registry."""
    bits = np.vstack([token_digest(label, phi, hash_seed) for label in labels])
    signs = bits.astype(float) * 2.0 - 1.0
    signs.setflags(write=False)
    return signs


# =============================================================================
# Digests
# =============================================================================

def digest_from_tokens(
    weights: np.ndarray,
    token_bits: np.ndarray,
    layer_id: str,
    hash_seed: int,
) -> LayerDigest:
    """Sum signed token patterns: +w where a bit is 1, -w where it is 0."""
    signs = np.asarray(token_bits).astype(float) * 2.0 - 1.0
    return _signed_sum(np.asarray(weights, dtype=float), signs, layer_id, hash_seed)


def _signed_sum(weights: np.ndarray, signs: np.ndarray, layer_id: str, hash_seed: int) -> LayerDigest:
    weighted = weights @ signs
    degenerate = not np.any(weighted)
    if degenerate:
        logger.warning(f"Digest of layer '{layer_id}' is identically zero")
    return LayerDigest(
        layer_id=layer_id,
        phi=signs.shape[1],
        weighted=weighted,
        hash_seed=hash_seed,
        degenerate=degenerate,
    )


def layer_digest(
    centrality: CentralityVector,
    phi: Optional[int] = None,
    hash_seed: Optional[int] = None,
) -> LayerDigest:
    """SimHash digest of a layer from its centrality vector."""
    phi = settings.DEFAULT_PHI if phi is None else validate_phi(phi)
    if len(centrality.labels) < 1:
        raise ValueError("centrality vector must cover at least one node")
    seed = settings.HASH_SEED if hash_seed is None else hash_seed
    return _signed_sum(centrality.values, _token_signs(centrality.labels, phi, seed), centrality.layer_id, seed)


# =============================================================================
# Similarity
# =============================================================================

def _check_phi(d1: LayerDigest, d2: LayerDigest) -> None:
    if d1.phi != d2.phi:
        raise ValueError(f"digest sizes differ: {d1.phi} vs {d2.phi}")


def hamming_similarity(d1: LayerDigest, d2: LayerDigest) -> float:
    """1 - Hamming(binary1, binary2) / phi, in [0, 1]."""
    _check_phi(d1, d2)
    differing = int(np.count_nonzero(d1.binary != d2.binary))
    return 1.0 - differing / d1.phi


def pearson_similarity(d1: LayerDigest, d2: LayerDigest) -> float:
    """Pearson correlation of the weighted digests, in [-1, 1]."""
    _check_phi(d1, d2)
    for d in (d1, d2):
        if np.ptp(d.weighted) == 0:
            raise UndefinedCorrelationError(
                f"weighted digest of layer '{d.layer_id}' is constant; correlation undefined"
            )
    r = float(stats.pearsonr(d1.weighted, d2.weighted)[0])
    return min(1.0, max(-1.0, r))


def similarity(d1: LayerDigest, d2: LayerDigest, method: SimilarityMethod = SimilarityMethod.HAMMING) -> float:
    if SimilarityMethod(method) is SimilarityMethod.PEARSON:
        return pearson_similarity(d1, d2)
    return hamming_similarity(d1, d2)


# =============================================================================
# Ranking
# =============================================================================

def _centralities(network: MultilayerNetwork, jobs: int) -> Dict[str, CentralityVector]:
    labels = network.nodes.labels

    def _one(layer):
        return eigenvector_centrality(layer, labels=labels)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            vectors = list(pool.map(_one, network.layers))
    else:
        vectors = [_one(layer) for layer in network.layers]
    return {cv.layer_id: cv for cv in vectors}


def _pair_similarity(target: LayerDigest, other: LayerDigest, method: SimilarityMethod) -> float:
    if method is SimilarityMethod.PEARSON:
        try:
            return pearson_similarity(target, other)
        except UndefinedCorrelationError:
            if np.ptp(target.weighted) == 0:
                raise
            logger.warning(f"Layer '{other.layer_id}' has a constant digest; similarity set to 0")
            return 0.0
    return hamming_similarity(target, other)


def similarity_matrix(
    network: MultilayerNetwork,
    phi: Optional[int] = None,
    method: SimilarityMethod = SimilarityMethod.HAMMING,
    hash_seeds: int = 1,
    hash_seed: Optional[int] = None,
    targets: Optional[Sequence[str]] = None,
    jobs: int = 1,
) -> Dict[str, Dict[str, float]]:
    """
    Similarity of each target layer to every other layer, averaged over
    `hash_seeds` consecutive token-hash seeds.
    """
    phi = settings.DEFAULT_PHI if phi is None else validate_phi(phi)
    method = SimilarityMethod(method)
    if hash_seeds < 1:
        raise ValueError(f"hash_seeds must be >= 1, got {hash_seeds}")
    base_seed = settings.HASH_SEED if hash_seed is None else hash_seed
    targets = list(network.layer_ids if targets is None else targets)
    for t in targets:
        network.layer(t)

    vectors = _centralities(network, jobs)
    sums: Dict[str, Dict[str, float]] = {t: {lid: 0.0 for lid in network.layer_ids if lid != t} for t in targets}
    for s in range(hash_seeds):
        digests = {lid: layer_digest(cv, phi, base_seed + s) for lid, cv in vectors.items()}
        for t in targets:
            for lid in sums[t]:
                sums[t][lid] += _pair_similarity(digests[t], digests[lid], method)
    return {t: {lid: v / hash_seeds for lid, v in row.items()} for t, row in sums.items()}


def rank_layers(
    network: MultilayerNetwork,
    target: str,
    phi: Optional[int] = None,
    method: SimilarityMethod = SimilarityMethod.HAMMING,
    hash_seeds: int = 1,
    hash_seed: Optional[int] = None,
    jobs: int = 1,
) -> SimilarityReport:
    """
    Rank every non-target layer by similarity to `target`, best first.
    Ties break by layer_id so the order is deterministic.
    """
    network.layer(target)
    if len(network) < 2:
        raise NoComparisonLayersError(target)
    phi = settings.DEFAULT_PHI if phi is None else validate_phi(phi)
    sims = similarity_matrix(
        network, phi, method, hash_seeds=hash_seeds, hash_seed=hash_seed, targets=[target], jobs=jobs
    )[target]
    ordered = sorted(sims.items(), key=lambda kv: (-kv[1], kv[0]))
    report = SimilarityReport(
        target_id=target,
        method=SimilarityMethod(method),
        phi=phi,
        hash_seeds=hash_seeds,
        entries=[SimilarityEntry(layer_id=lid, similarity=sim) for lid, sim in ordered],
    )
    logger.debug(f"Ranked {len(ordered)} layers against '{target}' (phi={phi}, {report.method.value})")
    return report


def layer_comparison(
    network: MultilayerNetwork,
    targets: Optional[Sequence[str]] = None,
    phi: Optional[int] = None,
    method: SimilarityMethod = SimilarityMethod.HAMMING,
    hash_seeds: int = 1,
    jobs: int = 1,
) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    Every target against all other layers.

    Returns the long table `target,layer_id,similarity` and its per-target
    summary `target,count,mean,min,q1,median,q3,max,iqr`.
    """
    if len(network) < 2:
        raise NoComparisonLayersError(network.layer_ids[0] if len(network) else "")
    matrix = similarity_matrix(network, phi, method, hash_seeds=hash_seeds, targets=targets, jobs=jobs)
    rows: List[dict] = [
        {"target": t, "layer_id": lid, "similarity": sim}
        for t, row in matrix.items()
        for lid, sim in row.items()
    ]
    table = pd.DataFrame(rows, columns=["target", "layer_id", "similarity"])
    summary = iqr_summary(table, ["target"], "similarity")
    return table, summary


def iqr_summary(frame: pd.DataFrame, keys: List[str], value: str) -> pd.DataFrame:
    """count/mean/min/quartiles/max/IQR of `value` per group, in first-seen group order."""
    grouped = frame.groupby(keys, sort=False)[value]
    summary = grouped.agg(
        count="count",
        mean="mean",
        min="min",
        q1=lambda v: float(np.percentile(v, 25)),
        median="median",
        q3=lambda v: float(np.percentile(v, 75)),
        max="max",
    ).reset_index()
    summary["iqr"] = summary["q3"] - summary["q1"]
    return summary
