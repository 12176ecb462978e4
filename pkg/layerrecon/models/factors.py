"""
Array-Valued Domain Types
Centrality vectors, SimHash digests, Gamma prior fields and factor models.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

import numpy as np


def _readonly(arr, dtype=float) -> np.ndarray:
    out = np.array(arr, dtype=dtype, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class CentralityVector:
    """Unit-L2 eigenvector centrality of one layer (all-zero for an empty layer)."""
    layer_id: str
    labels: Tuple[str, ...]
    values: np.ndarray
    eigenvalue: float = 0.0
    iterations: int = 0
    degenerate: bool = False
    normalization: str = "unit-L2"

    def __post_init__(self):
        values = _readonly(self.values)
        if values.shape != (len(self.labels),):
            raise ValueError("centrality needs one value per node label")
        if np.any(values < 0):
            raise ValueError("centrality values must be non-negative")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(self.labels))


@dataclass(frozen=True)
class LayerDigest:
    """SimHash of one layer: signed accumulators and the thresholded bits."""
    layer_id: str
    phi: int
    weighted: np.ndarray
    hash_seed: int
    degenerate: bool = False
    binary: np.ndarray = field(init=False)

    def __post_init__(self):
        weighted = _readonly(self.weighted)
        if weighted.shape != (self.phi,):
            raise ValueError(f"weighted digest must have {self.phi} entries")
        object.__setattr__(self, "weighted", weighted)
        # ties go to 0
        object.__setattr__(self, "binary", _readonly(weighted > 0, dtype=np.uint8))


class PriorMode(str, Enum):
    STRUCTURAL = "structural"
    FUNCTIONAL = "functional"
    FLAT = "flat"


@dataclass(frozen=True)
class GammaPriorField:
    """
    Per-pair Gamma(alpha, beta) prior on E_ij.

    Flat mode stands for the prior-free likelihood and is stored as alpha = 1,
    beta = 0 so the estimator's prior terms vanish exactly.
    """
    alpha: np.ndarray
    beta: np.ndarray
    mode: PriorMode
    contributing_layers: List[Tuple[str, float]] = field(default_factory=list)
    beta_large: float = 0.0

    def __post_init__(self):
        alpha = _readonly(self.alpha)
        beta = _readonly(self.beta)
        if alpha.shape != beta.shape or alpha.ndim != 2 or alpha.shape[0] != alpha.shape[1]:
            raise ValueError("alpha and beta must be matching square matrices")
        if np.any(~np.isfinite(alpha)) or np.any(~np.isfinite(beta)):
            raise ValueError("prior parameters must be finite")
        if self.mode is not PriorMode.FLAT and np.any(beta <= 0):
            raise ValueError("beta must be > 0 outside flat mode")
        if np.any(beta < 0):
            raise ValueError("beta must be >= 0")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "contributing_layers", [(str(l), float(m)) for l, m in self.contributing_layers])

    @property
    def n(self) -> int:
        return self.alpha.shape[0]

    def prior_mean(self) -> np.ndarray:
        """alpha / beta; zero in flat mode."""
        if self.mode is PriorMode.FLAT:
            return np.zeros_like(self.alpha)
        return self.alpha / self.beta


@dataclass
class FactorModel:
    """Source vectors S (n x K) and target vectors T (n x K); E = S T^T."""
    S: np.ndarray
    T: np.ndarray
    seed: int = 0

    def __post_init__(self):
        if self.S.shape != self.T.shape or self.S.ndim != 2:
            raise ValueError("S and T must be matching n x K matrices")

    @property
    def K(self) -> int:
        return self.S.shape[1]

    @property
    def n(self) -> int:
        return self.S.shape[0]
