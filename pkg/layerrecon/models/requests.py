"""
Pydantic Models for Run Inputs
Fit configuration, sweep grids and the resolved CLI run configuration.
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from layerrecon.config import settings


class FitMode(str, Enum):
    MAP = "map"
    MLE = "mle"


class SimilarityMethod(str, Enum):
    HAMMING = "hamming"
    PEARSON = "pearson"


class EvalPolicy(str, Enum):
    ALL_UNOBSERVED = "all-unobserved"


class SimilarityRandomization(str, Enum):
    """Which knob the run index of a similarity sweep varies."""
    REMOVAL = "removal"
    HASH = "hash"
    BOTH = "both"


def validate_phi(phi: int) -> int:
    """Digest size must be a power of two in [16, 4096]."""
    if phi < 16 or phi > 4096 or phi & (phi - 1):
        raise ValueError(f"phi must be a power of two between 16 and 4096, got {phi}")
    return phi


def validate_fraction(fraction: float) -> float:
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    return fraction


class FitConfig(BaseModel):
    """Configuration of one factorization fit"""
    model_config = {"frozen": True}

    K: int = Field(default=settings.DEFAULT_DIM, ge=1, description="Node vector dimension")
    max_iter: int = Field(default=settings.FIT_MAX_ITER, ge=1)
    rel_tol: float = Field(default=settings.FIT_REL_TOL, gt=0)
    seed: int = Field(default=settings.DEFAULT_SEED)
    mode: FitMode = FitMode.MAP
    tie_vectors: bool = Field(default=False, description="Learn S = T on undirected targets")


class SweepGrid(BaseModel):
    """Axes of an experiment sweep"""
    fractions: List[float] = Field(default_factory=lambda: settings.default_fractions_list, min_length=1)
    dims: List[int] = Field(default_factory=lambda: [settings.DEFAULT_DIM], min_length=1)
    top_ls: List[int] = Field(default_factory=lambda: [settings.DEFAULT_TOP_L], min_length=1)
    phis: List[int] = Field(default_factory=lambda: [settings.DEFAULT_PHI], min_length=1)
    runs: int = Field(default=settings.DEFAULT_RUNS, ge=1)

    @field_validator("fractions")
    @classmethod
    def _check_fractions(cls, v: List[float]) -> List[float]:
        return [validate_fraction(f) for f in v]

    @field_validator("dims", "top_ls")
    @classmethod
    def _check_positive(cls, v: List[int]) -> List[int]:
        if any(x < 1 for x in v):
            raise ValueError("values must be >= 1")
        return v

    @field_validator("phis")
    @classmethod
    def _check_phis(cls, v: List[int]) -> List[int]:
        return [validate_phi(p) for p in v]


class RunConfig(BaseModel):
    """Fully resolved CLI invocation, recorded verbatim in the run manifest"""
    subcommand: str
    network_path: Optional[str] = None
    target_layer: Optional[str] = None
    mode: FitMode = FitMode.MAP
    K: int = Field(default=settings.DEFAULT_DIM, ge=1)
    phi: int = settings.DEFAULT_PHI
    top_l: int = Field(default=settings.DEFAULT_TOP_L, ge=1)
    fractions: List[float] = Field(default_factory=lambda: settings.default_fractions_list)
    runs: int = Field(default=settings.DEFAULT_RUNS, ge=1)
    seed: int = settings.DEFAULT_SEED
    out_dir: str = Field(default_factory=lambda: settings.out_dir_path)
    method: SimilarityMethod = SimilarityMethod.HAMMING
    directed: bool = False
    binarize: bool = True
    jobs: int = Field(default=settings.JOBS, ge=1)
    extra: dict = Field(default_factory=dict, description="Subcommand-specific flags")

    @field_validator("phi")
    @classmethod
    def _check_phi(cls, v: int) -> int:
        return validate_phi(v)

    @field_validator("fractions")
    @classmethod
    def _check_fractions(cls, v: List[float]) -> List[float]:
        return [validate_fraction(f) for f in v]
