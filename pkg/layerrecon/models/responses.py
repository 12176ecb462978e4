"""
Pydantic Models for Results
Removal plans, similarity rankings, fit traces and evaluation reports.
"""

import json
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator
from sklearn import metrics

from layerrecon.models.requests import FitMode, SimilarityMethod


class RemovalPlan(BaseModel):
    """Edges hidden from a layer; serializes to {fraction, seed, removed}"""
    fraction: float = Field(..., ge=0.0, le=1.0)
    seed: int
    removed_edges: List[Tuple[int, int]] = Field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "fraction": self.fraction,
                "seed": self.seed,
                "removed": [[int(i), int(j)] for i, j in self.removed_edges],
            },
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "RemovalPlan":
        data = json.loads(text)
        return cls(
            fraction=data["fraction"],
            seed=data["seed"],
            removed_edges=[tuple(pair) for pair in data["removed"]],
        )


class SimilarityEntry(BaseModel):
    layer_id: str
    similarity: float


class SimilarityReport(BaseModel):
    """Non-target layers ranked by similarity to the target, best first"""
    target_id: str
    method: SimilarityMethod
    phi: int
    hash_seeds: int = 1
    entries: List[SimilarityEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_entries(self):
        if any(e.layer_id == self.target_id for e in self.entries):
            raise ValueError("target layer must not rank against itself")
        sims = [e.similarity for e in self.entries]
        if any(a < b for a, b in zip(sims, sims[1:])):
            raise ValueError("entries must be sorted by descending similarity")
        return self

    def top(self, top_l: int) -> List[SimilarityEntry]:
        if top_l < 1:
            raise ValueError(f"top_l must be >= 1, got {top_l}")
        if top_l > len(self.entries):
            raise ValueError(
                f"top_l={top_l} exceeds the {len(self.entries)} available comparison layers"
            )
        return self.entries[:top_l]


class FitTrace(BaseModel):
    """Log posterior after every iteration of a fit"""
    log_posterior: List[float] = Field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    degenerate_pairs: int = Field(default=0, description="Pairs whose q fell back to uniform")

    @property
    def final(self) -> Optional[float]:
        return self.log_posterior[-1] if self.log_posterior else None

    def is_monotone(self, slack: float = 1e-9) -> bool:
        lp = self.log_posterior
        return all(b >= a - slack for a, b in zip(lp, lp[1:]))


class EvalReport(BaseModel):
    """
    Outcome of one experiment cell. `auc` is always the area under `roc`; for a
    multi-run cell both belong to the first successful run and `mean_auc`
    averages `per_run_auc`. A single scoring has mean_auc == auc.
    """
    target: str = ""
    auc: float = Field(..., ge=0.0, le=1.0)
    mean_auc: Optional[float] = Field(default=None, ge=0.0, le=1.0)
    roc: List[Tuple[float, float]] = Field(default_factory=list)
    removal_fraction: float = 0.0
    mode: FitMode = FitMode.MAP
    K: int = 0
    top_l: int = 0
    seed: int = 0
    runs: int = 1
    method: SimilarityMethod = SimilarityMethod.HAMMING
    per_run_auc: List[float] = Field(default_factory=list)
    per_run_seeds: List[int] = Field(default_factory=list)
    failed_runs: List[int] = Field(default_factory=list)
    extrapolated: bool = False
    positives: int = 0
    negatives: int = 0

    @model_validator(mode="after")
    def _check_roc(self):
        if self.roc:
            if tuple(self.roc[0]) != (0.0, 0.0) or tuple(self.roc[-1]) != (1.0, 1.0):
                raise ValueError("roc must start at (0, 0) and end at (1, 1)")
            fpr = [p[0] for p in self.roc]
            tpr = [p[1] for p in self.roc]
            if any(a > b for a, b in zip(fpr, fpr[1:])) or any(a > b for a, b in zip(tpr, tpr[1:])):
                raise ValueError("roc coordinates must be non-decreasing")
            area = float(metrics.auc(fpr, tpr))
            if abs(area - self.auc) > 1e-9:
                raise ValueError(f"auc={self.auc} differs from the area under roc ({area})")
        if self.mean_auc is None:
            self.mean_auc = self.auc
        return self
