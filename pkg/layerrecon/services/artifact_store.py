"""
Artifact Store
Writes every run artifact (CSV tables, manifests, removal plans, priors,
networks) under one output directory.
"""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import pandas as pd

from layerrecon import __version__
from layerrecon.logger import get_logger
from layerrecon.models.factors import GammaPriorField
from layerrecon.models.network import MultilayerNetwork
from layerrecon.models.requests import RunConfig
from layerrecon.models.responses import RemovalPlan
from layerrecon.services.graph_core import write_multiplex
from layerrecon.services.prior import save_prior

logger = get_logger("artifact_store")

HASH_CHUNK = 1 << 20


def sha256_file(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(HASH_CHUNK), b""):
            digest.update(chunk)
    return digest.hexdigest()


class ArtifactStore:
    """
    Output directory of one CLI invocation.

    Nothing written here carries a wall-clock timestamp, so identical runs
    produce identical bytes.
    """

    def __init__(self, out_dir: str):
        """
        Args:
            out_dir: Directory for all artifacts; created if missing
        """
        self.out_dir = Path(out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)
        self.written: list = []

    def path(self, name: str) -> Path:
        return self.out_dir / name

    def _track(self, path: Path) -> str:
        self.written.append(path.name)
        logger.info(f"Wrote {path}")
        return str(path)

    def write_csv(self, name: str, frame: pd.DataFrame) -> str:
        path = self.path(name)
        frame.to_csv(path, index=False, lineterminator="\n")
        return self._track(path)

    def write_json(self, name: str, payload: Dict[str, Any]) -> str:
        path = self.path(name)
        path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n", encoding="utf-8")
        return self._track(path)

    def write_removal_plan(self, name: str, plan: RemovalPlan) -> str:
        path = self.path(name)
        path.write_text(plan.to_json() + "\n", encoding="utf-8")
        return self._track(path)

    def write_prior(self, name: str, field: GammaPriorField) -> str:
        path = self.path(name if name.endswith(".npz") else f"{name}.npz")
        _, sidecar = save_prior(field, str(path))
        self._track(Path(sidecar))
        return self._track(path)

    def write_network(self, name: str, network: MultilayerNetwork) -> str:
        path = self.path(name)
        write_multiplex(network, str(path))
        return self._track(path)

    def write_manifest(
        self,
        config: RunConfig,
        inputs: Iterable[str] = (),
        seeds: Optional[Iterable[int]] = None,
        results: Optional[Dict[str, Any]] = None,
    ) -> str:
        """
        Record what is needed to reproduce the invocation.

        Args:
            config: Fully resolved run configuration
            inputs: Input files, hashed with SHA-256
            seeds: Seeds actually used
            results: Subcommand-specific summary values
        """
        manifest = {
            "version": __version__,
            "subcommand": config.subcommand,
            "config": config.model_dump(mode="json"),
            "inputs": {str(p): sha256_file(str(p)) for p in inputs},
            "seeds": list(seeds) if seeds is not None else [],
            "outputs": sorted(self.written),
            "results": results or {},
        }
        return self.write_json(f"manifest_{config.subcommand}.json", manifest)
