"""
Centralized Configuration for layerrecon
All defaults loaded from environment variables with validation
"""

import os
from typing import List
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library and CLI defaults, overridable from the environment or a .env file"""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # ==========================================================================
    # Application Settings
    # ==========================================================================
    APP_NAME: str = "layerrecon"
    APP_VERSION: str = "1.0.0"
    DEBUG: bool = Field(default=False, description="Enable debug logging")

    # ==========================================================================
    # Output & Execution
    # ==========================================================================
    LAYERRECON_OUT_DIR: str = Field(
        default="./results",
        description="Default directory for CSV outputs and run manifests"
    )
    JOBS: int = Field(default=1, ge=1, description="Default cap on concurrent sweep workers")

    # ==========================================================================
    # Model Defaults
    # ==========================================================================
    DEFAULT_DIM: int = Field(default=50, ge=1, description="Node vector dimension K")
    DEFAULT_PHI: int = Field(default=512, description="SimHash digest size in bits")
    DEFAULT_TOP_L: int = Field(default=5, ge=1, description="Similar layers feeding the prior")
    DEFAULT_RUNS: int = Field(default=10, ge=1, description="Cross-validation runs per cell")
    DEFAULT_SEED: int = Field(default=0, description="Base seed for removal and initialization")
    DEFAULT_FRACTIONS: str = Field(
        default="0.2,0.4,0.6,0.8,1.0",
        description="Removal fractions swept by default (comma-separated)"
    )
    EXTRAPOLATION_FRACTION: float = Field(
        default=0.8,
        description="Removal fraction whose ranking stands in for 100% removal"
    )

    # ==========================================================================
    # SimHash
    # ==========================================================================
    HASH_SEED: int = Field(
        default=0x5EED_1A7E,
        description="Seed of the 64-bit token hash; fixed so digests are reproducible"
    )

    # ==========================================================================
    # Prior & Estimator
    # ==========================================================================
    BETA_LARGE: float = Field(default=1e6, gt=0, description="Rate used when no similar layer has the pair")
    FIT_MAX_ITER: int = Field(default=2000, ge=1)
    FIT_REL_TOL: float = Field(default=1e-8, gt=0)
    DENOMINATOR_FLOOR: float = Field(default=1e-12, gt=0)

    # ==========================================================================
    # Centrality
    # ==========================================================================
    CENTRALITY_TOL: float = Field(default=1e-10, gt=0)
    CENTRALITY_MAX_ITER: int = Field(default=10_000, ge=1)

    @property
    def default_fractions_list(self) -> List[float]:
        """Parse DEFAULT_FRACTIONS into a list of floats"""
        return [float(f) for f in self.DEFAULT_FRACTIONS.split(",") if f.strip()]

    @property
    def out_dir_path(self) -> str:
        """Get expanded output directory"""
        return os.path.expanduser(self.LAYERRECON_OUT_DIR)

    def validate_critical(self) -> List[str]:
        """Check settings at startup. Returns list of warnings."""
        warnings = []
        phi = self.DEFAULT_PHI
        if phi < 16 or phi > 4096 or phi & (phi - 1):
            warnings.append(f"DEFAULT_PHI={phi} is not a power of two in [16, 4096]")
        if any(not 0.0 <= f <= 1.0 for f in self.default_fractions_list):
            warnings.append("DEFAULT_FRACTIONS contains values outside [0, 1]")
        if not 0.0 < self.EXTRAPOLATION_FRACTION < 1.0:
            warnings.append("EXTRAPOLATION_FRACTION should lie strictly between 0 and 1")
        out_dir = self.out_dir_path
        if os.path.exists(out_dir) and not os.access(out_dir, os.W_OK):
            warnings.append(f"LAYERRECON_OUT_DIR={out_dir} is not writable")
        return warnings


@lru_cache()
def get_settings() -> Settings:
    """
    Get cached settings instance.
    Using lru_cache ensures settings are only loaded once.
    """
    return Settings()


# Convenience alias
settings = get_settings()
