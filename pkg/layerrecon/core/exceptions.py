"""
Domain Exceptions
Every error raised on purpose by layerrecon derives from LayerReconError.
"""

from typing import Optional


class LayerReconError(Exception):
    """Base class for layerrecon failures."""


class ParseError(LayerReconError, ValueError):
    """Malformed edge-list input."""

    def __init__(self, message: str, line_number: Optional[int] = None, path: Optional[str] = None):
        self.line_number = line_number
        self.path = path
        where = f"{path}:" if path else "line "
        prefix = f"{where}{line_number}: " if line_number is not None else ""
        super().__init__(f"{prefix}{message}")


class RegistryMismatchError(LayerReconError, ValueError):
    """Two structures disagree on the node registry."""


class NoComparisonLayersError(LayerReconError, ValueError):
    """Ranking requested on a network with a single layer."""

    def __init__(self, target: str):
        super().__init__(f"no comparison layers: network has only layer '{target}'")


class UndefinedCorrelationError(LayerReconError, ValueError):
    """Pearson correlation on a constant weighted digest."""


class DegenerateEvaluationError(LayerReconError, ValueError):
    """Evaluation set without positives or without negatives."""

    def __init__(self, positives: int, negatives: int):
        self.positives = positives
        self.negatives = negatives
        super().__init__(
            f"degenerate evaluation set: {positives} positives, {negatives} negatives"
        )


class NumericalFailureError(LayerReconError, RuntimeError):
    """Non-finite values appeared while fitting."""

    def __init__(self, iteration: int, what: str = "factors"):
        self.iteration = iteration
        super().__init__(f"non-finite {what} at iteration {iteration}")


class UsageError(ValueError):
    """Invocation asks for something its inputs cannot provide (unknown layer, too many prior layers)."""
