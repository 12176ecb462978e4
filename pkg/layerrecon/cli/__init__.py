# CLI Package
from layerrecon.cli.router import build_parser, dispatch  # noqa: F401
