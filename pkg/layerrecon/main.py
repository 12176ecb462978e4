"""
layerrecon
Command-Line Entry Point
"""

import sys

from layerrecon.cli.router import dispatch


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


# =============================================================================
# Run CLI
# =============================================================================

if __name__ == "__main__":
    main()
