"""
Write the synthetic benchmark multiplex as a canonical edge list.
- 1 target layer plus similar layers from one shared factor model
- independent layers from unrelated factor models

Usage:
    python scripts/make_synthetic_multiplex.py synthetic.edges [--n 100] [--seed 0]
"""

import argparse
import sys
import os

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from layerrecon.services.graph_core import edge_count, write_multiplex
from layerrecon.services.synthetic import synthetic_multiplex


def main():
    parser = argparse.ArgumentParser(description="Generate the synthetic benchmark multiplex")
    parser.add_argument("out", help="Output edge-list path")
    parser.add_argument("--n", type=int, default=100, help="Number of nodes")
    parser.add_argument("--similar", type=int, default=3)
    parser.add_argument("--independent", type=int, default=2)
    parser.add_argument("--dim", type=int, default=5, help="Communities in each factor model")
    parser.add_argument("--density", type=float, default=0.1)
    parser.add_argument("--noise", type=float, default=0.1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    network = synthetic_multiplex(
        n=args.n,
        similar=args.similar,
        independent=args.independent,
        dim=args.dim,
        density=args.density,
        noise=args.noise,
        seed=args.seed,
    )
    write_multiplex(network, args.out)

    print(f"Wrote {args.out}: {network.n} nodes")
    for layer in network.layers:
        print(f"  {layer.layer_id:<14} {edge_count(layer)} edges")


if __name__ == "__main__":
    main()
