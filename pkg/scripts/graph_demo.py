"""Sparsify a complete or random graph and report the whitened spectrum."""

import argparse

import numpy as np

from conesparse.graph import complete_graph, edge_bound, random_graph, sparsify_graph, whitened_spectrum


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--eps", type=float, default=0.6)
    ap.add_argument("--random", type=float, default=None, help="edge probability; complete graph if omitted")
    ap.add_argument("--engine", choices=("bss", "fw"), default="bss")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if args.random is None:
        g = complete_graph(args.n)
    else:
        g = random_graph(args.n, args.random, np.random.default_rng(args.seed))
    h, cert, res = sparsify_graph(g, args.eps, args.engine)
    ev = whitened_spectrum(g, h)
    print(f"edges {len(g.edges)} -> {len(h.edges)} (bss bound {edge_bound(args.n, args.eps)})")
    print(f"whitened spectrum [{ev.min():.4f}, {ev.max():.4f}], target [{1 - args.eps}, {1 + args.eps}]")
    print(f"certificate {'pass' if cert.passed else 'FAIL'}, achieved eps {cert.achieved_eps:.4f}")


if __name__ == "__main__":
    main()
