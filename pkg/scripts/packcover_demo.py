"""Random orthant packing/covering instance: duality, cost sparsification, sparse cover."""

import argparse

import numpy as np

from conesparse.bss import bss_sparsify
from conesparse.cone_core import make_instance, weighted_sum
from conesparse.programs import duality_gap, make_pack_cover, pack_cost_sandwich, sparse_cover_solution


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=4)
    ap.add_argument("--k", type=int, default=40)
    ap.add_argument("--parts", type=int, default=30)
    ap.add_argument("--eps", type=float, default=0.5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    parts = rng.uniform(0, 1, size=(args.parts, args.d))
    a = rng.uniform(0, 1, size=(args.k, args.d))
    inst = make_pack_cover(a, rng.uniform(0.5, 2.0, args.k), parts.sum(axis=0))

    cover, pack, gap = duality_gap(inst)
    print(f"cover {cover:.6f}  pack {pack:.6f}  relative gap {gap:.2e}")

    sp = make_instance(inst.cone, parts, args.eps)
    res = bss_sparsify(sp)
    rep = pack_cost_sandwich(inst, weighted_sum(sp, res.support, res.weights), args.eps)
    print(f"cost sparsified to {len(res.support)}/{args.parts} parts: pack' {rep.pack_prime:.6f} "
          f"in [{(1 - args.eps) * rep.pack:.6f}, {(1 + args.eps) * rep.pack:.6f}]")

    _, sc = sparse_cover_solution(inst, args.eps)
    print(f"sparse cover: support {sc.support} (bound {sc.bound}), <b,y'> {sc.value_prime:.6f}, "
          f"feasibility slack {sc.feasibility_slack:.3e}, {'pass' if sc.passed else 'FAIL'}")


if __name__ == "__main__":
    main()
