"""Build the witness bundle for SG(n,k), verify it and time the certifiers.

    python scripts/witness_stats.py --n 2 --k 3 --samples 20
"""

import argparse
import random
import time

from kneser_homotopy.graph_core import chromatic_number_exact
from kneser_homotopy.homotopy import twist
from kneser_homotopy.witness import (
    build_sg_witness,
    certify_connectivity,
    chromatic_sandwich,
    tree_map,
    verify_bundle,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--k", type=int, default=3)
    ap.add_argument("--samples", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    B = build_sg_witness(args.n, args.k)
    t_build = time.perf_counter() - t0
    print(f"T: {B.T.vertex_count} vertices, {B.T.edge_count} edges, palette {B.palette}")
    print(f"X: {len(B.automorphisms)} branches of length {B.L}, {B.X.graph.vertex_count} vertices")
    print(f"G: {B.G.vertex_count} vertices, {B.G.edge_count} edges  (build {t_build:.2f}s)")
    print("twist lengths:", sorted(len(t) for t in B.twists))

    t0 = time.perf_counter()
    v = verify_bundle(B)
    print(f"verify_bundle: {'ok' if v else v.failures} ({time.perf_counter() - t0:.2f}s)")
    lo, hi = chromatic_sandwich(B, chromatic_number_exact(B.T))
    print(f"chi(G) between {lo} and {hi}")

    rnd = random.Random(args.seed)
    lengths = []
    t0 = time.perf_counter()
    for i in range(args.samples):
        gamma = rnd.choice(B.automorphisms)
        if i % 2:
            g = twist(B.j, gamma)
        else:
            b, s = rnd.randrange(len(B.automorphisms)), rnd.randrange(B.L)
            g = tree_map(B, [(b, s + rnd.randint(0, 1)) for _ in range(B.T.vertex_count)], gamma)
        lengths.append(len(certify_connectivity(B, g)))
    dt = time.perf_counter() - t0
    print(f"certify_connectivity: {args.samples} maps, lengths {min(lengths)}..{max(lengths)}, {dt / args.samples * 1000:.0f} ms each")


if __name__ == "__main__":
    main()
