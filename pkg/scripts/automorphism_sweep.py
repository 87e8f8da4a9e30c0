"""Path lengths for every dihedral automorphism over a range of (n, k).

For k not 3 mod 4 the construction is refused; the refusal and both signs
are printed instead.

    python scripts/automorphism_sweep.py --n 2 3 --k 3 7   # (4, 7) takes ~45 s
"""

import argparse
import time

from kneser_homotopy.homotopy import HypothesisViolation, path_to_automorphism, validate_path
from kneser_homotopy.kneser import KneserParams, dihedral_group


def sweep(n, k):
    params = KneserParams(n, k)
    t0 = time.perf_counter()
    try:
        paths = [(d, path_to_automorphism(params, d)) for d in dihedral_group(params)]
    except HypothesisViolation as exc:
        return f"n={n} k={k}: refused ({exc})"
    bad = [d.name for d, p in paths if not validate_path(p)]
    lengths = [len(p) for _, p in paths]
    dt = time.perf_counter() - t0
    return (
        f"n={n} k={k}: {len(paths)} automorphisms, length min {min(lengths)} "
        f"max {max(lengths)} mean {sum(lengths) / len(lengths):.1f}, "
        f"invalid {bad or 'none'}, {dt:.2f}s"
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--k", type=int, nargs="+", default=[1, 2, 3])
    args = ap.parse_args()
    for n in args.n:
        for k in args.k:
            print(sweep(n, k))


if __name__ == "__main__":
    main()
