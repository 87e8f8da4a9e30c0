"""Command-line entry point.

Exit codes: 0 success / valid, 1 invalid certificate, 2 input error,
3 hypothesis violation (e.g. ``k`` not 3 mod 4).
"""

from __future__ import annotations

import argparse
import itertools
import re
import sys
from collections import Counter
from pathlib import Path

from .graph_core import (
    Graph,
    GraphError,
    Mapping,
    automorphisms_exact,
    chromatic_number_exact,
    components_by_flips,
    graph_from_text,
    graph_to_text,
    make_complete,
    mapping_from_text,
    mixtures_all_homomorphisms,
    mixtures_all_homomorphisms_brute,
    proper_colourings,
)
from .homotopy import (
    HypothesisViolation,
    check_entries,
    from_cycles,
    hompath_from_text,
    hompath_to_text,
    path_for_even,
    path_to_automorphism,
    restrict_to_stable,
    sign,
    validate_path,
)
from .kneser import DihedralElement, KneserParams, parse_graph_name, set_label
from .witness import (
    WitnessError,
    atomic_write,
    build_sg_witness,
    certify_connectivity,
    load_bundle,
    save_bundle,
    verify_bundle,
)

EXIT_OK, EXIT_INVALID, EXIT_INPUT, EXIT_HYPOTHESIS = 0, 1, 2, 3


class InputError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write(Path(out), text)
    else:
        sys.stdout.write(text)


def _load_graph(arg: str) -> Graph:
    """A graph file, or a name such as ``SG(2,3)``."""
    p = Path(arg)
    if p.is_file():
        try:
            return graph_from_text(p.read_text())
        except GraphError as exc:
            raise InputError(f"{arg}: {exc}") from None
    try:
        return parse_graph_name(arg)[0]
    except GraphError as exc:
        raise InputError(f"{arg}: neither a readable file nor a graph name ({exc})") from None


def _params(args) -> KneserParams:
    if args.n is None or args.k is None:
        raise InputError("--n and --k are required")
    try:
        return KneserParams(args.n, args.k)
    except GraphError as exc:
        raise InputError(str(exc)) from None


# --------------------------------------------------------------------------


def cmd_graph(args) -> int:
    try:
        G, params, _ = parse_graph_name(args.spec)
    except GraphError as exc:
        raise InputError(str(exc)) from None
    _emit(graph_to_text(G, set_label if params else str), args.out)
    return EXIT_OK


def parse_target(text: str, params: KneserParams):
    """``tau``, ``rho``, ``dihedral A R``, cycles ``(0 1 2)(3 4 5)`` or ``perm 1 2 0 ...``."""
    t = text.strip()
    size = params.palette
    if t == "tau":
        return DihedralElement.tau(params)
    if t == "rho":
        return DihedralElement.rho(params)
    m = re.fullmatch(r"dihedral\s+(-?\d+)\s+([01])", t)
    if m:
        return DihedralElement(params, int(m.group(1)), m.group(2) == "1")
    if t.startswith("perm"):
        perm = tuple(int(x) for x in t.split()[1:])
        if sorted(perm) != list(range(size)):
            raise InputError(f"{perm} is not a permutation of 0..{size - 1}")
        return perm
    if t.startswith("("):
        cycles = [tuple(int(x) for x in c.split()) for c in re.findall(r"\(([^()]*)\)", t)]
        if re.sub(r"\([^()]*\)", "", t).strip() or any(
            x >= size or x < 0 for c in cycles for x in c
        ):
            raise InputError(f"bad cycle notation {text!r} for palette {size}")
        try:
            return from_cycles([c for c in cycles if c], size)
        except GraphError as exc:
            raise InputError(str(exc)) from None
    raise InputError(f"cannot parse target {text!r}")


def cmd_path(args) -> int:
    params = _params(args)
    target = parse_target(args.target, params)
    if isinstance(target, DihedralElement):
        if args.kind != "stable":
            raise InputError("automorphism targets are paths on the stable graph")
        p = path_to_automorphism(params, target)
    else:
        if sign(target) != 1:
            raise HypothesisViolation(f"target permutation is odd (sign {sign(target):+d})", sign=-1)
        p = path_for_even(params, target)
        if args.kind == "stable":
            p = restrict_to_stable(p)
    verdict = validate_path(p)
    _emit(hompath_to_text(p, kind=args.kind), args.out)
    if not verdict:
        print(f"internal validation failed: {verdict.describe()}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


def cmd_check(args) -> int:
    G = _load_graph(args.graph)
    try:
        hp = hompath_from_text(Path(args.path).read_text())
    except OSError as exc:
        raise InputError(str(exc)) from None
    except GraphError as exc:
        raise InputError(f"{args.path}: {exc}") from None
    if hp.kind == "witness":
        if not args.target:
            raise InputError("witness certificates need --target G.graph")
        target = _load_graph(args.target)
        if target.vertex_count != hp.palette:
            raise InputError(f"palette mismatch: header {hp.palette}, target has {target.vertex_count}")
    else:
        if hp.palette != hp.k + 2:
            raise InputError(f"palette mismatch: header palette {hp.palette} != k+2 = {hp.k + 2}")
        target = make_complete(hp.palette)
    widths = {len(e) for e in hp.entries}
    if widths != {G.vertex_count}:
        raise InputError(f"entry width {sorted(widths)} does not match {G.vertex_count} vertices")
    verdict = check_entries(G, target, hp.entries)
    if verdict:
        print(f"valid: {len(hp.entries)} entries")
        return EXIT_OK
    print("invalid")
    print(verdict.describe(), file=sys.stderr)
    return EXIT_INVALID


def cmd_witness(args) -> int:
    if args.action == "build":
        params = _params(args)
        if not args.out:
            raise InputError("--out DIR is required")
        bundle = build_sg_witness(params.n, params.k)
        save_bundle(bundle, Path(args.out))
        verdict = verify_bundle(bundle)
        print(
            f"bundle: |V(X)|={bundle.X.graph.vertex_count} |V(G)|={bundle.G.vertex_count} "
            f"L={bundle.L} certificates={len(bundle.certificates)}"
        )
        return EXIT_OK if verdict else EXIT_INVALID
    if not args.dir:
        raise InputError("bundle directory required")
    try:
        bundle = load_bundle(Path(args.dir))
    except (GraphError, KeyError, ValueError, IndexError) as exc:
        raise InputError(f"cannot load bundle: {exc}") from None
    if args.action == "verify":
        verdict = verify_bundle(bundle)
        if verdict:
            print(f"bundle ok: {len(bundle.certificates)} certificates")
            return EXIT_OK
        print("bundle invalid")
        for f in verdict.failures:
            print(f, file=sys.stderr)
        return EXIT_INVALID
    # certify
    if not args.map:
        raise InputError("certify needs a mapping file for g")
    try:
        g = mapping_from_text(Path(args.map).read_text())
    except (OSError, GraphError) as exc:
        raise InputError(str(exc)) from None
    p = certify_connectivity(bundle, g)
    n, k = bundle.meta.get("n", 0), bundle.meta.get("k", bundle.palette - 2)
    _emit(hompath_to_text(p, n, k, "witness"), args.out)
    return EXIT_OK if validate_path(p) else EXIT_INVALID


def cmd_oracle(args) -> int:
    G = _load_graph(args.graph)
    if args.task == "chromatic":
        print(f"chromatic {chromatic_number_exact(G, force=args.force)}")
    elif args.task == "automorphisms":
        autos = automorphisms_exact(G, force=args.force)
        print(f"automorphisms {len(autos)}")
        for a in autos:
            print(" ".join(map(str, a)))
    elif args.task == "flip-components":
        if args.palette is None:
            raise InputError("--palette is required")
        remaining = dict.fromkeys(proper_colourings(G, args.palette))
        sizes = []
        while remaining:
            start = next(iter(remaining))
            rep = components_by_flips(G, args.palette, start, "single-flip", args.budget)
            if rep.truncated:
                print(f"truncated after {rep.size} colourings")
                return EXIT_OK
            sizes.append(rep.size)
            for f in rep.visited:
                remaining.pop(f, None)
        print(f"colourings {sum(sizes)}")
        print(f"components {len(sizes)}")
        for size, count in sorted(Counter(sizes).items()):
            print(f"size {size} x{count}")
    elif args.task == "mixtures":
        if args.palette is None:
            raise InputError("--palette is required")
        if G.vertex_count > 12 and not args.force:
            raise InputError("mixture enumeration limited to 12 vertices without --force")
        K = make_complete(args.palette)
        cols = list(proper_colourings(G, args.palette))
        agree = 0
        pairs = 0
        for f, g in itertools.product(cols, repeat=2):
            a, b = Mapping(G, K, f), Mapping(G, K, g)
            pairs += 1
            agree += mixtures_all_homomorphisms(a, b) == mixtures_all_homomorphisms_brute(a, b)
        print(f"pairs {pairs} agree {agree}")
        return EXIT_OK if agree == pairs else EXIT_INVALID
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="kneser-homotopy", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph", help="emit SG(n,k), SSG(n,k), KG(n,k), K(r) or C(r)")
    p.add_argument("spec")
    p.add_argument("--out")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("path", help="synthesize a certified path of colourings")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument(
        "--target",
        required=True,
        help='tau, rho, "dihedral A R", a colour cycle like "(0 1 2)", or "perm p0 p1 ..."',
    )
    p.add_argument("--kind", choices=("stable", "semi-stable"), default="stable")
    p.add_argument("--out")
    p.set_defaults(func=cmd_path)

    p = sub.add_parser("check", help="re-verify a path file against a graph")
    p.add_argument("graph")
    p.add_argument("path")
    p.add_argument("--target", help="target graph for witness certificates")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("witness", help="build, verify or certify with a witness bundle")
    p.add_argument("action", choices=("build", "verify", "certify"))
    p.add_argument("dir", nargs="?", help="bundle directory (verify, certify)")
    p.add_argument("map", nargs="?", help="file holding g: T -> G (certify)")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("oracle", help="brute-force cross-checks")
    p.add_argument("task", choices=("chromatic", "automorphisms", "flip-components", "mixtures"))
    p.add_argument("graph")
    p.add_argument("--palette", type=int, help="number of colours (flip-components, mixtures)")
    p.add_argument("--budget", type=int, default=1_000_000, help="max colourings visited")
    p.add_argument("--force", action="store_true", help="lift the 64-vertex search guard")
    p.set_defaults(func=cmd_oracle)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except HypothesisViolation as exc:
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except (InputError, WitnessError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
