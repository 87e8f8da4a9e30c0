"""Witness graph G with chi(G) = chi(T) and Hom(T, G) connected.

Given a colouring ``c`` of ``T`` and, for each automorphism ``gamma``, a path
of colourings from ``c`` to ``c . gamma``, glue the paths into a reflexive
star ``X`` with hub ``u``, uncurry to ``F: X x T -> K``, and identify
``(v_gamma, t)`` with ``(u, gamma(t))``.  The quotient ``G`` inherits the
colouring ``fbar`` and receives ``T`` at the hub via ``j``.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

from .graph_core import (
    Graph,
    GraphError,
    VertexPartition,
    automorphisms_exact,
    graph_from_text,
    graph_to_text,
    make_complete,
    maps_adjacent,
    mapping_from_text,
    mapping_to_text,
    product,
    quotient,
    uncurry,
)
from .homotopy import (
    HomPath,
    check_entries,
    collapse,
    compose,
    hompath_from_text,
    hompath_to_text,
    inverse,
    twist,
)


class WitnessError(GraphError):
    """Inputs to the witness construction are inconsistent."""


class NotAutomorphismError(WitnessError):
    """The second coordinate of a lifted homomorphism is not bijective."""


class SizingError(WitnessError):
    """Some circle of the bouquet is fully covered; the branch length is too short."""


@dataclass(frozen=True, eq=False)
class StarGraph:
    """Reflexive star: hub ``0`` and one branch of ``length`` edges per automorphism.

    Branch ``b`` visits ``0, 1 + b*L, 2 + b*L, ..., L + b*L``; the last of
    these is ``v_gamma``.
    """

    graph: Graph
    branch_count: int
    length: int

    @classmethod
    def build(cls, branch_count: int, length: int) -> StarGraph:
        if length < 1:
            raise WitnessError("branches need at least one edge")
        n = 1 + branch_count * length
        edges = [(v, v) for v in range(n)]
        for b in range(branch_count):
            path = cls._branch(b, length)
            edges += list(zip(path, path[1:]))
        return cls(Graph.from_edges(n, edges), branch_count, length)

    @staticmethod
    def _branch(b: int, length: int) -> list[int]:
        return [0] + [1 + b * length + s for s in range(length)]

    hub = 0

    def branch(self, b: int) -> list[int]:
        return self._branch(b, self.length)

    def tip(self, b: int) -> int:
        return self.branch(b)[-1]

    def position(self, x: int) -> tuple[int | None, int]:
        """``(branch, step)`` of a vertex; the hub is ``(None, 0)``."""
        if x == 0:
            return None, 0
        b, s = divmod(x - 1, self.length)
        return b, s + 1


@dataclass(frozen=True, eq=False)
class WitnessBundle:
    T: Graph
    palette: int
    base: tuple[int, ...]
    automorphisms: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]
    twists: tuple[HomPath, ...]
    X: StarGraph
    F: tuple[int, ...]
    partition: VertexPartition
    G: Graph
    q: tuple[int, ...]
    j: tuple[int, ...]
    fbar: tuple[int, ...]
    certificates: tuple[HomPath, ...] = field(default=())
    meta: dict = field(default_factory=dict)

    @property
    def L(self) -> int:
        return self.X.length

    def pair(self, x: int, t: int) -> int:
        """Index of ``(x, t)`` in ``X x T``."""
        return x * self.T.vertex_count + t

    def automorphism_index(self, gamma: Sequence[int]) -> int:
        try:
            return self.automorphisms.index(tuple(gamma))
        except ValueError:
            raise WitnessError("automorphism not covered by the bundle") from None


def _check_group(T: Graph, autos: Sequence[tuple[int, ...]]) -> None:
    n = T.vertex_count
    ident = tuple(range(n))
    if ident not in autos:
        raise WitnessError("identity automorphism missing")
    if len(set(autos)) != len(autos):
        raise WitnessError("automorphisms listed twice")
    for a in autos:
        if sorted(a) != list(range(n)) or not maps_adjacent(T, T, a, a):
            raise WitnessError(f"{a} is not an automorphism")
    s = set(autos)
    for a in autos:
        for b in autos:
            if compose(a, b) not in s:
                raise WitnessError("automorphisms do not form a group; one is missing")


def build_witness(
    T: Graph,
    palette: int,
    base: Sequence[int],
    twists: dict[tuple[int, ...], HomPath],
    names: dict[tuple[int, ...], str] | None = None,
    check_complete: bool = True,
    meta: dict | None = None,
) -> WitnessBundle:
    """Assemble the witness bundle from one twist path per automorphism.

    ``twists[gamma]`` must run from ``base`` to ``base . gamma``.  With
    ``check_complete`` the automorphism group of ``T`` is recomputed by
    search and compared against the keys.
    """
    base = tuple(base)
    K = make_complete(palette)
    if not maps_adjacent(T, K, base, base):
        raise WitnessError("base colouring is not proper")
    autos = tuple(sorted(twists))
    _check_group(T, autos)
    if check_complete and set(automorphisms_exact(T)) != set(autos):
        raise WitnessError("twists do not cover every automorphism of T")
    for gamma in autos:
        p = twists[gamma]
        verdict = check_entries(T, K, p.entries)
        if not verdict:
            raise WitnessError(f"twist for {gamma} invalid: {verdict.describe()}")
        if p.first != base or p.last != twist(base, gamma):
            raise WitnessError(f"twist for {gamma} has wrong endpoints")

    nt = T.vertex_count
    L = max(nt + 2, max(len(twists[g].entries) - 1 for g in autos))
    X = StarGraph.build(len(autos), L)

    # colouring of X by branch: pad each twist with its final entry
    family: list[tuple[int, ...]] = [base] * X.graph.vertex_count
    for b, gamma in enumerate(autos):
        ent = list(twists[gamma].entries)
        ent += [ent[-1]] * (L + 1 - len(ent))
        for s, x in enumerate(X.branch(b)):
            family[x] = ent[s]
    F = uncurry(family, X.graph, T, K)

    pairs = []
    for b, gamma in enumerate(autos):
        v = X.tip(b)
        pairs += [(v * nt + t, 0 * nt + gamma[t]) for t in range(nt)]
    P = VertexPartition.from_pairs(X.graph.vertex_count * nt, pairs)
    G, q = quotient(F.source, P)

    fbar = [-1] * G.vertex_count
    for x, cls in enumerate(q.values):
        if fbar[cls] == -1:
            fbar[cls] = F.values[x]
        elif fbar[cls] != F.values[x]:
            raise WitnessError(f"colouring does not descend to class {cls}")
    j = tuple(q.values[t] for t in range(nt))

    name_of = names or {}
    bundle = WitnessBundle(
        T=T,
        palette=palette,
        base=base,
        automorphisms=autos,
        names=tuple(name_of.get(g, f"g{i}") for i, g in enumerate(autos)),
        twists=tuple(twists[g] for g in autos),
        X=X,
        F=F.values,
        partition=P,
        G=G,
        q=q.values,
        j=j,
        fbar=tuple(fbar),
        meta=dict(meta or {}),
    )
    certs = tuple(certify_j_gamma(bundle, g) for g in autos)
    return replace(bundle, certificates=certs)


def certify_j_gamma(bundle: WitnessBundle, gamma: Sequence[int]) -> HomPath:
    """Path ``j -> j . gamma`` in Hom(T, G), sliding along the gamma-branch of X.

    The identity gets the constant one-entry path rather than the loop
    around its own branch.
    """
    b = bundle.automorphism_index(gamma)
    nt = bundle.T.vertex_count
    if tuple(gamma) == tuple(range(nt)):
        return HomPath(bundle.T, bundle.G, (bundle.j,), kind="witness")
    entries = [
        tuple(bundle.q[bundle.pair(x, t)] for t in range(nt)) for x in bundle.X.branch(b)
    ]
    return HomPath(bundle.T, bundle.G, tuple(entries), kind="witness")


def bouquet_map(X: StarGraph) -> tuple[int, ...]:
    """Vertex map ``X -> X / (v_gamma ~ u)``.

    Bouquet vertex ``0`` is the hub; branch ``b`` step ``s`` (``1 <= s < L``)
    is ``1 + b*(L-1) + (s-1)``.
    """
    L = X.length
    to_b = [0] * X.graph.vertex_count
    for x in range(1, X.graph.vertex_count):
        b, s = X.position(x)
        to_b[x] = 0 if s == L else 1 + b * (L - 1) + (s - 1)
    return tuple(to_b)


def bouquet(bundle: WitnessBundle) -> tuple[Graph, tuple[int, ...]]:
    """The bouquet of circles ``X / (v_gamma ~ u)`` and the quotient map."""
    to_b = bouquet_map(bundle.X)
    P = VertexPartition.from_class_map(to_b)
    Bq, _ = quotient(bundle.X.graph, P)
    return Bq, tuple(to_b)


def _retract_toward_root(depth: dict[int, int], parent: dict[int, int], w: list[int]) -> list[list[int]]:
    """Walks ``w`` to the root, lowering the deepest occupied level one step at a time."""
    out = [list(w)]
    cur = list(w)
    while True:
        top = max(depth[x] for x in cur)
        if top == 0:
            return out
        cur = [parent[x] if depth[x] == top else x for x in cur]
        out.append(list(cur))


def certify_connectivity(bundle: WitnessBundle, g: Sequence[int]) -> HomPath:
    """Path in Hom(T, G) from ``g`` to ``j``."""
    T, G, X = bundle.T, bundle.G, bundle.X
    nt, L = T.vertex_count, X.length
    g = tuple(g)
    if len(g) != nt or not all(0 <= x < G.vertex_count for x in g):
        raise WitnessError("g is not a map T -> G")
    if not maps_adjacent(T, G, g, g):
        raise WitnessError("g is not a homomorphism")

    # (1) image in the bouquet
    to_b = bouquet_map(X)
    members = bundle.partition.classes
    image = {to_b[members[cls][0] // nt] for cls in g}

    # (2) drop the lowest missed interior vertex of every circle
    removed = []
    for b in range(X.branch_count):
        steps = [s for s in range(1, L) if 1 + b * (L - 1) + (s - 1) not in image]
        if not steps:
            raise SizingError(f"circle {b} is fully covered by the image of g")
        removed.append(steps[0])

    # (3) the tree X' and its embedding h: X' x T -> G
    # tree vertices: ("u",) or (b, s); arm "out" is s < cut, arm "back" is s > cut
    parent: dict[int, int] = {0: 0}
    depth: dict[int, int] = {0: 0}
    h_of: dict[tuple[int, int], int] = {}  # (x in X, t) -> G vertex, twisted on the back arm
    for t in range(nt):
        h_of[(0, t)] = bundle.j[t]
    for b in range(X.branch_count):
        gamma = bundle.automorphisms[b]
        ginv = inverse(gamma)
        path = X.branch(b)
        cut = removed[b]
        for s in range(1, cut):
            x = path[s]
            parent[x], depth[x] = path[s - 1], s
            for t in range(nt):
                h_of[(x, t)] = bundle.q[bundle.pair(x, t)]
        for s in range(L - 1, cut, -1):
            x = path[s]
            parent[x] = path[s + 1] if s + 1 < L else 0
            depth[x] = L - s
            for t in range(nt):
                h_of[(x, t)] = bundle.q[bundle.pair(x, ginv[t])]
    h_inv = {v: key for key, v in h_of.items()}
    if len(h_inv) != len(h_of):
        raise AssertionError("embedding of X' x T is not injective")

    try:
        lifted = [h_inv[x] for x in g]
    except KeyError:
        raise SizingError("g leaves the preimage of the tree") from None
    g1 = [x for x, _ in lifted]
    g2 = tuple(t for _, t in lifted)

    # (5) End(T) = Aut(T)
    if sorted(g2) != list(range(nt)):
        raise NotAutomorphismError(f"second coordinate {g2} is not bijective")
    if g2 not in bundle.automorphisms:
        raise NotAutomorphismError(f"{g2} is a bijection but not a covered automorphism")

    # (4) retract the tree coordinate to the hub
    entries = [
        tuple(h_of[(x, t)] for x, t in zip(w, g2))
        for w in _retract_toward_root(depth, parent, g1)
    ]
    back = certify_j_gamma(bundle, g2).reversed()
    if entries[-1] != back.first:
        raise AssertionError("retraction does not end at j . gamma")
    return HomPath(T, G, tuple(collapse([*entries, *back.entries])), kind="witness")


def tree_map(bundle: WitnessBundle, steps: Sequence[tuple[int, int]], gamma: Sequence[int]) -> tuple[int, ...]:
    """``g(t) = q(x_t, gamma(t))`` where ``x_t`` is branch ``b`` step ``s`` from ``steps[t]``.

    Homomorphic whenever the chosen ``x_t`` are pairwise adjacent or equal in
    ``X`` along every edge of ``T`` (e.g. all within one reflexive edge).
    """
    out = []
    for t, (b, s) in enumerate(steps):
        x = bundle.X.branch(b)[s]
        out.append(bundle.q[bundle.pair(x, gamma[t])])
    return tuple(out)


@dataclass(frozen=True)
class BundleVerdict:
    ok: bool
    failures: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


def verify_bundle(bundle: WitnessBundle) -> BundleVerdict:
    """Re-derive every bundle invariant from the stored data."""
    fails: list[str] = []
    T, G, Xg = bundle.T, bundle.G, bundle.X.graph
    nt = T.vertex_count
    K = make_complete(bundle.palette)
    XT = product(Xg, T)
    if len(bundle.F) != XT.vertex_count or len(bundle.q) != XT.vertex_count:
        return BundleVerdict(False, ("F or q has the wrong size",))
    if not Xg.is_reflexive:
        fails.append("X is not reflexive")
    if not maps_adjacent(XT, K, bundle.F, bundle.F):
        fails.append("F is not a homomorphism X x T -> K")
    if not maps_adjacent(XT, G, bundle.q, bundle.q):
        fails.append("q is not a homomorphism X x T -> G")
    if len(set(bundle.q)) != G.vertex_count:
        fails.append("q is not surjective")
    elif quotient(XT, VertexPartition.from_class_map(bundle.q))[0].neighbours != G.neighbours:
        fails.append("G is not the quotient of X x T by q")
    for b, gamma in enumerate(bundle.automorphisms):
        v = bundle.X.tip(b)
        for t in range(nt):
            if bundle.q[bundle.pair(v, t)] != bundle.q[bundle.pair(0, gamma[t])]:
                fails.append(f"identification (v_{bundle.names[b]}, {t}) ~ (u, {gamma[t]}) missing")
                break
    for x, cls in enumerate(bundle.q):
        if bundle.fbar[cls] != bundle.F[x]:
            fails.append(f"fbar . q != F at {x} (fbar ill-defined)")
            break
    if not maps_adjacent(G, K, bundle.fbar, bundle.fbar):
        fails.append("fbar is not a proper colouring of G")
    if bundle.j != tuple(bundle.q[bundle.pair(0, t)] for t in range(nt)):
        fails.append("j != q . (const_u, id)")
    if not maps_adjacent(T, G, bundle.j, bundle.j):
        fails.append("j is not a homomorphism")
    for b, gamma in enumerate(bundle.automorphisms):
        name = bundle.names[b]
        tw = bundle.twists[b]
        v = check_entries(T, K, tw.entries)
        if not v:
            fails.append(f"twist {name}: {v.describe()}")
        elif tw.first != bundle.base or tw.last != twist(bundle.base, gamma):
            fails.append(f"twist {name}: wrong endpoints")
    if len(bundle.certificates) != len(bundle.automorphisms):
        fails.append("certificate count does not match automorphism count")
    for b, cert in enumerate(bundle.certificates[: len(bundle.automorphisms)]):
        name = bundle.names[b]
        gamma = bundle.automorphisms[b]
        v = check_entries(T, G, cert.entries)
        if not v:
            fails.append(f"certificate {name}: {v.describe()}")
        elif cert.first != bundle.j or cert.last != twist(bundle.j, gamma):
            fails.append(f"certificate {name}: wrong endpoints")
    return BundleVerdict(not fails, tuple(fails))


def chromatic_sandwich(bundle: WitnessBundle, chi_T: int) -> tuple[int, int]:
    """Bounds ``(lower, upper)`` on chi(G) from j and fbar, no search.

    ``chi_T`` is the (externally known) chromatic number of T.
    """
    K = make_complete(bundle.palette)
    if not maps_adjacent(bundle.G, K, bundle.fbar, bundle.fbar):
        raise WitnessError("fbar is not proper")
    if not maps_adjacent(bundle.T, bundle.G, bundle.j, bundle.j):
        raise WitnessError("j is not a homomorphism")
    return chi_T, bundle.palette


# --------------------------------------------------------------------------
# on-disk form


def atomic_write(path: Path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_bundle(bundle: WitnessBundle, directory: Path) -> None:
    """Write the bundle as text files.

    Layout: ``T.graph``, ``X.graph``, ``G.graph``, ``F.map``, ``q.map``,
    ``j.map``, ``fbar.map``, ``base.map``, ``automorphisms.txt`` (one
    ``<name> <permutation>`` line each), ``twist_<name>.hompath`` and
    ``cert_<name>.hompath``.
    """
    d = Path(directory)
    n, k = bundle.meta.get("n", 0), bundle.meta.get("k", bundle.palette - 2)
    atomic_write(d / "T.graph", graph_to_text(bundle.T))
    atomic_write(d / "X.graph", graph_to_text(bundle.X.graph))
    atomic_write(d / "G.graph", graph_to_text(bundle.G))
    atomic_write(d / "F.map", mapping_to_text(bundle.F))
    atomic_write(d / "q.map", mapping_to_text(bundle.q))
    atomic_write(d / "j.map", mapping_to_text(bundle.j))
    atomic_write(d / "fbar.map", mapping_to_text(bundle.fbar))
    atomic_write(d / "base.map", mapping_to_text(bundle.base))
    header = f"# n={n} k={k} palette={bundle.palette} branches={bundle.X.branch_count} length={bundle.L}\n"
    autos = "".join(
        f"{name} {' '.join(map(str, g))}\n" for name, g in zip(bundle.names, bundle.automorphisms)
    )
    atomic_write(d / "automorphisms.txt", header + autos)
    for name, tw, cert in zip(bundle.names, bundle.twists, bundle.certificates):
        atomic_write(d / f"twist_{name}.hompath", hompath_to_text(tw, n, k, "stable"))
        atomic_write(d / f"cert_{name}.hompath", hompath_to_text(cert, n, k, "witness"))


def load_bundle(directory: Path) -> WitnessBundle:
    d = Path(directory)
    try:
        T = graph_from_text((d / "T.graph").read_text())
        Xg = graph_from_text((d / "X.graph").read_text())
        G = graph_from_text((d / "G.graph").read_text())
        maps = {
            name: mapping_from_text((d / f"{name}.map").read_text())
            for name in ("F", "q", "j", "fbar", "base")
        }
        lines = (d / "automorphisms.txt").read_text().splitlines()
    except OSError as exc:
        raise WitnessError(f"cannot read bundle: {exc}") from None
    head = dict(kv.split("=") for kv in lines[0].lstrip("# ").split())
    names, autos = [], []
    for ln in lines[1:]:
        if ln.strip():
            name, *perm = ln.split()
            names.append(name)
            autos.append(tuple(map(int, perm)))
    palette = int(head["palette"])
    X = StarGraph(Xg, int(head["branches"]), int(head["length"]))
    if X.graph.vertex_count != 1 + X.branch_count * X.length:
        raise WitnessError("X.graph does not match the recorded star shape")
    K = make_complete(palette)
    twists, certs = [], []
    for name in names:
        tw = hompath_from_text((d / f"twist_{name}.hompath").read_text())
        ce = hompath_from_text((d / f"cert_{name}.hompath").read_text())
        twists.append(HomPath(T, K, tw.entries, kind="stable"))
        certs.append(HomPath(T, G, ce.entries, kind="witness"))
    q = maps["q"]
    return WitnessBundle(
        T=T,
        palette=palette,
        base=maps["base"],
        automorphisms=tuple(autos),
        names=tuple(names),
        twists=tuple(twists),
        X=X,
        F=maps["F"],
        partition=VertexPartition.from_class_map(q),
        G=G,
        q=q,
        j=maps["j"],
        fbar=maps["fbar"],
        certificates=tuple(certs),
        meta={"n": int(head.get("n", 0)), "k": int(head.get("k", palette - 2))},
    )


def build_sg_witness(n: int, k: int) -> WitnessBundle:
    """Witness bundle for T = SG(n,k) using the dihedral twist paths."""
    from .kneser import KneserParams, canonical_colouring, dihedral_group, make_graph, vertex_permutation
    from .homotopy import path_to_automorphism, require_supported_k

    params = KneserParams(n, k)
    require_supported_k(params)
    T = make_graph(params, "stable")
    twists, names = {}, {}
    for d in dihedral_group(params):
        gamma = vertex_permutation(d, "stable")
        p = path_to_automorphism(params, d)
        twists[gamma] = HomPath(T, p.target, p.entries, params, "stable")
        names[gamma] = d.name
    return build_witness(
        T,
        params.palette,
        canonical_colouring(params, "stable"),
        twists,
        names,
        check_complete=T.vertex_count <= 64,
        meta={"n": n, "k": k},
    )
