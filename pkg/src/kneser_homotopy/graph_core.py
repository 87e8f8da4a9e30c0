"""Finite graphs with loops, categorical constructions and small exhaustive oracles.

Graphs are immutable. Vertices are the integers ``0..vertex_count-1``; the
adjacency relation is symmetric and may contain loops.  Maps between graphs
are plain tuples of target indices wrapped in :class:`Mapping` when the
source and target need to travel with them.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from scipy.cluster.hierarchy import DisjointSet

SEARCH_GUARD = 64


class GraphError(ValueError):
    """Raised for malformed graphs, mappings or partitions."""


class SearchGuardError(GraphError):
    """An exponential-time oracle was asked to run beyond its size guard."""


@dataclass(frozen=True, eq=False)
class Graph:
    neighbours: tuple[tuple[int, ...], ...]
    labels: tuple[Hashable, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.neighbours)
        for u, nbrs in enumerate(self.neighbours):
            for v in nbrs:
                if not 0 <= v < n:
                    raise GraphError(f"vertex {u} has out-of-range neighbour {v}")
                if u not in self.neighbours[v]:
                    raise GraphError(f"adjacency not symmetric at ({u}, {v})")
        if self.labels is not None:
            if len(self.labels) != n:
                raise GraphError("need exactly one label per vertex")
            if len(set(self.labels)) != n:
                raise GraphError("labels must be unique")

    @classmethod
    def from_edges(
        cls,
        vertex_count: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[Hashable] | None = None,
    ) -> Graph:
        """Build a graph from unordered pairs; ``(v, v)`` adds a loop."""
        nbrs: list[set[int]] = [set() for _ in range(vertex_count)]
        for u, v in edges:
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphError(f"edge ({u}, {v}) out of range")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(
            tuple(tuple(sorted(s)) for s in nbrs),
            None if labels is None else tuple(labels),
        )

    @property
    def vertex_count(self) -> int:
        return len(self.neighbours)

    def __len__(self) -> int:
        return len(self.neighbours)

    @cached_property
    def neighbour_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(nb) for nb in self.neighbours)

    @cached_property
    def masks(self) -> tuple[int, ...]:
        # Bit-set rows; only materialized on demand since large sparse graphs
        # (witness quotients) would pay O(V^2) bits.
        return tuple(sum(1 << v for v in nb) for nb in self.neighbours)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.neighbour_sets[u]

    def has_loop(self, v: int) -> bool:
        return v in self.neighbour_sets[v]

    @cached_property
    def is_loopless(self) -> bool:
        return not any(self.has_loop(v) for v in range(self.vertex_count))

    @cached_property
    def is_reflexive(self) -> bool:
        return all(self.has_loop(v) for v in range(self.vertex_count))

    def degree(self, v: int) -> int:
        """Number of neighbours of ``v``; a loop counts once."""
        return len(self.neighbours[v])

    def edges(self) -> Iterator[tuple[int, int]]:
        """Unordered adjacency pairs ``(u, v)`` with ``u <= v``."""
        for u, nb in enumerate(self.neighbours):
            for v in nb:
                if u <= v:
                    yield u, v

    def arcs(self) -> Iterator[tuple[int, int]]:
        """Ordered adjacency pairs, i.e. the relation E(G) itself."""
        for u, nb in enumerate(self.neighbours):
            for v in nb:
                yield u, v

    @property
    def edge_count(self) -> int:
        return sum(1 for _ in self.edges())

    def induced_subgraph(self, vertices: Sequence[int]) -> Graph:
        index = {v: i for i, v in enumerate(vertices)}
        nbrs = tuple(
            tuple(sorted(index[w] for w in self.neighbours[v] if w in index))
            for v in vertices
        )
        labels = None if self.labels is None else tuple(self.labels[v] for v in vertices)
        return Graph(nbrs, labels)

    def index_of(self, label: Hashable) -> int:
        if self.labels is None:
            raise GraphError("graph carries no labels")
        return self._label_index[label]

    @cached_property
    def _label_index(self) -> dict[Hashable, int]:
        return {lab: i for i, lab in enumerate(self.labels or ())}

    def same_adjacency(self, other: Graph) -> bool:
        return self.neighbours == other.neighbours

    def __repr__(self) -> str:
        return f"Graph(vertices={self.vertex_count}, edges={self.edge_count})"


@dataclass(frozen=True, eq=False)
class Mapping:
    source: Graph
    target: Graph
    values: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if len(self.values) != self.source.vertex_count:
            raise GraphError(
                f"mapping has {len(self.values)} values for {self.source.vertex_count} vertices"
            )
        t = self.target.vertex_count
        for v in self.values:
            if not 0 <= v < t:
                raise GraphError(f"value {v} outside target of size {t}")

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class VertexPartition:
    """A partition of ``0..n-1`` with the induced class-index map."""

    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...] = field(repr=False)

    @classmethod
    def from_class_map(cls, class_of: Sequence[int]) -> VertexPartition:
        # Renumber classes by first occurrence so the result is canonical.
        renum: dict[int, int] = {}
        members: list[list[int]] = []
        out = []
        for v, c in enumerate(class_of):
            if c not in renum:
                renum[c] = len(members)
                members.append([])
            members[renum[c]].append(v)
            out.append(renum[c])
        return cls(tuple(tuple(m) for m in members), tuple(out))

    @classmethod
    def from_pairs(cls, vertex_count: int, pairs: Iterable[tuple[int, int]]) -> VertexPartition:
        """Finest partition identifying each given pair."""
        ds = DisjointSet(range(vertex_count))
        for a, b in pairs:
            ds.merge(a, b)
        return cls.from_class_map([ds[v] for v in range(vertex_count)])

    @classmethod
    def discrete(cls, vertex_count: int) -> VertexPartition:
        return cls.from_class_map(range(vertex_count))

    def __post_init__(self) -> None:
        seen = sorted(v for c in self.classes for v in c)
        if seen != list(range(len(self.class_of))):
            raise GraphError("classes must be disjoint and cover all vertices")
        for i, c in enumerate(self.classes):
            if not c or any(self.class_of[v] != i for v in c):
                raise GraphError("class map disagrees with class lists")

    def __len__(self) -> int:
        return len(self.classes)


def make_complete(r: int) -> Graph:
    if r < 1:
        raise GraphError("complete graph needs r >= 1")
    return Graph(tuple(tuple(v for v in range(r) if v != u) for u in range(r)))


def make_cycle(r: int) -> Graph:
    if r < 3:
        raise GraphError("cycle needs r >= 3")
    return Graph.from_edges(r, ((i, (i + 1) % r) for i in range(r)))


def make_reflexive_path(n: int) -> Graph:
    """The reflexive path I_n on ``0..n`` with ``i ~ j`` iff ``|i-j| <= 1``."""
    if n < 0:
        raise GraphError("path length must be non-negative")
    return Graph(
        tuple(tuple(j for j in (i - 1, i, i + 1) if 0 <= j <= n) for i in range(n + 1))
    )


def product(G: Graph, H: Graph) -> Graph:
    """Categorical product; vertex ``(a, b)`` has index ``a * |H| + b``."""
    h = H.vertex_count
    nbrs = []
    for a in range(G.vertex_count):
        for b in range(h):
            nbrs.append(
                tuple(sorted(a2 * h + b2 for a2 in G.neighbours[a] for b2 in H.neighbours[b]))
            )
    labels = None
    if G.labels is not None or H.labels is not None:
        gl = G.labels or tuple(range(G.vertex_count))
        hl = H.labels or tuple(range(h))
        labels = tuple((x, y) for x in gl for y in hl)
    return Graph(tuple(nbrs), labels)


def maps_adjacent(source: Graph, target: Graph, f: Sequence[int], g: Sequence[int]) -> bool:
    """Adjacency of two vertex maps in the exponential graph [source, target]."""
    tn = target.neighbour_sets
    for u, nb in enumerate(source.neighbours):
        allowed = tn[f[u]]
        for v in nb:
            if g[v] not in allowed:
                return False
    return True


def exp_adjacent(f: Mapping, g: Mapping) -> bool:
    if f.source is not g.source or f.target is not g.target:
        if not (f.source.same_adjacency(g.source) and f.target.same_adjacency(g.target)):
            raise GraphError("mappings must share source and target")
    return maps_adjacent(f.source, f.target, f.values, g.values)


def is_homomorphism(f: Mapping) -> bool:
    return maps_adjacent(f.source, f.target, f.values, f.values)


def _require_loopless(G: Graph) -> None:
    if not G.is_loopless:
        raise GraphError("source graph must be loopless")


def mixtures_all_homomorphisms(f: Mapping, g: Mapping) -> bool:
    """Whether every vertex-wise mixture of ``f`` and ``g`` is a homomorphism.

    Uses the edge-local criterion: on a loopless source a mixture only ever
    pairs values across one edge at a time, so it is enough that all four
    combinations ``(f|g)(u), (f|g)(v)`` are target edges.
    """
    _require_loopless(f.source)
    tn = f.target.neighbour_sets
    fv, gv = f.values, g.values
    for u, v in f.source.edges():
        for a in {fv[u], gv[u]}:
            for b in {fv[v], gv[v]}:
                if b not in tn[a]:
                    return False
    return True


def mixtures_all_homomorphisms_brute(f: Mapping, g: Mapping) -> bool:
    """Exhaustive 2^n enumeration of mixtures; oracle for the edge-local test."""
    _require_loopless(f.source)
    n = f.source.vertex_count
    if n > 24:
        raise SearchGuardError("mixture enumeration limited to 24 vertices")
    diff = [v for v in range(n) if f.values[v] != g.values[v]]
    for choice in itertools.product((False, True), repeat=len(diff)):
        h = list(f.values)
        for v, pick in zip(diff, choice):
            if pick:
                h[v] = g.values[v]
        if not maps_adjacent(f.source, f.target, h, h):
            return False
    return True


def curry(F: Mapping, Z: Graph, G: Graph) -> list[tuple[int, ...]]:
    """Turn a homomorphism ``Z x G -> H`` into the family ``z -> F(z, .)``."""
    if F.source.vertex_count != Z.vertex_count * G.vertex_count:
        raise GraphError("F is not defined on Z x G")
    if not is_homomorphism(F):
        raise GraphError("F is not a homomorphism")
    g = G.vertex_count
    return [tuple(F.values[z * g : (z + 1) * g]) for z in range(Z.vertex_count)]


def uncurry(family: Sequence[Sequence[int]], Z: Graph, G: Graph, H: Graph) -> Mapping:
    if len(family) != Z.vertex_count:
        raise GraphError("family must have one map per vertex of Z")
    values = [x for fz in family for x in fz]
    return Mapping(product(Z, G), H, tuple(values))


def quotient(G: Graph, P: VertexPartition) -> tuple[Graph, Mapping]:
    """Quotient graph and the class-index map ``q``.

    The labels of the quotient are the member tuples of each class, which
    serves as the back-map from class to original vertices.
    """
    if len(P.class_of) != G.vertex_count:
        raise GraphError("partition size does not match graph")
    cls = P.class_of
    nbrs = []
    for members in P.classes:
        s = set()
        for a in members:
            for b in G.neighbours[a]:
                s.add(cls[b])
        nbrs.append(tuple(sorted(s)))
    Q = Graph(tuple(nbrs), tuple(P.classes))
    return Q, Mapping(G, Q, cls)


# --------------------------------------------------------------------------
# exhaustive oracles


def _guard(G: Graph, force: bool, what: str) -> None:
    if G.vertex_count > SEARCH_GUARD and not force:
        raise SearchGuardError(
            f"{what} on {G.vertex_count} vertices exceeds the guard of {SEARCH_GUARD}; pass force"
        )


def proper_colourings(G: Graph, palette: int) -> Iterator[tuple[int, ...]]:
    """All proper colourings in lexicographic order (lowest vertex, lowest colour first)."""
    _require_loopless(G)
    n = G.vertex_count
    col = [-1] * n

    def rec(v: int) -> Iterator[tuple[int, ...]]:
        if v == n:
            yield tuple(col)
            return
        used = {col[w] for w in G.neighbours[v] if w < v}
        for c in range(palette):
            if c not in used:
                col[v] = c
                yield from rec(v + 1)
        col[v] = -1

    yield from rec(0)


def _colourable(G: Graph, r: int, order: list[int]) -> list[int] | None:
    n = G.vertex_count
    col = [-1] * n
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[w for w in G.neighbours[v] if pos[w] < pos[v]] for v in order]

    def rec(i: int, used: int) -> bool:
        if i == n:
            return True
        v = order[i]
        forbidden = 0
        for w in earlier[i]:
            forbidden |= 1 << col[w]
        # new colours are interchangeable: only try the first unused one
        for c in range(min(used + 1, r)):
            if not forbidden >> c & 1:
                col[v] = c
                if rec(i + 1, max(used, c + 1)):
                    return True
        col[v] = -1
        return False

    return col if rec(0, 0) else None


def chromatic_number_exact(G: Graph, force: bool = False) -> int:
    """Least r admitting a proper r-colouring, by backtracking in degree order."""
    _require_loopless(G)
    _guard(G, force, "chromatic number search")
    n = G.vertex_count
    if n == 0:
        return 0
    order = sorted(range(n), key=lambda v: (-G.degree(v), v))
    r = 1
    while _colourable(G, r, order) is None:
        r += 1
    return r


def automorphisms_exact(G: Graph, force: bool = False) -> list[tuple[int, ...]]:
    """All adjacency-preserving permutations, in lexicographic order."""
    _guard(G, force, "automorphism search")
    n = G.vertex_count
    # refine by (loop, degree, sorted neighbour degrees)
    inv = [
        (G.has_loop(v), G.degree(v), tuple(sorted(G.degree(w) for w in G.neighbours[v])))
        for v in range(n)
    ]
    candidates = [[w for w in range(n) if inv[w] == inv[v]] for v in range(n)]
    sets = G.neighbour_sets
    image = [-1] * n
    used = [False] * n
    out: list[tuple[int, ...]] = []

    def rec(v: int) -> None:
        if v == n:
            out.append(tuple(image))
            return
        for w in candidates[v]:
            if used[w]:
                continue
            ok = True
            for x in range(v):
                if (x in sets[v]) != (image[x] in sets[w]):
                    ok = False
                    break
            if ok and (v in sets[v]) == (w in sets[w]):
                image[v] = w
                used[w] = True
                rec(v + 1)
                used[w] = False
        image[v] = -1

    rec(0)
    return out


@dataclass(frozen=True)
class ComponentReport:
    visited: tuple[tuple[int, ...], ...]
    truncated: bool

    @property
    def size(self) -> int:
        return len(self.visited)


def flip_neighbours(G: Graph, palette: int, f: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Proper colourings differing from ``f`` at exactly one vertex."""
    for v in range(G.vertex_count):
        used = {f[w] for w in G.neighbours[v]}
        for c in range(palette):
            if c != f[v] and c not in used:
                g = list(f)
                g[v] = c
                yield tuple(g)


def exp_neighbours(G: Graph, palette: int, f: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Proper colourings adjacent to ``f`` in [G, K_palette], excluding ``f`` itself."""
    n = G.vertex_count
    allowed = [
        [c for c in range(palette) if c not in {f[w] for w in G.neighbours[v]}] for v in range(n)
    ]
    g = [-1] * n

    def rec(v: int) -> Iterator[tuple[int, ...]]:
        if v == n:
            t = tuple(g)
            if t != tuple(f):
                yield t
            return
        for c in allowed[v]:
            if all(g[w] != c for w in G.neighbours[v] if w < v):
                g[v] = c
                yield from rec(v + 1)
        g[v] = -1

    yield from rec(0)


def components_by_flips(
    G: Graph,
    palette: int,
    start: Sequence[int],
    move: str = "single-flip",
    budget: int = 1_000_000,
) -> ComponentReport:
    """Breadth-first closure of ``start`` in the colouring graph.

    ``move`` is ``"single-flip"`` (recolour one vertex) or ``"exp-adjacent"``
    (any neighbour in the exponential graph).  Stops with ``truncated=True``
    once more than ``budget`` colourings have been seen.
    """
    _require_loopless(G)
    K = make_complete(palette)
    start = tuple(start)
    if len(start) != G.vertex_count or not maps_adjacent(G, K, start, start):
        raise GraphError("start colouring is not proper")
    step = {"single-flip": flip_neighbours, "exp-adjacent": exp_neighbours}.get(move)
    if step is None:
        raise GraphError(f"unknown move {move!r}")
    seen = {start: None}
    queue = deque([start])
    while queue:
        f = queue.popleft()
        for g in step(G, palette, f):
            if g not in seen:
                if len(seen) >= budget:
                    return ComponentReport(tuple(seen), True)
                seen[g] = None
                queue.append(g)
    return ComponentReport(tuple(seen), False)


# --------------------------------------------------------------------------
# text formats


def graph_to_text(G: Graph, label_fmt=str) -> str:
    lines = [f"p {G.vertex_count}"]
    lines += [f"e {u} {v}" for u, v in G.edges()]
    if G.labels is not None:
        lines += [f"l {v} {label_fmt(lab)}" for v, lab in enumerate(G.labels)]
    return "\n".join(lines) + "\n"


def graph_from_text(text: str) -> Graph:
    n = None
    edges = []
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(maxsplit=2) if line[0] == "l" else line.split()
        try:
            if parts[0] == "p" and n is None and len(parts) == 2:
                n = int(parts[1])
            elif parts[0] == "e" and n is not None and len(parts) == 3:
                edges.append((int(parts[1]), int(parts[2])))
            elif parts[0] == "l" and n is not None and len(parts) == 3:
                labels[int(parts[1])] = parts[2]
            else:
                raise GraphError(f"line {lineno}: unexpected {raw!r}")
        except ValueError as exc:
            raise GraphError(f"line {lineno}: {exc}") from None
    if n is None:
        raise GraphError("missing 'p' header")
    lab = None
    if labels:
        if sorted(labels) != list(range(n)):
            raise GraphError("labels must cover every vertex exactly once")
        lab = [labels[v] for v in range(n)]
    return Graph.from_edges(n, edges, lab)


def mapping_to_text(values: Sequence[int]) -> str:
    return " ".join(map(str, values)) + "\n"


def mapping_from_text(text: str) -> tuple[int, ...]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) != 1:
        raise GraphError("mapping file must contain exactly one line")
    try:
        return tuple(int(x) for x in lines[0].split())
    except ValueError as exc:
        raise GraphError(str(exc)) from None
