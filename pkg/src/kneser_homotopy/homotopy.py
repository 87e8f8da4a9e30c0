"""Explicit paths of colourings of (semi-)stable Kneser graphs.

A :class:`HomPath` is a list of maps ``source -> target`` whose consecutive
entries are adjacent in the exponential graph ``[source, target]``.  The
synthesizers here build such paths from the canonical colouring ``c`` to
``pi . c`` for even palette permutations ``pi`` and to ``c . gamma`` for
dihedral automorphisms ``gamma``; :func:`validate_path` re-checks them from
scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

from .graph_core import Graph, GraphError, make_complete
from .kneser import (
    DihedralElement,
    KneserParams,
    canonical_colouring,
    enumerate_stable,
    is_stable,
    make_graph,
    vertex_permutation,
)

Permutation = tuple[int, ...]
Colouring = tuple[int, ...]


class HypothesisViolation(GraphError):
    """Parameters fall outside the range where the construction exists."""

    def __init__(self, message: str, **values):
        super().__init__(message)
        self.values = values


# --------------------------------------------------------------------------
# palette permutations


def identity(size: int) -> Permutation:
    return tuple(range(size))


def compose(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """``p . q``: apply ``q`` first."""
    return tuple(p[x] for x in q)


def inverse(p: Sequence[int]) -> Permutation:
    out = [0] * len(p)
    for x, y in enumerate(p):
        out[y] = x
    return tuple(out)


def from_cycles(cycles: Iterable[Sequence[int]], size: int) -> Permutation:
    """Permutation from cycle notation; ``(a b c)`` sends a->b->c->a."""
    p = list(range(size))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            p[a] = b
    if sorted(p) != list(range(size)):
        raise GraphError("cycles overlap")
    return tuple(p)


def three_cycle(i: int, size: int) -> Permutation:
    return from_cycles([(i, i + 1, i + 2)], size)


def is_permutation(p: Sequence[int]) -> bool:
    return sorted(p) == list(range(len(p)))


def sign(p: Sequence[int]) -> int:
    """Parity by cycle decomposition."""
    if not is_permutation(p):
        raise GraphError(f"{p} is not a permutation")
    seen = [False] * len(p)
    even_cycles = 0
    for x in range(len(p)):
        if seen[x]:
            continue
        length = 0
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        even_cycles += length % 2 == 0
    return -1 if even_cycles % 2 else 1


def tau_bar(k: int) -> Permutation:
    return tuple((x + 1) % (k + 2) for x in range(k + 2))


def rho_bar(k: int) -> Permutation:
    return tuple((k - x) % (k + 2) for x in range(k + 2))


def decompose_even(p: Sequence[int]) -> list[int]:
    """Write an even ``p`` as ``c_{i1} . c_{i2} . ... . c_{ir}``, ``c_i = (i i+1 i+2)``.

    Values are moved into place from the top down by left multiplication;
    each step uses a 3-cycle inside ``0..v`` so fixed values stay fixed.  The
    word has at most ``size**2`` letters.
    """
    size = len(p)
    if sign(p) != 1:
        raise GraphError("permutation is odd")
    if size < 3:
        if any(p[x] != x for x in range(size)):
            raise GraphError("palette too small for 3-cycles")
        return []
    sigma = list(p)
    word: list[int] = []  # inverse letters, applied left to right: g_r ... g_1 sigma = id
    for v in range(size - 1, 1, -1):
        w = sigma[v]
        while w < v:
            if w + 2 <= v:
                g = inverse(three_cycle(w, size))  # w -> w+2
                word.append(w)  # g^{-1} = c_w
                w += 2
            else:
                g = three_cycle(w - 1, size)  # w -> w+1
                word.extend((w - 1, w - 1))  # g^{-1} = c_{w-1}^2
                w += 1
            sigma = [g[x] for x in sigma]
    if sigma[0] != 0:
        raise AssertionError("odd residue after sorting an even permutation")
    return word


def compose_word(word: Sequence[int], size: int) -> Permutation:
    p = identity(size)
    for i in word:
        p = compose(p, three_cycle(i, size))
    return p


# --------------------------------------------------------------------------
# paths


@dataclass(frozen=True, eq=False)
class HomPath:
    source: Graph
    target: Graph
    entries: tuple[tuple[int, ...], ...]
    params: KneserParams | None = field(default=None, compare=False)
    kind: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))
        if not self.entries:
            raise GraphError("a path needs at least one entry")

    @property
    def palette(self) -> int:
        return self.target.vertex_count

    @property
    def first(self) -> tuple[int, ...]:
        return self.entries[0]

    @property
    def last(self) -> tuple[int, ...]:
        return self.entries[-1]

    def __len__(self) -> int:
        return len(self.entries)

    def _replace(self, entries, source=None) -> HomPath:
        return HomPath(source or self.source, self.target, tuple(entries), self.params, self.kind)

    def post_compose(self, sigma: Sequence[int]) -> HomPath:
        return self._replace(tuple(sigma[x] for x in e) for e in self.entries)

    def pre_compose(self, alpha: Sequence[int]) -> HomPath:
        """Entries ``e . alpha``; valid again when ``alpha`` is an automorphism."""
        return self._replace(tuple(e[a] for a in alpha) for e in self.entries)

    def restrict(self, vertices: Sequence[int], source: Graph) -> HomPath:
        return self._replace((tuple(e[v] for v in vertices) for e in self.entries), source)

    def reversed(self) -> HomPath:
        return self._replace(self.entries[::-1])

    def then(self, other: HomPath) -> HomPath:
        return concat([self, other])


def collapse(entries: Iterable[Sequence[int]]) -> list[tuple[int, ...]]:
    out: list[tuple[int, ...]] = []
    for e in entries:
        e = tuple(e)
        if not out or out[-1] != e:
            out.append(e)
    return out


def concat(paths: Sequence[HomPath]) -> HomPath:
    """Join paths end to start, merging equal junction entries."""
    first = paths[0]
    entries: list[tuple[int, ...]] = []
    for p in paths:
        if entries and entries[-1] != p.first:
            raise GraphError("paths do not meet at the junction")
        entries.extend(p.entries)
    return first._replace(collapse(entries))


@dataclass(frozen=True)
class PathVerdict:
    """Outcome of :func:`validate_path`.

    ``where`` is ``"entry"`` (entry ``index`` is not a homomorphism),
    ``"junction"`` (entries ``index`` and ``index + 1`` are not adjacent),
    ``"shape"`` (entry ``index`` has wrong length or out-of-range values) or
    ``None`` when valid.
    """

    valid: bool
    where: str | None = None
    index: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return "valid"
        if self.where == "junction":
            return f"invalid junction {self.index}->{self.index + 1}: {self.detail}"
        return f"invalid {self.where} {self.index}: {self.detail}"


def check_entries(source: Graph, target: Graph, entries: Sequence[Sequence[int]]) -> PathVerdict:
    """Stateless checker.

    Scan order: entry 0, then for each ``i >= 1`` entry ``i`` followed by the
    junction ``i-1 -> i``.  The first failure in that order is reported.
    """
    n = source.vertex_count
    size = target.vertex_count
    tnb = [set(nb) for nb in target.neighbours]
    arcs = [(u, v) for u in range(n) for v in source.neighbours[u]]

    def bad_shape(e: Sequence[int]) -> str | None:
        if len(e) != n:
            return f"length {len(e)} != {n}"
        for v, x in enumerate(e):
            if not 0 <= x < size:
                return f"vertex {v} has value {x} outside 0..{size - 1}"
        return None

    def first_bad_arc(f: Sequence[int], g: Sequence[int]) -> tuple[int, int] | None:
        for u, v in arcs:
            if g[v] not in tnb[f[u]]:
                return u, v
        return None

    if not entries:
        return PathVerdict(False, "shape", 0, "empty path")
    prev = None
    for i, e in enumerate(entries):
        msg = bad_shape(e)
        if msg:
            return PathVerdict(False, "shape", i, msg)
        arc = first_bad_arc(e, e)
        if arc:
            u, v = arc
            return PathVerdict(False, "entry", i, f"edge ({u},{v}) maps to non-edge ({e[u]},{e[v]})")
        if prev is not None:
            arc = first_bad_arc(prev, e)
            if arc:
                u, v = arc
                return PathVerdict(
                    False, "junction", i - 1, f"edge ({u},{v}) maps to non-edge ({prev[u]},{e[v]})"
                )
        prev = e
    return PathVerdict(True)


def validate_path(p: HomPath) -> PathVerdict:
    return check_entries(p.source, p.target, p.entries)


def expand_to_flips(p: HomPath) -> HomPath:
    """Refine a valid path so consecutive entries differ at exactly one vertex."""
    if not p.source.is_loopless:
        raise GraphError("flip expansion needs a loopless source")
    verdict = validate_path(p)
    if not verdict:
        raise GraphError(f"cannot expand an invalid path: {verdict.describe()}")
    out = [p.first]
    for g in p.entries[1:]:
        cur = list(out[-1])
        for v in range(len(cur)):
            if cur[v] != g[v]:
                cur[v] = g[v]
                out.append(tuple(cur))
    return p._replace(out)


# --------------------------------------------------------------------------
# synthesis on the semi-stable graph

# Base table on SG(2,1) as printed, columns in cycle order.
BASE_TABLE_COLUMNS: tuple[tuple[int, int], ...] = ((0, 3), (1, 4), (0, 2), (1, 3), (2, 4))
BASE_TABLE_ROWS: tuple[tuple[int, ...], ...] = (
    (0, 1, 0, 1, 2),
    (0, 2, 0, 1, 2),
    (1, 2, 0, 1, 2),
    (1, 2, 0, 1, 0),
    (1, 2, 0, 2, 0),
    (1, 2, 1, 2, 0),
)


def base_table() -> list[Colouring]:
    """The six rows of the base table, re-indexed to lexicographic vertex order."""
    sets = enumerate_stable(KneserParams(2, 1), "stable")
    col = [BASE_TABLE_COLUMNS.index(S) for S in sets]
    return [tuple(row[c] for c in col) for row in BASE_TABLE_ROWS]


def _check_range(params: KneserParams, i: int | None = None) -> None:
    if params.n < 2 or params.k < 1:
        raise HypothesisViolation(
            f"paths need n >= 2 and k >= 1, got n={params.n}, k={params.k}", n=params.n, k=params.k
        )
    if i is not None and not 0 <= i < params.k:
        raise HypothesisViolation(f"3-cycle index {i} outside 0..{params.k - 1}", i=i, k=params.k)


def fold_to_c5(params: KneserParams) -> tuple[int, ...]:
    """The map ``h`` from semi-stable SG(n,1) onto SG(2,1), as vertex indices.

    ``h(S)`` is the stable 2-set of ``Z_5`` agreeing with ``S`` on ``{0,1,2,3}``.
    The single vertex ``{0, 4, 6, ..., 2n}`` has no such partner (``{0,4}``
    is not stable); it is sent to ``{0,2}``, which keeps ``h`` a homomorphism
    that preserves minima.
    """
    if params.k != 1:
        raise GraphError("fold_to_c5 needs k = 1")
    targets = enumerate_stable(KneserParams(2, 1), "stable")
    out = []
    for S in enumerate_stable(params, "semi-stable"):
        low = tuple(x for x in S if x < 4)
        match = [j for j, T in enumerate(targets) if tuple(x for x in T if x < 4) == low]
        if len(match) == 1:
            out.append(match[0])
        elif not match and low == (0,):
            out.append(targets.index((0, 2)))
        else:
            raise AssertionError(f"no unique fold image for {S}")
    return tuple(out)


@lru_cache(maxsize=None)
def path_for_3cycle(params: KneserParams, i: int) -> HomPath:
    """Path on semi-stable SG(n,k) from ``c`` to ``(i i+1 i+2) . c``."""
    _check_range(params, i)
    n, k, m = params.n, params.k, params.m
    G = make_graph(params, "semi-stable")
    sets = G.labels
    c = canonical_colouring(params, "semi-stable")
    K = make_complete(k + 2)

    if i > 0:
        # sets with min >= i form a copy of semi-stable SG(n, k-i) via S -> S - i
        sub = KneserParams(n, k - i)
        inner = path_for_3cycle(sub, 0)
        sub_g = make_graph(sub, "semi-stable")
        lift = [(v, sub_g.index_of(tuple(x - i for x in S))) for v, S in enumerate(sets) if S[0] >= i]
        entries = []
        for e in inner.entries:
            row = list(c)
            for v, w in lift:
                row[v] = e[w] + i
            entries.append(row)
    elif k > 1:
        pi = three_cycle(0, k + 2)
        if pi[k + 1] != k + 1:
            raise AssertionError("the 3-cycle must fix the top colour")
        c_prime = tuple(k + 1 if m - 1 in S else S[0] for S in sets)
        sub = KneserParams(n, k - 1)
        inner = path_for_3cycle(sub, 0)
        sub_g = make_graph(sub, "semi-stable")
        lift = [(v, sub_g.index_of(S)) for v, S in enumerate(sets) if m - 1 not in S]
        if len(lift) != sub_g.vertex_count:
            raise AssertionError("sets avoiding m-1 must be the smaller semi-stable graph")
        middle = []
        for e in inner.entries:
            row = list(c_prime)
            for v, w in lift:
                row[v] = e[w]
            middle.append(row)
        entries = [c, *middle, compose(pi, c)]
    else:
        h = fold_to_c5(params)
        entries = [tuple(row[h[v]] for v in range(G.vertex_count)) for row in base_table()]

    return HomPath(G, K, tuple(collapse(entries)), params, "semi-stable")


def path_for_even(params: KneserParams, pi: Sequence[int]) -> HomPath:
    """Path on semi-stable SG(n,k) from ``c`` to ``pi . c`` for even ``pi``."""
    _check_range(params)
    size = params.k + 2
    if len(pi) != size:
        raise GraphError(f"permutation must act on {size} colours")
    if sign(pi) != 1:
        raise HypothesisViolation("odd palette permutation", sign=-1)
    c = canonical_colouring(params, "semi-stable")
    G = make_graph(params, "semi-stable")
    parts = [HomPath(G, make_complete(size), (c,), params, "semi-stable")]
    prefix = identity(size)
    for i in decompose_even(pi):
        parts.append(path_for_3cycle(params, i).post_compose(prefix))
        prefix = compose(prefix, three_cycle(i, size))
    return concat(parts)


def stable_vertices(params: KneserParams) -> list[int]:
    """Indices of stable sets inside the semi-stable vertex order."""
    return [v for v, S in enumerate(enumerate_stable(params, "semi-stable")) if is_stable(S, params.m)]


def restrict_to_stable(p: HomPath) -> HomPath:
    params = p.params
    out = p.restrict(stable_vertices(params), make_graph(params, "stable"))
    return HomPath(out.source, out.target, collapse(out.entries), params, "stable")


def twist(colouring: Sequence[int], gamma: Sequence[int]) -> Colouring:
    """``colouring . gamma`` for a vertex permutation ``gamma``."""
    return tuple(colouring[g] for g in gamma)


def step_tau(params: KneserParams) -> tuple[Colouring, Colouring]:
    """The exp-adjacent pair ``(c . tau, tau_bar . c)`` on SG(n,k)."""
    _check_range(params)
    c = canonical_colouring(params, "stable")
    tau = vertex_permutation(DihedralElement.tau(params), "stable")
    return twist(c, tau), compose(tau_bar(params.k), c)


def step_rho(params: KneserParams) -> tuple[Colouring, Colouring]:
    """The exp-adjacent pair ``(c . rho, rho_bar . c)`` on SG(n,k)."""
    _check_range(params)
    c = canonical_colouring(params, "stable")
    rho = vertex_permutation(DihedralElement.rho(params), "stable")
    return twist(c, rho), compose(rho_bar(params.k), c)


def require_supported_k(params: KneserParams) -> None:
    _check_range(params)
    k = params.k
    s_tau, s_rho = sign(tau_bar(k)), sign(rho_bar(k))
    if k % 4 != 3:
        raise HypothesisViolation(
            f"k = {k} is not 3 mod 4: sign(tau_bar) = {s_tau:+d}, sign(rho_bar) = {s_rho:+d}",
            sign_tau=s_tau,
            sign_rho=s_rho,
        )


@lru_cache(maxsize=None)
def generator_path(params: KneserParams, which: str) -> HomPath:
    """Path on SG(n,k) from ``c`` to ``c . tau`` (``which="tau"``) or ``c . rho``."""
    require_supported_k(params)
    bar, step = {"tau": (tau_bar, step_tau), "rho": (rho_bar, step_rho)}[which]
    p = restrict_to_stable(path_for_even(params, bar(params.k)))
    end, start = step(params)
    if p.last != start:
        raise AssertionError("even-permutation path ends off the twisted colouring")
    return p._replace(collapse([*p.entries, end]))


def _rotation_path(params: KneserParams, a: int) -> HomPath:
    """Path from ``c`` to ``c . tau^a``, walking the shorter way round."""
    m = params.m
    a %= m
    base = make_graph(params, "stable")
    c = canonical_colouring(params, "stable")
    parts = [HomPath(base, make_complete(params.palette), (c,), params, "stable")]
    if a == 0:
        return parts[0]
    p_tau = generator_path(params, "tau")
    if a <= m // 2:
        for j in range(a):
            parts.append(p_tau.pre_compose(vertex_permutation(DihedralElement(params, j), "stable")))
    else:
        back = p_tau.reversed().pre_compose(vertex_permutation(DihedralElement(params, -1), "stable"))
        for j in range(m - a):
            parts.append(back.pre_compose(vertex_permutation(DihedralElement(params, -j), "stable")))
    return concat(parts)


def path_to_automorphism(params: KneserParams, gamma: DihedralElement) -> HomPath:
    """Path on SG(n,k) from ``c`` to ``c . gamma``; needs ``k = 3 mod 4``, ``n >= 2``."""
    require_supported_k(params)
    if gamma.params != params:
        raise GraphError("automorphism belongs to a different graph")
    rot = _rotation_path(params, gamma.shift)
    if not gamma.reflected:
        return rot
    rho = vertex_permutation(DihedralElement.rho(params), "stable")
    return concat([generator_path(params, "rho"), rot.pre_compose(rho)])


# --------------------------------------------------------------------------
# file format


def hompath_to_text(p: HomPath, n: int | None = None, k: int | None = None, kind: str | None = None) -> str:
    n = p.params.n if n is None else n
    k = p.params.k if k is None else k
    kind = kind or p.kind
    lines = [f"hompath {n} {k} {kind} {p.palette} {len(p.entries)}"]
    lines += [" ".join(map(str, e)) for e in p.entries]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class HomPathFile:
    n: int
    k: int
    kind: str
    palette: int
    entries: tuple[tuple[int, ...], ...]


def hompath_from_text(text: str) -> HomPathFile:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise GraphError("empty path file")
    head = lines[0].split()
    if len(head) != 6 or head[0] != "hompath":
        raise GraphError(f"bad header {lines[0]!r}")
    try:
        n, k, palette, length = int(head[1]), int(head[2]), int(head[4]), int(head[5])
        entries = tuple(tuple(int(x) for x in ln.split()) for ln in lines[1:])
    except ValueError as exc:
        raise GraphError(f"unparsable path file: {exc}") from None
    if length != len(entries):
        raise GraphError(f"header announces {length} entries, found {len(entries)}")
    return HomPathFile(n, k, head[3], palette, entries)
