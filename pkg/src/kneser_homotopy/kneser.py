"""Kneser, semi-stable and stable Kneser graphs with their dihedral symmetry.

Vertices are n-subsets of ``Z_m`` (``m = 2n + k``) stored as sorted tuples and
indexed in lexicographic order.  Every certificate in this package refers to
that order.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

from .graph_core import Graph, GraphError, make_complete, make_cycle

StableSet = tuple[int, ...]

KINDS = ("stable", "semi-stable", "all")


class NotDihedralError(GraphError):
    """A vertex permutation is not induced by any rotation or reflection."""


@dataclass(frozen=True)
class KneserParams:
    n: int
    k: int

    def __post_init__(self) -> None:
        if self.n < 1 or self.k < 0:
            raise GraphError(f"need n >= 1 and k >= 0, got n={self.n}, k={self.k}")

    @property
    def m(self) -> int:
        return 2 * self.n + self.k

    @property
    def palette(self) -> int:
        return self.k + 2


def is_semistable(S: StableSet, m: int) -> bool:
    s = set(S)
    return not any(i + 1 in s for i in s if i + 1 < m)


def is_stable(S: StableSet, m: int) -> bool:
    return is_semistable(S, m) and not (0 in S and m - 1 in S)


def _normalize_kind(kind: str) -> str:
    kind = {"kneser": "all", "sg": "stable", "ssg": "semi-stable", "semistable": "semi-stable"}.get(
        kind, kind
    )
    if kind not in KINDS:
        raise GraphError(f"unknown kind {kind!r}")
    return kind


@lru_cache(maxsize=None)
def enumerate_stable(params: KneserParams, kind: str = "stable") -> tuple[StableSet, ...]:
    kind = _normalize_kind(kind)
    test = {"stable": is_stable, "semi-stable": is_semistable, "all": lambda S, m: True}[kind]
    return tuple(S for S in itertools.combinations(range(params.m), params.n) if test(S, params.m))


@lru_cache(maxsize=None)
def make_graph(params: KneserParams, kind: str = "stable") -> Graph:
    """KG, semi-stable SG-bar or SG: subsets adjacent iff disjoint."""
    sets = enumerate_stable(params, kind)
    bits = [sum(1 << i for i in S) for S in sets]
    nbrs = tuple(
        tuple(j for j, b in enumerate(bits) if not a & b) for a in bits
    )
    return Graph(nbrs, sets)


def canonical_colouring(params: KneserParams, kind: str = "stable") -> tuple[int, ...]:
    """The colouring ``S -> min S`` into ``K_{k+2}``."""
    kind = _normalize_kind(kind)
    if kind == "all":
        raise GraphError("the canonical colouring is only defined on (semi-)stable sets")
    return tuple(S[0] for S in enumerate_stable(params, kind))


def parse_graph_name(name: str) -> tuple[Graph, KneserParams | None, str | None]:
    """Parse ``SG(n,k)``, ``SSG(n,k)``, ``KG(n,k)``, ``K(r)`` or ``C(r)``."""
    m = re.fullmatch(r"\s*(SSG|SG|KG|K|C)\s*\(\s*(\d+)\s*(?:,\s*(\d+)\s*)?\)\s*", name)
    if not m:
        raise GraphError(f"cannot parse graph name {name!r}")
    head, a, b = m.group(1), int(m.group(2)), m.group(3)
    if head in ("K", "C"):
        if b is not None:
            raise GraphError(f"{head}(r) takes one argument")
        return (make_complete(a) if head == "K" else make_cycle(a)), None, None
    if b is None:
        raise GraphError(f"{head}(n,k) takes two arguments")
    params = KneserParams(a, int(b))
    kind = {"SG": "stable", "SSG": "semi-stable", "KG": "all"}[head]
    return make_graph(params, kind), params, kind


def set_label(S: StableSet) -> str:
    return ",".join(map(str, S))


# --------------------------------------------------------------------------
# dihedral action


@dataclass(frozen=True)
class DihedralElement:
    """``tau^shift`` or ``tau^shift . rho`` acting on ``Z_m``.

    As a map of ``Z_m``: ``x -> x + shift`` or ``x -> shift + k - x``.
    """

    params: KneserParams
    shift: int = 0
    reflected: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "shift", self.shift % self.params.m)

    @classmethod
    def tau(cls, params: KneserParams) -> DihedralElement:
        return cls(params, 1, False)

    @classmethod
    def rho(cls, params: KneserParams) -> DihedralElement:
        return cls(params, 0, True)

    def __call__(self, x: int) -> int:
        m = self.params.m
        if self.reflected:
            return (self.shift + self.params.k - x) % m
        return (self.shift + x) % m

    def compose(self, other: DihedralElement) -> DihedralElement:
        """``self . other`` (apply ``other`` first)."""
        if other.params != self.params:
            raise GraphError("dihedral elements of different groups")
        if not self.reflected:
            return DihedralElement(self.params, self.shift + other.shift, other.reflected)
        # x -> a + k - (b + [k] - x)
        if other.reflected:
            return DihedralElement(self.params, self.shift - other.shift, False)
        return DihedralElement(self.params, self.shift - other.shift, True)

    def inverse(self) -> DihedralElement:
        if self.reflected:
            return self
        return DihedralElement(self.params, -self.shift, False)

    @property
    def is_identity(self) -> bool:
        return self.shift == 0 and not self.reflected

    @property
    def name(self) -> str:
        return f"t{self.shift}" + ("r" if self.reflected else "")

    def __repr__(self) -> str:
        return f"DihedralElement(shift={self.shift}, reflected={self.reflected}, m={self.params.m})"


def dihedral_group(params: KneserParams) -> list[DihedralElement]:
    """All ``2m`` elements: rotations first, then reflections, by shift."""
    return [DihedralElement(params, a, r) for r in (False, True) for a in range(params.m)]


def apply_dihedral(d: DihedralElement, S: StableSet) -> StableSet:
    return tuple(sorted(d(x) for x in S))


def vertex_permutation(d: DihedralElement, kind: str = "stable") -> tuple[int, ...]:
    """Induced permutation ``gamma`` of vertex indices, ``gamma[i] = index(d(S_i))``."""
    g = make_graph(d.params, kind)
    try:
        return tuple(g.index_of(apply_dihedral(d, S)) for S in g.labels)
    except KeyError:
        raise GraphError(f"{d} does not preserve the {kind} vertex set") from None


def dihedral_word(gamma: tuple[int, ...], params: KneserParams) -> DihedralElement:
    """The dihedral element whose induced permutation of SG(n,k) is ``gamma``."""
    if params.n < 2 or params.k < 1:
        raise GraphError("dihedral_word is only defined for n >= 2, k >= 1")
    table = _dihedral_table(params)
    try:
        return table[tuple(gamma)]
    except KeyError:
        raise NotDihedralError("permutation is not induced by a rotation or reflection") from None


@lru_cache(maxsize=None)
def _dihedral_table(params: KneserParams) -> dict[tuple[int, ...], DihedralElement]:
    table = {}
    for d in dihedral_group(params):
        perm = vertex_permutation(d, "stable")
        if perm in table:
            raise NotDihedralError(f"dihedral action is not faithful for {params}")
        table[perm] = d
    return table
