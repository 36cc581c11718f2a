"""Closed-form constructors for the named graph families."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .graph import Graph, GraphError, delete
from .stretching import Role, StretchedClique, VertexLabel, build_stretched
from . import figures

FAMILY_NAMES = ("a", "a-s", "b", "h-prime", "g21", "g22", "g31", "g41", "fig7")
NAMED = ("g21", "g22", "g31", "g41", "fig7")


def modular_add(a: int, b: int, n: int) -> int:
    """The unique ``c`` in ``1..n`` with ``a + b - c`` divisible by ``n``."""
    if n < 1:
        raise ValueError("modulus must be positive")
    return (a + b - 1) % n + 1


def modular_sub(a: int, b: int, n: int) -> int:
    return modular_add(a, -b, n)


@dataclass(frozen=True)
class FamilySpec:
    """Which graph to build.

    ``family`` is one of ``a``, ``a-s``, ``b``, ``b-prime``, ``h-prime`` or
    ``named``; ``name`` selects a named graph.
    """

    family: str
    k: int = 0
    S: frozenset[int] = field(default_factory=frozenset)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "S", frozenset(self.S))
        if self.family == "named":
            if self.name not in NAMED:
                raise GraphError(f"unknown named graph {self.name!r}; choose from {', '.join(NAMED)}")
            return
        if self.family not in ("a", "a-s", "b", "b-prime", "h-prime"):
            raise GraphError(f"unknown family {self.family!r}")
        if self.k < 3:
            raise GraphError("family parameter k must be at least 3")
        if self.family in ("b", "b-prime") and self.k % 2 == 0:
            raise GraphError("B_k requires odd k")
        if self.family == "a-s" and not self.S <= set(range(4, self.k + 1)):
            raise GraphError("S must be a subset of {4, ..., k}")
        if self.family != "a-s" and self.S:
            raise GraphError("S is only meaningful for the a-s family")

    @property
    def label(self) -> str:
        if self.family == "named":
            return self.name
        if self.family == "a-s":
            return f"a-s:{self.k}:{','.join(map(str, sorted(self.S)))}"
        return f"{self.family}:{self.k}"


def construct(spec: FamilySpec) -> StretchedClique | Graph:
    """Build the graph named by ``spec``; ``b`` returns a plain ``Graph``."""
    if spec.family == "named":
        return NAMED_BUILDERS[spec.name]()
    if spec.family in ("a", "a-s"):
        return a_graph(spec.k, spec.S)
    if spec.family == "b":
        return b_graph(spec.k)
    if spec.family == "b-prime":
        return b_prime(spec.k)
    return h_prime(spec.k)


def a_graph(k: int, S: Sequence[int] = ()) -> StretchedClique:
    """``A_k`` (or ``A_{k,S}``): ``K_k`` with vertices ``4..k`` stretched."""
    S = set(S)
    if k < 3 or not S <= set(range(4, k + 1)):
        raise GraphError("need k >= 3 and S within {4..k}")
    edges: list[tuple] = []
    for i in range(4, k + 1):
        edges += [((i, 1), 2), ((i, 1), 3), ((i, 2), 1)]
        if i in S:
            edges.append(((i, 2), 2))
        edges += [((i, 2), (j, 1)) for j in range(i + 1, k + 1)]
    return StretchedClique.from_labeled_edges(k, range(4, k + 1), edges)


def _b_index(k: int, i: int, j: int) -> int:
    return 4 * (i - 1) + j


def b_graph(k: int) -> Graph:
    """``B_k`` on vertices ``i_j`` (index ``4(i-1)+j``), ``i`` in ``1..k``, ``j`` in ``0..3``."""
    if k < 3 or k % 2 == 0:
        raise GraphError("B_k requires odd k >= 3")
    edges = []
    for i in range(1, k + 1):
        for j in range(4):
            edges.append((_b_index(k, i, j), _b_index(k, i, (j + 1) % 4)))
        for t in range(1, (k - 1) // 2 + 1):
            j = modular_add(i, t, k)
            edges.append((_b_index(k, i, 0), _b_index(k, j, 2)))
            edges.append((_b_index(k, i, 1), _b_index(k, j, 3)))
    return Graph.from_edges(4 * k, edges)


def b_layer(k: int, layer: int) -> list[int]:
    return [_b_index(k, i, layer) for i in range(1, k + 1)]


def b_prime(k: int) -> StretchedClique:
    """``B_k`` minus layer 3, labeled as a stretched clique: hub ``i_1``, wings ``i_0``, ``i_2``."""
    G, index = delete(b_graph(k), b_layer(k, 3))
    labels = [None] * G.n
    roles = {0: Role.WING1, 1: Role.HUB, 2: Role.WING2}
    for old, new in index.items():
        i, j = old // 4 + 1, old % 4
        labels[new] = VertexLabel(i, roles[j])
    return StretchedClique(G, k, tuple(labels))


def b_vertex_name(k: int, v: int) -> str:
    return f"{v // 4 + 1}_{v % 4}"


def bk_automorphisms(k: int) -> list[list[int]]:
    """The three maps ``f1`` (layer swap), ``f2`` (cyclic shift), ``f3`` (reflection)."""
    if k < 3 or k % 2 == 0:
        raise GraphError("B_k requires odd k >= 3")
    f1, f2, f3 = [0] * (4 * k), [0] * (4 * k), [0] * (4 * k)
    for i in range(1, k + 1):
        for j in range(4):
            v = _b_index(k, i, j)
            f1[v] = _b_index(k, i, j ^ 1)
            f2[v] = _b_index(k, modular_add(i, 1, k), j)
            f3[v] = _b_index(k, modular_sub(2, i, k), 3 - j)
    return [f1, f2, f3]


def is_automorphism(G: Graph, f: Sequence[int]) -> bool:
    if sorted(f) != list(range(G.n)):
        raise GraphError("map is not a bijection of the vertex set")
    return all(G.has_edge(f[u], f[v]) for u, v in G.edges()) and G.num_edges() == len(
        {tuple(sorted((f[u], f[v]))) for u, v in G.edges()}
    )


def orbit(n: int, gens: Sequence[Sequence[int]], start: int = 0) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for g in gens:
            if g[v] not in seen:
                seen.add(g[v])
                queue.append(g[v])
    return seen


def is_vertex_transitive_via(G: Graph, gens: Sequence[Sequence[int]]) -> bool:
    """True iff every generator is an automorphism and the generated group has one orbit."""
    for g in gens:
        if len(g) != G.n:
            raise GraphError("generator length does not match the vertex count")
        if not is_automorphism(G, g):
            return False
    if G.n == 0:
        return True
    return len(orbit(G.n, gens)) == G.n


def h_prime(k: int) -> StretchedClique:
    """``H'_k``: base ``K_k`` with ``3..k`` stretched and wing edges ``i_1 j_2`` for ``i != j``."""
    if k < 3:
        raise GraphError("H'_k needs k >= 3")
    edges: list[tuple] = []
    for i in range(3, k + 1):
        edges += [((i, 1), 2), ((i, 2), 1)]
        edges += [((i, 1), (j, 2)) for j in range(3, k + 1) if j != i]
    return StretchedClique.from_labeled_edges(k, range(3, k + 1), edges)


def g21() -> StretchedClique:
    return build_stretched(4, [(4, {3}, {1, 2})])


def g22() -> StretchedClique:
    return build_stretched(4, [(4, {2, 3}, {1, 2})])


def g31() -> StretchedClique:
    return build_stretched(5, [(4, {2}, {1, 3, 5}), (5, {1, 2, "4_2"}, {3})])


def g41() -> StretchedClique:
    edges = [
        ("4_1", 1), ("4_1", 2), ("4_1", "5_2"),
        ("4_2", 2), ("4_2", 3), ("4_2", "6_1"),
        ("5_1", 2), ("5_1", 3), ("5_1", "6_2"),
        ("5_2", 1), ("5_2", 3),
        ("6_1", 1), ("6_1", 3),
        ("6_2", 1), ("6_2", 2),
    ]
    return StretchedClique.from_labeled_edges(6, (4, 5, 6), edges)


def fig7() -> StretchedClique:
    edges = [
        ("4_1", 3), ("4_1", "5_1"),
        ("4_2", 1), ("4_2", 2), ("4_2", "5_1"),
        ("5_1", 2), ("5_1", 3),
        ("5_2", 1), ("5_2", 2),
    ]
    return StretchedClique.from_labeled_edges(5, (4, 5), edges)


NAMED_BUILDERS: dict[str, Callable[[], StretchedClique]] = {
    "g21": g21,
    "g22": g22,
    "g31": g31,
    "g41": g41,
    "fig7": fig7,
}


def parse_family(text: str) -> FamilySpec:
    """Parse ``a:5``, ``a-s:6:4,6``, ``b:5``, ``b-prime:5``, ``h-prime:5`` or a named graph."""
    parts = text.strip().lower().split(":")
    head = parts[0]
    if head in NAMED:
        return FamilySpec("named", name=head)
    try:
        k = int(parts[1])
    except (IndexError, ValueError):
        raise GraphError(f"family spec {text!r} needs an integer parameter, e.g. {head}:5") from None
    S: frozenset[int] = frozenset()
    if head == "a-s" and len(parts) > 2 and parts[2]:
        S = frozenset(int(x) for x in parts[2].split(","))
    return FamilySpec(head, k, S)


def fig_graphs():
    return figures.fig5_graphs(), figures.fig6_graphs()
