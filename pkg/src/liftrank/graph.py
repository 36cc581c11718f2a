"""Simple undirected graphs stored as per-vertex neighbour bitsets."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

MAX_VERTICES = 64


class GraphError(ValueError):
    pass


def _mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices ``0..n-1``.

    ``adj[v]`` is an integer bitset whose bit ``u`` is set iff ``{u, v}`` is
    an edge.  Instances are immutable and hashable.
    """

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphError(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise GraphError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adj):
            if nb & ~full:
                raise GraphError(f"vertex {v} has a neighbour index >= n")
            if nb >> v & 1:
                raise GraphError(f"loop at vertex {v}")
            for u in _bits(nb):
                if not self.adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj))

    @property
    def vertices(self) -> range:
        return range(self.n)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    def num_edges(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return _bits(self.adj[v])

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [nb.bit_count() for nb in self.adj]

    def complement(self) -> "Graph":
        full = (1 << self.n) - 1
        return Graph(self.n, tuple(full & ~nb & ~(1 << v) for v, nb in enumerate(self.adj)))

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with vertex ``v`` renamed to ``perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling is not a permutation")
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def induced(self, keep: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on ``keep`` with vertices renumbered in increasing order."""
        kept = sorted(set(keep))
        for v in kept:
            self._check_vertex(v)
        index = {old: new for new, old in enumerate(kept)}
        edges = [(index[u], index[v]) for u, v in self.edges() if u in index and v in index]
        return Graph.from_edges(len(kept), edges), index

    def is_stable(self, vertices: Iterable[int]) -> bool:
        m = _mask(vertices)
        return all(not (self.adj[v] & m) for v in _bits(m))

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(u, v) for u, v in combinations(vs, 2))

    def is_bipartite(self) -> bool:
        color = [-1] * self.n
        for s in range(self.n):
            if color[s] >= 0:
                continue
            color[s] = 0
            stack = [s]
            while stack:
                v = stack.pop()
                for u in _bits(self.adj[v]):
                    if color[u] < 0:
                        color[u] = 1 - color[v]
                        stack.append(u)
                    elif color[u] == color[v]:
                        return False
        return True

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} out of range for n={self.n}")

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"


def complete(n: int) -> Graph:
    if n < 0:
        raise GraphError("n must be non-negative")
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def wheel(rim: int) -> Graph:
    """Cycle on ``rim`` vertices plus a hub adjacent to all of them (hub is last)."""
    edges = [(i, (i + 1) % rim) for i in range(rim)] + [(i, rim) for i in range(rim)]
    return Graph.from_edges(rim + 1, edges)


def delete(G: Graph, S: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """Delete the vertex set ``S``; returns the induced subgraph and the old->new map."""
    S = set(S)
    for v in S:
        G._check_vertex(v)
    return G.induced(v for v in G.vertices if v not in S)


def destroy(G: Graph, v: int) -> tuple[Graph, dict[int, int]]:
    """Delete ``v`` together with its neighbourhood."""
    G._check_vertex(v)
    return delete(G, G.neighbors(v) + [v])


# -- stability and clique numbers ---------------------------------------------


def _color_bound(adj: Sequence[int], P: int) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring of the clique candidates ``P``.

    Returns the vertices in colouring order and the colour number of each;
    colour numbers bound the clique size achievable from that suffix.
    """
    order: list[int] = []
    colors: list[int] = []
    uncolored = P
    color = 0
    while uncolored:
        color += 1
        Q = uncolored
        while Q:
            low = Q & -Q
            v = low.bit_length() - 1
            Q &= ~low & ~adj[v]
            uncolored &= ~low
            order.append(v)
            colors.append(color)
    return order, colors


def _max_clique(adj: Sequence[int], P: int) -> tuple[int, int]:
    best_size = 0
    best_set = 0

    def expand(R: int, size: int, P: int) -> None:
        nonlocal best_size, best_set
        order, colors = _color_bound(adj, P)
        for idx in range(len(order) - 1, -1, -1):
            if size + colors[idx] <= best_size:
                return
            v = order[idx]
            R2 = R | (1 << v)
            P2 = P & adj[v]
            if P2:
                expand(R2, size + 1, P2)
            elif size + 1 > best_size:
                best_size, best_set = size + 1, R2
            P &= ~(1 << v)

    if P:
        expand(0, 0, P)
    return best_size, best_set


def max_clique(G: Graph) -> list[int]:
    return _bits(_max_clique(G.adj, (1 << G.n) - 1)[1])


def omega(G: Graph) -> int:
    """Clique number, by colouring-bounded branch and bound on bitsets."""
    return _max_clique(G.adj, (1 << G.n) - 1)[0]


def max_stable_set(G: Graph) -> list[int]:
    return max_clique(G.complement())


def alpha(G: Graph) -> int:
    """Stability number, computed as the clique number of the complement."""
    return omega(G.complement())


def stable_set_masks(G: Graph, size: int | None = None) -> list[int]:
    """Bitmasks of all stable sets (optionally of one size), lexicographic by sorted vertex tuple."""
    out: list[int] = []
    adj = G.adj
    n = G.n

    def rec(start: int, current: int, count: int, forbidden: int) -> None:
        if size is None or count == size:
            out.append(current)
            if size is not None:
                return
        for v in range(start, n):
            if not forbidden >> v & 1:
                rec(v + 1, current | (1 << v), count + 1, forbidden | adj[v])

    rec(0, 0, 0, 0)
    return out


def stable_sets(G: Graph, size: int) -> list[tuple[int, ...]]:
    """All stable sets with exactly ``size`` vertices, in lexicographic order."""
    return [tuple(_bits(m)) for m in stable_set_masks(G, size)]
