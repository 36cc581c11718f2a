"""Canonical labeling by individualization-refinement with automorphism pruning.

The canonical form of a graph is its adjacency matrix under the labeling that
minimises the upper-triangle bit string over all leaves of the search tree.
Since refinement and cell selection depend only on the (coloured) graph
structure, the leaf set is label invariant, hence so is the minimum.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .graph import Graph


@dataclass(frozen=True, order=True)
class CanonicalForm:
    """Relabeling-invariant form: vertex count, colour profile and canonical edges."""

    n: int
    colors: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def key(self) -> bytes:
        body = bytearray([self.n])
        body += bytes(self.colors)
        for u, v in self.edges:
            body += bytes((u, v))
        return bytes(body)


def _refine(adj: Sequence[int], cells: list[list[int]]) -> list[list[int]]:
    """Coarsest equitable refinement; sub-cells ordered by neighbour-count signature."""
    while True:
        masks = [sum(1 << v for v in cell) for cell in cells]
        new_cells: list[list[int]] = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[tuple[int, ...], list[int]] = {}
            for v in cell:
                sig = tuple((adj[v] & m).bit_count() for m in masks)
                groups.setdefault(sig, []).append(v)
            if len(groups) > 1:
                changed = True
                for sig in sorted(groups):
                    new_cells.append(groups[sig])
            else:
                new_cells.append(cell)
        cells = new_cells
        if not changed:
            return cells


def _certificate(adj: Sequence[int], order: Sequence[int]) -> int:
    """Upper-triangle adjacency bits of the graph relabeled by ``order`` (position -> vertex)."""
    n = len(order)
    cert = 0
    for i in range(n):
        ai = adj[order[i]]
        for j in range(i + 1, n):
            cert = (cert << 1) | (ai >> order[j] & 1)
    return cert


class _Orbits:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def canonical_labeling(G: Graph, colors: Sequence[int] | None = None) -> tuple[list[int], int]:
    """Return ``(order, certificate)`` where ``order[i]`` is the vertex placed at position ``i``.

    ``colors`` optionally restricts relabelings to colour-preserving ones.
    """
    n = G.n
    adj = G.adj
    if n == 0:
        return [], 0
    if colors is None:
        colors = [0] * n
    by_color: dict[int, list[int]] = {}
    for v in range(n):
        by_color.setdefault(colors[v], []).append(v)
    start = _refine(adj, [by_color[c] for c in sorted(by_color)])

    best_cert: int | None = None
    best_order: list[int] = []
    automorphisms: list[tuple[int, ...]] = []

    def search(cells: list[list[int]], fixed: tuple[int, ...]) -> None:
        nonlocal best_cert, best_order
        target = None
        for idx, cell in enumerate(cells):
            if len(cell) > 1 and (target is None or len(cell) < len(cells[target])):
                target = idx
        if target is None:
            order = [cell[0] for cell in cells]
            cert = _certificate(adj, order)
            if best_cert is None or cert < best_cert:
                best_cert, best_order = cert, order
            elif cert == best_cert:
                gamma = [0] * n
                for a, b in zip(order, best_order):
                    gamma[a] = b
                automorphisms.append(tuple(gamma))
            return
        explored: list[int] = []
        for v in sorted(cells[target]):
            if explored:
                orbits = _Orbits(n)
                for gamma in automorphisms:
                    if all(gamma[f] == f for f in fixed):
                        for x in range(n):
                            orbits.union(x, gamma[x])
                root = orbits.find(v)
                if any(orbits.find(w) == root for w in explored):
                    continue
            explored.append(v)
            rest = [w for w in cells[target] if w != v]
            child = cells[:target] + [[v], rest] + cells[target + 1:]
            search(_refine(adj, child), fixed + (v,))

    search(start, ())
    assert best_cert is not None
    return best_order, best_cert


def canonical(G: Graph, colors: Sequence[int] | None = None) -> CanonicalForm:
    order, _ = canonical_labeling(G, colors)
    position = {v: i for i, v in enumerate(order)}
    edges = tuple(sorted(tuple(sorted((position[u], position[v]))) for u, v in G.edges()))
    col = tuple(colors[v] for v in order) if colors is not None else ()
    return CanonicalForm(G.n, col, edges)


def canonical_graph(G: Graph) -> Graph:
    """The canonical representative: ``G`` relabeled into canonical order."""
    form = canonical(G)
    return Graph.from_edges(form.n, form.edges)


def are_isomorphic(G: Graph, H: Graph) -> bool:
    if G.n != H.n or G.num_edges() != H.num_edges() or sorted(G.degrees()) != sorted(H.degrees()):
        return False
    return canonical(G) == canonical(H)


def _brute_isomorphic(G: Graph, H: Graph) -> bool:
    """Permutation brute force with degree pruning; an oracle for tests and audits."""
    if G.n != H.n or G.num_edges() != H.num_edges():
        return False
    n = G.n
    dg, dh = G.degrees(), H.degrees()
    if sorted(dg) != sorted(dh):
        return False
    image = [-1] * n
    used = 0

    def rec(v: int) -> bool:
        nonlocal used
        if v == n:
            return True
        for w in range(n):
            if used >> w & 1 or dg[v] != dh[w]:
                continue
            ok = all(G.has_edge(v, u) == H.has_edge(w, image[u]) for u in range(v))
            if ok:
                image[v] = w
                used |= 1 << w
                if rec(v + 1):
                    return True
                used &= ~(1 << w)
        image[v] = -1
        return False

    return rec(0)


__all__ = [
    "CanonicalForm",
    "canonical",
    "canonical_graph",
    "canonical_labeling",
    "are_isomorphic",
]
