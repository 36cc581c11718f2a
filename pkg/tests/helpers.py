"""Shared hypothesis strategies and brute-force oracles."""

from itertools import combinations

from hypothesis import strategies as st

from liftrank.graph import Graph, _bits, complete
from liftrank.stretching import Role, StretchedClique, VertexLabel, stretch


@st.composite
def graphs(draw, min_n=0, max_n=10):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, c in zip(pairs, chosen) if c])


@st.composite
def stretched_cliques(draw, min_n=3, max_n=6, max_d=None):
    """Random member of K_{n,d}: stretch random base vertices with random covering pairs."""
    n = draw(st.integers(min_n, max_n))
    d = draw(st.integers(0, n if max_d is None else min(n, max_d)))
    targets = draw(st.permutations(range(1, n + 1)))[:d]
    G = complete(n)
    labels = [VertexLabel(i, Role.UNSTRETCHED) for i in range(1, n + 1)]
    for base in targets:
        v = labels.index(VertexLabel(base, Role.UNSTRETCHED))
        nbrs = _bits(G.adj[v])
        side = draw(st.lists(st.sampled_from((0, 1, 2)), min_size=len(nbrs), max_size=len(nbrs)))
        A1 = [u for u, s in zip(nbrs, side) if s in (0, 2)]
        A2 = [u for u, s in zip(nbrs, side) if s in (1, 2)]
        G, index, new = stretch(G, v, [A1, A2])
        fresh = [None] * G.n
        for old, nv in index.items():
            fresh[nv] = labels[old]
        for r, w in zip((Role.HUB, Role.WING1, Role.WING2), new):
            fresh[w] = VertexLabel(base, r)
        labels = fresh
    return StretchedClique(G, n, tuple(labels))


def brute_alpha(G):
    best = 0
    for mask in range(1 << G.n):
        vs = _bits(mask)
        if len(vs) > best and all(not G.has_edge(u, v) for u, v in combinations(vs, 2)):
            best = len(vs)
    return best
