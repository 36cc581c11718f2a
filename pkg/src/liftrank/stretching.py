"""Vertex stretching and labeled stretched cliques.

A stretched clique is a graph obtained from ``K_n`` by 2-stretching ``d`` of
its vertices, kept together with the label of every vertex: its base index
``i`` (1-based) and its role (unstretched, hub ``i_0``, wings ``i_1``, ``i_2``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import IntEnum
from itertools import combinations, product
from typing import Iterable, Sequence, Union

from .graph import Graph, GraphError, _bits, _mask, omega
from .graphio import from_graph6, to_graph6


class Role(IntEnum):
    UNSTRETCHED = -1
    HUB = 0
    WING1 = 1
    WING2 = 2


@dataclass(frozen=True, order=True)
class VertexLabel:
    base: int
    role: Role

    def __str__(self) -> str:
        if self.role is Role.UNSTRETCHED:
            return str(self.base)
        return f"{self.base}_{int(self.role)}"

    @classmethod
    def parse(cls, item: "LabelLike") -> "VertexLabel":
        """Accept ``VertexLabel``, ``int`` (unstretched), ``(i, l)`` or the strings ``"i"`` / ``"i_l"``."""
        if isinstance(item, VertexLabel):
            return item
        if isinstance(item, int):
            return cls(item, Role.UNSTRETCHED)
        if isinstance(item, tuple) and len(item) == 2:
            return cls(int(item[0]), Role(int(item[1])))
        if isinstance(item, str):
            if "_" in item:
                base, role = item.split("_", 1)
                return cls(int(base), Role(int(role)))
            return cls(int(item), Role.UNSTRETCHED)
        raise GraphError(f"cannot interpret {item!r} as a vertex label")


LabelLike = Union[VertexLabel, int, tuple, str]


def stretch(G: Graph, v: int, parts: Sequence[Iterable[int]]) -> tuple[Graph, dict[int, int], list[int]]:
    """Replace ``v`` by a hub and ``len(parts)`` wings.

    Wing ``j`` is adjacent to the hub and to ``parts[j-1]``.  The surviving
    vertices keep their relative order; the hub and wings are appended.

    Returns
    -------
    graph, index_map, new_vertices
        ``index_map`` maps the old indices (except ``v``) to new ones and
        ``new_vertices`` lists the hub followed by the wings.
    """
    G._check_vertex(v)
    nbrs = G.adj[v]
    masks = [_mask(p) for p in parts]
    for m in masks:
        if m & ~nbrs:
            raise GraphError(f"stretching part {_bits(m)} is not contained in the neighbourhood of {v}")
    cover = 0
    for m in masks:
        cover |= m
    if cover != nbrs:
        raise GraphError(f"stretching parts do not cover the neighbourhood of {v}")
    keep = [u for u in G.vertices if u != v]
    index = {old: new for new, old in enumerate(keep)}
    edges = [(index[a], index[b]) for a, b in G.edges() if v not in (a, b)]
    hub = len(keep)
    wings = list(range(hub + 1, hub + 1 + len(parts)))
    for w, m in zip(wings, masks):
        edges.append((hub, w))
        edges.extend((w, index[u]) for u in _bits(m))
    return Graph.from_edges(hub + 1 + len(parts), edges), index, [hub] + wings


@dataclass(frozen=True)
class Decomposition:
    """Core vertex set plus the removed hub-wing edges."""

    core: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]

    @property
    def size(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class StretchedClique:
    """A graph together with labels witnessing membership in ``K_{n,d}``."""

    graph: Graph
    base_n: int
    labels: tuple[VertexLabel, ...]

    def __post_init__(self):
        if len(self.labels) != self.graph.n:
            raise GraphError("one label per vertex is required")
        self.validate()

    # -- construction -------------------------------------------------------

    @classmethod
    def from_labeled_edges(
        cls, base_n: int, stretched: Iterable[int], edges: Iterable[tuple[LabelLike, LabelLike]]
    ) -> "StretchedClique":
        """Build from labeled edges.

        Edges among unstretched vertices and hub-wing edges are implied and may
        be omitted; every other edge must be listed.
        """
        D = sorted(set(stretched))
        labels = _standard_labels(base_n, D)
        index = {lab: v for v, lab in enumerate(labels)}
        pairs = set()
        for a, b in edges:
            la, lb = VertexLabel.parse(a), VertexLabel.parse(b)
            if la not in index or lb not in index:
                raise GraphError(f"edge {la}-{lb} uses a label that does not exist")
            pairs.add((index[la], index[lb]))
        pairs |= _implied_edges(labels, index)
        return cls(Graph.from_edges(len(labels), pairs), base_n, tuple(labels))

    def relabeled(self, perm: Sequence[int]) -> "StretchedClique":
        """Move vertex ``v`` to position ``perm[v]``, carrying its label."""
        labels = [None] * self.graph.n
        for v, p in enumerate(perm):
            labels[p] = self.labels[v]
        return StretchedClique(self.graph.relabel(perm), self.base_n, tuple(labels))

    # -- accessors ----------------------------------------------------------

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def stretched(self) -> tuple[int, ...]:
        return tuple(sorted({lab.base for lab in self.labels if lab.role is Role.HUB}))

    @property
    def d(self) -> int:
        return len(self.stretched)

    def vertex(self, label: LabelLike) -> int:
        lab = VertexLabel.parse(label)
        try:
            return self.labels.index(lab)
        except ValueError:
            raise GraphError(f"no vertex labeled {lab}") from None

    def hubs(self) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab.role is Role.HUB]

    def unstretched(self) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab.role is Role.UNSTRETCHED]

    def wings(self, i: int | None = None) -> list[int]:
        return [
            v for v, lab in enumerate(self.labels)
            if lab.role in (Role.WING1, Role.WING2) and (i is None or lab.base == i)
        ]

    def associated(self, i: int) -> list[int]:
        return [v for v, lab in enumerate(self.labels) if lab.base == i]

    def label_str(self, v: int) -> str:
        return str(self.labels[v])

    # -- validation ---------------------------------------------------------

    def validate(self) -> None:
        """Raise ``GraphError`` unless the labels witness membership in ``K_{base_n, d}``."""
        G, n = self.graph, self.base_n
        seen: dict[int, set[Role]] = {}
        for lab in self.labels:
            if not 1 <= lab.base <= n:
                raise GraphError(f"label {lab} outside base range 1..{n}")
            roles = seen.setdefault(lab.base, set())
            if lab.role in roles:
                raise GraphError(f"duplicate label {lab}")
            roles.add(lab.role)
        for i in range(1, n + 1):
            roles = seen.get(i)
            if roles not in ({Role.UNSTRETCHED}, {Role.HUB, Role.WING1, Role.WING2}):
                raise GraphError(f"base index {i} is neither unstretched nor fully 2-stretched")
        for v, lab in enumerate(self.labels):
            nbr_labels = [self.labels[u] for u in G.neighbors(v)]
            if lab.role is Role.HUB:
                expect = {VertexLabel(lab.base, Role.WING1), VertexLabel(lab.base, Role.WING2)}
                if set(nbr_labels) != expect:
                    raise GraphError(f"hub {lab} must be adjacent exactly to its two wings")
            elif lab.role is Role.UNSTRETCHED:
                for u in nbr_labels:
                    if u.role is Role.HUB:
                        raise GraphError(f"unstretched {lab} adjacent to hub {u}")
            else:
                for u in nbr_labels:
                    if u.base == lab.base and u.role is not Role.HUB:
                        raise GraphError(f"wings of index {lab.base} are adjacent")
                    if u.base != lab.base and u.role is Role.HUB:
                        raise GraphError(f"wing {lab} adjacent to foreign hub {u}")
        U = [v for v, lab in enumerate(self.labels) if lab.role is Role.UNSTRETCHED]
        if not G.is_clique(U):
            raise GraphError("unstretched vertices must form a clique")
        assoc = {i: _mask(v for v, lab in enumerate(self.labels) if lab.base == i) for i in range(1, n + 1)}
        for i, j in combinations(range(1, n + 1), 2):
            if not any(G.adj[v] & assoc[j] for v in _bits(assoc[i])):
                raise GraphError(f"no edge joins the vertices of indices {i} and {j}")

    # -- taxonomy -----------------------------------------------------------

    def tilde_gamma(self, wing: int) -> set[int]:
        lab = self.labels[wing]
        if lab.role not in (Role.WING1, Role.WING2):
            raise GraphError(f"vertex {lab} is not a wing")
        return {self.labels[u].base for u in self.graph.neighbors(wing) if self.labels[u].base != lab.base}

    def in_tilde(self) -> bool:
        full = self.base_n - 1
        return all(len(self.tilde_gamma(w)) < full for w in self.wings())

    def in_hat(self) -> bool:
        G = self.graph
        wings = {i: _mask(self.wings(i)) for i in self.stretched}
        for i, j in combinations(self.stretched, 2):
            count = sum((G.adj[v] & wings[j]).bit_count() for v in _bits(wings[i]))
            if count != 1:
                return False
        return True

    def normalized(self) -> "StretchedClique":
        """Swap wing roles so that wing 1 has the lexicographically smaller ``tilde_gamma``."""
        labels = list(self.labels)
        for i in self.stretched:
            w1, w2 = self.vertex((i, 1)), self.vertex((i, 2))
            if sorted(self.tilde_gamma(w2)) < sorted(self.tilde_gamma(w1)):
                labels[w1], labels[w2] = labels[w2], labels[w1]
        return StretchedClique(self.graph, self.base_n, tuple(labels))

    # -- derived stretched cliques ------------------------------------------

    def _sub(self, removed: set[int], promote: Iterable[int] = ()) -> "StretchedClique":
        promoted = set(promote)
        H, index = self.graph.induced(v for v in self.graph.vertices if v not in removed)
        labels = [None] * H.n
        for old, new in index.items():
            lab = self.labels[old]
            labels[new] = VertexLabel(lab.base, Role.UNSTRETCHED) if old in promoted else lab
        return StretchedClique(H, self.base_n, tuple(labels))

    def peel(self, i: int, keep_wing: int) -> "StretchedClique":
        """Remove hub ``i_0`` and the wing other than ``i_{keep_wing}``, which becomes unstretched."""
        other = 3 - keep_wing
        removed = {self.vertex((i, 0)), self.vertex((i, other))}
        return self._sub(removed, [self.vertex((i, keep_wing))])

    def destroy_hub(self, i: int) -> "StretchedClique":
        """``G ⊖ i_0`` with base indices above ``i`` shifted down; a member of ``K_{n-1,d-1}``."""
        return self._drop_index(i, Role.HUB)

    def delete_unstretched(self, i: int) -> "StretchedClique":
        """``G - i`` for an unstretched ``i``; a member of ``K_{n-1,d}``."""
        return self._drop_index(i, Role.UNSTRETCHED)

    def _drop_index(self, i: int, role: Role) -> "StretchedClique":
        v = self.vertex((i, int(role)) if role is not Role.UNSTRETCHED else i)
        removed = set(self.associated(i)) if role is Role.HUB else {v}
        H, index = self.graph.induced(u for u in self.graph.vertices if u not in removed)
        labels = [None] * H.n
        for old, new in index.items():
            lab = self.labels[old]
            labels[new] = VertexLabel(lab.base - (lab.base > i), lab.role)
        return StretchedClique(H, self.base_n - 1, tuple(labels))

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        return json.dumps(
            {"graph6": to_graph6(self.graph), "base_n": self.base_n, "labels": [str(x) for x in self.labels]}
        )

    @classmethod
    def from_json(cls, text: str | dict) -> "StretchedClique":
        data = json.loads(text) if isinstance(text, str) else text
        G = from_graph6(data["graph6"])
        labels = tuple(VertexLabel.parse(s) for s in data["labels"])
        return cls(G, int(data["base_n"]), labels)

    def __repr__(self) -> str:
        edges = ", ".join(f"{self.labels[u]}-{self.labels[v]}" for u, v in self.graph.edges())
        return f"StretchedClique(n={self.base_n}, D={list(self.stretched)}, edges=[{edges}])"


def _standard_labels(base_n: int, stretched: Iterable[int]) -> list[VertexLabel]:
    D = set(stretched)
    labels = []
    for i in range(1, base_n + 1):
        if i in D:
            labels.extend(VertexLabel(i, r) for r in (Role.HUB, Role.WING1, Role.WING2))
        else:
            labels.append(VertexLabel(i, Role.UNSTRETCHED))
    return labels


def _implied_edges(labels: Sequence[VertexLabel], index: dict[VertexLabel, int]) -> set[tuple[int, int]]:
    pairs = set()
    U = [v for v, lab in enumerate(labels) if lab.role is Role.UNSTRETCHED]
    pairs.update(combinations(U, 2))
    for v, lab in enumerate(labels):
        if lab.role is Role.HUB:
            pairs.add((v, index[VertexLabel(lab.base, Role.WING1)]))
            pairs.add((v, index[VertexLabel(lab.base, Role.WING2)]))
    return pairs


def build_stretched(
    base_n: int, ops: Sequence[tuple[int, Iterable[LabelLike], Iterable[LabelLike]]]
) -> StretchedClique:
    """2-stretch base vertices of ``K_{base_n}`` in the given order.

    Each op is ``(i, A1, A2)``.  Members of ``A1``/``A2`` name vertices of the
    current graph: an ``int`` for an unstretched base vertex, ``(j, l)`` or
    ``"j_l"`` for wing ``l`` of an earlier stretched ``j``.
    """
    current: dict[VertexLabel, set[VertexLabel]] = {}
    for i in range(1, base_n + 1):
        current[VertexLabel(i, Role.UNSTRETCHED)] = {
            VertexLabel(j, Role.UNSTRETCHED) for j in range(1, base_n + 1) if j != i
        }
    done = set()
    for i, A1, A2 in ops:
        me = VertexLabel(i, Role.UNSTRETCHED)
        if i in done or me not in current:
            raise GraphError(f"base vertex {i} cannot be stretched (missing or already stretched)")
        nbrs = current[me]
        parts = [{VertexLabel.parse(x) for x in A} for A in (A1, A2)]
        for part in parts:
            if not part <= nbrs:
                raise GraphError(
                    f"stretching {i}: {sorted(map(str, part - nbrs))} are not neighbours of {i}"
                )
        if parts[0] | parts[1] != nbrs:
            missing = sorted(map(str, nbrs - parts[0] - parts[1]))
            raise GraphError(f"stretching {i}: parts do not cover neighbours {missing}")
        for u in nbrs:
            current[u].discard(me)
        del current[me]
        hub = VertexLabel(i, Role.HUB)
        wings = [VertexLabel(i, Role.WING1), VertexLabel(i, Role.WING2)]
        current[hub] = set(wings)
        for w, part in zip(wings, parts):
            current[w] = {hub} | part
            for u in part:
                current[u].add(w)
        done.add(i)
    labels = _standard_labels(base_n, done)
    index = {lab: v for v, lab in enumerate(labels)}
    edges = [(index[a], index[b]) for a, nb in current.items() for b in nb]
    return StretchedClique(Graph.from_edges(len(labels), edges), base_n, tuple(labels))


# -- decompositions -------------------------------------------------------


def _peel_set(SC: StretchedClique, choice: Sequence[tuple[int, int]]) -> StretchedClique | None:
    """Apply simultaneous peelings; ``None`` if the labeled result is not a stretched clique."""
    removed, promoted = set(), []
    for i, keep in choice:
        removed |= {SC.vertex((i, 0)), SC.vertex((i, 3 - keep))}
        promoted.append(SC.vertex((i, keep)))
    try:
        return SC._sub(removed, promoted)
    except GraphError:
        return None


def _decomposition(SC: StretchedClique, choice: Sequence[tuple[int, int]]) -> Decomposition:
    removed = []
    for i, keep in choice:
        removed.append((SC.vertex((i, 0)), SC.vertex((i, 3 - keep))))
    gone = {v for e in removed for v in e}
    core = tuple(v for v in SC.graph.vertices if v not in gone)
    return Decomposition(core, tuple(removed))


def decompose(SC: StretchedClique) -> Decomposition:
    """Greedy decomposition: repeatedly peel a wing whose ``tilde_gamma`` is full."""
    current = SC
    choice: list[tuple[int, int]] = []
    full = SC.base_n - 1
    while not current.in_tilde():
        for w in current.wings():
            if len(current.tilde_gamma(w)) == full:
                lab = current.labels[w]
                choice.append((lab.base, int(lab.role)))
                current = current.peel(lab.base, int(lab.role))
                break
    return _decomposition(SC, choice)


def minimum_decomposition(SC: StretchedClique) -> tuple[Decomposition, StretchedClique]:
    """A decomposition with the fewest hub-wing edges, found breadth first over peel sets."""
    D = SC.stretched
    for k in range(len(D) + 1):
        for subset in combinations(D, k):
            for keeps in product((1, 2), repeat=k):
                choice = list(zip(subset, keeps))
                core = _peel_set(SC, choice)
                if core is not None and core.in_tilde():
                    return _decomposition(SC, choice), core
    raise AssertionError("peeling every stretched index always yields K_n")


def deficiency(SC: StretchedClique) -> int:
    if SC.d > 12:
        raise GraphError("deficiency search is limited to d <= 12")
    return minimum_decomposition(SC)[0].size


def core(SC: StretchedClique) -> StretchedClique:
    return minimum_decomposition(SC)[1]


def deficiency_bound(SC: StretchedClique) -> int:
    return max(0, omega(SC.graph) - SC.base_n + SC.d)
