"""Hard-coded small graphs and reference optima used by the reports.

Edge tokens such as ``"41"`` name wing ``4_1``; single digits are
unstretched vertices.  Hub-wing edges and edges among unstretched vertices
are implied.
"""

from __future__ import annotations

from .stretching import StretchedClique, build_stretched


def _token(tok: str):
    return tok if len(tok) == 1 else f"{tok[0]}_{tok[1]}"


def parse_edges(spec: str) -> list[tuple[str, str]]:
    pairs = []
    for item in spec.split(","):
        a, b = item.strip().split("-")
        pairs.append((_token(a), _token(b)))
    return pairs


def k52(spec: str) -> StretchedClique:
    """A member of ``K_{5,2}`` with stretched indices 4 and 5."""
    return StretchedClique.from_labeled_edges(5, (4, 5), parse_edges(spec))


# graphs in hat-K_{5,2} with clique number at most 3, and their reference
# optima of max e^T x over the second lifted relaxation
FIG5 = [
    ("1-41, 1-51, 2-41, 2-51, 3-42, 3-52, 41-52", 3.01280),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51", 3.01224),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-52", 3.01183),
    ("1-41, 1-51, 2-41, 2-51, 3-42, 3-52, 42-52", 3.01059),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 42-52", 3.01020),
    ("1-42, 1-52, 2-42, 2-51, 3-41, 3-51, 3-52, 42-52", 3.00911),
    ("1-41, 1-42, 1-51, 2-41, 2-52, 3-42, 3-51, 41-51", 3.00808),
    ("1-41, 1-42, 1-51, 2-41, 2-52, 3-42, 3-51, 42-52", 3.00709),
    ("1-41, 1-42, 1-51, 2-41, 2-52, 3-42, 3-51, 41-52", 3.00688),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 3-42, 3-51, 41-52", 3.00682),
    ("1-41, 1-42, 1-51, 1-52, 2-41, 2-52, 3-42, 3-51, 41-51", 3.00512),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 2-52, 3-42, 3-51, 42-51", 3.00493),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 2-52, 3-42, 3-51, 41-51", 3.00483),
]

# the remaining members of K_{5,2} with clique number at most 3
FIG6 = [
    ("1-41, 1-51, 2-41, 2-51, 3-42, 3-52, 41-52, 42-52", 3.01029),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-52, 42-52", 3.00971),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-52, 42-51", 3.00897),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 41-52, 42-51", 3.00896),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 42-52", 3.00871),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 41-52, 42-52", 3.00868),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-52, 42-51, 42-52", 3.00863),
    ("1-41, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 41-52, 42-51, 42-52", 3.00863),
    ("1-42, 1-51, 2-42, 2-52, 3-41, 3-51, 3-52, 42-51, 42-52", 3.00727),
    ("1-41, 1-42, 1-51, 2-41, 2-52, 3-42, 3-51, 41-52, 42-52", 3.00657),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 3-42, 3-51, 41-52, 42-52", 3.00635),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 41-52", 3.00627),
    ("1-41, 1-42, 1-51, 2-41, 2-52, 3-42, 3-51, 41-51, 41-52", 3.00615),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 42-52", 3.00605),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 41-52, 42-51", 3.00577),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 41-52, 42-52", 3.00571),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 3-42, 3-51, 41-51, 41-52, 42-51, 42-52", 3.00560),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 2-52, 3-42, 3-51, 41-51, 42-51", 3.00483),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 2-52, 3-42, 3-51, 41-51, 42-52", 3.00000),
    ("1-41, 1-42, 1-51, 1-52, 2-41, 2-52, 3-42, 3-51, 41-51, 42-52", 3.00000),
    ("1-41, 1-42, 1-52, 2-41, 2-51, 2-52, 3-42, 3-51, 41-51, 42-51, 42-52", 3.00000),
    ("1-41, 1-42, 1-51, 2-41, 2-52, 3-42, 3-51, 41-51, 42-52", 3.00000),
    ("1-41, 1-42, 1-51, 2-41, 2-52, 3-42, 3-51, 41-51, 41-52, 42-52", 3.00000),
    ("1-41, 1-51, 2-41, 2-51, 3-42, 3-52, 41-52, 42-51, 42-52", 3.00000),
    ("1-42, 1-51, 2-42, 2-51, 3-41, 3-52, 41-51, 42-52", 3.00000),
]


def fig5_graphs() -> list[StretchedClique]:
    return [k52(spec) for spec, _ in FIG5]


def fig6_graphs() -> list[StretchedClique]:
    return [k52(spec) for spec, _ in FIG6]


def fig2_g2() -> StretchedClique:
    return build_stretched(6, [(5, {3, 4, 6}, {1, 2, 6})])


def fig2_g3() -> StretchedClique:
    return build_stretched(6, [(5, {3, 4, 6}, {1, 2, 6}), (6, {3, "5_2"}, {1, 2, 3, 4, "5_1"})])


def fig4_g1() -> StretchedClique:
    spec = ("41-1, 41-2, 42-3, 41-51, 42-62, 41-62, 51-2, 52-62, 52-1, 52-3, 61-1, 61-2, 62-3")
    return StretchedClique.from_labeled_edges(6, (4, 5, 6), parse_edges(spec))


def fig4_g2() -> StretchedClique:
    spec = ("41-3, 41-2, 42-1, 42-2, 42-3, 42-51, 42-62, 51-1, 51-61, 52-2, 52-3, 61-2, 61-3, "
            "62-1, 62-3")
    return StretchedClique.from_labeled_edges(6, (4, 5, 6), parse_edges(spec))
