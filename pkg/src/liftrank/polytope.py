"""The fractional stable set polytope, its homogenized cone and certificate vectors.

Cone vectors are indexed by ``{0} ∪ V``: entry 0 is the homogenizing
coordinate and entry ``v + 1`` belongs to vertex ``v``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .graph import Graph, GraphError, _bits, alpha, stable_set_masks
from .stretching import StretchedClique


@dataclass(frozen=True)
class LinearInequality:
    """``coeffs . x <= rhs`` with integer data."""

    coeffs: tuple[int, ...]
    rhs: int

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        object.__setattr__(self, "rhs", int(self.rhs))

    @classmethod
    def indicator(cls, n: int, vertices: Iterable[int], rhs: int) -> "LinearInequality":
        """``sum_{v in vertices} x_v <= rhs``."""
        c = [0] * n
        for v in vertices:
            c[v] = 1
        return cls(tuple(c), rhs)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def value(self, x: Sequence) -> object:
        return sum(c * xi for c, xi in zip(self.coeffs, x))

    def value_mask(self, mask: int) -> int:
        return sum(self.coeffs[v] for v in _bits(mask))

    def __str__(self) -> str:
        terms = " + ".join(f"{c}*x{v}" for v, c in enumerate(self.coeffs) if c)
        return f"{terms or '0'} <= {self.rhs}"


def rank_inequality(G: Graph) -> LinearInequality:
    """``e^T x <= alpha(G)``."""
    return LinearInequality((1,) * G.n, alpha(G))


def frac_system(G: Graph) -> list[LinearInequality]:
    """Non-negativity, upper bounds and one edge inequality per edge."""
    n = G.n
    rows = []
    for v in range(n):
        c = [0] * n
        c[v] = -1
        rows.append(LinearInequality(tuple(c), 0))
    for v in range(n):
        rows.append(LinearInequality.indicator(n, [v], 1))
    for u, v in G.edges():
        rows.append(LinearInequality.indicator(n, [u, v], 1))
    return rows


@dataclass(frozen=True)
class ConeVector:
    """A vector in ``R^{1+n}`` indexed by ``{0} ∪ V``; entries are exact when built from rationals."""

    entries: tuple

    @classmethod
    def point(cls, x: Sequence, scale=1) -> "ConeVector":
        return cls((scale,) + tuple(scale * xi for xi in x))

    @classmethod
    def incidence(cls, n: int, vertices: Iterable[int]) -> "ConeVector":
        """``(1, chi_S)``."""
        x = [Fraction(0)] * n
        for v in vertices:
            x[v] = Fraction(1)
        return cls.point(x, Fraction(1))

    @property
    def n(self) -> int:
        return len(self.entries) - 1

    @property
    def head(self):
        return self.entries[0]

    @property
    def x(self) -> tuple:
        return self.entries[1:]

    def __add__(self, other: "ConeVector") -> "ConeVector":
        return ConeVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "ConeVector") -> "ConeVector":
        return ConeVector(tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scaled(self, lam) -> "ConeVector":
        return ConeVector(tuple(lam * a for a in self.entries))

    def violation(self, ineq: LinearInequality):
        """``c^T w_x - c_0 w_0``; positive means the inequality is violated."""
        return ineq.value(self.x) - ineq.rhs * self.head

    def as_floats(self) -> list[float]:
        return [float(a) for a in self.entries]

    def to_json(self) -> list[str]:
        return [str(a) for a in self.entries]


def _stable_masks_satisfying(G: Graph, eqs: Sequence[LinearInequality]) -> list[int]:
    for e in eqs:
        if e.n != G.n:
            raise GraphError("equality dimension does not match the graph")
    return [m for m in stable_set_masks(G) if all(e.value_mask(m) == e.rhs for e in eqs)]


def u_vector(G: Graph, eqs: Sequence[LinearInequality]) -> ConeVector:
    """Sum of ``(1, chi_S)`` over stable sets ``S`` satisfying every equality ``c^T chi_S = c_0``."""
    masks = _stable_masks_satisfying(G, eqs)
    if not masks:
        raise GraphError("no stable set satisfies the given equalities")
    counts = [0] * G.n
    for m in masks:
        for v in _bits(m):
            counts[v] += 1
    return ConeVector((Fraction(len(masks)),) + tuple(Fraction(c) for c in counts))


def fixed_one(n: int, v: int) -> LinearInequality:
    """The equality ``x_v = 1`` in inequality clothing."""
    return LinearInequality.indicator(n, [v], 1)


def v_vector(SC: StretchedClique, eps) -> ConeVector:
    """``u_{e^T x = d+1} - eps (1, chi_D0)`` with ``D0`` the hub set."""
    eps = Fraction(eps) if isinstance(eps, (int, Rational, str)) else eps
    G = SC.graph
    u = u_vector(G, [LinearInequality((1,) * G.n, SC.d + 1)])
    shift = [eps] + [eps if v in set(SC.hubs()) else 0 for v in range(G.n)]
    return ConeVector(tuple(a - b for a, b in zip(u.entries, shift)))


def rational_rank(rows: Sequence[Sequence]) -> int:
    """Rank by fraction-exact Gaussian elimination."""
    M = [[Fraction(x) for x in row] for row in rows]
    if not M:
        return 0
    rank, cols = 0, len(M[0])
    for c in range(cols):
        pivot = next((r for r in range(rank, len(M)) if M[r][c] != 0), None)
        if pivot is None:
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        p = M[rank][c]
        for r in range(len(M)):
            if r != rank and M[r][c] != 0:
                f = M[r][c] / p
                M[r] = [a - f * b for a, b in zip(M[r], M[rank])]
        rank += 1
    return rank


def tight_stable_sets(G: Graph, ineq: LinearInequality) -> list[int]:
    """Stable-set masks meeting ``ineq`` with equality; raises if ``ineq`` is invalid for STAB(G)."""
    tight = []
    for m in stable_set_masks(G):
        val = ineq.value_mask(m)
        if val > ineq.rhs:
            raise GraphError(f"inequality {ineq} is violated by the stable set {_bits(m)}")
        if val == ineq.rhs:
            tight.append(m)
    return tight


def is_facet(G: Graph, ineq: LinearInequality) -> bool:
    """Exact test that the tight stable sets span an affine space of dimension ``|V| - 1``."""
    tight = tight_stable_sets(G, ineq)
    rows = [[1] + [m >> v & 1 for v in range(G.n)] for m in tight]
    return rational_rank(rows) == G.n


def cone_frac_contains(G: Graph, w: ConeVector, tol=0) -> bool:
    """Membership of ``w`` in the homogenized cone of FRAC(G), up to ``tol``."""
    if w.n != G.n:
        raise GraphError("cone vector dimension does not match the graph")
    w0, x = w.head, w.x
    if w0 < -tol:
        return False
    if any(xi < -tol or xi > w0 + tol for xi in x):
        return False
    return all(x[u] + x[v] <= w0 + tol for u, v in G.edges())
