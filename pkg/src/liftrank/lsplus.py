"""Lifted relaxations of the fractional stable set polytope.

The ``k``-th lifted relaxation is unrolled into one block-diagonal SDP.  Each
tree node owns a symmetric matrix ``Y`` restricted to its *free* vertices:
vertices already conditioned to 1 merge with the homogenizing index 0,
vertices conditioned to 0 (and neighbours of 1-vertices) disappear.  A node
at depth ``k`` is a leaf whose vector must satisfy the homogenized FRAC
system.  Ties between a node and its parent are built in by sharing affine
expressions, so the only free variables are the off-diagonal non-edge
entries of every node plus the quantities being optimized.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from .graph import Graph, GraphError, _bits, alpha, stable_set_masks
from .polytope import (
    ConeVector,
    LinearInequality,
    cone_frac_contains,
    fixed_one,
    is_facet,
    rational_rank,
    tight_stable_sets,
    u_vector,
    v_vector,
)
from .sdp import DIAG, PSD, SdpBuilder, SdpProblem, SolverSettings, solve
from .sdp.sdpa import write_sdpa
from .stretching import StretchedClique

log = logging.getLogger(__name__)

RANK_TOL = 1e-5
EPS_THRESHOLD = 1e-5
MAX_VARIABLES = 6000


class BudgetError(GraphError):
    """The requested level would produce an SDP larger than the size budget."""


# -- affine expressions ------------------------------------------------------


class Affine:
    """``const + sum coef * y_var`` with float data."""

    __slots__ = ("const", "terms")

    def __init__(self, const: float = 0.0, terms: dict[int, float] | None = None):
        self.const = float(const)
        self.terms = terms or {}

    @classmethod
    def var(cls, index: int) -> "Affine":
        return cls(0.0, {index: 1.0})

    def __add__(self, other: "Affine") -> "Affine":
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0.0) + v
        return Affine(self.const + other.const, {k: v for k, v in terms.items() if v != 0.0})

    def __neg__(self) -> "Affine":
        return Affine(-self.const, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other: "Affine") -> "Affine":
        return self + (-other)

    def is_zero(self) -> bool:
        return self.const == 0.0 and not self.terms

    def same_as(self, other: "Affine") -> bool:
        return (self - other).is_zero()

    def value(self, y: np.ndarray) -> float:
        return self.const + sum(v * y[k] for k, v in self.terms.items())

    def key(self) -> tuple:
        return (round(self.const, 12), tuple(sorted((k, round(v, 12)) for k, v in self.terms.items())))


ZERO = Affine()


# -- tree ---------------------------------------------------------------------


@dataclass
class Node:
    path: str
    depth: int  # remaining levels below this node
    free: list[int]
    ones: frozenset[int]
    head: Affine
    vec: dict[int, Affine]
    block: int | None = None
    entries: dict[tuple[int, int], Affine] = field(default_factory=dict)
    children: dict[int, tuple["Node", "Node"]] = field(default_factory=dict)

    def matrix_entry(self, a: int, b: int) -> Affine:
        """Entry of the reduced matrix; index 0 is the head, ``v`` a free vertex."""
        if a == 0 and b == 0:
            return self.head
        if a == 0 or b == 0 or a == b:
            return self.vec[a or b]
        return self.entries[(min(a, b), max(a, b))]


@dataclass
class LiftedProgram:
    """An unrolled lifted relaxation in LMI form, together with its SDP encoding."""

    graph: Graph
    level: int
    root: Node
    nodes: list[Node]
    leaves: list[Node]
    var_names: list[str]
    objective: np.ndarray
    problem: SdpProblem
    extra: dict[str, int]
    structurally_infeasible: bool = False

    @property
    def num_psd_blocks(self) -> int:
        return sum(1 for b in self.problem.blocks if b.kind == PSD)

    def manifest(self) -> dict:
        return {
            "level": self.level,
            "n": self.graph.n,
            "variables": len(self.var_names),
            "blocks": [
                {"index": node.block, "path": node.path, "free": node.free, "ones": sorted(node.ones)}
                for node in self.nodes
            ]
            + [{"index": len(self.problem.blocks) - 1, "path": "leaves", "rows": self.problem.blocks[-1].dim}],
            "variable_names": self.var_names,
        }

    def dump(self, stem: str | Path) -> tuple[Path, Path]:
        """Write ``<stem>.dat-s`` (SDPA sparse) and ``<stem>.manifest.json``."""
        stem = Path(stem)
        dat = stem.with_suffix(".dat-s")
        man = stem.with_suffix(".manifest.json")
        write_sdpa(self.problem, dat, comment=f"lifted relaxation level {self.level} on {self.graph.n} vertices")
        man.write_text(json.dumps(self.manifest(), indent=1) + "\n")
        return dat, man


class _Builder:
    def __init__(self, G: Graph):
        self.G = G
        self.var_names: list[str] = []
        self.nodes: list[Node] = []
        self.leaves: list[Node] = []
        self.rows: dict[tuple, Affine] = {}
        self.infeasible = False

    def new_var(self, name: str) -> Affine:
        self.var_names.append(name)
        return Affine.var(len(self.var_names) - 1)

    def build(self, node: Node) -> Node:
        if node.depth == 0:
            self._leaf(node)
            self.leaves.append(node)
            return node
        G = self.G
        self.nodes.append(node)
        free = node.free
        for a_idx, u in enumerate(free):
            for v in free[a_idx + 1:]:
                if G.has_edge(u, v):
                    node.entries[(u + 1, v + 1)] = ZERO
                else:
                    node.entries[(u + 1, v + 1)] = self.new_var(f"{node.path}:Y[{u},{v}]")
        for j in free:
            col = {v: node.matrix_entry(v + 1, j + 1) for v in free}
            in_free = [v for v in free if v != j and not G.has_edge(v, j)]
            out_free = [v for v in free if v != j]
            child_in = Node(
                f"{node.path}/e{j}", node.depth - 1, in_free, node.ones | {j},
                node.vec[j + 1], {v + 1: col[v] for v in in_free},
            )
            child_out = Node(
                f"{node.path}/e0-e{j}", node.depth - 1, out_free, node.ones,
                node.head - node.vec[j + 1], {v + 1: node.vec[v + 1] - col[v] for v in out_free},
            )
            node.children[j] = (self.build(child_in), self.build(child_out))
        return node

    def _row(self, expr: Affine) -> None:
        if not expr.terms:
            if expr.const < -1e-12:
                self.infeasible = True
            return
        self.rows.setdefault(expr.key(), expr)

    def _leaf(self, node: Node) -> None:
        G = self.G
        fmask = sum(1 << v for v in node.free)
        if not node.free:
            self._row(node.head)
        for v in node.free:
            self._row(node.vec[v + 1])
            if not G.adj[v] & fmask:
                self._row(node.head - node.vec[v + 1])
        for u in node.free:
            for v in _bits(G.adj[u] & fmask):
                if u < v:
                    self._row(node.head - node.vec[u + 1] - node.vec[v + 1])


def estimate_size(G: Graph, k: int, free: Sequence[int] | None = None) -> tuple[int, int]:
    """Number of PSD blocks and free matrix variables an unrolled level-``k`` tree would use."""
    free_mask = sum(1 << v for v in (range(G.n) if free is None else free))
    memo: dict[tuple[int, int], tuple[int, int]] = {}

    def rec(mask: int, depth: int) -> tuple[int, int]:
        if depth == 0:
            return 0, 0
        if (mask, depth) in memo:
            return memo[(mask, depth)]
        vs = _bits(mask)
        nonedges = sum(1 for i, u in enumerate(vs) for v in vs[i + 1:] if not G.adj[u] >> v & 1)
        blocks, nvars = 1, nonedges
        for j in vs:
            for child in (mask & ~(1 << j) & ~G.adj[j], mask & ~(1 << j)):
                b, v = rec(child, depth - 1)
                blocks += b
                nvars += v
        memo[(mask, depth)] = (blocks, nvars)
        return blocks, nvars

    return rec(free_mask, k)


def _assemble(
    G: Graph,
    k: int,
    free: list[int],
    ones: frozenset[int],
    head: Affine,
    vec: dict[int, Affine],
    builder: _Builder,
    objective: dict[int, float],
    extra_rows: Sequence[Affine] = (),
    shift_var: int | None = None,
    extra: dict[str, int] | None = None,
) -> LiftedProgram:
    root = builder.build(Node("root", k, free, ones, head, vec))
    for row in extra_rows:
        builder._row(row)
    nvar = len(builder.var_names)
    sdp = SdpBuilder("min")
    for node in builder.nodes:
        node.block = sdp.add_block(PSD, len(node.free) + 1, node.path)
    rows = list(builder.rows.values())
    lp = sdp.add_block(DIAG, max(len(rows), 1), "leaves")

    def emit(block: int, a: int, b: int, expr: Affine) -> None:
        if expr.const:
            sdp.add_objective(block, a, b, expr.const)
        for var, coef in expr.terms.items():
            entry_lists[var].append((block, a, b, -coef))

    entry_lists: list[list[tuple[int, int, int, float]]] = [[] for _ in range(nvar)]
    for node in builder.nodes:
        pos = {v: t + 1 for t, v in enumerate(node.free)}
        emit(node.block, 0, 0, node.head)
        for v in node.free:
            emit(node.block, 0, pos[v], node.vec[v + 1])
            emit(node.block, pos[v], pos[v], node.vec[v + 1])
        for (a, b), expr in node.entries.items():
            if not expr.is_zero():
                emit(node.block, pos[a - 1], pos[b - 1], expr)
        if shift_var is not None:
            for t in range(len(node.free) + 1):
                entry_lists[shift_var].append((node.block, t, t, 1.0))
    for r, expr in enumerate(rows):
        emit(lp, r, r, expr)
        if shift_var is not None:
            entry_lists[shift_var].append((lp, r, r, 1.0))
    if not rows:
        # keep the LP block well posed when the tree has no leaf rows
        sdp.add_objective(lp, 0, 0, 1.0)
    b = np.zeros(nvar)
    for var, coef in objective.items():
        b[var] = coef
    for var in range(nvar):
        sdp.add_constraint(entry_lists[var], b[var])
    problem = sdp.build()
    return LiftedProgram(
        G, k, root, builder.nodes, builder.leaves, builder.var_names, b, problem, extra or {},
        builder.infeasible,
    )


def _check_budget(G: Graph, k: int, free: list[int], max_vars: int) -> None:
    blocks, nvars = estimate_size(G, k, free)
    if nvars > max_vars:
        raise BudgetError(
            f"level {k} on {len(free)} free vertices needs about {nvars} variables "
            f"in {blocks} blocks (budget {max_vars})"
        )


# -- optimization --------------------------------------------------------------


@dataclass
class RelaxationResult:
    graph_id: str
    level: int
    objective: tuple[float, ...]
    value: float
    x: np.ndarray
    status: str
    stab_value: float
    frac_value: float
    diagnostics: dict

    def sandwich_ok(self, tol: float = 1e-6) -> bool:
        return self.stab_value - tol <= self.value <= self.frac_value + tol


def build_optimization(G: Graph, k: int, max_vars: int = MAX_VARIABLES) -> LiftedProgram:
    """Program maximizing a linear objective over the level-``k`` relaxation (objective set by caller)."""
    if k < 0:
        raise ValueError("level must be non-negative")
    free = list(G.vertices)
    _check_budget(G, k, free, max_vars)
    builder = _Builder(G)
    xs = {v + 1: builder.new_var(f"x[{v}]") for v in free}
    program = _assemble(G, k, free, frozenset(), Affine(1.0), xs, builder, {})
    program.extra.update({f"x{v}": v for v in free})
    return program


def _stab_value(G: Graph, c: Sequence[float]) -> float:
    if all(ci == 1 for ci in c):
        return float(alpha(G))
    return float(max(sum(c[v] for v in _bits(m)) for m in stable_set_masks(G)))


def optimize(
    G: Graph,
    k: int,
    c: LinearInequality | Sequence[float] | None = None,
    settings: SolverSettings | None = None,
    graph_id: str = "",
    max_vars: int = MAX_VARIABLES,
) -> RelaxationResult:
    """``max c^T x`` over the level-``k`` relaxation (``k = 0`` is the LP over FRAC)."""
    coeffs = tuple(float(ci) for ci in (c.coeffs if isinstance(c, LinearInequality) else c or (1.0,) * G.n))
    if len(coeffs) != G.n:
        raise GraphError("objective length does not match the graph")
    if G.n == 0:
        return RelaxationResult(graph_id, k, coeffs, 0.0, np.zeros(0), "optimal", 0.0, 0.0, {})
    program = build_optimization(G, k, max_vars)
    program.problem.b[:G.n] = coeffs
    program.objective[:G.n] = coeffs
    sol = solve(program.problem, settings)
    x = sol.y[:G.n].copy()
    value = float(sol.dual_objective)
    stab = _stab_value(G, coeffs)
    frac = value if k == 0 else optimize(G, 0, coeffs, settings).value
    diag = sol.diagnostics()
    diag.update({"psd_blocks": program.num_psd_blocks, "variables": len(program.var_names),
                 "lp_rows": program.problem.blocks[-1].dim})
    return RelaxationResult(graph_id, k, coeffs, value, x, sol.status, stab, frac, diag)


# -- membership and shifts --------------------------------------------------------


def _reduce(G: Graph, base: Sequence, direction: Sequence | None = None):
    """Split vertices into fixed-zero, fixed-to-head and free ones.

    ``base`` and ``direction`` are normalized so that the head of ``base`` is 1.
    Returns ``(free, ones, infeasible)``.
    """
    head_b, head_d = base[0], (direction[0] if direction is not None else 0)
    zeros, ones = set(), set()
    for v in range(G.n):
        bv = base[v + 1]
        dv = direction[v + 1] if direction is not None else 0
        if bv == 0 and dv == 0:
            zeros.add(v)
        elif bv == head_b and dv == head_d:
            ones.add(v)
    for o in ones:
        for u in G.neighbors(o):
            if u not in zeros:
                return [], frozenset(ones), True
    free = [v for v in range(G.n) if v not in zeros and v not in ones]
    return free, frozenset(ones), False


@dataclass
class MembershipResult:
    verdict: str  # member | not-member | undecided
    margin: float
    certificate: "LiftCertificate | None"
    diagnostics: dict


def build_membership(
    G: Graph,
    k: int,
    w: ConeVector,
    direction: ConeVector | None = None,
    max_vars: int = MAX_VARIABLES,
) -> LiftedProgram:
    """Program for ``w (- s * direction)`` in the cone of the level-``k`` relaxation.

    Without ``direction`` the program maximizes a uniform slack ``t`` on every
    block (``t > 0`` certifies strict membership).  With ``direction`` it
    maximizes the shift ``s`` instead.
    """
    if w.n != G.n:
        raise GraphError("cone vector dimension does not match the graph")
    w0 = w.head
    if w0 <= 0:
        raise GraphError("membership queries need a positive head entry")
    base = [Fraction(a) / Fraction(w0) if not isinstance(a, float) else a / float(w0) for a in w.entries]
    d = None
    if direction is not None:
        # not divided by w0: the shift variable is measured in units of the head of ``w``
        d = list(direction.entries)
    free, ones, infeasible = _reduce(G, base, d)
    _check_budget(G, k, free, max_vars)
    builder = _Builder(G)
    builder.new_var("shift")  # always variable 0
    sd = Affine(0.0, {0: 1.0})

    def entry(v_index: int) -> Affine:
        expr = Affine(float(base[v_index]))
        if d is not None and d[v_index] != 0:
            expr = expr - Affine(0.0, {0: float(d[v_index])})
        return expr

    head = entry(0)
    vec = {v + 1: entry(v + 1) for v in free}
    extra_rows = [Affine(1.0) - sd, sd + Affine(1.0)]  # -1 <= s <= 1
    program = _assemble(
        G, k, free, ones, head, vec, builder, {0: 1.0}, extra_rows,
        shift_var=None if d is not None else 0, extra={"shift": 0},
    )
    program.structurally_infeasible |= infeasible
    return program


def contains(
    G: Graph, k: int, w: ConeVector, settings: SolverSettings | None = None, margin: float = 1e-7
) -> MembershipResult:
    """Decide ``w`` in the cone of the level-``k`` relaxation, with a certificate when it is."""
    if any(a != 0 for a in w.entries) and w.head <= 0:
        return MembershipResult("not-member", -np.inf, None, {"reason": "head entry must be positive"})
    if all(a == 0 for a in w.entries):
        return MembershipResult("member", np.inf, None, {"reason": "zero vector"})
    if not cone_frac_contains(G, w):
        return MembershipResult("not-member", -np.inf, None, {"reason": "violates the FRAC system"})
    program = build_membership(G, k, w)
    if program.structurally_infeasible:
        return MembershipResult("not-member", -np.inf, None, {"reason": "structurally infeasible"})
    sol = solve(program.problem, settings)
    diag = sol.diagnostics()
    if sol.status == "infeasible":
        return MembershipResult("not-member", -np.inf, None, diag)
    if sol.status != "optimal":
        return MembershipResult("undecided", np.nan, None, diag)
    t = float(sol.dual_objective)
    if t > margin:
        y = sol.y.copy()
        y[0] = 0.0
        cert = LiftCertificate.from_program(program, y, scale=float(w.head))
        return MembershipResult("member", t, cert, diag)
    if t < -margin:
        return MembershipResult("not-member", t, None, diag)
    return MembershipResult("undecided", t, None, diag)


@dataclass
class ShiftResult:
    value: float
    status: str
    verdict: str  # positive | nonpositive | unknown
    diagnostics: dict
    certificate: "LiftCertificate | None" = None


def max_shift(
    G: Graph,
    k: int,
    base: ConeVector,
    direction: ConeVector,
    settings: SolverSettings | None = None,
    threshold: float = EPS_THRESHOLD,
) -> ShiftResult:
    """Largest ``s`` in ``[-1, 1]`` (in units of ``base``'s head) with ``base - s * direction`` in the cone.

    The returned value is expressed on the scale of ``base``, i.e. it is the
    ``s`` of the unnormalized vectors.
    """
    program = build_membership(G, k, base, direction)
    if program.structurally_infeasible:
        return ShiftResult(0.0, "infeasible", "nonpositive", {"reason": "structurally infeasible"})
    sol = solve(program.problem, settings)
    diag = sol.diagnostics()
    if sol.status != "optimal":
        return ShiftResult(float("nan"), sol.status, "unknown", diag)
    value = float(sol.dual_objective) * float(base.head)
    verdict = "positive" if value > threshold else "nonpositive"
    cert = LiftCertificate.from_program(program, sol.y, scale=float(base.head))
    return ShiftResult(value, sol.status, verdict, diag, cert)


def max_eps(SC: StretchedClique, k: int, settings: SolverSettings | None = None) -> ShiftResult:
    """Supremum of ``eps`` with ``v(G, eps)`` in the cone of the level-``k`` relaxation.

    A value above the threshold certifies that the rank inequality survives
    ``k`` rounds, hence an LS+-rank of at least ``k + 1``.
    """
    G = SC.graph
    u = v_vector(SC, 0)
    hubs = set(SC.hubs())
    direction = ConeVector((Fraction(1),) + tuple(Fraction(int(v in hubs)) for v in G.vertices))
    return max_shift(G, k, u, direction, settings)


def max_eps_bisect(
    SC: StretchedClique, k: int, hi: float | None = None, tol: float = 1e-4,
    settings: SolverSettings | None = None,
) -> float:
    """Validation mode: bisection on membership of ``v(G, eps)``; returns a lower bound on ``eps*``."""
    G = SC.graph
    u0 = float(v_vector(SC, 0).head)
    lo, hi = 0.0, u0 if hi is None else hi
    if contains(G, k, v_vector(SC, Fraction(hi).limit_denominator(10**9)), settings).verdict == "member":
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        verdict = contains(G, k, v_vector(SC, Fraction(mid).limit_denominator(10**9)), settings).verdict
        if verdict == "member":
            lo = mid
        else:
            hi = mid
    return lo


# -- certificates ---------------------------------------------------------------


@dataclass
class CertNode:
    Y: np.ndarray  # (n+1) x (n+1)
    free: list[int]
    ones: frozenset[int]
    children: dict[int, tuple["CertNode", "CertNode"]] = field(default_factory=dict)
    leaf: bool = False


def _expand(G: Graph, node: Node, y: np.ndarray, scale: float) -> CertNode:
    n = G.n
    Y = np.zeros((n + 1, n + 1))
    lifted = [0] + [v + 1 for v in node.free]
    if node.depth == 0:
        col = np.zeros(n + 1)
        col[0] = node.head.value(y)
        for v in node.free:
            col[v + 1] = node.vec[v + 1].value(y)
        for o in node.ones:
            col[o + 1] = col[0]
        Y[:, 0] = col * scale
        return CertNode(Y, list(node.free), node.ones, leaf=True)
    for a in lifted:
        for b in lifted:
            Y[a, b] = node.matrix_entry(a, b).value(y)
    for o in node.ones:
        Y[o + 1, :] = Y[0, :]
        Y[:, o + 1] = Y[:, 0]
    Y *= scale
    cert = CertNode(Y, list(node.free), node.ones)
    for j, (cin, cout) in node.children.items():
        cert.children[j] = (_expand(G, cin, y, scale), _expand(G, cout, y, scale))
    return cert


@dataclass
class LiftCertificate:
    """A tree of matrices witnessing membership of ``root.Y e_0`` in a lifted cone."""

    graph: Graph
    level: int
    root: CertNode

    @classmethod
    def from_program(cls, program: LiftedProgram, y: np.ndarray, scale: float = 1.0) -> "LiftCertificate":
        return cls(program.graph, program.level, _expand(program.graph, program.root, y, scale))

    @property
    def vector(self) -> np.ndarray:
        return self.root.Y[:, 0].copy()

    def verify(self, tol: float = 1e-6) -> bool:
        return self._check(self.root, self.level, tol)

    def _check(self, node: CertNode, level: int, tol: float) -> bool:
        G = self.graph
        Y = node.Y
        if node.leaf or level == 0:
            return cone_frac_contains(G, ConeVector(tuple(Y[:, 0])), tol)
        scale = max(1.0, np.abs(Y).max())
        if not np.allclose(Y, Y.T, atol=tol * scale):
            return False
        if not np.allclose(np.diag(Y), Y[:, 0], atol=tol * scale):
            return False
        if np.linalg.eigvalsh(Y)[0] < -tol * scale:
            return False
        free = set(node.free)
        for i in range(G.n):
            col = Y[:, i + 1]
            if i in node.ones:
                if not np.allclose(col, Y[:, 0], atol=tol * scale):
                    return False
            elif i not in free:
                if not np.allclose(col, 0.0, atol=tol * scale):
                    return False
        if not free:
            return cone_frac_contains(G, ConeVector(tuple(Y[:, 0])), tol * scale)
        for j in node.free:
            cin, cout = node.children[j]
            if not np.allclose(cin.Y[:, 0], Y[:, j + 1], atol=tol * scale):
                return False
            if not np.allclose(cout.Y[:, 0], Y[:, 0] - Y[:, j + 1], atol=tol * scale):
                return False
            if not (self._check(cin, level - 1, tol) and self._check(cout, level - 1, tol)):
                return False
        return True


# -- exact rational lift ------------------------------------------------------------


@dataclass
class ExactLift:
    Y0: list[list[Fraction]]
    Y1: list[list[Fraction]]
    c: tuple[int, ...]
    c0: int
    D: tuple[int, ...]
    eps: Fraction

    @property
    def Y(self) -> list[list[Fraction]]:
        return [[a + b for a, b in zip(r0, r1)] for r0, r1 in zip(self.Y0, self.Y1)]

    @property
    def c_prime(self) -> list[Fraction]:
        return [Fraction(-self.c0)] + [Fraction(ci) for ci in self.c]

    def quad(self, M: list[list[Fraction]], x: Sequence[Fraction]) -> Fraction:
        return sum(x[i] * M[i][j] * x[j] for i in range(len(x)) for j in range(len(x)))

    def null_space_dim(self) -> int:
        return len(self.Y0) - rational_rank(self.Y0)

    def null_space_is_c_prime(self) -> bool:
        cp = self.c_prime
        in_kernel = all(sum(row[j] * cp[j] for j in range(len(cp))) == 0 for row in self.Y0)
        return in_kernel and self.null_space_dim() == 1

    def c_quad(self) -> Fraction:
        return self.quad(self.Y, self.c_prime)

    def c_col0(self) -> Fraction:
        cp = self.c_prime
        return sum(cp[i] * self.Y[i][0] for i in range(len(cp)))

    def expected_c_quad(self) -> Fraction:
        cd = sum(self.c[i] for i in self.D)
        return self.eps * cd * ((1 + self.eps) * self.c0 - cd)

    def expected_c_col0(self) -> Fraction:
        cd = sum(self.c[i] for i in self.D)
        return -self.eps ** 2 * cd


def exact_lift(SC: StretchedClique, eps, c: Sequence[int] | None = None, c0: int | None = None,
                   D: Sequence[int] | None = None) -> ExactLift:
    """Exact matrices ``Y0`` (tight stable sets) and ``Y1`` (the ``eps`` perturbation).

    Defaults: ``c = e``, ``c0 = d + 1`` and ``D`` the hub set.
    """
    G = SC.graph
    n = G.n
    c = tuple(c) if c is not None else (1,) * n
    c0 = SC.d + 1 if c0 is None else c0
    D = tuple(SC.hubs()) if D is None else tuple(D)
    eps = Fraction(eps)
    ineq = LinearInequality(c, c0)
    if not is_facet(G, ineq):
        raise GraphError("the inequality is not facet-inducing for STAB(G)")
    cd = sum(c[i] for i in D)
    if not 0 < cd < c0:
        raise GraphError("need 0 < c^T chi_D < c0")
    size = n + 1
    Y0 = [[Fraction(0)] * size for _ in range(size)]
    for m in tight_stable_sets(G, ineq):
        vec = [1] + [m >> v & 1 for v in range(n)]
        idx = [i for i in range(size) if vec[i]]
        for a in idx:
            for b in idx:
                Y0[a][b] += 1
    Y1 = [[Fraction(0)] * size for _ in range(size)]
    Y1[0][0] = -Fraction(cd, c0) * eps * (1 - eps)
    for i in D:
        Y1[0][i + 1] = Y1[i + 1][0] = -eps
        for j in D:
            Y1[i + 1][j + 1] = -eps
    return ExactLift(Y0, Y1, c, c0, D, eps)


lemma42_matrix = exact_lift


def is_psd_exact(M: Sequence[Sequence[Fraction]]) -> bool:
    """Exact PSD test by symmetric elimination over the rationals."""
    A = [[Fraction(x) for x in row] for row in M]
    n = len(A)
    for i in range(n):
        for j in range(n):
            if A[i][j] != A[j][i]:
                return False
    for p in range(n):
        piv = A[p][p]
        if piv < 0:
            return False
        if piv == 0:
            if any(A[p][j] != 0 for j in range(p + 1, n)):
                return False
            continue
        for i in range(p + 1, n):
            f = A[i][p] / piv
            if f:
                for j in range(p, n):
                    A[i][j] -= f * A[p][j]
    return True


# -- rank bounds -----------------------------------------------------------------------


@dataclass
class RankBounds:
    lower: int
    upper: int
    proven_exact: bool
    values: dict[int, float]
    notes: list[str]

    def as_tuple(self) -> tuple[int, int, bool]:
        return self.lower, self.upper, self.proven_exact


def rank_bounds(
    G: Graph, budget: int = 2, settings: SolverSettings | None = None, tol: float = RANK_TOL
) -> RankBounds:
    """Bounds on the LS+-rank.

    Lower bounds are rigorous up to solver accuracy: level ``k`` with
    ``max e^T x > alpha + tol`` shows the rank exceeds ``k``.  The upper bound
    combines ``floor(|V|/3)`` with the first level at which the rank
    inequality becomes valid; the latter only concerns that inequality.
    """
    notes: list[str] = []
    if G.is_bipartite():
        return RankBounds(0, 0, True, {}, ["bipartite: FRAC equals STAB"])
    a = alpha(G)
    lower, upper = 1, G.n // 3
    values: dict[int, float] = {}
    k = 1
    while k <= min(budget, upper - 1):
        res = optimize(G, k, None, settings)
        values[k] = res.value
        if res.status != "optimal":
            notes.append(f"level {k}: solver status {res.status}; stopping")
            break
        if res.value > a + tol:
            lower = k + 1
        else:
            upper = k
            notes.append(f"level {k}: rank inequality valid (value {res.value:.6f})")
            break
        k += 1
    if lower > upper:
        notes.append("lower bound exceeds upper bound; numerical trouble")
    return RankBounds(lower, upper, lower == upper, values, notes)


def verify_minimal(SC: StretchedClique | Graph, settings: SolverSettings | None = None,
                   budget: int | None = None) -> bool | None:
    """True if the graph is ``l``-minimal with ``|V| = 3l``; ``None`` when the needed level is over budget."""
    G = SC.graph if isinstance(SC, StretchedClique) else SC
    if G.n % 3:
        raise GraphError("minimality requires |V| divisible by 3")
    ell = G.n // 3
    need = ell - 1
    if budget is not None and need > budget:
        return None
    bounds = rank_bounds(G, budget=need, settings=settings)
    return bounds.lower >= ell


def u_fixed(G: Graph, v: int, c: LinearInequality) -> ConeVector:
    """``u_{x_v = 1, c^T x = c0}``."""
    return u_vector(G, [fixed_one(G.n, v), c])
