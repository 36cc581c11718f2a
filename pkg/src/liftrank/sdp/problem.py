"""Block-diagonal SDPs in equality standard form.

The primal is ``min (or max) C . X  s.t.  A_i . X = b_i, X >= 0`` where ``X``
is block diagonal with dense PSD blocks and non-negative diagonal blocks.
Coefficient matrices are stored as upper-triangle COO entries; an entry
``(i, j)`` with ``i < j`` stands for the symmetric pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

PSD = "psd"
DIAG = "diag"

Status = Literal["optimal", "infeasible", "unbounded", "max-iter", "numerical-error"]


@dataclass(frozen=True)
class Block:
    kind: str
    dim: int

    def __post_init__(self):
        if self.kind not in (PSD, DIAG):
            raise ValueError(f"unknown block kind {self.kind!r}")
        if self.dim < 1:
            raise ValueError("block dimension must be positive")


@dataclass
class SdpProblem:
    blocks: list[Block]
    c_entries: np.ndarray  # (k, 4): block, i, j, value
    a_con: np.ndarray
    a_blk: np.ndarray
    a_i: np.ndarray
    a_j: np.ndarray
    a_val: np.ndarray
    b: np.ndarray
    sense: str = "min"
    names: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.sense not in ("min", "max"):
            raise ValueError("sense must be 'min' or 'max'")
        for arr in (self.a_blk, self.a_i, self.a_j):
            if arr.size and (arr.min() < 0):
                raise ValueError("negative index in constraint data")
        dims = np.array([blk.dim for blk in self.blocks])
        if self.a_blk.size:
            if self.a_blk.max() >= len(self.blocks):
                raise ValueError("constraint entry refers to a missing block")
            if np.any(self.a_j >= dims[self.a_blk]) or np.any(self.a_i > self.a_j):
                raise ValueError("constraint entries must satisfy i <= j < block dimension")
            diag = np.array([blk.kind == DIAG for blk in self.blocks])
            if np.any(diag[self.a_blk] & (self.a_i != self.a_j)):
                raise ValueError("off-diagonal entry in a diagonal block")
        if self.a_con.size and self.a_con.max() >= len(self.b):
            raise ValueError("constraint index out of range")

    @property
    def m(self) -> int:
        return len(self.b)

    @property
    def total_dim(self) -> int:
        return sum(blk.dim for blk in self.blocks)

    def objective_blocks(self) -> list[np.ndarray]:
        return entries_to_blocks(self.blocks, self.c_entries)

    def constraint_matrix(self, k: int) -> list[np.ndarray]:
        mask = self.a_con == k
        ent = np.column_stack([self.a_blk[mask], self.a_i[mask], self.a_j[mask], self.a_val[mask]])
        return entries_to_blocks(self.blocks, ent)

    def apply(self, X: list[np.ndarray]) -> np.ndarray:
        """``A(X)`` computed straight from the COO data (used to audit solutions)."""
        vals = np.empty(len(self.a_val))
        for k, blk in enumerate(self.blocks):
            sel = self.a_blk == k
            if not sel.any():
                continue
            i, j = self.a_i[sel], self.a_j[sel]
            if blk.kind == DIAG:
                vals[sel] = X[k][i]
            else:
                vals[sel] = np.where(i == j, 1.0, 2.0) * X[k][i, j]
        out = np.zeros(self.m)
        np.add.at(out, self.a_con, self.a_val * vals)
        return out

    def adjoint(self, y: np.ndarray) -> list[np.ndarray]:
        """``sum_i y_i A_i`` as a list of blocks."""
        weights = y[self.a_con] * self.a_val
        ent = np.column_stack([self.a_blk, self.a_i, self.a_j, weights])
        return entries_to_blocks(self.blocks, ent)

    def objective_value(self, X: list[np.ndarray]) -> float:
        return float(sum(inner(Cb, Xb) for Cb, Xb in zip(self.objective_blocks(), X)))


def inner(A: np.ndarray, B: np.ndarray) -> float:
    return float(np.sum(A * B))


def entries_to_blocks(blocks: list[Block], entries: np.ndarray) -> list[np.ndarray]:
    out = [np.zeros((blk.dim, blk.dim)) if blk.kind == PSD else np.zeros(blk.dim) for blk in blocks]
    ent = np.asarray(entries, dtype=float).reshape(-1, 4)
    bk = ent[:, 0].astype(int)
    ii, jj, vv = ent[:, 1].astype(int), ent[:, 2].astype(int), ent[:, 3]
    for k, blk in enumerate(blocks):
        sel = bk == k
        if not sel.any():
            continue
        if blk.kind == DIAG:
            np.add.at(out[k], ii[sel], vv[sel])
        else:
            i, j, v = ii[sel], jj[sel], vv[sel]
            np.add.at(out[k], (i, j), v)
            off = i != j
            np.add.at(out[k], (j[off], i[off]), v[off])
    return out


class SdpBuilder:
    """Accumulates blocks, objective and constraints, then freezes into an ``SdpProblem``."""

    def __init__(self, sense: str = "min"):
        self.sense = sense
        self.blocks: list[Block] = []
        self.names: list[str] = []
        self._c: list[tuple[int, int, int, float]] = []
        self._a: list[tuple[int, int, int, int, float]] = []
        self._b: list[float] = []

    def add_block(self, kind: str, dim: int, name: str = "") -> int:
        self.blocks.append(Block(kind, dim))
        self.names.append(name or f"block{len(self.blocks) - 1}")
        return len(self.blocks) - 1

    def add_objective(self, block: int, i: int, j: int, value: float) -> None:
        i, j = min(i, j), max(i, j)
        self._c.append((block, i, j, float(value)))

    def add_constraint(self, entries: Iterable[tuple[int, int, int, float]], rhs: float) -> int:
        k = len(self._b)
        for blk, i, j, v in entries:
            i, j = min(i, j), max(i, j)
            self._a.append((k, blk, i, j, float(v)))
        self._b.append(float(rhs))
        return k

    def build(self) -> SdpProblem:
        a = np.array(self._a, dtype=float).reshape(-1, 5)
        c = np.array(self._c, dtype=float).reshape(-1, 4)
        return SdpProblem(
            blocks=list(self.blocks),
            c_entries=c,
            a_con=a[:, 0].astype(int),
            a_blk=a[:, 1].astype(int),
            a_i=a[:, 2].astype(int),
            a_j=a[:, 3].astype(int),
            a_val=a[:, 4],
            b=np.array(self._b, dtype=float),
            sense=self.sense,
            names=list(self.names),
        )


@dataclass(frozen=True)
class SolverSettings:
    tol_gap: float = 1e-8
    tol_feas: float = 1e-8
    max_iter: int = 200
    step_fraction: float = 0.98
    tol_infeas: float = 1e-8
    # accepted as optimal when the iteration has to stop early
    tol_relaxed: float = 1e-6

    def __post_init__(self):
        if min(self.tol_gap, self.tol_feas, self.tol_infeas, self.tol_relaxed) <= 0:
            raise ValueError("tolerances must be positive")
        if not 0 < self.step_fraction < 1:
            raise ValueError("step fraction must lie in (0, 1)")
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")


@dataclass
class SdpSolution:
    """Primal-dual pair with metrics recomputed from the returned iterates.

    ``primal_objective`` and ``dual_objective`` are reported in the sense of
    the problem; ``gap`` is relative, the infeasibilities are relative norms.
    """

    status: Status
    X: list[np.ndarray]
    y: np.ndarray
    Z: list[np.ndarray]
    primal_objective: float
    dual_objective: float
    gap: float
    primal_infeasibility: float
    dual_infeasibility: float
    iterations: int
    message: str = ""

    @property
    def objective(self) -> float:
        return self.primal_objective

    def diagnostics(self) -> dict:
        return {
            "status": self.status,
            "iterations": self.iterations,
            "primal_objective": self.primal_objective,
            "dual_objective": self.dual_objective,
            "gap": self.gap,
            "primal_infeasibility": self.primal_infeasibility,
            "dual_infeasibility": self.dual_infeasibility,
            "message": self.message,
        }
