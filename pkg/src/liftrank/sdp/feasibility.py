"""Feasibility decisions for ``A(X) = b, X >= 0`` by maximizing a uniform shift."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problem import DIAG, PSD, SdpBuilder, SdpProblem, SolverSettings
from .solver import solve


@dataclass
class FeasibilityResult:
    verdict: str  # feasible | infeasible | undecided
    margin: float
    witness: list[np.ndarray] | None = None
    diagnostics: dict | None = None


def feasibility(p: SdpProblem, s: SolverSettings | None = None, margin: float = 1e-7) -> FeasibilityResult:
    """Decide whether some ``X >= 0`` satisfies the constraints of ``p`` (its objective is ignored).

    Solves ``max t`` over ``X = X' + t I`` with ``X' >= 0`` and ``-1 <= t <= 1``;
    ``t* > margin`` yields a strictly feasible witness, ``t* < -margin`` proves
    infeasibility, anything in between is reported as undecided.
    """
    builder = SdpBuilder("max")
    for blk, name in zip(p.blocks, p.names or [""] * len(p.blocks)):
        builder.add_block(blk.kind, blk.dim, name)
    slack = builder.add_block(DIAG, 2, "shift")
    trace = np.zeros(p.m)
    np.add.at(trace, p.a_con, np.where(p.a_i == p.a_j, p.a_val, 0.0))
    for k in range(p.m):
        sel = p.a_con == k
        entries = list(zip(p.a_blk[sel], p.a_i[sel], p.a_j[sel], p.a_val[sel]))
        entries.append((slack, 0, 0, trace[k]))
        builder.add_constraint(entries, p.b[k] + trace[k])
    builder.add_constraint([(slack, 0, 0, 1.0), (slack, 1, 1, 1.0)], 2.0)
    builder.add_objective(slack, 0, 0, 1.0)
    aux = builder.build()
    sol = solve(aux, s)
    diag = sol.diagnostics()
    if sol.status == "infeasible":
        return FeasibilityResult("infeasible", -np.inf, None, diag)
    if sol.status != "optimal":
        return FeasibilityResult("undecided", np.nan, None, diag)
    t = float(sol.dual_objective) - 1.0
    if t > margin:
        shift = float(sol.X[slack][0]) - 1.0
        witness = []
        for blk, X in zip(p.blocks, sol.X[:-1]):
            witness.append(X + shift * (np.eye(blk.dim) if blk.kind == PSD else np.ones(blk.dim)))
        return FeasibilityResult("feasible", t, witness, diag)
    if t < -margin:
        return FeasibilityResult("infeasible", t, None, diag)
    return FeasibilityResult("undecided", t, None, diag)
