"""Infeasible-start primal-dual interior-point method (HKM direction, Mehrotra corrector)."""

from __future__ import annotations

import logging

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .problem import DIAG, PSD, SdpProblem, SdpSolution, SolverSettings, entries_to_blocks, inner

log = logging.getLogger(__name__)


class NumericalError(RuntimeError):
    pass


# -- presolve ---------------------------------------------------------------


def presolve(p: SdpProblem, tol: float = 1e-10) -> tuple[np.ndarray, bool]:
    """Indices of a maximal independent subset of constraints, and a consistency flag.

    A constraint owning a matrix position no other constraint touches cannot
    take part in a linear dependence, so only the remaining rows go through
    a column-pivoted QR.
    """
    m = p.m
    if m == 0:
        return np.arange(0), True
    keys = (p.a_blk.astype(np.int64) * 1_000_003 + p.a_i) * 1_000_003 + p.a_j
    _, pos = np.unique(keys, return_inverse=True)
    A = sp.coo_matrix((p.a_val, (p.a_con, pos)), shape=(m, pos.max() + 1 if pos.size else 0)).tocsr()
    A.sum_duplicates()
    A.eliminate_zeros()
    touch = (A != 0).astype(np.int8)
    col_count = np.asarray(touch.sum(axis=0)).ravel()
    private = np.asarray((touch[:, col_count == 1]).sum(axis=1)).ravel() > 0
    rest = np.flatnonzero(~private)
    keep = list(np.flatnonzero(private))
    consistent = True
    if rest.size:
        sub = A[rest]
        cols = np.unique(sub.indices)
        dense = sub[:, cols].toarray() if cols.size else np.zeros((rest.size, 0))
        if dense.shape[1] == 0:
            ranked, rank = rest, 0
        else:
            _, R, piv = la.qr(dense.T, mode="economic", pivoting=True)
            diag = np.abs(np.diag(R))
            scale = diag[0] if diag.size else 0.0
            rank = int(np.sum(diag > tol * max(scale, 1.0)))
            ranked = rest[piv]
        indep, dep = ranked[:rank], ranked[rank:]
        keep.extend(indep.tolist())
        if dep.size:
            basis = dense[np.searchsorted(rest, indep)] if rank else np.zeros((0, dense.shape[1]))
            for r in dep:
                row = dense[np.searchsorted(rest, r)]
                if rank:
                    coef, *_ = np.linalg.lstsq(basis.T, row, rcond=None)
                    implied = coef @ p.b[indep]
                else:
                    implied = 0.0
                if abs(implied - p.b[r]) > 1e-8 * (1 + abs(p.b[r])):
                    consistent = False
    return np.array(sorted(keep), dtype=int), consistent


# -- operators ---------------------------------------------------------------


class _Operators:
    """Dense per-block constraint stacks plus one sparse matrix for all diagonal blocks."""

    def __init__(self, p: SdpProblem, keep: np.ndarray):
        self.p = p
        self.m = len(keep)
        remap = -np.ones(p.m, dtype=int)
        remap[keep] = np.arange(self.m)
        con = remap[p.a_con]
        use = con >= 0
        con, blk, ii, jj, val = con[use], p.a_blk[use], p.a_i[use], p.a_j[use], p.a_val[use]
        self.b = p.b[keep].copy()
        sign = -1.0 if p.sense == "max" else 1.0
        C = entries_to_blocks(p.blocks, p.c_entries)
        self.psd_ids = [k for k, blk_ in enumerate(p.blocks) if blk_.kind == PSD]
        self.diag_ids = [k for k, blk_ in enumerate(p.blocks) if blk_.kind == DIAG]
        self.C = [sign * C[k] for k in self.psd_ids]
        offsets, off = {}, 0
        for k in self.diag_ids:
            offsets[k] = off
            off += p.blocks[k].dim
        self.L = off
        self.diag_offsets = offsets
        self.c_lp = np.concatenate([sign * C[k] for k in self.diag_ids]) if self.diag_ids else np.zeros(0)
        self.cons: list[np.ndarray] = []
        self.stacks: list[np.ndarray] = []
        order = np.argsort(blk, kind="stable")
        blk_s = blk[order]
        for k in self.psd_ids:
            lo, hi = np.searchsorted(blk_s, k), np.searchsorted(blk_s, k, side="right")
            idx = order[lo:hi]
            cons_k, local = np.unique(con[idx], return_inverse=True)
            d = p.blocks[k].dim
            S = np.zeros((len(cons_k), d, d))
            np.add.at(S, (local, ii[idx], jj[idx]), val[idx])
            off_diag = ii[idx] != jj[idx]
            np.add.at(S, (local[off_diag], jj[idx][off_diag], ii[idx][off_diag]), val[idx][off_diag])
            self.cons.append(cons_k)
            self.stacks.append(S)
        dmask = np.isin(blk, self.diag_ids)
        if self.L:
            cols = np.array([offsets[b_] for b_ in blk[dmask]], dtype=int) + ii[dmask]
            self.A_lp = sp.csr_matrix((val[dmask], (con[dmask], cols)), shape=(self.m, self.L))
        else:
            self.A_lp = sp.csr_matrix((self.m, 0))
        self.dims = [p.blocks[k].dim for k in self.psd_ids]

    def A(self, Xs: list[np.ndarray], xl: np.ndarray) -> np.ndarray:
        out = self.A_lp @ xl if self.L else np.zeros(self.m)
        for cons, S, X in zip(self.cons, self.stacks, Xs):
            out[cons] += np.einsum("kij,ij->k", S, X)
        return out

    def At(self, y: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
        mats = [np.einsum("k,kij->ij", y[cons], S) for cons, S in zip(self.cons, self.stacks)]
        return mats, (self.A_lp.T @ y if self.L else np.zeros(0))

    def schur(self, Xs, Zinvs, xl, zl) -> np.ndarray:
        M = np.zeros((self.m, self.m))
        for cons, S, X, Zi in zip(self.cons, self.stacks, Xs, Zinvs):
            if not len(cons):
                continue
            T = X[None] @ S @ Zi[None]
            mb = S.shape[0]
            M[np.ix_(cons, cons)] += S.reshape(mb, -1) @ T.transpose(0, 2, 1).reshape(mb, -1).T
        if self.L:
            D = sp.diags(xl / zl)
            M += (self.A_lp @ D @ self.A_lp.T).toarray()
        return 0.5 * (M + M.T)


def _sym(A: np.ndarray) -> np.ndarray:
    return 0.5 * (A + A.T)


def _max_step_psd(X: np.ndarray, dX: np.ndarray) -> float:
    try:
        Lc = la.cholesky(X, lower=True)
    except la.LinAlgError as exc:
        raise NumericalError("iterate lost positive definiteness") from exc
    W = la.solve_triangular(Lc, dX, lower=True)
    W = la.solve_triangular(Lc, W.T, lower=True)
    lam = la.eigvalsh(_sym(W))[0]
    return np.inf if lam >= 0 else -1.0 / lam


def _max_step_lp(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < 0
    return np.inf if not neg.any() else float(np.min(-x[neg] / dx[neg]))


def _norm(mats, vec) -> float:
    return float(np.sqrt(sum(np.sum(M * M) for M in mats) + np.dot(vec, vec)))


def _initial_point(ops: _Operators):
    Xs, Zs = [], []
    for cons, S, d, C in zip(ops.cons, ops.stacks, ops.dims, ops.C):
        norms = np.sqrt(np.einsum("kij,kij->k", S, S)) if len(cons) else np.zeros(0)
        xi = max(10.0, np.sqrt(d), *(np.sqrt(d) * (1 + np.abs(ops.b[cons])) / (1 + norms)))
        eta = max(10.0, np.sqrt(d), *(norms if norms.size else [0.0]), np.linalg.norm(C))
        Xs.append(xi * np.eye(d))
        Zs.append(eta * np.eye(d))
    if ops.L:
        colnorm = np.sqrt(np.asarray(ops.A_lp.multiply(ops.A_lp).sum(axis=0)).ravel())
        bmax = np.max(np.abs(ops.b)) if ops.m else 0.0
        xi = max(10.0, (1 + bmax) / (1 + colnorm.min()) if colnorm.size else 10.0)
        eta = max(10.0, colnorm.max(), np.max(np.abs(ops.c_lp)))
        xl, zl = np.full(ops.L, xi), np.full(ops.L, eta)
    else:
        xl, zl = np.zeros(0), np.zeros(0)
    return Xs, np.zeros(ops.m), Zs, xl, zl


def _solve_schur(M: np.ndarray):
    n = M.shape[0]
    if n == 0:
        return lambda r: np.zeros(0)
    scale = max(np.max(np.abs(np.diag(M))), 1e-300)
    for shift in (0.0, 1e-14, 1e-12, 1e-10):
        try:
            fac = la.cho_factor(M + shift * scale * np.eye(n), lower=True, check_finite=True)
            return lambda r, fac=fac: la.cho_solve(fac, r)
        except (la.LinAlgError, ValueError):
            continue
    raise NumericalError("Schur complement is not positive definite")


def solve(p: SdpProblem, s: SolverSettings | None = None) -> SdpSolution:
    """Solve ``p`` to the tolerances in ``s``; every status is reported, never raised."""
    s = s or SolverSettings()
    keep, consistent = presolve(p)
    if not consistent:
        return _finish(p, None, "infeasible", 0, "presolve: inconsistent linearly dependent constraints")
    ops = _Operators(p, keep)
    Xs, y, Zs, xl, zl = _initial_point(ops)
    N = sum(ops.dims) + ops.L
    b = ops.b
    normb, normC = np.linalg.norm(b), _norm(ops.C, ops.c_lp)
    status, message = "max-iter", "iteration limit reached"
    stall = 0
    it = 0
    for it in range(1, s.max_iter + 1):
        AX = ops.A(Xs, xl)
        Aty, Aty_l = ops.At(y)
        rp = b - AX
        Rd = [C - Z - T for C, Z, T in zip(ops.C, Zs, Aty)]
        rd_l = ops.c_lp - zl - Aty_l
        pobj = sum(inner(C, X) for C, X in zip(ops.C, Xs)) + float(ops.c_lp @ xl)
        dobj = float(b @ y)
        xz = sum(inner(X, Z) for X, Z in zip(Xs, Zs)) + float(xl @ zl)
        mu = xz / N
        relgap = max(abs(pobj - dobj), xz) / (1 + abs(pobj) + abs(dobj))
        pinf = np.linalg.norm(rp) / (1 + normb)
        dinf = _norm(Rd, rd_l) / (1 + normC)
        log.debug("it %3d pobj %.10g dobj %.10g gap %.2e pinf %.2e dinf %.2e", it, pobj, dobj, relgap, pinf, dinf)
        if relgap <= s.tol_gap and pinf <= s.tol_feas and dinf <= s.tol_feas:
            status, message = "optimal", "converged"
            break
        if dobj > 0:
            ray = _norm([T + Z for T, Z in zip(Aty, Zs)], Aty_l + zl) / dobj
            if ray < s.tol_infeas:
                status, message = "infeasible", f"dual ray with residual ratio {ray:.2e}"
                break
        if pobj < 0:
            ray = np.linalg.norm(AX) / -pobj
            if ray < s.tol_infeas:
                status, message = "unbounded", f"primal ray with residual ratio {ray:.2e}"
                break
        try:
            Zinv = [la.cho_solve(la.cho_factor(Z, lower=True), np.eye(Z.shape[0])) for Z in Zs]
            Zinv = [_sym(Zi) for Zi in Zinv]
            zinv_l = 1.0 / zl
            solve_M = _solve_schur(ops.schur(Xs, Zinv, xl, zl))

            def direction(R, R_l):
                XRdZ = [X @ Rdb @ Zi for X, Rdb, Zi in zip(Xs, Rd, Zinv)]
                rhs = rp - ops.A(R, R_l) + ops.A(XRdZ, xl * rd_l * zinv_l)
                dy = solve_M(rhs)
                Atdy, Atdy_l = ops.At(dy)
                dZ = [Rdb - T for Rdb, T in zip(Rd, Atdy)]
                dz_l = rd_l - Atdy_l
                dX = [Rb - _sym(X @ dZb @ Zi) for Rb, X, dZb, Zi in zip(R, Xs, dZ, Zinv)]
                dx_l = R_l - xl * dz_l * zinv_l
                return dX, dy, dZ, dx_l, dz_l

            def steps(dX, dZ, dx_l, dz_l):
                ap = min([_max_step_psd(X, D) for X, D in zip(Xs, dX)] + [_max_step_lp(xl, dx_l)])
                ad = min([_max_step_psd(Z, D) for Z, D in zip(Zs, dZ)] + [_max_step_lp(zl, dz_l)])
                return ap, ad

            dX, dy, dZ, dx_l, dz_l = direction([-X for X in Xs], -xl)
            ap, ad = steps(dX, dZ, dx_l, dz_l)
            ap, ad = min(1.0, ap), min(1.0, ad)
            mu_aff = (
                sum(inner(X + ap * D, Z + ad * E) for X, D, Z, E in zip(Xs, dX, Zs, dZ))
                + float((xl + ap * dx_l) @ (zl + ad * dz_l))
            ) / N
            sigma = min(1.0, max(0.0, mu_aff / mu)) ** 3
            R = [
                sigma * mu * Zi - X - _sym(D @ E @ Zi)
                for Zi, X, D, E in zip(Zinv, Xs, dX, dZ)
            ]
            R_l = sigma * mu * zinv_l - xl - dx_l * dz_l * zinv_l
            dX, dy, dZ, dx_l, dz_l = direction(R, R_l)
            ap, ad = steps(dX, dZ, dx_l, dz_l)
            ap, ad = min(1.0, s.step_fraction * ap), min(1.0, s.step_fraction * ad)
        except NumericalError as exc:
            status, message = "numerical-error", str(exc)
            break
        Xs = [_sym(X + ap * D) for X, D in zip(Xs, dX)]
        xl = xl + ap * dx_l
        y = y + ad * dy
        Zs = [_sym(Z + ad * E) for Z, E in zip(Zs, dZ)]
        zl = zl + ad * dz_l
        stall = stall + 1 if max(ap, ad) < 1e-9 else 0
        if stall >= 3:
            status, message = "numerical-error", "step lengths collapsed"
            break
    if status in ("numerical-error", "max-iter") and max(relgap, pinf, dinf) <= s.tol_relaxed:
        status, message = "optimal", f"reduced accuracy ({message}; gap {relgap:.1e}, infeasibility {max(pinf, dinf):.1e})"
    return _finish(p, (ops, keep, Xs, y, Zs, xl, zl), status, it, message)


def _finish(p: SdpProblem, state, status: str, iterations: int, message: str) -> SdpSolution:
    blocks = p.blocks
    if state is None:
        X = [np.zeros((b.dim, b.dim)) if b.kind == PSD else np.zeros(b.dim) for b in blocks]
        Z = [x.copy() for x in X]
        y = np.zeros(p.m)
    else:
        ops, keep, Xs, y_int, Zs, xl, zl = state
        X, Z = [None] * len(blocks), [None] * len(blocks)
        for k, Xb, Zb in zip(ops.psd_ids, Xs, Zs):
            X[k], Z[k] = Xb, Zb
        for k in ops.diag_ids:
            o = ops.diag_offsets[k]
            X[k], Z[k] = xl[o:o + blocks[k].dim].copy(), zl[o:o + blocks[k].dim].copy()
        y = np.zeros(p.m)
        y[keep] = -y_int if p.sense == "max" else y_int
    metrics = evaluate(p, X, y, Z)
    return SdpSolution(status, X, y, Z, iterations=iterations, message=message, **metrics)


def evaluate(p: SdpProblem, X, y, Z) -> dict:
    """Objectives, relative gap and relative infeasibilities of ``(X, y, Z)`` from the raw data.

    Dual feasibility reads ``C - sum y_i A_i = Z`` for minimization and
    ``sum y_i A_i - C = Z`` for maximization.
    """
    C = p.objective_blocks()
    pobj = float(sum(inner(Cb, Xb) for Cb, Xb in zip(C, X)))
    dobj = float(p.b @ y)
    rp = p.b - p.apply(X)
    At = p.adjoint(y)
    sign = 1.0 if p.sense == "min" else -1.0
    Rd = [sign * (Cb - Ab) - Zb for Cb, Ab, Zb in zip(C, At, Z)]
    normC = np.sqrt(sum(np.sum(Cb * Cb) for Cb in C))
    xz = float(sum(inner(Xb, Zb) for Xb, Zb in zip(X, Z)))
    return {
        "primal_objective": pobj,
        "dual_objective": dobj,
        "gap": max(abs(pobj - dobj), xz) / (1 + abs(pobj) + abs(dobj)),
        "primal_infeasibility": float(np.linalg.norm(rp) / (1 + np.linalg.norm(p.b))),
        "dual_infeasibility": float(np.sqrt(sum(np.sum(R * R) for R in Rd)) / (1 + normC)),
    }
