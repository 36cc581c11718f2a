import math
from io import StringIO

import numpy as np
import pytest

from liftrank.graph import complete, cycle
from liftrank.sdp import (
    DIAG,
    PSD,
    SdpBuilder,
    SolverSettings,
    feasibility,
    presolve,
    read_sdpa,
    solve,
    write_sdpa,
)


def random_problem(rng, sense="min"):
    """Strictly feasible primal and dual, hence an attained optimum."""
    dims = [(PSD, int(rng.integers(1, 5))) for _ in range(int(rng.integers(1, 3)))]
    if rng.random() < 0.5:
        dims.append((DIAG, int(rng.integers(1, 4))))
    m = int(rng.integers(1, 6))
    bld = SdpBuilder(sense)
    ids = [bld.add_block(k, d) for k, d in dims]
    X0 = [_pd(rng, d) if k == PSD else rng.uniform(0.5, 2, d) for k, d in dims]
    Z0 = [_pd(rng, d) if k == PSD else rng.uniform(0.5, 2, d) for k, d in dims]
    y0 = rng.normal(size=m)
    A = [[_sym(rng, d) if k == PSD else rng.normal(size=d) for k, d in dims] for _ in range(m)]
    sign = 1.0 if sense == "min" else -1.0
    C = [sign * Zb + sum(y0[i] * A[i][b] for i in range(m)) for b, Zb in enumerate(Z0)]
    for b, (k, d) in zip(ids, dims):
        for i, j in _upper(k, d):
            bld.add_objective(b, i, j, C[b][i, j] if k == PSD else C[b][i])
    for i in range(m):
        entries = [(b, r, c, A[i][b][r, c] if k == PSD else A[i][b][r]) for b, (k, d) in zip(ids, dims)
                   for r, c in _upper(k, d)]
        rhs = sum(np.sum(Ab * Xb) for Ab, Xb in zip(A[i], X0))
        bld.add_constraint(entries, rhs)
    return bld.build(), A, C


def _upper(kind, d):
    return [(i, i) for i in range(d)] if kind == DIAG else [(i, j) for i in range(d) for j in range(i, d)]


def _pd(rng, d):
    M = rng.normal(size=(d, d))
    return M @ M.T + 0.5 * np.eye(d)


def _sym(rng, d):
    M = rng.normal(size=(d, d))
    return (M + M.T) / 2


def _dense_inner(A, X):
    return sum(float(np.sum(Ab * Xb)) for Ab, Xb in zip(A, X))


def theta_problem(G):
    """Lovasz theta: max J . X  s.t.  tr X = 1, X_uv = 0 on edges."""
    bld = SdpBuilder("max")
    blk = bld.add_block(PSD, G.n)
    for i in range(G.n):
        for j in range(i, G.n):
            bld.add_objective(blk, i, j, 1.0)
    bld.add_constraint([(blk, i, i, 1.0) for i in range(G.n)], 1.0)
    for u, v in G.edges():
        bld.add_constraint([(blk, u, v, 1.0)], 0.0)
    return bld.build()


def test_theta_c5():
    sol = solve(theta_problem(cycle(5)))
    assert sol.status == "optimal"
    assert abs(sol.objective - math.sqrt(5)) < 1e-6
    assert abs(sol.dual_objective - math.sqrt(5)) < 1e-6


@pytest.mark.parametrize("n", [7, 9])
def test_theta_odd_cycles(n):
    c = math.cos(math.pi / n)
    assert abs(solve(theta_problem(cycle(n))).objective - n * c / (1 + c)) < 1e-6


def test_theta_complete_graph():
    assert abs(solve(theta_problem(complete(5))).objective - 1.0) < 1e-6


@pytest.mark.parametrize("seed", range(100))
def test_random_problem_invariants(seed):
    rng = np.random.default_rng(seed)
    sense = "min" if seed % 2 == 0 else "max"
    p, A, C = random_problem(rng, sense)
    sol = solve(p)
    assert sol.status == "optimal", sol.message
    # residuals recomputed from dense matrices built in this test
    pobj = _dense_inner(C, sol.X)
    assert abs(pobj - sol.primal_objective) <= 1e-12 * (1 + abs(pobj))
    for i, Ai in enumerate(A):
        lhs = _dense_inner(Ai, sol.X)
        assert abs(lhs - p.b[i]) <= 1e-6 * (1 + abs(p.b[i]))
    sign = 1.0 if sense == "min" else -1.0
    for b, (Cb, Zb) in enumerate(zip(C, sol.Z)):
        Ay = sum(sol.y[i] * A[i][b] for i in range(len(A)))
        assert np.allclose(sign * (Cb - Ay), Zb, atol=1e-6 * (1 + np.abs(Cb).max()))
    # cone membership and weak duality
    for Xb, Zb in zip(sol.X, sol.Z):
        if Xb.ndim == 2:
            assert np.linalg.eigvalsh(Xb)[0] > -1e-9 and np.linalg.eigvalsh(Zb)[0] > -1e-9
        else:
            assert Xb.min() > -1e-9 and Zb.min() > -1e-9
    assert _dense_inner(sol.X, sol.Z) >= -1e-9
    gap = sign * (sol.primal_objective - sol.dual_objective)
    assert gap >= -1e-6 * (1 + abs(sol.primal_objective))
    assert sol.gap < 1e-6


def test_reproducible():
    p, _, _ = random_problem(np.random.default_rng(7))
    a, b = solve(p), solve(p)
    assert a.iterations == b.iterations
    assert np.array_equal(a.y, b.y)
    assert all(np.array_equal(x, y) for x, y in zip(a.X, b.X))


@pytest.mark.parametrize("seed", range(5))
def test_sdpa_round_trip(seed, tmp_path):
    rng = np.random.default_rng(seed)
    p, _, _ = random_problem(rng, "min" if seed % 2 else "max")
    path = tmp_path / "p.dat-s"
    write_sdpa(p, path, comment="round trip")
    q = read_sdpa(path)
    assert q.sense == p.sense and q.blocks == p.blocks
    assert np.allclose(q.b, p.b)
    X = [_pd(rng, b.dim) if b.kind == PSD else rng.uniform(0, 1, b.dim) for b in p.blocks]
    assert np.allclose(q.apply(X), p.apply(X))
    assert abs(q.objective_value(X) - p.objective_value(X)) < 1e-9
    assert abs(solve(q).objective - solve(p).objective) < 1e-7
    assert read_sdpa(path.read_text()).m == p.m


def test_sdpa_text_format():
    bld = SdpBuilder("max")
    blk = bld.add_block(PSD, 2)
    bld.add_objective(blk, 0, 1, 1.0)
    bld.add_constraint([(blk, 0, 0, 1.0), (blk, 1, 1, 1.0)], 2.0)
    p = bld.build()
    buf = StringIO()
    write_sdpa(p, buf)
    text = buf.getvalue()
    assert text.splitlines() == ["1", "1", "2", "2.0", "0 1 1 2 1.0", "1 1 1 1 1.0", "1 1 2 2 1.0"]
    q = read_sdpa(text)
    assert q.sense == "max" and abs(solve(q).objective - 2.0) < 1e-7
    # a minimization problem is stored with negated F0 and a sense marker
    bld = SdpBuilder("min")
    blk = bld.add_block(DIAG, 1)
    bld.add_objective(blk, 0, 0, 3.0)
    bld.add_constraint([(blk, 0, 0, 1.0)], 1.0)
    buf = StringIO()
    write_sdpa(bld.build(), buf)
    text = buf.getvalue()
    assert "* sense=min" in text and "0 1 1 1 -3.0" in text
    assert abs(solve(read_sdpa(text)).objective - 3.0) < 1e-7


def test_infeasible_and_unbounded():
    bld = SdpBuilder("min")
    blk = bld.add_block(PSD, 2)
    bld.add_constraint([(blk, 0, 0, 1.0)], -1.0)
    assert solve(bld.build()).status == "infeasible"
    bld = SdpBuilder("max")
    blk = bld.add_block(DIAG, 2)
    bld.add_objective(blk, 0, 0, 1.0)
    bld.add_constraint([(blk, 1, 1, 1.0)], 1.0)
    assert solve(bld.build()).status == "unbounded"


def test_presolve_drops_dependent_rows():
    bld = SdpBuilder("min")
    blk = bld.add_block(PSD, 2)
    bld.add_objective(blk, 0, 0, 1.0)
    bld.add_objective(blk, 1, 1, 1.0)
    bld.add_constraint([(blk, 0, 1, 1.0)], 0.5)
    bld.add_constraint([(blk, 0, 1, 2.0)], 1.0)
    p = bld.build()
    keep, ok = presolve(p)
    assert ok and len(keep) == 1
    sol = solve(p)
    # off-diagonal coefficients act on both symmetric entries, so X01 = 1/4
    assert sol.status == "optimal" and abs(sol.objective - 0.5) < 1e-6
    bld.add_constraint([(blk, 0, 1, 1.0)], 0.7)
    assert solve(bld.build()).status == "infeasible"


def test_feasibility():
    bld = SdpBuilder("min")
    blk = bld.add_block(PSD, 2)
    bld.add_constraint([(blk, 0, 0, 1.0)], 1.0)
    res = feasibility(bld.build())
    assert res.verdict == "feasible" and np.linalg.eigvalsh(res.witness[0])[0] > 0
    bld = SdpBuilder("min")
    blk = bld.add_block(PSD, 2)
    bld.add_constraint([(blk, 0, 0, 1.0)], -1.0)
    assert feasibility(bld.build()).verdict == "infeasible"


def test_invalid_settings_and_problems():
    with pytest.raises(ValueError):
        SolverSettings(tol_gap=0)
    with pytest.raises(ValueError):
        SolverSettings(step_fraction=1.5)
    bld = SdpBuilder("min")
    blk = bld.add_block(DIAG, 2)
    bld.add_constraint([(blk, 0, 1, 1.0)], 1.0)
    with pytest.raises(ValueError):
        bld.build()


def test_against_cvxpy():
    cp = pytest.importorskip("cvxpy")
    rng = np.random.default_rng(11)
    for _ in range(3):
        p, A, C = random_problem(rng)
        Xs = [cp.Variable((b.dim, b.dim), PSD=True) if b.kind == PSD else cp.Variable(b.dim, nonneg=True)
              for b in p.blocks]

        def dot(M, X):
            return cp.sum(cp.multiply(M, X))

        cons = [sum(dot(Ai[b], Xs[b]) for b in range(len(Xs))) == p.b[i] for i, Ai in enumerate(A)]
        prob = cp.Problem(cp.Minimize(sum(dot(C[b], Xs[b]) for b in range(len(Xs)))), cons)
        try:
            prob.solve()
        except cp.error.SolverError:
            pytest.skip("no cvxpy SDP solver available")
        assert abs(prob.value - solve(p).objective) < 1e-4 * (1 + abs(prob.value))
