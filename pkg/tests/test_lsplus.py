import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st
from scipy.optimize import linprog

from helpers import graphs
from liftrank.families import a_graph, construct, parse_family
from liftrank.figures import fig2_g3
from liftrank.graph import Graph, GraphError, alpha, complete, cycle, wheel
from liftrank.lsplus import (
    BudgetError,
    LiftCertificate,
    build_optimization,
    contains,
    estimate_size,
    is_psd_exact,
    exact_lift,
    max_eps,
    max_eps_bisect,
    max_shift,
    optimize,
    rank_bounds,
    u_fixed,
    verify_minimal,
)
from liftrank.polytope import ConeVector, LinearInequality, rank_inequality, u_vector, v_vector


def frac_lp(G, c):
    """max c^T x over FRAC(G) with scipy."""
    rows = []
    for u, v in G.edges():
        r = np.zeros(G.n)
        r[[u, v]] = 1
        rows.append(r)
    A = np.array(rows) if rows else None
    b = np.ones(len(rows)) if rows else None
    res = linprog(-np.asarray(c, float), A_ub=A, b_ub=b, bounds=[(0, 1)] * G.n, method="highs")
    return -res.fun


def frac_shift_lp(G, base, direction):
    """max |s| <= base head with base - s * direction in the FRAC cone."""
    w, d = np.array(base.as_floats()), np.array(direction.as_floats())
    A, b = [], []

    def row(coef):
        # coef . (w - s d) <= 0  ->  -(coef . d) s <= -(coef . w)
        A.append([-coef @ d])
        b.append(-coef @ w)

    for v in range(G.n):
        e = np.zeros(G.n + 1)
        e[v + 1] = -1
        row(e)
        e = np.zeros(G.n + 1)
        e[v + 1], e[0] = 1, -1
        row(e)
    for u, v in G.edges():
        e = np.zeros(G.n + 1)
        e[[u + 1, v + 1]], e[0] = 1, -1
        row(e)
    res = linprog([-1.0], A_ub=np.array(A), b_ub=np.array(b), bounds=[(-w[0], w[0])], method="highs")
    return -res.fun


def test_c5_values():
    G = cycle(5)
    assert abs(optimize(G, 0).value - 2.5) < 1e-6
    res = optimize(G, 1)
    assert res.status == "optimal" and abs(res.value - 2.0) < 1e-6
    assert np.allclose(res.x, 0.4, atol=1e-5)
    assert res.sandwich_ok()


def test_complete_and_wheel():
    assert abs(optimize(complete(5), 1).value - 1.0) < 1e-6
    assert abs(optimize(wheel(5), 1).value - 2.0) < 1e-6
    assert optimize(Graph(0, []), 2).value == 0.0


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(graphs(max_n=7), st.data())
def test_level_zero_matches_scipy_lp(G, data):
    c = data.draw(st.lists(st.integers(0, 4), min_size=G.n, max_size=G.n))
    if G.n == 0:
        return
    assert abs(optimize(G, 0, c).value - frac_lp(G, c)) < 1e-6


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(graphs(max_n=6), st.data())
def test_sandwich_and_monotone(G, data):
    if G.n == 0:
        return
    c = data.draw(st.lists(st.integers(0, 3), min_size=G.n, max_size=G.n))
    values = []
    for k in range(3):
        res = optimize(G, k, c)
        assert res.status == "optimal"
        assert res.sandwich_ok(1e-5)
        values.append(res.value)
    assert values[0] + 1e-6 >= values[1] >= values[2] - 1e-6


def test_level_reaches_stab_at_n():
    # the relaxation is exact once the level reaches the number of vertices
    G = cycle(5)
    assert abs(optimize(G, 2).value - 2.0) < 1e-6


def test_program_size_and_budget(tmp_path):
    G = a_graph(5).graph
    blocks, nvars = estimate_size(G, 2)
    prog = build_optimization(G, 2)
    assert prog.num_psd_blocks == blocks == 19
    assert len(prog.var_names) == nvars + G.n  # plus the root x-variables
    with pytest.raises(BudgetError):
        build_optimization(G, 2, max_vars=10)
    with pytest.raises(ValueError):
        build_optimization(G, -1)
    dat, man = prog.dump(tmp_path / "a5")
    data = json.loads(man.read_text())
    assert data["level"] == 2 and data["n"] == 9 and data["variables"] == nvars + G.n
    assert len(data["blocks"]) == blocks + 1
    assert dat.read_text().startswith('"lifted relaxation level 2')


def test_optimize_rejects_bad_objective():
    with pytest.raises(GraphError):
        optimize(cycle(5), 1, [1, 2])


def test_membership_member_with_certificate():
    sc = a_graph(5)
    res = contains(sc.graph, 2, v_vector(sc, Fraction(1, 1000)))
    assert res.verdict == "member" and res.margin > 1e-5
    assert res.certificate.verify()
    w = v_vector(sc, Fraction(1, 1000))
    assert np.allclose(res.certificate.vector, w.as_floats(), atol=1e-5 * float(w.head))


def test_membership_non_member():
    G = cycle(5)
    # the FRAC centre is cut off by one round
    half = ConeVector.point([Fraction(1, 2)] * 5)
    assert contains(G, 0, half).verdict in ("member", "undecided")
    assert contains(G, 1, half).verdict == "not-member"
    assert contains(G, 1, ConeVector.incidence(5, [0, 1])).verdict == "not-member"
    assert contains(G, 1, ConeVector((0,) * 6)).verdict == "member"
    assert contains(G, 1, ConeVector((-1,) + (0,) * 5)).verdict == "not-member"
    inside = ConeVector.point([Fraction(2, 5)] * 5) + ConeVector.point([Fraction(1, 5)] * 5)
    res = contains(G, 1, inside.scaled(Fraction(1, 2)))
    assert res.verdict == "member" and res.certificate.verify()


def test_max_eps_values():
    r4 = max_eps(a_graph(4), 1)
    # 2/17, confirmed by an independent conic model (see test_max_eps_matches_cvxpy)
    assert r4.verdict == "positive" and abs(r4.value - 2 / 17) < 1e-6
    assert r4.certificate.verify()
    r5 = max_eps(a_graph(5), 2)
    assert r5.verdict == "positive" and abs(r5.value - 0.100975) < 1e-5
    assert r5.certificate.verify()


def test_max_eps_agrees_with_bisection():
    sc = a_graph(4)
    direct = max_eps(sc, 1).value
    lower = max_eps_bisect(sc, 1, tol=1e-4)
    assert lower <= direct + 1e-6 and direct - lower < 2e-4


@pytest.mark.parametrize("name", ["a:4", "a:5", "g21"])
def test_level_zero_shift_matches_scipy(name):
    sc = construct(parse_family(name))
    G = sc.graph
    u = v_vector(sc, 0)
    hubs = set(sc.hubs())
    direction = ConeVector((Fraction(1),) + tuple(Fraction(int(v in hubs)) for v in G.vertices))
    ours = max_shift(G, 0, u, direction).value
    assert abs(ours - frac_shift_lp(G, u, direction)) < 1e-5


def test_shift_from_fixed_vertex_face():
    sc = a_graph(4)
    G = sc.graph
    base = u_fixed(G, sc.vertex((4, 0)), rank_inequality(G))
    assert base.head == 3
    res = max_shift(G, 1, base, ConeVector.incidence(G.n, []))
    assert res.status == "optimal" and res.value >= -1e-6


def test_certificate_detects_tampering():
    sc = a_graph(4)
    res = max_eps(sc, 1)
    cert = res.certificate
    assert cert.verify()
    cert.root.Y[1, 2] += 0.5
    assert not cert.verify()


@pytest.mark.parametrize("eps", [Fraction(1, 10), Fraction(1, 3)])
@pytest.mark.parametrize("name", ["a:4", "a:5", "g21"])
def test_exact_lift_identities(name, eps):
    sc = construct(parse_family(name))
    L = exact_lift(sc, eps)
    assert L.null_space_is_c_prime()
    assert L.c_quad() == L.expected_c_quad()
    assert L.c_col0() == L.expected_c_col0()
    assert is_psd_exact(L.Y0)


def test_exact_lift_rejects_non_facets():
    with pytest.raises(GraphError):
        exact_lift(fig2_g3(), Fraction(1, 10))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.data())
def test_is_psd_exact_matches_numpy(n, data):
    ints = st.integers(-3, 3)
    B = np.array(data.draw(st.lists(st.lists(ints, min_size=n, max_size=n), min_size=n, max_size=n)))
    M = B @ B.T if data.draw(st.booleans()) else B + B.T
    ev = np.linalg.eigvalsh(M.astype(float))[0]
    exact = is_psd_exact([[Fraction(int(x)) for x in row] for row in M])
    if abs(ev) > 1e-9:
        assert exact == (ev > 0)
    assert not is_psd_exact([[1, 2], [0, 1]])


@pytest.mark.parametrize(
    "name, expected",
    [("k3", (1, 1, True)), ("c5", (1, 1, True)), ("wheel5", (1, 1, True)), ("wheel7", (1, 1, True)),
     ("g21", (2, 2, True)), ("g22", (2, 2, True))],
)
def test_rank_bounds(name, expected):
    G = {"k3": complete(3), "c5": cycle(5), "wheel5": wheel(5), "wheel7": wheel(7)}.get(name)
    if G is None:
        G = construct(parse_family(name)).graph
    assert rank_bounds(G).as_tuple() == expected


def test_rank_bounds_bipartite_and_minimality():
    assert rank_bounds(cycle(6)).as_tuple() == (0, 0, True)
    assert verify_minimal(construct(parse_family("g21"))) is True
    assert verify_minimal(construct(parse_family("g41")), budget=2) is None
    assert verify_minimal(complete(3)) is True
    assert verify_minimal(cycle(6)) is False
    with pytest.raises(GraphError):
        verify_minimal(cycle(5))


def test_u_vector_scaling_of_shift():
    sc = a_graph(4)
    u = v_vector(sc, 0)
    hubs = set(sc.hubs())
    direction = ConeVector((Fraction(1),) + tuple(Fraction(int(v in hubs)) for v in sc.graph.vertices))
    a = max_shift(sc.graph, 1, u, direction).value
    b = max_shift(sc.graph, 1, u.scaled(2), direction.scaled(2)).value
    assert abs(b - a) < 1e-6
    assert math.isclose(float(u.head), float(u_vector(sc.graph, [LinearInequality((1,) * sc.n, sc.d + 1)]).head))
    assert isinstance(LiftCertificate, type)


def test_max_eps_matches_cvxpy():
    cp = pytest.importorskip("cvxpy")
    if "CLARABEL" not in cp.installed_solvers():
        pytest.skip("no accurate conic solver")
    sc = a_graph(4)
    G, n = sc.graph, sc.n
    u = np.array(v_vector(sc, 0).as_floats())
    d = u - np.array(v_vector(sc, 1).as_floats())

    def frac_cone(x):
        return [x[1:] >= 0, x[1:] <= x[0]] + [x[a + 1] + x[b + 1] <= x[0] for a, b in G.edges()]

    s = cp.Variable()
    Y = cp.Variable((n + 1, n + 1), symmetric=True)
    cons = [Y >> 0, Y[:, 0] == u - s * d, cp.diag(Y) == Y[:, 0], s <= u[0]]
    for i in range(n):
        cons += frac_cone(Y[:, i + 1]) + frac_cone(Y[:, 0] - Y[:, i + 1])
    cp.Problem(cp.Maximize(s), cons).solve(solver="CLARABEL")
    assert abs(s.value - max_eps(sc, 1).value) < 1e-5
