from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from helpers import graphs, stretched_cliques
from liftrank.figures import fig2_g3
from liftrank.graph import GraphError, _bits, complete, cycle, stable_set_masks
from liftrank.polytope import (
    ConeVector,
    LinearInequality,
    cone_frac_contains,
    fixed_one,
    frac_system,
    is_facet,
    rank_inequality,
    rational_rank,
    tight_stable_sets,
    u_vector,
    v_vector,
)


def test_frac_system_shape():
    G = cycle(5)
    rows = frac_system(G)
    assert len(rows) == 2 * G.n + G.num_edges()
    assert all(isinstance(r, LinearInequality) for r in rows)
    assert str(LinearInequality((1, 0, 2), 3)) == "1*x0 + 2*x2 <= 3"


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8))
def test_stable_sets_lie_in_frac_cone(G):
    for m in stable_set_masks(G):
        w = ConeVector.incidence(G.n, _bits(m))
        assert cone_frac_contains(G, w)
        assert all(w.violation(r) <= 0 for r in frac_system(G))
    for u, v in G.edges():
        assert not cone_frac_contains(G, ConeVector.incidence(G.n, [u, v]))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=6))
def test_rational_rank_matches_numpy(rows):
    assert rational_rank(rows) == np.linalg.matrix_rank(np.array(rows, dtype=float))


def test_u_vector_counts():
    G = cycle(5)
    u = u_vector(G, [rank_inequality(G)])
    assert u.head == 5 and u.x == (2,) * 5
    u1 = u_vector(G, [rank_inequality(G), fixed_one(5, 0)])
    assert u1.head == 2 and u1.x[0] == 2
    with pytest.raises(GraphError):
        u_vector(G, [LinearInequality((1,) * 5, 3)])


@settings(max_examples=40, deadline=None)
@given(stretched_cliques(max_n=5, max_d=3), st.fractions(0, 1))
def test_v_vector_violates_rank_inequality_by_eps(sc, eps):
    v = v_vector(sc, eps)
    c_prime = [-(sc.d + 1)] + [1] * sc.n
    assert sum(a * b for a, b in zip(c_prime, v.entries)) == eps
    assert isinstance(v.head, Fraction)


def test_facets():
    assert is_facet(cycle(5), rank_inequality(cycle(5)))
    assert is_facet(complete(4), rank_inequality(complete(4)))
    # an edge inside a triangle is dominated by the triangle inequality
    assert not is_facet(complete(3), LinearInequality((1, 1, 0), 1))
    assert is_facet(cycle(4), LinearInequality((-1, 0, 0, 0), 0))
    # rank inequality fails to be a facet outside the proper class
    G3 = fig2_g3()
    assert not G3.in_tilde() and not is_facet(G3.graph, rank_inequality(G3.graph))
    with pytest.raises(GraphError):
        tight_stable_sets(cycle(5), LinearInequality((1,) * 5, 1))


def test_cone_vector_arithmetic():
    a = ConeVector.point([Fraction(1, 2), 0], scale=2)
    b = ConeVector.incidence(2, [1])
    assert (a + b).entries == (3, 1, 1)
    assert (a - b).scaled(2).entries == (2, 2, -2)
    assert cone_frac_contains(complete(2), ConeVector((1, Fraction(1, 2), Fraction(1, 2))))
    assert not cone_frac_contains(complete(2), ConeVector((1, 0.6, 0.5)))
    assert cone_frac_contains(complete(2), ConeVector((1, 0.6, 0.4 + 1e-9)), tol=1e-8)
