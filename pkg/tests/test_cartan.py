import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

import oracles
from klein.cartan import chamber_involution, nu, nu_array, nu_many
from klein.errors import ContractViolation, MembershipError, SingularInput
from klein.groups import parse_group


def boost(p, q, t, i=0, j=None):
    """Hyperbolic rotation of speed ``t`` in the plane of e_i and e_{p+j}."""
    j = p if j is None else p + j
    x = np.zeros((p + q, p + q))
    x[i, j] = x[j, i] = t
    return expm(x)


def test_gl_examples():
    assert np.allclose(nu("GL(3)", np.eye(3)).coords, 0)
    v = nu("GL(2)", np.diag([3.0, 0.5]))
    assert np.allclose(v.coords, [np.log(3), np.log(0.5)])
    v = nu("GL(2)", np.diag([-0.5, 3.0]))
    assert np.allclose(v.coords, [np.log(3), np.log(0.5)])


def test_sl_full_vector():
    v = nu("SL(2)", np.diag([2.0, 0.5]))
    assert len(v) == 1
    assert v.coords[0] == pytest.approx(np.log(2))
    assert v.full == pytest.approx((np.log(2), -np.log(2)))
    w = nu("SL(3)", np.diag([4.0, 0.5, 0.5]))
    assert w.full == pytest.approx((np.log(4), np.log(0.5), np.log(0.5)))
    assert sum(w.full) == pytest.approx(0)


def test_orthogonal_boosts():
    v = nu("O(2,1)", boost(2, 1, 1.5))
    assert v.coords == pytest.approx((1.5,))
    g = boost(3, 2, 0.7, 0, 0) @ boost(3, 2, -2.0, 1, 1)
    assert nu("O(3,2)", g).coords == pytest.approx((2.0, 0.7))


def test_unitary_and_symplectic_boosts():
    U = parse_group("U(1,1)")
    # complex boost realified: [[A, -B], [B, A]] with A the real boost
    a = boost(1, 1, 0.9)
    g = np.block([[a, np.zeros((2, 2))], [np.zeros((2, 2)), a]])
    U.check_member(g)
    assert nu(U, g).coords == pytest.approx((0.9,))
    Sp = parse_group("Sp(1,1)")
    gs = np.kron(np.eye(4), a)
    Sp.check_member(gs)
    assert nu(Sp, gs).coords == pytest.approx((0.9,))


def test_compact_group_has_empty_projection():
    rng = np.random.default_rng(0)
    k = oracles.random_orthogonal(rng, 4)
    if np.linalg.det(k) < 0:
        k[:, 0] *= -1
    assert nu("SO(4)", k).coords == ()


def test_vector_group():
    v = nu("R(2)", np.diag([np.e, 1 / np.e**2]))
    assert v.coords == pytest.approx((1.0, -2.0))


def test_errors():
    with pytest.raises(SingularInput):
        nu("GL(2)", [[1.0, 2.0], [2.0, 4.0]])
    with pytest.raises(MembershipError):
        nu("SL(2)", np.diag([2.0, 1.0]))
    with pytest.raises(ContractViolation):
        nu("GL(2)", np.ones((2, 3)))
    with pytest.raises(ContractViolation):
        nu_many("GL(2)", np.eye(2))


def test_check_false_skips_membership():
    x = nu_array("SL(2)", np.diag([2.0, 1.0]), check=False)
    assert x.shape == (1,)


@settings(max_examples=100, deadline=None, derandomize=True)
@given(st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_gl_against_bisection_oracle(n, seed):
    rng = np.random.default_rng(seed)
    g = oracles.random_gl(rng, n)
    assert np.max(np.abs(nu_array("GL(%d)" % n, g) - oracles.cartan_oracle(g))) < 1e-8


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_bi_k_invariance_and_inverse(n, seed):
    rng = np.random.default_rng(seed)
    G = parse_group(f"GL({n})")
    g = oracles.random_gl(rng, n)
    k1 = oracles.random_orthogonal(rng, n)
    k2 = oracles.random_orthogonal(rng, n)
    x = nu(G, g).as_array()
    assert np.max(np.abs(nu(G, k1 @ g @ k2).as_array() - x)) < 1e-8
    inv = nu(G, np.linalg.inv(g)).as_array()
    assert np.max(np.abs(inv - chamber_involution(G, x).as_array())) < 1e-8


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.sampled_from(["SL(3)", "O(3,2)", "U(2,1)", "Sp(1,1)", "SL(2)xSL(2)", "O(2,2)"]),
       st.integers(0, 2**32 - 1))
def test_inverse_law_in_other_families(text, seed):
    G = parse_group(text)
    rng = np.random.default_rng(seed)
    g = G.random_element(rng, 0.8)
    x = nu(G, g)
    y = nu(G, G.inverse(g))
    assert np.allclose(chamber_involution(G, x).coords, y.coords, atol=1e-8)


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_weyl_perturbation_bound(n, seed):
    rng = np.random.default_rng(seed)
    G = f"GL({n})"
    g = oracles.random_gl(rng, n)
    h = oracles.random_gl(rng, n, spread=1.0)
    lhs = np.max(np.abs(nu_array(G, g @ h) - nu_array(G, g)))
    assert lhs <= np.max(np.abs(nu_array(G, h))) + 1e-10


@pytest.mark.parametrize("text", ["GL(3)", "SL(4)", "O(4,2)", "U(2,1)", "Sp(1,1)", "Spin(8,1)",
                                  "R(2)", "SL(2)xSL(2)", "O(3)"])
def test_batched_projection_matches_single(text):
    G = parse_group(text)
    rng = np.random.default_rng(7)
    mats = np.array([G.random_element(rng, 1.0) for _ in range(12)])
    batch = nu_many(G, mats)
    single = np.array([nu(G, m).as_array() for m in mats]).reshape(batch.shape)
    assert np.allclose(batch, single, atol=1e-12)


def test_dominant_chamber():
    rng = np.random.default_rng(2)
    for text in ["SL(4)", "O(4,3)", "GL(3)", "Sp(2,1)"]:
        G = parse_group(text)
        ineqs = np.array([[float(a) for a in row] for row in G.chamber_inequalities()])
        for _ in range(5):
            x = nu(G, G.random_element(rng, 1.0)).as_array()
            if len(ineqs):
                assert np.all(ineqs @ x >= -1e-12)
