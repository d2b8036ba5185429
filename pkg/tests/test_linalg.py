from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from klein import rational as Q
from klein.errors import ContractViolation, NumericFailure, SingularInput
from klein.linalg import gram, sym_eigen, sym_eigvals_batch


def test_identity_eigen():
    w, v = sym_eigen(np.eye(3))
    assert np.allclose(w, [1, 1, 1])
    assert np.allclose(v.T @ v, np.eye(3))


def test_diagonal_eigen():
    w, v = sym_eigen(np.diag([4.0, 1.0]))
    assert np.allclose(w, [4, 1])
    assert np.allclose(np.abs(v), np.eye(2))


def test_two_by_two_by_hand():
    # characteristic polynomial (2 - x)^2 - 1 = (x - 3)(x - 1)
    w, v = sym_eigen([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(w, [3, 1], atol=1e-14)
    s = 1 / np.sqrt(2)
    assert np.allclose(np.abs(v[:, 0]), [s, s])
    assert np.allclose(v[:, 1] * np.sign(v[0, 1]), [s, -s])


def test_eigen_contract_errors():
    with pytest.raises(ContractViolation):
        sym_eigen(np.ones((2, 3)))
    with pytest.raises(ContractViolation):
        sym_eigen([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ContractViolation):
        sym_eigen(np.eye(2), tol=0)
    with pytest.raises(ContractViolation):
        sym_eigen([[np.nan, 0], [0, 1]])


def test_iteration_cap_is_reported():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 6))
    with pytest.raises(NumericFailure, match="cap of 1 sweeps"):
        sym_eigen(a + a.T, max_sweeps=1)


@settings(max_examples=60, deadline=None, derandomize=True)
@given(st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_reconstruction_and_postconditions(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n))
    a = a + a.T
    tol = 1e-12
    w, v = sym_eigen(a, tol)
    assert np.all(np.diff(w) <= 0)
    assert np.allclose(v.T @ v, np.eye(n), atol=10 * tol * n)
    norm = np.linalg.norm(a)
    for i in range(n):
        assert np.linalg.norm(a @ v[:, i] - w[i] * v[:, i]) <= 10 * tol * norm + 1e-14
    assert np.linalg.norm(v @ np.diag(w) @ v.T - a) <= 1e-9 * norm


def test_batch_matches_single():
    rng = np.random.default_rng(5)
    mats = rng.normal(size=(30, 5, 5))
    mats = mats + np.swapaxes(mats, 1, 2)
    batch = sym_eigvals_batch(mats)
    for m, w in zip(mats, batch):
        assert np.allclose(w, sym_eigen(m)[0], atol=1e-12)


def test_gram_examples():
    assert np.allclose(gram(np.eye(3)), np.eye(3))
    assert np.allclose(gram(np.diag([2.0, 0.5])), np.diag([4.0, 0.25]))
    th = 0.7
    r = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    assert np.allclose(gram(r), np.eye(2), atol=1e-15)


def test_gram_singular():
    with pytest.raises(SingularInput):
        gram([[1.0, 2.0], [2.0, 4.0]])


def test_gram_positive_for_well_conditioned():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 7))
        u, _ = np.linalg.qr(rng.normal(size=(n, n)))
        v, _ = np.linalg.qr(rng.normal(size=(n, n)))
        g = u @ np.diag(np.exp(rng.uniform(-2, 2, n))) @ v
        w, _ = sym_eigen(gram(g))
        assert np.all(w > 0)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=30)


@settings(max_examples=80, deadline=None, derandomize=True)
@given(st.lists(st.tuples(rationals, rationals, rationals), min_size=3, max_size=3))
def test_rational_vector_arithmetic_is_exact(rows):
    a, b, c = (Q.RationalVector(r) for r in rows)
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a.dot(b) == b.dot(a)
    assert (a - a).is_zero()
    assert a.scale(Fraction(3, 7)).scale(Fraction(7, 3)) == a


def test_snap_records_error():
    vec, err = Q.RationalVector.snap([0.5, 1 / 3, np.pi])
    assert vec[0] == Fraction(1, 2) and vec[1] == Fraction(1, 3)
    assert vec[2].denominator <= 10**6
    assert 0 < err < 1e-9


def test_rank_and_nullspace():
    rows = [[Fraction(1), Fraction(2), Fraction(3)], [Fraction(2), Fraction(4), Fraction(6)]]
    assert Q.rank(rows, 3) == 1
    ns = Q.nullspace(rows, 3)
    assert len(ns) == 2
    for v in ns:
        assert Q.dot(rows[0], v) == 0


def test_exact_feasibility():
    # x + y = 1, x - y = 0 -> (1/2, 1/2)
    x = Q.feasible_nonnegative([[1, 1], [1, -1]], [1, 0], 2)
    assert x == (Fraction(1, 2), Fraction(1, 2))
    assert Q.feasible_nonnegative([[1, 1]], [-1], 2) is None
