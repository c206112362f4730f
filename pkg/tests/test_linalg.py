import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from sdpdegree.linalg import AMBIGUOUS_GAP, numerical_rank, sym_eigen, sym_matrix

sym_inputs = st.integers(1, 8).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(-10, 10, allow_nan=False, width=64)))


@settings(max_examples=60, deadline=None)
@given(sym_inputs)
def test_jacobi_reconstruction(G):
    M = (G + G.T) / 2
    w, V = sym_eigen(M)
    fro = np.linalg.norm(M)
    assert np.linalg.norm(V @ np.diag(w) @ V.T - M) <= 1e-10 * (1 + fro)
    assert np.allclose(V.T @ V, np.eye(len(w)), atol=1e-10)
    assert np.all(np.diff(w) <= 0)


def test_jacobi_against_lapack():
    rng = np.random.default_rng(5)
    for n in range(2, 11):
        G = rng.standard_normal((n, n))
        M = G + G.T
        w, _ = sym_eigen(M)
        assert np.allclose(w, np.linalg.eigvalsh(M)[::-1], atol=1e-10)


def test_sym_matrix_validation():
    with pytest.raises(ValueError):
        sym_matrix([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        sym_matrix([1.0, 2.0])
    with pytest.raises(ValueError):
        sym_matrix([[np.nan]])
    assert np.array_equal(sym_matrix([[1, 1e-14], [0, 1]]), sym_matrix([[1, 1e-14], [0, 1]]).T)


def test_rank_clear_gap():
    Q, _ = np.linalg.qr(np.random.default_rng(0).standard_normal((5, 5)))
    M = Q @ np.diag([3.0, 1.0, 0.5, 1e-12, -1e-13]) @ Q.T
    rep = numerical_rank(M)
    assert rep.rank == 3
    assert not rep.ambiguous
    assert rep.gap_ratio > 1e10


def test_rank_ambiguous_gap():
    M = np.diag([1.0, 2e-6, 1e-7])
    rep = numerical_rank(M)
    assert rep.rank == 2
    assert rep.gap_ratio < AMBIGUOUS_GAP
    assert rep.ambiguous


def test_rank_full_and_zero():
    assert numerical_rank(np.eye(3)).gap_ratio == math.inf
    rep = numerical_rank(np.zeros((2, 2)))
    assert rep.rank == 0


def test_negative_eigenvalue_flags_ambiguous():
    assert numerical_rank(np.diag([1.0, -0.1])).ambiguous


def test_threshold_example():
    rep = numerical_rank(np.diag([1.0, 1e-3, 1e-12]), 1e-6)
    assert rep.rank == 2
    assert rep.gap_ratio == pytest.approx(1e9, rel=1e-6)
